//! Agreement, diversity and polarization indices for approval elections.
//!
//! Elections are stored as packed bitsets ([`Election`], [`Ballot`]). The
//! count-based indices are generic over [`Scalar`] so they can be evaluated
//! in `f32`, `f64` or exact rationals ([`Exact`]); the aliases below fix the
//! everyday choice.

pub mod agreement;
pub mod clustering;
pub mod divpol;
pub mod election;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod indices;
pub mod io;
pub mod metrics;
pub mod scalar;

pub use agreement::{Agreement, CentralVote};
pub use clustering::{Affinity, Clusterer, Partition};
pub use election::{Ballot, Election, ElectionStats};
pub use error::{Error, Result};
pub use generators::{Culture, CultureSpec};
pub use indices::{IndexKind, IndexSettings};
pub use metrics::PairCounts;
pub use scalar::{Exact, Scalar};

/// Floating point type used for reported index values.
pub type Real = f64;

/// An index value in [0, 1].
pub type IndexValue = Real;
