//! Number types that index computations can be carried out in.
//!
//! Every index built purely from approval counts (approval, central,
//! Hamming-pairwise and Jaccard agreement) is a rational function of
//! integers, so it can be evaluated exactly in [`Exact`] as well as in
//! `f32`/`f64`. Indices that need square roots are bounded by
//! [`num_traits::Float`] instead.

use num_rational::Ratio;
use num_traits::{Num, Signed};
use std::fmt::Debug;

/// Exact rational arithmetic used by the oracle-equivalence checks.
pub type Exact = Ratio<i128>;

/// A signed field-like number type that can absorb integer counts.
pub trait Scalar: Num + Signed + Copy + PartialOrd + Debug + Send + Sync + 'static {
    fn from_count(count: u64) -> Self;

    fn to_f64(self) -> f64;

    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn from_count(count: u64) -> Self {
        count as f64
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_count(count: u64) -> Self {
        count as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Exact {
    fn from_count(count: u64) -> Self {
        Ratio::from_integer(count as i128)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
