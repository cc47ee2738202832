//! Reading and writing elections, tables and figures.

mod pabulib;
mod svg;

pub use pabulib::{parse_pabulib, parse_pabulib_bytes};
pub use svg::{heat_color, write_svg_heatmap, write_svg_scatter};

use crate::election::{Ballot, Election};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk JSON form of an election; ballots list approved candidates,
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NativeElectionFile {
    #[serde(default)]
    pub label: Option<String>,
    pub num_candidates: usize,
    pub ballots: Vec<Vec<usize>>,
}

impl From<&Election> for NativeElectionFile {
    fn from(e: &Election) -> Self {
        NativeElectionFile {
            label: e.label().map(str::to_string),
            num_candidates: e.num_candidates(),
            ballots: e.ballots().iter().map(|b| b.approved().collect()).collect(),
        }
    }
}

impl NativeElectionFile {
    pub fn into_election(self) -> Result<Election> {
        let m = self.num_candidates;
        let mut ballots = Vec::with_capacity(self.ballots.len());
        for (i, approved) in self.ballots.iter().enumerate() {
            let b = Ballot::from_approved(m, approved.iter().copied())
                .map_err(|e| Error::InvalidArgument(format!("ballot {i}: {e}")))?;
            if b.count_ones() != approved.len() {
                return invalid(format!("ballot {i} lists a candidate twice"));
            }
            ballots.push(b);
        }
        let e = Election::new(m, ballots)?;
        Ok(match self.label {
            Some(l) => e.with_label(l),
            None => e,
        })
    }
}

pub fn write_native(e: &Election) -> String {
    let mut s = serde_json::to_string_pretty(&NativeElectionFile::from(e)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_native(text: &str) -> Result<Election> {
    serde_json::from_str::<NativeElectionFile>(text)?.into_election()
}

/// Reads a native JSON file, or a Pabulib file when the extension is `.pb`.
pub fn read_election_file(path: &Path) -> Result<Election> {
    let bytes = std::fs::read(path)?;
    let e = if path.extension().is_some_and(|x| x.eq_ignore_ascii_case("pb")) {
        parse_pabulib_bytes(&bytes)?
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::Parse {
            line: 0,
            message: "invalid UTF-8".into(),
        })?;
        read_native(text)?
    };
    Ok(if e.label().is_none() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        e.with_label(stem)
    } else {
        e
    })
}

/// Election approving every score at or above `threshold`.
pub fn threshold_scores(matrix: &[Vec<f64>], threshold: f64) -> Result<Election> {
    let Some(first) = matrix.first() else {
        return invalid("score matrix has no rows");
    };
    let m = first.len();
    let mut ballots = Vec::with_capacity(matrix.len());
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != m {
            return invalid(format!("row {i} has {} scores, expected {m}", row.len()));
        }
        let bits: Vec<bool> = row.iter().map(|&s| s >= threshold).collect();
        ballots.push(Ballot::from_bits(&bits));
    }
    Election::new(m, ballots)
}

/// Formats with 6 significant digits, without trailing zeros. Non-finite
/// values print as `NA`.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// CSV text with a header row and one row per record.
pub fn write_csv_rows(headers: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(headers)?;
    for r in rows {
        if r.len() != headers.len() {
            return invalid(format!("row has {} fields, header has {}", r.len(), headers.len()));
        }
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 input"))
}

/// Numeric matrix as CSV; `None` cells print as `NA`.
pub fn write_csv_matrix(matrix: &[Vec<f64>], headers: &[String]) -> Result<String> {
    let rows: Vec<Vec<String>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| format_sig6(x)).collect())
        .collect();
    write_csv_rows(headers, &rows)
}

/// Matrix with a leading label column.
pub fn write_csv_labeled(corner: &str, row_labels: &[String], headers: &[String], matrix: &[Vec<Option<f64>>]) -> Result<String> {
    if row_labels.len() != matrix.len() {
        return invalid("one label per row required");
    }
    let mut head = vec![corner.to_string()];
    head.extend(headers.iter().cloned());
    let rows: Vec<Vec<String>> = row_labels
        .iter()
        .zip(matrix)
        .map(|(l, r)| {
            std::iter::once(l.clone())
                .chain(r.iter().map(|x| x.map_or_else(|| "NA".to_string(), format_sig6)))
                .collect()
        })
        .collect();
    write_csv_rows(&head, &rows)
}

/// Parses a numeric CSV with a header row, e.g. a score matrix export.
pub fn read_csv_matrix(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 2,
                    message: format!("`{f}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((headers, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_p_ic;

    #[test]
    fn native_round_trip() {
        for seed in 0..100 {
            let e = gen_p_ic(1 + seed as usize % 70, 1 + seed as usize % 13, 0.4, seed).unwrap();
            let e = if seed % 2 == 0 { e.with_label(format!("e{seed}")) } else { e };
            let back = read_native(&write_native(&e)).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn native_rejects_bad_input() {
        assert!(read_native(r#"{"num_candidates": 2, "ballots": [[2]]}"#).is_err());
        assert!(read_native(r#"{"num_candidates": 2, "ballots": [[1, 1]]}"#).is_err());
        assert!(read_native(r#"{"num_candidates": 2, "ballots": []}"#).is_err());
        assert!(matches!(read_native("{"), Err(Error::Json(_))));
    }

    #[test]
    fn threshold_examples() {
        let e = threshold_scores(&[vec![3.5, 4.0, 5.0]], 4.0).unwrap();
        assert_eq!(e.ballots()[0].approved().collect::<Vec<_>>(), [1, 2]);
        let m = vec![vec![1.0, 2.0], vec![3.0, 0.5]];
        assert_eq!(threshold_scores(&m, 9.0).unwrap().total_approvals(), 0);
        assert_eq!(threshold_scores(&m, 0.5).unwrap().total_approvals(), 4);
        assert!(threshold_scores(&[vec![1.0], vec![]], 0.0).is_err());
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.123456789), "0.123457");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(f64::NAN), "NA");
        assert_eq!(format_sig6(1e-9), "1.00000e-9");
    }

    #[test]
    fn csv_output() {
        let h = vec!["a".to_string(), "b".to_string()];
        assert_eq!(write_csv_matrix(&[], &h).unwrap(), "a,b\r\n");
        let s = write_csv_matrix(&[vec![0.5, 2.0 / 3.0]], &h).unwrap();
        assert_eq!(s, "a,b\r\n0.5,0.666667\r\n");
        let (hh, rows) = read_csv_matrix(&s).unwrap();
        assert_eq!(hh, h);
        assert_eq!(rows, [[0.5, 0.666667]]);
    }
}
