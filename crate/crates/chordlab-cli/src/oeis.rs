//! Local b-file comparison against the library's series.
//!
//! Series here are indexed by chord count (`[x^n]`). OEIS entries use their
//! own offsets, and some carry a conventional first term the series lacks,
//! so each known entry declares how its index maps to ours and which of its
//! indices to skip.

use std::path::Path;

use chordlab::gfseries::SeriesName;
use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OeisEntry {
    pub id: &'static str,
    pub series: SeriesName,
    /// `series index = OEIS index + shift`.
    pub shift: i64,
    /// OEIS indices below this are conventions with no series counterpart.
    pub first_index: i64,
    pub note: &'static str,
}

pub const OEIS_TABLE: [OeisEntry; 4] = [
    OeisEntry {
        id: "A000699",
        series: SeriesName::C,
        shift: 0,
        first_index: 1,
        note: "connected diagrams; a(0) = 1 is a convention, C has no constant term",
    },
    OeisEntry {
        id: "A000698",
        series: SeriesName::I,
        shift: 0,
        first_index: 0,
        note: "indecomposable diagrams including the empty one",
    },
    OeisEntry {
        id: "A088221",
        series: SeriesName::A,
        shift: 0,
        first_index: 0,
        note: "same indexing as the series A",
    },
    OeisEntry {
        id: "A049464",
        series: SeriesName::C2,
        shift: 1,
        first_index: 1,
        note: "indexed by loop number of the quenched QED vertex graph, one less than the chord count",
    },
];

pub fn lookup(id: &str) -> Option<&'static OeisEntry> {
    OEIS_TABLE.iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

pub fn default_for(series: SeriesName) -> Option<&'static OeisEntry> {
    OEIS_TABLE.iter().find(|e| e.series == series)
}

/// `(index, value)` pairs; `#` comments and blank lines are skipped.
pub fn read_bfile(path: &Path) -> Result<Vec<(i64, BigInt)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_bfile(&text)
}

pub fn parse_bfile(text: &str) -> Result<Vec<(i64, BigInt)>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut it = t.split_whitespace();
        let (Some(n), Some(a), None) = (it.next(), it.next(), it.next()) else {
            return Err(format!("line {}: expected 'n a(n)'", lineno + 1));
        };
        let n = n.parse().map_err(|_| format!("line {}: bad index {n:?}", lineno + 1))?;
        let a = a.parse().map_err(|_| format!("line {}: bad value {a:?}", lineno + 1))?;
        out.push((n, a));
    }
    if out.is_empty() {
        return Err("b-file has no data lines".into());
    }
    Ok(out)
}
