//! Concrete groups: finite groups as multiplication tables, free groups, and
//! externally supplied lists of solvable equations. Also the presentation
//! text format shared by inputs and emitted presentations.

mod presentation;
mod table;

pub use presentation::{Presentation, PresentationError};
pub use table::{Assignment, CayleyTable, TableError, TableReport};

use crate::words::{Word, WordParseError};

/// Default radius for bounded witness search in free groups.
pub const DEFAULT_FREE_RADIUS: usize = 4;

/// The group that equations are solved in.
#[derive(Clone, Debug)]
pub enum GroupBackend {
    FiniteTable(CayleyTable),
    /// Free group on `a1..a_rank`. Equations outside the two decidable
    /// one-variable shapes fall back to searching all tuples of reduced words
    /// of length at most `radius`.
    FreeGroup {
        rank: u32,
        radius: usize,
    },
    /// Solvable equations listed by an outside oracle, in enumeration order.
    OracleList(Vec<Word>),
}

impl GroupBackend {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupBackend::FiniteTable(_) => "table",
            GroupBackend::FreeGroup { .. } => "free",
            GroupBackend::OracleList(_) => "oracle",
        }
    }

    /// Number of group generators `a1..a_k` the backend knows about.
    pub fn a_count(&self) -> u32 {
        match self {
            GroupBackend::FiniteTable(t) => t.a_count(),
            GroupBackend::FreeGroup { rank, .. } => *rank,
            GroupBackend::OracleList(words) => words
                .iter()
                .flat_map(|w| w.letters())
                .filter(|l| l.sort() == crate::words::Sort::A)
                .map(|l| l.index())
                .max()
                .unwrap_or(0),
        }
    }
}

/// Parses an oracle file: one equation word per line. Blank lines and lines
/// starting with `#` are skipped. Errors carry byte offsets into `text`.
pub fn parse_oracle_list(text: &str) -> Result<Vec<Word>, WordParseError> {
    let mut words = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            words.push(Word::parse_at(line, offset)?);
        }
        offset += line.len();
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_file() {
        let words = parse_oracle_list("# solvable\nx1.x1\n\nx1.a2.x1^-1.a2^-1\n").unwrap();
        assert_eq!(words.len(), 2);
        assert_eq!(GroupBackend::OracleList(words).a_count(), 2);
        let err = parse_oracle_list("x1.x1\nx1.q\n").unwrap_err();
        assert_eq!(err.offset, 9);
    }
}
