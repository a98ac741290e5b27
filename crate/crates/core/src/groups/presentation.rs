use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::words::{Letter, Sort, Word, WordParseError};

/// Finite group presentation over `a1..a_k`, optionally `x1..x_m`, and
/// optionally `h1, h2`. Every relator is nonempty and cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    a_count: u32,
    x_count: u32,
    uses_h: bool,
    relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("relator {index} is empty")]
    EmptyRelator { index: usize },
    #[error("relator {index} ({relator}) is not cyclically reduced")]
    NotCyclicallyReduced { index: usize, relator: String },
    #[error("relator {index} uses {letter}, outside the declared generators")]
    OutOfRange { index: usize, letter: Letter },
}

impl From<WordParseError> for PresentationError {
    fn from(e: WordParseError) -> Self {
        PresentationError::Syntax {
            offset: e.offset,
            message: format!("bad token {:?}: {}", e.token, e.reason),
        }
    }
}

impl Presentation {
    pub fn new(
        a_count: u32,
        x_count: u32,
        uses_h: bool,
        relators: Vec<Word>,
    ) -> Result<Presentation, PresentationError> {
        let p = Presentation {
            a_count,
            x_count,
            uses_h,
            relators,
        };
        for (index, r) in p.relators.iter().enumerate() {
            p.check_relator(index, r)?;
        }
        Ok(p)
    }

    fn check_relator(&self, index: usize, r: &Word) -> Result<(), PresentationError> {
        if r.is_empty() {
            return Err(PresentationError::EmptyRelator { index });
        }
        if !r.is_cyclically_reduced() {
            return Err(PresentationError::NotCyclicallyReduced {
                index,
                relator: r.to_string(),
            });
        }
        if let Some(&letter) = r.letters().iter().find(|l| !self.declares(**l)) {
            return Err(PresentationError::OutOfRange { index, letter });
        }
        Ok(())
    }

    /// Whether `letter` is one of the generators (or inverses) of this presentation.
    pub fn declares(&self, letter: Letter) -> bool {
        match letter.sort() {
            Sort::A => letter.index() <= self.a_count,
            Sort::X => letter.index() <= self.x_count,
            Sort::H => self.uses_h,
        }
    }

    pub fn a_count(&self) -> u32 {
        self.a_count
    }

    pub fn x_count(&self) -> u32 {
        self.x_count
    }

    pub fn uses_h(&self) -> bool {
        self.uses_h
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn into_relators(self) -> Vec<Word> {
        self.relators
    }

    /// Total number of letters over all relators.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Parses `gens a:<k>[ x:<m>][ h]; rel <word>; rel <word>...`. Lines
    /// whose first non-blank character is `#` are comments.
    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let stripped = strip_comments(text);
        let mut clauses = split_clauses(&stripped);
        let (header_at, header) = clauses.next().ok_or_else(|| PresentationError::Syntax {
            offset: 0,
            message: "missing gens header".into(),
        })?;
        let (a_count, x_count, uses_h) = parse_header(header, header_at)?;
        let mut relators = Vec::new();
        for (at, clause) in clauses {
            let body = clause
                .strip_prefix("rel")
                .filter(|rest| rest.starts_with(char::is_whitespace));
            let Some(body) = body else {
                return Err(PresentationError::Syntax {
                    offset: at,
                    message: format!("expected `rel <word>`, found {clause:?}"),
                });
            };
            relators.push(Word::parse_at(body, at + 3)?);
        }
        Presentation::new(a_count, x_count, uses_h, relators)
    }

    /// Serialized text with leading `# ` comment lines.
    pub fn to_text_with_header(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.to_string());
        out
    }
}

/// Replaces comment lines by blanks of the same length so offsets survive.
fn strip_comments(text: &str) -> String {
    text.split_inclusive('\n')
        .map(|line| {
            if line.trim_start().starts_with('#') {
                line.chars()
                    .map(|c| if c == '\n' { '\n' } else { ' ' })
                    .collect::<String>()
            } else {
                line.to_string()
            }
        })
        .collect()
}

/// Trimmed, nonempty `;`-separated clauses with their byte offsets.
fn split_clauses(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    text.split(';')
        .map(move |raw| {
            let start = offset + (raw.len() - raw.trim_start().len());
            offset += raw.len() + 1;
            (start, raw.trim())
        })
        .filter(|(_, clause)| !clause.is_empty())
}

fn parse_header(header: &str, at: usize) -> Result<(u32, u32, bool), PresentationError> {
    let syntax = |message: String| PresentationError::Syntax { offset: at, message };
    let mut parts = header.split_whitespace();
    if parts.next() != Some("gens") {
        return Err(syntax(format!("expected `gens`, found {header:?}")));
    }
    let count = |part: Option<&str>, prefix: &str| -> Result<Option<u32>, PresentationError> {
        match part.and_then(|p| p.strip_prefix(prefix)) {
            Some(digits) => digits
                .parse()
                .map(Some)
                .map_err(|_| syntax(format!("bad generator count in {header:?}"))),
            None => Ok(None),
        }
    };
    let mut next = parts.next();
    let a_count = count(next, "a:")?.ok_or_else(|| syntax("expected `a:<count>`".into()))?;
    next = parts.next();
    let x_count = match count(next, "x:")? {
        Some(m) => {
            next = parts.next();
            m
        }
        None => 0,
    };
    let uses_h = next == Some("h");
    if uses_h {
        next = parts.next();
    }
    if let Some(extra) = next {
        return Err(syntax(format!("unexpected {extra:?} in header")));
    }
    Ok((a_count, x_count, uses_h))
}

impl fmt::Display for Presentation {
    /// One clause per line: the header, then `rel` clauses, each followed by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens a:{}", self.a_count)?;
        if self.x_count > 0 {
            write!(f, " x:{}", self.x_count)?;
        }
        if self.uses_h {
            f.write_str(" h")?;
        }
        f.write_str(";\n")?;
        for r in &self.relators {
            writeln!(f, "rel {r};")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Presentation::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_z2() {
        let p: Presentation = "gens a:1; rel a1.a1".parse().unwrap();
        assert_eq!(p.a_count(), 1);
        assert_eq!(p.relators(), &["a1.a1".parse::<Word>().unwrap()]);
    }

    #[test]
    fn parses_z2_squared_commutator() {
        let p: Presentation = "gens a:2; rel a1.a2.a1^-1.a2^-1".parse().unwrap();
        assert_eq!(p.a_count(), 2);
        assert_eq!(p.relators().len(), 1);
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        let err = "gens a:1; rel a1.a1^-1".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::NotCyclicallyReduced { index: 0, .. }));
        let err = "gens a:2; rel a1.a2.a1^-1".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::NotCyclicallyReduced { .. }));
    }

    #[test]
    fn rejects_out_of_range_letters() {
        let err = "gens a:1; rel a2.a2".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::OutOfRange { .. }));
        let err = "gens a:1; rel x1.a1".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::OutOfRange { .. }));
        let err = "gens a:1 x:1; rel h1.x1".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::OutOfRange { .. }));
        assert!("gens a:0 h; rel h1.h2".parse::<Presentation>().is_ok());
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let err = "gens a:1; rel a1.q1".parse::<Presentation>().unwrap_err();
        assert_eq!(
            err,
            PresentationError::Syntax {
                offset: 17,
                message: "bad token \"q1\": expected a, x or h".into()
            }
        );
        let err = "gens a:1; relation a1".parse::<Presentation>().unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { offset: 10, .. }));
        assert!("gens b:1".parse::<Presentation>().is_err());
        assert!("gens a:1 h x:2".parse::<Presentation>().is_err());
        assert!("".parse::<Presentation>().is_err());
    }

    #[test]
    fn comments_and_empty_relator_list() {
        let p: Presentation = "# made by hand\ngens a:3 x:2 h;\n".parse().unwrap();
        assert_eq!((p.a_count(), p.x_count(), p.uses_h()), (3, 2, true));
        assert!(p.relators().is_empty());
        let text = p.to_text_with_header(&["n = 2".to_string()]);
        assert_eq!(text, "# n = 2\ngens a:3 x:2 h;\n");
        assert_eq!(text.parse::<Presentation>().unwrap(), p);
    }

    fn cyclically_reduced_word() -> impl Strategy<Value = Word> {
        let letter = prop_oneof![
            (1u32..4, any::<bool>()).prop_map(|(i, inv)| Letter::new(Sort::A, i, inv)),
            (1u32..3, any::<bool>()).prop_map(|(i, inv)| Letter::new(Sort::X, i, inv)),
            (1u32..3, any::<bool>()).prop_map(|(i, inv)| Letter::new(Sort::H, i, inv)),
        ];
        prop::collection::vec(letter, 1..12)
            .prop_map(|l| Word::from(l).cyclic_core())
            .prop_filter("nonempty", |w| !w.is_empty())
    }

    proptest! {
        #[test]
        fn text_round_trip(relators in prop::collection::vec(cyclically_reduced_word(), 0..6)) {
            let p = Presentation::new(3, 2, true, relators).unwrap();
            let text = p.to_string();
            let back: Presentation = text.parse().unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, p);
        }
    }
}
