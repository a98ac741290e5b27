//! Quadratic equations `W = 1`: recognition, solving over the available
//! backends, and verification of solution tuples.

mod enumerate;
mod finite;
mod free;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::groups::{Assignment, GroupBackend, TableError};
use crate::words::{Letter, Sort, Word};

pub use enumerate::{enumerate_solvable, for_each_quadratic_word};
pub use finite::solve_finite;
pub use free::{bounded_free_search, decide_conjugacy_free, decide_square_free, solve_free, OneVariableShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticError {
    #[error("equation {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("equation {0} has no variables")]
    NoVariables(String),
    #[error("variable x{variable} occurs {count} times; quadratic equations need 0 or 2")]
    BadOccurrence { variable: u32, count: usize },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("solution assigns {found:?} but the equation has variables {expected:?}")]
    VariableMismatch { expected: Vec<u32>, found: Vec<u32> },
    #[error("solution value for x{0} has the wrong kind for this backend")]
    ValueKind(u32),
    #[error("the oracle backend cannot check solutions")]
    NoOracleSolutions,
    #[error("n must be even and at least 2, got {0}")]
    BadBudget(u32),
    #[error("{letter} is not a generator of the free group of rank {rank}")]
    FreeLetter { letter: Letter, rank: u32 },
    #[error("cannot decide {0} in the free group within the search radius")]
    Undecidable(String),
    #[error("oracle equation {equation} uses x{variable}, beyond the variable budget {n}")]
    VariableBeyondBudget { equation: String, variable: u32, n: u32 },
    #[error("assignment space {order}^{variables} is too large to search")]
    SearchTooLarge { order: usize, variables: usize },
}

/// A cyclically reduced word in which every variable occurs exactly twice
/// (counting inverses), with the pairing of its variable positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticEquation {
    word: Word,
    pairing: Vec<(usize, usize)>,
    variables: Vec<u32>,
}

impl QuadraticEquation {
    pub fn recognize(word: Word) -> Result<QuadraticEquation, QuadraticError> {
        if !word.is_cyclically_reduced() || word.is_empty() {
            return Err(QuadraticError::NotCyclicallyReduced(word.to_string()));
        }
        let mut positions: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (pos, l) in word.letters().iter().enumerate() {
            if l.is_variable() {
                positions.entry(l.index()).or_default().push(pos);
            }
        }
        if positions.is_empty() {
            return Err(QuadraticError::NoVariables(word.to_string()));
        }
        let mut pairing = Vec::with_capacity(positions.len());
        for (&variable, pos) in &positions {
            if pos.len() != 2 {
                return Err(QuadraticError::BadOccurrence {
                    variable,
                    count: pos.len(),
                });
            }
            pairing.push((pos[0], pos[1]));
        }
        pairing.sort_unstable();
        Ok(QuadraticEquation {
            variables: positions.into_keys().collect(),
            word,
            pairing,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Pairs of positions holding the same variable, sorted by first position.
    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }

    /// Partner of a variable position under the pairing involution.
    pub fn partner(&self, pos: usize) -> Option<usize> {
        self.pairing.iter().find_map(|&(p, q)| {
            if p == pos {
                Some(q)
            } else if q == pos {
                Some(p)
            } else {
                None
            }
        })
    }

    /// Distinct variable indices, ascending.
    pub fn variables(&self) -> &[u32] {
        &self.variables
    }

    /// `|W|_X`.
    pub fn x_length(&self) -> usize {
        2 * self.variables.len()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for QuadraticEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// The value assigned to one variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SolutionValue {
    /// Element index of a finite group.
    Element(usize),
    /// Word over the generators.
    Word(#[serde(serialize_with = "serialize_display")] Word),
}

fn serialize_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Values for the variables of an equation, sorted by variable index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionTuple {
    assignments: Vec<(u32, SolutionValue)>,
}

impl SolutionTuple {
    pub fn new(mut assignments: Vec<(u32, SolutionValue)>) -> SolutionTuple {
        assignments.sort_by_key(|(v, _)| *v);
        SolutionTuple { assignments }
    }

    pub fn assignments(&self) -> &[(u32, SolutionValue)] {
        &self.assignments
    }

    pub fn variables(&self) -> Vec<u32> {
        self.assignments.iter().map(|(v, _)| *v).collect()
    }

    pub fn get(&self, variable: u32) -> Option<&SolutionValue> {
        self.assignments
            .iter()
            .find(|(v, _)| *v == variable)
            .map(|(_, value)| value)
    }

    /// Sum of value lengths, when every value is a word.
    pub fn length(&self) -> Option<usize> {
        self.assignments
            .iter()
            .map(|(_, value)| match value {
                SolutionValue::Word(w) => Some(w.len()),
                SolutionValue::Element(_) => None,
            })
            .sum()
    }

    pub fn word_values(&self) -> Option<BTreeMap<u32, Word>> {
        self.assignments
            .iter()
            .map(|(v, value)| match value {
                SolutionValue::Word(w) => Some((*v, w.clone())),
                SolutionValue::Element(_) => None,
            })
            .collect()
    }
}

/// Outcome of trying to solve one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solved(SolutionTuple),
    /// Solvable according to the oracle list; no tuple is known.
    Listed,
    Unsolvable,
    /// The search found nothing, which does not prove unsolvability.
    Inconclusive,
}

impl Verdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Verdict::Solved(_) | Verdict::Listed)
    }
}

/// Solves `eq` in the backend group.
pub fn solve(eq: &QuadraticEquation, backend: &GroupBackend) -> Result<Verdict, QuadraticError> {
    match backend {
        GroupBackend::FiniteTable(table) => Ok(match solve_finite(eq, table)? {
            Some(t) => Verdict::Solved(t),
            None => Verdict::Unsolvable,
        }),
        GroupBackend::FreeGroup { rank, radius } => solve_free(eq, *rank, *radius),
        GroupBackend::OracleList(words) => Ok(if words.contains(eq.word()) {
            Verdict::Listed
        } else {
            Verdict::Inconclusive
        }),
    }
}

/// Substitutes `tuple` into `eq` and checks the result is trivial: by
/// table evaluation for a finite group, by free reduction for a free group.
pub fn verify_solution(
    eq: &QuadraticEquation,
    tuple: &SolutionTuple,
    backend: &GroupBackend,
) -> Result<bool, QuadraticError> {
    let found = tuple.variables();
    if found != eq.variables() {
        return Err(QuadraticError::VariableMismatch {
            expected: eq.variables().to_vec(),
            found,
        });
    }
    match backend {
        GroupBackend::FiniteTable(table) => {
            let mut assignment = Assignment::new();
            for (v, value) in tuple.assignments() {
                match value {
                    SolutionValue::Element(g) if *g < table.order() => {
                        assignment.insert(*v, *g);
                    }
                    _ => return Err(QuadraticError::ValueKind(*v)),
                }
            }
            Ok(table.evaluate(eq.word(), &assignment)? == table.identity())
        }
        GroupBackend::FreeGroup { rank, .. } => {
            let values = tuple
                .word_values()
                .ok_or_else(|| QuadraticError::ValueKind(found_element(tuple)))?;
            for w in values.values().chain([eq.word()]) {
                check_free_letters(w, *rank)?;
            }
            let result = eq
                .word()
                .substitute(|l| (l.sort() == Sort::X).then(|| values.get(&l.index())).flatten());
            Ok(result.is_empty())
        }
        GroupBackend::OracleList(_) => Err(QuadraticError::NoOracleSolutions),
    }
}

fn found_element(tuple: &SolutionTuple) -> u32 {
    tuple
        .assignments()
        .iter()
        .find(|(_, value)| matches!(value, SolutionValue::Element(_)))
        .map(|(v, _)| *v)
        .unwrap_or(0)
}

/// Constants of a free-group word must be `a_j` with `j <= rank`.
pub(crate) fn check_free_letters(w: &Word, rank: u32) -> Result<(), QuadraticError> {
    match w
        .letters()
        .iter()
        .find(|l| l.sort() == Sort::H || (l.sort() == Sort::A && l.index() > rank))
    {
        Some(&letter) => Err(QuadraticError::FreeLetter { letter, rank }),
        None => Ok(()),
    }
}
