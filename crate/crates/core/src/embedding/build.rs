use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::vwords::v_word;
use super::{m_for, EmbeddingError};
use crate::groups::Presentation;
use crate::quadratic::QuadraticEquation;
use crate::words::{Letter, Sort, Word};

/// Global index of local variable `x_t` of the `i`-th equation (1-based).
pub fn global_variable(i: usize, t: u32, n: u32) -> u32 {
    (i as u32 - 1) * n + t
}

/// Inverse of [`global_variable`]: `(equation, local index)`.
pub fn local_variable(k: u32, n: u32) -> (usize, u32) {
    ((((k - 1) / n) + 1) as usize, (k - 1) % n + 1)
}

/// V-index coding a letter: `2j+1` for `a_j`, `2k` for `x_k`.
pub fn v_index(letter: Letter) -> Option<u64> {
    match letter.sort() {
        Sort::A => Some(2 * letter.index() as u64 + 1),
        Sort::X => Some(2 * letter.index() as u64),
        Sort::H => None,
    }
}

/// `W_i` with its variables moved to the `i`-th block of `n` globals.
pub fn globalize(eq: &QuadraticEquation, i: usize, n: u32) -> Result<Word, EmbeddingError> {
    if eq.x_length() > n as usize || eq.variables().iter().any(|&t| t > n) {
        return Err(EmbeddingError::VariableOverflow {
            equation: i,
            x_length: eq.x_length(),
            n,
        });
    }
    Ok(eq
        .word()
        .letters()
        .iter()
        .map(|&l| match l.sort() {
            Sort::X => Letter::new(Sort::X, global_variable(i, l.index(), n), l.is_inverse()),
            _ => l,
        })
        .collect())
}

/// The base relators followed by one relator `W_i(X_i)` per equation. All
/// `n * equations.len()` variables are declared.
pub fn build_g1(g: &Presentation, equations: &[QuadraticEquation], n: u32) -> Result<Presentation, EmbeddingError> {
    if g.uses_h() || g.relators().iter().any(|r| r.has_sort(Sort::X) || r.has_sort(Sort::H)) {
        return Err(EmbeddingError::BaseRelators(
            "base relators must only involve a-generators".into(),
        ));
    }
    let mut relators = g.relators().to_vec();
    for (pos, eq) in equations.iter().enumerate() {
        relators.push(globalize(eq, pos + 1, n)?);
    }
    let a_count = equations
        .iter()
        .flat_map(|eq| eq.word().letters())
        .filter(|l| l.sort() == Sort::A)
        .map(|l| l.index())
        .fold(g.a_count(), u32::max);
    Ok(Presentation::new(a_count, n * equations.len() as u32, false, relators)?)
}

/// Adds `h1, h2` and the coding relators `a_j V_{2j+1}^-1` for every
/// a-generator, then `x_k V_{2k}^-1` for every variable occurring in a relator.
pub fn build_g2(g1: &Presentation, n: u32) -> Result<Presentation, EmbeddingError> {
    let m = m_for(n);
    let present: BTreeSet<u32> = g1
        .relators()
        .iter()
        .flat_map(|r| r.letters())
        .filter(|l| l.sort() == Sort::X)
        .map(|l| l.index())
        .collect();
    let mut relators = g1.relators().to_vec();
    let generators = (1..=g1.a_count())
        .map(Letter::a)
        .chain(present.into_iter().map(Letter::x));
    for l in generators {
        let v = v_word(v_index(l).expect("a or x letter"), m)?;
        relators.push(Word::from(vec![l]).concat(&v.inverse()));
    }
    Ok(Presentation::new(g1.a_count(), g1.x_count(), true, relators)?)
}

/// Replaces every a- and x-letter by its V-word and freely reduces.
pub fn encode(w: &Word, n: u32) -> Result<Word, EmbeddingError> {
    let m = m_for(n);
    let mut images = BTreeMap::new();
    for l in w.letters() {
        if let Some(idx) = v_index(*l) {
            if let std::collections::btree_map::Entry::Vacant(e) = images.entry(l.base()) {
                e.insert(v_word(idx, m)?);
            }
        }
    }
    Ok(w.substitute(|l| images.get(&l)))
}

/// The image of an equation under `a_j -> V_{2j+1}`, variables untouched,
/// freely reduced.
pub fn mu_n(eq: &QuadraticEquation, n: u32) -> Result<Word, EmbeddingError> {
    let m = m_for(n);
    let mut images = BTreeMap::new();
    for l in eq.word().letters() {
        if l.sort() == Sort::A && !images.contains_key(&l.base()) {
            images.insert(l.base(), v_word(v_index(*l).expect("a letter"), m)?);
        }
    }
    Ok(eq.word().substitute(|l| images.get(&l)))
}

/// A presentation over `h1, h2` whose first `base_relators` relators encode
/// the base group and whose remaining relators encode the equations in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoGeneratorPresentation {
    pub n: u32,
    pub base_relators: usize,
    pub presentation: Presentation,
}

impl TwoGeneratorPresentation {
    pub fn m(&self) -> u64 {
        m_for(self.n)
    }

    pub fn equation_count(&self) -> usize {
        self.presentation.relators().len() - self.base_relators
    }

    /// The relator encoding the `i`-th equation (1-based).
    pub fn equation_relator(&self, i: usize) -> Option<&Word> {
        if i == 0 {
            return None;
        }
        self.presentation.relators().get(self.base_relators + i - 1)
    }
}

/// Encodes every relator of `g2` without `h`-letters into `h1, h2` and takes
/// its cyclic core. The coding relators `a_j V^-1`, `x_k V^-1` are checked to
/// encode to the empty word and are then dropped.
pub fn rewrite_to_two_generators(g2: &Presentation, n: u32) -> Result<TwoGeneratorPresentation, EmbeddingError> {
    let relators = g2.relators();
    let encoded: Vec<(usize, bool, Word)> = relators
        .par_iter()
        .enumerate()
        .map(|(pos, r)| {
            let coding = r.has_sort(Sort::H);
            encode(r, n).map(|w| (pos, coding, if coding { w } else { w.cyclic_core() }))
        })
        .collect::<Result<_, _>>()?;

    let mut kept = Vec::new();
    let mut base_relators = 0;
    for (pos, coding, w) in encoded {
        if coding {
            if !w.is_empty() {
                return Err(EmbeddingError::CodingRelator(pos + 1));
            }
            continue;
        }
        if w.is_empty() {
            return Err(EmbeddingError::TrivialRelator(pos + 1));
        }
        if !relators[pos].has_sort(Sort::X) {
            if base_relators != kept.len() {
                return Err(EmbeddingError::BaseRelators(
                    "base relators must precede the equation relators".into(),
                ));
            }
            base_relators += 1;
        }
        kept.push(w);
    }
    Ok(TwoGeneratorPresentation {
        n,
        base_relators,
        presentation: Presentation::new(0, 0, true, kept)?,
    })
}
