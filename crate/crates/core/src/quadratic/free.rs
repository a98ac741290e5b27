use std::collections::BTreeMap;

use super::{check_free_letters, QuadraticEquation, QuadraticError, SolutionTuple, SolutionValue, Verdict};
use crate::words::{Letter, Sort, Word};

/// Finds `T` with `T u1 T^-1 u2 = 1` in the free group, i.e. `T` conjugates
/// `u1` to `u2^-1`. The cyclic cores of `u1` and `u2^-1` must be cyclic
/// permutations of each other. Among the conjugators this construction
/// yields, the shortest (then least) is returned.
pub fn decide_conjugacy_free(u1: &Word, u2: &Word) -> Option<Word> {
    let (c1, k1) = u1.cyclic_reduce();
    let (c2, k2) = u2.inverse().cyclic_reduce();
    if c1.len() != c2.len() {
        return None;
    }
    if c1.is_empty() {
        return Some(Word::empty());
    }
    let k1_inv = k1.inverse();
    let letters = c1.letters();
    let mut best: Option<Word> = None;
    for r in 0..letters.len() {
        if c1.rotate(r) != c2 {
            continue;
        }
        let prefix = Word::from(letters[..r].to_vec());
        let suffix = Word::from(letters[r..].to_vec());
        for candidate in [
            Word::product([&k2, &prefix.inverse(), &k1_inv]),
            Word::product([&k2, &suffix, &k1_inv]),
        ] {
            let better = match &best {
                None => true,
                Some(b) => (candidate.len(), &candidate) < (b.len(), b),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best
}

/// Finds `T` with `T T = v` in the free group. The cyclic core of a square
/// is literally the square of its first half.
pub fn decide_square_free(v: &Word) -> Option<Word> {
    let (core, conj) = v.cyclic_reduce();
    if core.is_empty() {
        return Some(Word::empty());
    }
    if core.len() % 2 == 1 {
        return None;
    }
    let (left, right) = core.letters().split_at(core.len() / 2);
    if left != right {
        return None;
    }
    Some(Word::product([&conj, &Word::from(left.to_vec()), &conj.inverse()]))
}

/// A one-variable quadratic equation brought to the form `x U1 x^e U2 = 1`
/// by cyclic permutation and, if needed, inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVariableShape {
    pub variable: u32,
    pub u1: Word,
    pub u2: Word,
    /// `+1` for `x U1 x U2`, `-1` for `x U1 x^-1 U2`.
    pub exponent: i32,
}

impl OneVariableShape {
    pub fn of(eq: &QuadraticEquation) -> Option<OneVariableShape> {
        let [variable] = eq.variables() else { return None };
        let (p, q) = eq.pairing()[0];
        let rotated = eq.word().rotate(p);
        let letters = rotated.letters();
        let gap = q - p;
        let first = letters[0];
        let second = letters[gap];
        let a = Word::from(letters[1..gap].to_vec());
        let b = Word::from(letters[gap + 1..].to_vec());
        Some(if first.is_inverse() {
            // Invert and rotate: x B^-1 x^(-e') A^-1.
            OneVariableShape {
                variable: *variable,
                u1: b.inverse(),
                u2: a.inverse(),
                exponent: -second.sign(),
            }
        } else {
            OneVariableShape {
                variable: *variable,
                u1: a,
                u2: b,
                exponent: second.sign(),
            }
        })
    }

    /// Value of `x`, if the equation is solvable in the free group.
    pub fn solve(&self) -> Option<Word> {
        if self.exponent < 0 {
            decide_conjugacy_free(&self.u1, &self.u2)
        } else {
            // x U1 x U2 = (x U1)^2 U1^-1 U2, so x U1 is a square root of U2^-1 U1.
            let root = decide_square_free(&Word::product([&self.u2.inverse(), &self.u1]))?;
            Some(Word::product([&root, &self.u1.inverse()]))
        }
    }
}

/// All freely reduced words of length at most `radius` over `a1..a_rank`,
/// in shortlex order.
pub(crate) fn reduced_words(rank: u32, radius: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=rank)
        .flat_map(|j| [Letter::a(j), Letter::a(j).inverse()])
        .collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                if w.last().is_some_and(|last| last.cancels(l)) {
                    continue;
                }
                let mut longer = w.clone();
                longer.push(l);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned().map(Word::from));
        layer = next;
    }
    out
}

/// Searches every tuple of reduced words of length at most `radius`, first
/// variable most significant.
pub fn bounded_free_search(eq: &QuadraticEquation, rank: u32, radius: usize) -> Option<SolutionTuple> {
    let candidates = reduced_words(rank, radius);
    let vars = eq.variables();
    let mut choice = vec![0usize; vars.len()];
    loop {
        let values: BTreeMap<u32, &Word> = vars.iter().zip(&choice).map(|(&v, &c)| (v, &candidates[c])).collect();
        let result = eq
            .word()
            .substitute(|l| (l.sort() == Sort::X).then(|| values.get(&l.index()).copied()).flatten());
        if result.is_empty() {
            return Some(SolutionTuple::new(
                values
                    .into_iter()
                    .map(|(v, w)| (v, SolutionValue::Word(w.clone())))
                    .collect(),
            ));
        }
        // Odometer increment, last variable fastest.
        let mut slot = choice.len();
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < candidates.len() {
                break;
            }
            choice[slot] = 0;
        }
    }
}

/// Solves `eq` in the free group of the given rank. One-variable equations
/// are decided exactly; others are searched up to `radius` and reported
/// inconclusive when nothing is found.
pub fn solve_free(eq: &QuadraticEquation, rank: u32, radius: usize) -> Result<Verdict, QuadraticError> {
    check_free_letters(eq.word(), rank)?;
    if let Some(shape) = OneVariableShape::of(eq) {
        return Ok(match shape.solve() {
            Some(x) => Verdict::Solved(SolutionTuple::new(vec![(shape.variable, SolutionValue::Word(x))])),
            None => Verdict::Unsolvable,
        });
    }
    Ok(match bounded_free_search(eq, rank, radius) {
        Some(t) => Verdict::Solved(t),
        None => Verdict::Inconclusive,
    })
}
