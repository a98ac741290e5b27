use std::ops::ControlFlow;

use super::{solve, QuadraticEquation, QuadraticError, Verdict};
use crate::groups::GroupBackend;
use crate::words::{Letter, Word};

/// Calls `visit` on every cyclically reduced quadratic word of exactly
/// `len` letters over `a1..a_{a_count}` and `x1..x_n` with `|W|_X <= n`, in
/// lexicographic letter order.
pub fn for_each_quadratic_word<F>(a_count: u32, n: u32, len: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Letter]) -> ControlFlow<()>,
{
    let alphabet: Vec<Letter> = (1..=a_count)
        .map(Letter::a)
        .chain((1..=n).map(Letter::x))
        .flat_map(|l| [l, l.inverse()])
        .collect();
    let mut state = Search {
        alphabet,
        len,
        n: n as usize,
        prefix: Vec::with_capacity(len),
        counts: vec![0u8; n as usize + 1],
        x_len: 0,
        open: 0,
    };
    state.extend(&mut visit)
}

struct Search {
    alphabet: Vec<Letter>,
    len: usize,
    n: usize,
    prefix: Vec<Letter>,
    counts: Vec<u8>,
    x_len: usize,
    /// Variables seen exactly once so far.
    open: usize,
}

impl Search {
    fn extend<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Letter]) -> ControlFlow<()>,
    {
        if self.prefix.len() == self.len {
            let (first, last) = (self.prefix[0], self.prefix[self.len - 1]);
            if self.open == 0 && self.x_len > 0 && (self.len == 1 || !first.cancels(last)) {
                return visit(&self.prefix);
            }
            return ControlFlow::Continue(());
        }
        let remaining = self.len - self.prefix.len() - 1;
        for i in 0..self.alphabet.len() {
            let l = self.alphabet[i];
            if self.prefix.last().is_some_and(|&p| p.cancels(l)) {
                continue;
            }
            let var = l.is_variable().then(|| l.index() as usize);
            let (open, x_len) = match var {
                Some(v) => {
                    if self.counts[v] == 2 || self.x_len == self.n {
                        continue;
                    }
                    let open = if self.counts[v] == 0 {
                        self.open + 1
                    } else {
                        self.open - 1
                    };
                    (open, self.x_len + 1)
                }
                None => (self.open, self.x_len),
            };
            // Every open variable needs a later occurrence, and some variable
            // must appear at all.
            if open > remaining || (x_len == 0 && remaining < 2) {
                continue;
            }
            if let Some(v) = var {
                self.counts[v] += 1;
            }
            let saved = (self.open, self.x_len);
            self.open = open;
            self.x_len = x_len;
            self.prefix.push(l);
            let flow = self.extend(visit);
            self.prefix.pop();
            (self.open, self.x_len) = saved;
            if let Some(v) = var {
                self.counts[v] -= 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// The first `count` solvable quadratic equations with `|W|_X <= n` and
/// `|W| <= cap`, ordered by total length and then lexicographically. For
/// the oracle backend the file order is the enumeration order.
///
/// An equation the backend cannot decide is an error, never skipped.
pub fn enumerate_solvable(
    backend: &GroupBackend,
    n: u32,
    cap: usize,
    count: usize,
) -> Result<Vec<QuadraticEquation>, QuadraticError> {
    if n < 2 || n % 2 == 1 {
        return Err(QuadraticError::BadBudget(n));
    }
    let mut out = Vec::new();
    if count == 0 {
        return Ok(out);
    }
    if let GroupBackend::OracleList(words) = backend {
        for w in words {
            let eq = QuadraticEquation::recognize(w.clone())?;
            if let Some(&variable) = eq.variables().iter().find(|&&v| v > n) {
                return Err(QuadraticError::VariableBeyondBudget {
                    equation: w.to_string(),
                    variable,
                    n,
                });
            }
            if eq.x_length() <= n as usize && eq.len() <= cap {
                out.push(eq);
                if out.len() == count {
                    break;
                }
            }
        }
        return Ok(out);
    }

    let a_count = backend.a_count();
    let mut failure = None;
    for len in 1..=cap {
        let flow = for_each_quadratic_word(a_count, n, len, |letters| {
            let eq =
                QuadraticEquation::recognize(Word::from(letters.to_vec())).expect("generator yields quadratic words");
            match solve(&eq, backend) {
                Ok(Verdict::Solved(_) | Verdict::Listed) => {
                    out.push(eq);
                    if out.len() == count {
                        return ControlFlow::Break(());
                    }
                }
                Ok(Verdict::Unsolvable) => {}
                Ok(Verdict::Inconclusive) => {
                    failure = Some(QuadraticError::Undecidable(eq.to_string()));
                    return ControlFlow::Break(());
                }
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if flow.is_break() {
            break;
        }
    }
    Ok(out)
}
