use serde::Serialize;

use super::EmbeddingError;
use crate::words::{Letter, Word};

/// Smallest admissible `M` (`M = 24n` with `n >= 2`).
pub const MIN_M: u64 = 48;

/// The coding word `h1 h2^(Mi+1) h1 h2^(Mi+2) ... h1 h2^(M(i+1)) h1`.
pub fn v_word(i: u64, m: u64) -> Result<Word, EmbeddingError> {
    if i < 1 || m < MIN_M {
        return Err(EmbeddingError::VWord { i, m });
    }
    let h1 = Letter::h(1);
    let h2 = Letter::h(2);
    let mut letters = Vec::with_capacity(v_word_length(i, m) as usize);
    letters.push(h1);
    for k in m * i + 1..=m * (i + 1) {
        letters.extend(std::iter::repeat_n(h2, k as usize));
        letters.push(h1);
    }
    Ok(Word::from(letters))
}

/// `|V_i| = M^2 i + (M+1)(M+2)/2`.
pub fn v_word_length(i: u64, m: u64) -> u64 {
    m * m * i + (m + 1) * (m + 2) / 2
}

/// Exponents `k` of the maximal `h1 h2^k h1` blocks of a word over
/// `{h1, h2}`, with the position of the opening `h1`.
pub fn block_exponents(w: &Word) -> Vec<(usize, usize)> {
    let h1 = Letter::h(1);
    let h2 = Letter::h(2);
    let letters = w.letters();
    let mut blocks = Vec::new();
    let mut open: Option<usize> = None;
    for (pos, &l) in letters.iter().enumerate() {
        if l == h1 {
            if let Some(start) = open {
                blocks.push((start, pos - start - 1));
            }
            open = Some(pos);
        } else if l != h2 {
            open = None;
        }
    }
    blocks
}

/// Run-length statistics of a coding word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VWordStats {
    pub i: u64,
    pub m: u64,
    pub length: u64,
    pub closed_form_length: u64,
    pub h1_count: u64,
    pub min_run: u64,
    pub max_run: u64,
}

pub fn v_word_stats(i: u64, m: u64) -> Result<VWordStats, EmbeddingError> {
    let w = v_word(i, m)?;
    let h1_count = w.letters().iter().filter(|&&l| l == Letter::h(1)).count() as u64;
    let runs: Vec<u64> = block_exponents(&w).into_iter().map(|(_, k)| k as u64).collect();
    Ok(VWordStats {
        i,
        m,
        length: w.len() as u64,
        closed_form_length: v_word_length(i, m),
        h1_count,
        min_run: runs.iter().copied().min().unwrap_or(0),
        max_run: runs.iter().copied().max().unwrap_or(0),
    })
}
