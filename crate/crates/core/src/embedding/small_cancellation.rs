use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::vwords::{block_exponents, v_word};
use super::EmbeddingError;
use crate::words::{CommonSubword, Word};

/// Outcome of comparing `V_i` and `V_j` for long common subwords, together
/// with the structural facts that make the comparison come out clean.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallCancellationReport {
    pub i: u64,
    pub j: u64,
    pub m: u64,
    pub len_i: usize,
    pub len_j: usize,
    /// `ceil(4 min(|V_i|, |V_j|) / M)`.
    pub threshold: usize,
    /// Maximal common subwords of length at least `threshold`.
    pub qualifying: Vec<CommonSubword>,
    /// Qualifying occurrences other than the identity overlap of `V_i` with itself.
    pub violations: Vec<CommonSubword>,
    /// Every window of `threshold` letters in the shorter word contains a
    /// whole `h1 h2^k h1` block, hence so does every qualifying common subword.
    pub windows_contain_block: bool,
    /// Block exponents of `V_i` are exactly `Mi+1..=M(i+1)`, each once, and
    /// likewise for `V_j`; so a block determines both the word and the position.
    pub blocks_pinpoint: bool,
    /// `(4/M)|V_k| > 4(Mk+2) > 2M(k+1)+2` for `k = i, j`.
    pub proof_inequality: bool,
    /// `threshold > 2M(min(i,j)+1)+2`: no block-free stretch reaches the threshold.
    pub threshold_exceeds_blocks: bool,
}

impl SmallCancellationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
            && self.windows_contain_block
            && self.blocks_pinpoint
            && self.proof_inequality
            && self.threshold_exceeds_blocks
    }

    /// True when the only qualifying occurrence is `V_i` against itself.
    pub fn identity_overlap_only(&self) -> bool {
        self.i == self.j
            && self.qualifying
                == [CommonSubword {
                    u_pos: 0,
                    v_pos: 0,
                    len: self.len_i,
                }]
    }
}

pub fn check_small_cancellation(i: u64, j: u64, m: u64) -> Result<SmallCancellationReport, EmbeddingError> {
    let vi = v_word(i, m)?;
    let vj = if i == j { vi.clone() } else { v_word(j, m)? };
    Ok(check_pair(i, &vi, j, &vj, m))
}

/// All pairs `1 <= i <= j <= horizon`, in that order.
pub fn small_cancellation_sweep(m: u64, horizon: u64) -> Result<Vec<SmallCancellationReport>, EmbeddingError> {
    let words = (1..=horizon)
        .into_par_iter()
        .map(|i| v_word(i, m))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<(u64, u64)> = (1..=horizon).flat_map(|i| (i..=horizon).map(move |j| (i, j))).collect();
    Ok(pairs
        .into_par_iter()
        .map(|(i, j)| check_pair(i, &words[i as usize - 1], j, &words[j as usize - 1], m))
        .collect())
}

fn check_pair(i: u64, vi: &Word, j: u64, vj: &Word, m: u64) -> SmallCancellationReport {
    let shorter = vi.len().min(vj.len()) as u64;
    let threshold = (4 * shorter).div_ceil(m) as usize;
    let qualifying = vi.common_subword_occurrences(vj, threshold);
    let violations = qualifying
        .iter()
        .copied()
        .filter(|c| !(i == j && c.u_pos == c.v_pos))
        .collect();

    let inequality = |k: u64, len: usize| 4 * len as u64 > 4 * m * (m * k + 2) && 4 * (m * k + 2) > 2 * m * (k + 1) + 2;

    SmallCancellationReport {
        i,
        j,
        m,
        len_i: vi.len(),
        len_j: vj.len(),
        threshold,
        violations,
        qualifying,
        windows_contain_block: windows_contain_block(if vi.len() <= vj.len() { vi } else { vj }, threshold),
        blocks_pinpoint: blocks_pinpoint(vi, i, m) && blocks_pinpoint(vj, j, m),
        proof_inequality: inequality(i, vi.len()) && inequality(j, vj.len()),
        threshold_exceeds_blocks: threshold as u64 > 2 * m * (i.min(j) + 1) + 2,
    }
}

fn windows_contain_block(w: &Word, width: usize) -> bool {
    if width > w.len() {
        return true;
    }
    // Blocks are sorted by start and also by end, so the first block starting
    // inside a window is the one that ends soonest.
    let blocks = block_exponents(w);
    let mut next = 0;
    for start in 0..=w.len() - width {
        while next < blocks.len() && blocks[next].0 < start {
            next += 1;
        }
        match blocks.get(next) {
            Some(&(b, k)) if b + k + 2 <= start + width => {}
            _ => return false,
        }
    }
    true
}

fn blocks_pinpoint(w: &Word, i: u64, m: u64) -> bool {
    let exponents: Vec<u64> = block_exponents(w).iter().map(|&(_, k)| k as u64).collect();
    let distinct: BTreeSet<u64> = exponents.iter().copied().collect();
    distinct.len() == exponents.len() && distinct.into_iter().eq(m * i + 1..=m * (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    /// Direct scan: the longest common subword of `u` and `v` at each diagonal,
    /// reporting every maximal stretch of at least `min_len` letters.
    fn naive_long_matches(u: &Word, v: &Word, min_len: usize) -> Vec<CommonSubword> {
        let (u, v) = (u.letters(), v.letters());
        let mut out = Vec::new();
        for d in -(v.len() as isize - 1)..u.len() as isize {
            let (mut p, mut q) = if d >= 0 { (d as usize, 0) } else { (0, (-d) as usize) };
            let mut run = 0;
            while p < u.len() && q < v.len() {
                if u[p] == v[q] {
                    run += 1;
                } else {
                    if run >= min_len {
                        out.push(CommonSubword {
                            u_pos: p - run,
                            v_pos: q - run,
                            len: run,
                        });
                    }
                    run = 0;
                }
                p += 1;
                q += 1;
            }
            if run >= min_len {
                out.push(CommonSubword {
                    u_pos: p - run,
                    v_pos: q - run,
                    len: run,
                });
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn distinct_words_share_nothing_long() {
        let r = check_small_cancellation(1, 2, 48).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.qualifying.is_empty());
        let naive = naive_long_matches(&v_word(1, 48).unwrap(), &v_word(2, 48).unwrap(), r.threshold);
        assert!(naive.is_empty());
    }

    #[test]
    fn self_overlap_is_the_only_match() {
        let r = check_small_cancellation(1, 1, 48).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.identity_overlap_only());
        let v = v_word(1, 48).unwrap();
        assert_eq!(naive_long_matches(&v, &v, r.threshold), r.qualifying);
    }

    #[test]
    fn threshold_arithmetic() {
        let r = check_small_cancellation(1, 2, 48).unwrap();
        assert_eq!(r.threshold, (4 * 3529_usize).div_ceil(48));
        for m in [48, 96, 144] {
            for i in 1..=12 {
                let r = check_small_cancellation(i, i, m).unwrap();
                assert!(r.threshold as u64 > 2 * m * (i + 1) + 2);
                assert!(r.proof_inequality);
            }
        }
    }

    #[test]
    fn sweep_is_ordered_and_clean() {
        let reports = small_cancellation_sweep(48, 4).unwrap();
        let pairs: Vec<(u64, u64)> = reports.iter().map(|r| (r.i, r.j)).collect();
        assert_eq!(
            pairs,
            [
                (1, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 2),
                (2, 3),
                (2, 4),
                (3, 3),
                (3, 4),
                (4, 4)
            ]
        );
        assert!(reports.iter().all(SmallCancellationReport::passes));
    }

    #[test]
    fn detects_a_planted_shared_piece() {
        // A short word with repeated blocks: exponents are not unique, and a
        // long shifted self-match appears.
        let h1 = Letter::h(1);
        let h2 = Letter::h(2);
        let mut letters = vec![h1];
        for _ in 0..4 {
            letters.extend([h2, h2, h2, h1]);
        }
        let w = Word::from(letters);
        assert!(!blocks_pinpoint(&w, 1, 48));
        let r = check_pair(1, &w, 1, &w, 48);
        assert!(!r.passes());
    }

    #[test]
    fn block_window_check() {
        let v = v_word(1, 48).unwrap();
        // The longest block is h1 h2^96 h1; a window one letter shorter than
        // two blocks can straddle a boundary and still miss.
        assert!(windows_contain_block(&v, 2 * 98));
        assert!(!windows_contain_block(&v, 97));
    }
}
