//! Free-group words over the three-sorted alphabet: group generators `a_j`,
//! variables `x_k` and the two new generators `h1`, `h2`.
//!
//! Words are plain letter sequences. Nothing is reduced implicitly; callers
//! ask for [`Word::reduce`] or [`Word::cyclic_reduce`] when they need it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Which alphabet a letter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// A generator `a_j` of the input group.
    A,
    /// A variable `x_k`.
    X,
    /// One of the two generators `h1`, `h2` of the target group.
    H,
}

const INDEX_BITS: u32 = 29;
const MAX_INDEX: u32 = (1 << INDEX_BITS) - 1;

/// A signed letter, packed into 32 bits as `sort | index | inverse`.
///
/// The derived ordering is the enumeration order used throughout the crate:
/// `a1 < a1^-1 < a2 < ... < x1 < x1^-1 < ... < h1 < h1^-1 < h2 < h2^-1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    /// Builds a letter. Panics if `index` is zero, too large, or an `H` index
    /// other than 1 or 2.
    pub fn new(sort: Sort, index: u32, inverse: bool) -> Letter {
        Self::try_new(sort, index, inverse).expect("invalid letter")
    }

    pub fn try_new(sort: Sort, index: u32, inverse: bool) -> Option<Letter> {
        if index == 0 || index > MAX_INDEX || (sort == Sort::H && index > 2) {
            return None;
        }
        let tag = match sort {
            Sort::A => 0u32,
            Sort::X => 1,
            Sort::H => 2,
        };
        Some(Letter((tag << 30) | (index << 1) | inverse as u32))
    }

    pub fn a(index: u32) -> Letter {
        Letter::new(Sort::A, index, false)
    }

    pub fn x(index: u32) -> Letter {
        Letter::new(Sort::X, index, false)
    }

    pub fn h(index: u32) -> Letter {
        Letter::new(Sort::H, index, false)
    }

    pub fn sort(self) -> Sort {
        match self.0 >> 30 {
            0 => Sort::A,
            1 => Sort::X,
            _ => Sort::H,
        }
    }

    pub fn index(self) -> u32 {
        (self.0 >> 1) & MAX_INDEX
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[must_use]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// The positive letter with the same sort and index.
    pub fn base(self) -> Letter {
        Letter(self.0 & !1)
    }

    pub fn is_variable(self) -> bool {
        self.sort() == Sort::X
    }

    /// Same sort and index, opposite sign.
    pub fn cancels(self, other: Letter) -> bool {
        self.0 ^ other.0 == 1
    }

    /// Raise to `+1` or `-1`.
    pub fn pow(self, sign: i32) -> Letter {
        if sign < 0 {
            self.inverse()
        } else {
            self
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.sort() {
            Sort::A => 'a',
            Sort::X => 'x',
            Sort::H => 'h',
        };
        write!(f, "{}{}", prefix, self.index())?;
        if self.is_inverse() {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A maximal common subword occurrence: `u[u_pos..u_pos+len] == v[v_pos..v_pos+len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct CommonSubword {
    pub u_pos: usize,
    pub v_pos: usize,
    pub len: usize,
}

/// A finite sequence of letters.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Number of variable letters, `|W|_X`.
    pub fn x_length(&self) -> usize {
        self.0.iter().filter(|l| l.is_variable()).count()
    }

    pub fn has_sort(&self, sort: Sort) -> bool {
        self.0.iter().any(|l| l.sort() == sort)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Reduced and the last letter does not cancel the first. The empty word
    /// counts as cyclically reduced.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.first(), self.last()) {
                (Some(f), Some(l)) => self.len() == 1 || !f.cancels(l),
                _ => true,
            }
    }

    /// Free reduction.
    #[must_use]
    pub fn reduce(&self) -> Word {
        let mut out = Vec::with_capacity(self.len());
        push_reduced(&mut out, &self.0);
        Word(out)
    }

    /// Splits `w` (freely) as `conjugator . core . conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let reduced = self.reduce().0;
        let mut lo = 0;
        let mut hi = reduced.len();
        while hi - lo >= 2 && reduced[lo].cancels(reduced[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        (Word(reduced[lo..hi].to_vec()), Word(reduced[..lo].to_vec()))
    }

    /// Cyclically reduced core only.
    #[must_use]
    pub fn cyclic_core(&self) -> Word {
        self.cyclic_reduce().0
    }

    #[must_use]
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation without reduction.
    #[must_use]
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// Freely reduced product of several words.
    pub fn product<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut out = Vec::new();
        for w in words {
            push_reduced(&mut out, &w.0);
        }
        Word(out)
    }

    /// `self^exp`, unreduced.
    #[must_use]
    pub fn pow(&self, exp: i32) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word(out)
    }

    /// The cyclic permutation starting at position `k`.
    #[must_use]
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut out = self.0[k..].to_vec();
        out.extend_from_slice(&self.0[..k]);
        Word(out)
    }

    /// Replaces every letter `l` for which `image(l.base())` is `Some(w)` by
    /// `w` or `w^-1`, then freely reduces.
    pub fn substitute<'a, F>(&self, mut image: F) -> Word
    where
        F: FnMut(Letter) -> Option<&'a Word>,
    {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.0 {
            match image(l.base()) {
                Some(w) if l.is_inverse() => {
                    for &m in w.0.iter().rev() {
                        push_letter(&mut out, m.inverse());
                    }
                }
                Some(w) => push_reduced(&mut out, &w.0),
                None => push_letter(&mut out, l),
            }
        }
        Word(out)
    }

    /// Letter-by-letter cyclic equality: `other` is a cyclic permutation of
    /// `self`. Uses substring search in the doubled word.
    pub fn is_cyclic_permutation_of(&self, other: &Word) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        let doubled = self.concat(self);
        find_subslice(&doubled.0[..doubled.len() - 1], &other.0).is_some()
    }

    /// Every maximal literal common subword of `self` and `other` with length
    /// at least `min_len`, sorted by position.
    ///
    /// Both words are run-length encoded. A maximal match must start at the
    /// beginning of a run in at least one of the words, and it can only cross
    /// a run boundary when the runs end together, so the work is bounded by
    /// the number of run pairs plus the size of the output.
    pub fn common_subword_occurrences(&self, other: &Word, min_len: usize) -> Vec<CommonSubword> {
        let min_len = min_len.max(1);
        let ru = Runs::new(&self.0);
        let rv = Runs::new(&other.0);
        let mut found = Vec::new();

        for a in 0..ru.len() {
            for b in 0..rv.len() {
                if ru.letter[a] != rv.letter[b] {
                    continue;
                }
                let (la, lb) = (ru.length[a], rv.length[b]);

                // Alignments whose run tails differ in length stop inside this
                // run pair.
                if la.min(lb) >= min_len {
                    for off in 1..lb {
                        let len = la.min(lb - off);
                        if len >= min_len && lb - off != la {
                            found.push(CommonSubword {
                                u_pos: ru.start[a],
                                v_pos: rv.start[b] + off,
                                len,
                            });
                        }
                    }
                    for off in 1..la {
                        let len = lb.min(la - off);
                        if len >= min_len && la - off != lb {
                            found.push(CommonSubword {
                                u_pos: ru.start[a] + off,
                                v_pos: rv.start[b],
                                len,
                            });
                        }
                    }
                    let extends_left = a > 0 && b > 0 && ru.letter[a - 1] == rv.letter[b - 1];
                    if la != lb && !extends_left {
                        found.push(CommonSubword {
                            u_pos: ru.start[a],
                            v_pos: rv.start[b],
                            len: la.min(lb),
                        });
                    }
                }

                // The unique alignment where both runs end together.
                let (off_a, off_b) = if la >= lb { (la - lb, 0) } else { (0, lb - la) };
                if off_a == 0 && off_b == 0 && a > 0 && b > 0 && ru.letter[a - 1] == rv.letter[b - 1] {
                    // Not left-maximal; found from the earlier run pair.
                    continue;
                }
                let mut len = la - off_a;
                let (mut na, mut nb) = (a + 1, b + 1);
                while na < ru.len() && nb < rv.len() && ru.letter[na] == rv.letter[nb] {
                    let (xa, xb) = (ru.length[na], rv.length[nb]);
                    len += xa.min(xb);
                    if xa != xb {
                        break;
                    }
                    na += 1;
                    nb += 1;
                }
                if len >= min_len {
                    found.push(CommonSubword {
                        u_pos: ru.start[a] + off_a,
                        v_pos: rv.start[b] + off_b,
                        len,
                    });
                }
            }
        }
        found.sort_unstable();
        found.dedup();
        found
    }
}

fn push_letter(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&top) if top.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

fn push_reduced(out: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        push_letter(out, l);
    }
}

struct Runs {
    letter: Vec<Letter>,
    start: Vec<usize>,
    length: Vec<usize>,
}

impl Runs {
    fn new(letters: &[Letter]) -> Runs {
        let mut runs = Runs {
            letter: Vec::new(),
            start: Vec::new(),
            length: Vec::new(),
        };
        for (pos, &l) in letters.iter().enumerate() {
            if runs.letter.last() == Some(&l) {
                *runs.length.last_mut().unwrap() += 1;
            } else {
                runs.letter.push(l);
                runs.start.push(pos);
                runs.length.push(1);
            }
        }
        runs
    }

    fn len(&self) -> usize {
        self.letter.len()
    }
}

/// Knuth–Morris–Pratt search for `needle` in `haystack`.
pub(crate) fn find_subslice<T: Eq>(haystack: &[T], needle: &[T]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for (i, item) in haystack.iter().enumerate() {
        while k > 0 && *item != needle[k] {
            k = fail[k - 1];
        }
        if *item == needle[k] {
            k += 1;
            if k == needle.len() {
                return Some(i + 1 - k);
            }
        }
    }
    None
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Error from parsing the dotted word syntax; `offset` is a byte offset into
/// the parsed text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad token {token:?} at offset {offset}: {reason}")]
pub struct WordParseError {
    pub offset: usize,
    pub token: String,
    pub reason: &'static str,
}

impl Word {
    /// Parses `a1.x3^-1.h2`; the empty word is `e`. Leading and trailing
    /// whitespace is ignored and `base` is added to reported offsets.
    pub fn parse_at(text: &str, base: usize) -> Result<Word, WordParseError> {
        let lead = text.len() - text.trim_start().len();
        let body = text.trim();
        if body == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut offset = base + lead;
        for token in body.split('.') {
            letters.push(parse_letter(token, offset)?);
            offset += token.len() + 1;
        }
        Ok(Word(letters))
    }
}

fn parse_letter(token: &str, offset: usize) -> Result<Letter, WordParseError> {
    let err = |reason| WordParseError {
        offset,
        token: token.to_string(),
        reason,
    };
    let (name, inverse) = match token.strip_suffix("^-1") {
        Some(name) => (name, true),
        None => (token, false),
    };
    let mut chars = name.chars();
    let sort = match chars.next() {
        Some('a') => Sort::A,
        Some('x') => Sort::X,
        Some('h') => Sort::H,
        Some(_) => return Err(err("expected a, x or h")),
        None => return Err(err("empty token")),
    };
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("expected a positive index"));
    }
    if digits.starts_with('0') {
        return Err(err("index must be positive without leading zeros"));
    }
    let index: u32 = digits.parse().map_err(|_| err("index too large"))?;
    Letter::try_new(sort, index, inverse).ok_or_else(|| err("index out of range"))
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Word, WordParseError> {
        Word::parse_at(s, 0)
    }
}

impl FromStr for Letter {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Letter, WordParseError> {
        parse_letter(s, 0)
    }
}
