use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Presentation;
use crate::words::{Letter, Sort, Word};

/// Values of variables, keyed by variable index.
pub type Assignment = BTreeMap<u32, usize>;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    names: Vec<String>,
    product: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
    inverses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("invalid table JSON: {0}")]
    Json(String),
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("word contains {0}, which has no image in this group")]
    Unmapped(Letter),
    #[error("word contains the generator {0} of the two-generator group")]
    HLetter(Letter),
}

/// On-disk form of a table.
#[derive(Serialize, Deserialize)]
struct TableDocument {
    order: usize,
    elements: Vec<String>,
    identity: usize,
    table: Vec<Vec<usize>>,
    generators: BTreeMap<String, usize>,
}

/// Result of checking the group axioms on a table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableReport {
    /// First triple `(x, y, z)` with `(xy)z != x(yz)`.
    pub associativity_failure: Option<(usize, usize, usize)>,
    /// First element `g` with `e*g != g` or `g*e != g`.
    pub identity_failure: Option<usize>,
    /// First element with no two-sided inverse.
    pub inverse_failure: Option<usize>,
    /// Elements not reachable from the generator images.
    pub unreachable: Vec<usize>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.associativity_failure.is_none()
            && self.identity_failure.is_none()
            && self.inverse_failure.is_none()
            && self.unreachable.is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some((x, y, z)) = self.associativity_failure {
            out.push(format!("associativity fails on ({x}, {y}, {z})"));
        }
        if let Some(g) = self.identity_failure {
            out.push(format!("identity fails on element {g}"));
        }
        if let Some(g) = self.inverse_failure {
            out.push(format!("element {g} has no inverse"));
        }
        if !self.unreachable.is_empty() {
            out.push(format!(
                "generators do not generate the group; unreachable elements {:?}",
                self.unreachable
            ));
        }
        out
    }
}

impl CayleyTable {
    /// Builds a table, checking only its shape. `generators[j]` is the image
    /// of `a_{j+1}`. Use [`CayleyTable::validate`] for the group axioms.
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<usize>,
    ) -> Result<CayleyTable, TableError> {
        let order = names.len();
        if order == 0 {
            return Err(TableError::Shape("order must be positive".into()));
        }
        if rows.len() != order || rows.iter().any(|r| r.len() != order) {
            return Err(TableError::Shape(format!("table must be {order} x {order}")));
        }
        let bad = |g: usize| g >= order;
        if rows.iter().flatten().any(|&g| bad(g)) || bad(identity) || generators.iter().any(|&g| bad(g)) {
            return Err(TableError::Shape(format!("element index out of range 0..{order}")));
        }
        let product: Vec<usize> = rows.into_iter().flatten().collect();
        let inverses = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| product[g * order + h] == identity && product[h * order + g] == identity)
                    .unwrap_or(usize::MAX)
            })
            .collect();
        Ok(CayleyTable {
            names,
            product,
            identity,
            generators,
            inverses,
        })
    }

    /// Cyclic group of the given order with `a1` mapped to the element 1.
    pub fn cyclic(order: usize) -> CayleyTable {
        let rows = (0..order)
            .map(|i| (0..order).map(|j| (i + j) % order).collect())
            .collect();
        let names = (0..order).map(|i| i.to_string()).collect();
        CayleyTable::new(names, rows, 0, vec![1 % order]).expect("cyclic table")
    }

    pub fn from_json(text: &str) -> Result<CayleyTable, TableError> {
        let doc: TableDocument = serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
        if doc.order != doc.elements.len() {
            return Err(TableError::Shape(format!(
                "order {} but {} element names",
                doc.order,
                doc.elements.len()
            )));
        }
        let mut generators = Vec::with_capacity(doc.generators.len());
        for j in 1..=doc.generators.len() {
            let image = doc
                .generators
                .get(&format!("a{j}"))
                .ok_or_else(|| TableError::Shape(format!("generators must be named a1..a{}", doc.generators.len())))?;
            generators.push(*image);
        }
        CayleyTable::new(doc.elements, doc.table, doc.identity, generators)
    }

    pub fn to_json(&self) -> String {
        let doc = TableDocument {
            order: self.order(),
            elements: self.names.clone(),
            identity: self.identity,
            table: self.product.chunks(self.order()).map(<[usize]>::to_vec).collect(),
            generators: self
                .generators
                .iter()
                .enumerate()
                .map(|(j, &g)| (format!("a{}", j + 1), g))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of mapped generators `a1..a_k`.
    pub fn a_count(&self) -> u32 {
        self.generators.len() as u32
    }

    pub fn generator(&self, j: u32) -> Option<usize> {
        (j >= 1).then(|| self.generators.get(j as usize - 1).copied()).flatten()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.product[g * self.order() + h]
    }

    /// Panics on tables that failed validation.
    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        let i = self.inverses[g];
        assert!(i != usize::MAX, "element {g} has no inverse");
        i
    }

    /// Runs [`CayleyTable::validate`] and turns failures into an error.
    pub fn checked(self) -> Result<CayleyTable, TableError> {
        let report = self.validate();
        if report.passed() {
            Ok(self)
        } else {
            Err(TableError::NotAGroup(report.failures().join("; ")))
        }
    }

    /// Full scan of the group axioms and of generation.
    pub fn validate(&self) -> TableReport {
        let n = self.order();
        let mut report = TableReport::default();
        'assoc: for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        report.associativity_failure = Some((x, y, z));
                        break 'assoc;
                    }
                }
            }
        }
        let e = self.identity;
        report.identity_failure = (0..n).find(|&g| self.mul(e, g) != g || self.mul(g, e) != g);
        report.inverse_failure = (0..n).find(|&g| self.inverses[g] == usize::MAX);

        let mut seen = vec![false; n];
        seen[e] = true;
        let mut queue = VecDeque::from([e]);
        while let Some(g) = queue.pop_front() {
            for &s in &self.generators {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        report.unreachable = (0..n).filter(|&g| !seen[g]).collect();
        report
    }

    /// Image of a constant letter.
    fn letter_image(&self, l: Letter) -> Result<usize, TableError> {
        match l.sort() {
            Sort::A => {
                let g = self.generator(l.index()).ok_or(TableError::Unmapped(l))?;
                Ok(if l.is_inverse() { self.inv(g) } else { g })
            }
            Sort::H => Err(TableError::HLetter(l)),
            Sort::X => Err(TableError::Unmapped(l)),
        }
    }

    /// Image of `w` under `a_j -> generator(j)`, `x_k -> assignment[k]`.
    pub fn evaluate(&self, w: &Word, assignment: &Assignment) -> Result<usize, TableError> {
        let mut acc = self.identity;
        for &l in w.letters() {
            let g = match l.sort() {
                Sort::X => {
                    let g = *assignment.get(&l.index()).ok_or(TableError::Unmapped(l))?;
                    if l.is_inverse() {
                        self.inv(g)
                    } else {
                        g
                    }
                }
                _ => self.letter_image(l)?,
            };
            acc = self.mul(acc, g);
        }
        Ok(acc)
    }

    /// Whether every relator of `p` is trivial under the generator map.
    pub fn satisfies(&self, p: &Presentation) -> Result<bool, TableError> {
        let empty = Assignment::new();
        for r in p.relators() {
            if self.evaluate(r, &empty)? != self.identity {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A shortest word over `a1..a_k` for every element (shortlex by the
    /// letter order), from a breadth-first search of the Cayley graph.
    pub fn element_words(&self) -> Vec<Option<Word>> {
        let n = self.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[self.identity] = Some(Word::empty());
        let steps: Vec<Letter> = (1..=self.a_count())
            .flat_map(|j| [Letter::a(j), Letter::a(j).inverse()])
            .collect();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for &l in &steps {
                let Ok(s) = self.letter_image(l) else { continue };
                let h = self.mul(g, s);
                if words[h].is_none() {
                    let mut w = words[g].clone().unwrap().into_letters();
                    w.push(l);
                    words[h] = Some(Word::from(w));
                    queue.push_back(h);
                }
            }
        }
        words
    }

    /// Defining relators read off the Cayley graph: for a spanning tree with
    /// tree words `w_g`, every non-tree edge `g --a--> ga` gives the relator
    /// `w_g a w_ga^-1`. These generate the kernel of `F(A) -> G`, so the
    /// result presents the group. Relators are cyclically reduced and
    /// deduplicated up to cyclic permutation and inversion.
    pub fn derived_presentation(&self) -> Presentation {
        let words = self.element_words();
        let mut relators: Vec<Word> = Vec::new();
        let mut seen = BTreeSet::new();
        for g in 0..self.order() {
            let Some(wg) = &words[g] else { continue };
            for j in 1..=self.a_count() {
                let h = self.mul(g, self.generators[j as usize - 1]);
                let Some(wh) = &words[h] else { continue };
                let r = Word::product([wg, &Word::from(vec![Letter::a(j)]), &wh.inverse()]).cyclic_core();
                if r.is_empty() {
                    continue;
                }
                let key = cyclic_key(&r);
                if seen.insert(key) {
                    relators.push(r);
                }
            }
        }
        Presentation::new(self.a_count(), 0, false, relators).expect("derived relators are valid")
    }
}

/// Canonical representative of a cyclic word up to rotation and inversion.
fn cyclic_key(w: &Word) -> Word {
    let inv = w.inverse();
    (0..w.len())
        .flat_map(|k| [w.rotate(k), inv.rotate(k)])
        .min()
        .unwrap_or_default()
}
