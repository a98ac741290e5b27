use std::collections::BTreeMap;

use serde::Serialize;

use super::build::{global_variable, local_variable, mu_n, TwoGeneratorPresentation};
use super::vwords::v_word;
use super::{m_for, EmbeddingError, C};
use crate::groups::{Assignment, GroupBackend};
use crate::quadratic::{QuadraticEquation, SolutionTuple, SolutionValue};
use crate::words::{Sort, Word};

/// Solution of the `i`-th encoded equation: `x_k -> V_{2k}` for each global
/// variable `k` of the equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub summary: TransportSummary,
    /// Keyed by global variable index.
    pub tuple: SolutionTuple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportSummary {
    pub equation: usize,
    pub global_variables: Vec<u32>,
    pub length: u64,
    /// `nM(M(2ni+1)+1)`.
    pub proof_bound: u64,
    /// `C n^4 i`.
    pub theorem_bound: u64,
}

pub fn transport_solution(i: usize, eq: &QuadraticEquation, n: u32) -> Result<Transport, EmbeddingError> {
    if i == 0 {
        return Err(EmbeddingError::EquationIndex(i));
    }
    let m = m_for(n);
    let (n64, i64_) = (n as u64, i as u64);
    let overflow = || EmbeddingError::Overflow { n, i };
    let proof_bound = (2 * n64 * i64_ + 1)
        .checked_mul(m)
        .and_then(|x| x.checked_add(1))
        .and_then(|x| x.checked_mul(n64 * m))
        .ok_or_else(overflow)?;
    let theorem_bound = C
        .checked_mul(n64.pow(4))
        .and_then(|x| x.checked_mul(i64_))
        .ok_or_else(overflow)?;

    let mut assignments = Vec::new();
    let mut global_variables = Vec::new();
    let mut length = 0u64;
    for &t in eq.variables() {
        let k = global_variable(i, t, n);
        if t > n || k as u64 > n64 * i64_ {
            return Err(EmbeddingError::IndexBeyondBound { k, n, i });
        }
        let v = v_word(2 * k as u64, m)?;
        length += v.len() as u64;
        global_variables.push(k);
        assignments.push((k, SolutionValue::Word(v)));
    }
    if length > proof_bound || proof_bound > theorem_bound {
        return Err(EmbeddingError::BoundViolated {
            equation: i,
            length,
            proof_bound,
            theorem_bound,
        });
    }
    Ok(Transport {
        summary: TransportSummary {
            equation: i,
            global_variables,
            length,
            proof_bound,
            theorem_bound,
        },
        tuple: SolutionTuple::new(assignments),
    })
}

/// Substitutes `tuple` (keyed by global variable) into the image of the
/// `i`-th equation and checks that the cyclic core is the corresponding
/// relator of `prh`, up to cyclic permutation and inversion.
pub fn verify_transport(
    i: usize,
    eq: &QuadraticEquation,
    tuple: &SolutionTuple,
    prh: &TwoGeneratorPresentation,
) -> Result<bool, EmbeddingError> {
    let n = prh.n;
    let expected: Vec<u32> = eq
        .variables()
        .iter()
        .map(|&t| global_variable(i.max(1), t, n))
        .collect();
    if i == 0 || tuple.variables() != expected {
        return Err(EmbeddingError::TupleMismatch {
            equation: i,
            expected,
            found: tuple.variables(),
        });
    }
    let values = tuple.word_values().ok_or(EmbeddingError::TupleMismatch {
        equation: i,
        expected: expected.clone(),
        found: vec![],
    })?;
    let local: BTreeMap<u32, &Word> = values.iter().map(|(&k, w)| (local_variable(k, n).1, w)).collect();
    let relator = prh.equation_relator(i).ok_or(EmbeddingError::MissingRelator(i))?;

    let image = mu_n(eq, n)?;
    let result = image
        .substitute(|l| {
            if l.sort() == Sort::X {
                local.get(&l.index()).copied()
            } else {
                None
            }
        })
        .cyclic_core();
    Ok(result.is_cyclic_permutation_of(relator) || result.inverse().is_cyclic_permutation_of(relator))
}

/// Value of `psi_infinity(w)` in the base group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GroupValue {
    Element(usize),
    Word(#[serde(serialize_with = "display")] Word),
}

fn display<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(w)
}

impl GroupValue {
    pub fn is_identity(&self, backend: &GroupBackend) -> bool {
        match (self, backend) {
            (GroupValue::Element(g), GroupBackend::FiniteTable(t)) => *g == t.identity(),
            (GroupValue::Word(w), _) => w.is_empty(),
            _ => false,
        }
    }
}

/// Sends each global `x_k` to the stored solution value of its equation
/// and evaluates in the base group; a-letters are fixed. Variables of a
/// covered block that its equation does not use go to the identity.
pub fn retract_psi_infinity(
    w: &Word,
    solutions: &[SolutionTuple],
    n: u32,
    backend: &GroupBackend,
) -> Result<GroupValue, EmbeddingError> {
    let value = |k: u32| -> Result<Option<&SolutionValue>, EmbeddingError> {
        let (i, t) = local_variable(k, n);
        let tuple = solutions.get(i - 1).ok_or(EmbeddingError::Uncovered(k))?;
        Ok(tuple.get(t))
    };
    if let Some(l) = w.letters().iter().find(|l| l.sort() == Sort::H) {
        return Err(EmbeddingError::Retraction(format!(
            "{l} is not in the base group or its variables"
        )));
    }
    match backend {
        GroupBackend::FiniteTable(table) => {
            let mut assignment = Assignment::new();
            for l in w.letters().iter().filter(|l| l.is_variable()) {
                let g = match value(l.index())? {
                    Some(SolutionValue::Element(g)) => *g,
                    Some(SolutionValue::Word(_)) => {
                        return Err(EmbeddingError::Retraction("expected group elements".into()))
                    }
                    None => table.identity(),
                };
                assignment.insert(l.index(), g);
            }
            Ok(GroupValue::Element(table.evaluate(w, &assignment)?))
        }
        GroupBackend::FreeGroup { .. } => {
            let mut images: BTreeMap<u32, Word> = BTreeMap::new();
            for l in w.letters().iter().filter(|l| l.is_variable()) {
                let image = match value(l.index())? {
                    Some(SolutionValue::Word(u)) => u.clone(),
                    Some(SolutionValue::Element(_)) => return Err(EmbeddingError::Retraction("expected words".into())),
                    None => Word::empty(),
                };
                images.insert(l.index(), image);
            }
            Ok(GroupValue::Word(w.substitute(|l| {
                if l.sort() == Sort::X {
                    images.get(&l.index())
                } else {
                    None
                }
            })))
        }
        GroupBackend::OracleList(_) => Err(EmbeddingError::Retraction(
            "the oracle backend provides no solutions to retract along".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::build::{build_g1, build_g2, rewrite_to_two_generators};
    use crate::groups::CayleyTable;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn eq(s: &str) -> QuadraticEquation {
        QuadraticEquation::recognize(w(s)).unwrap()
    }

    fn prh_for(eqs: &[QuadraticEquation], n: u32) -> TwoGeneratorPresentation {
        let g = CayleyTable::cyclic(2).derived_presentation();
        let g1 = build_g1(&g, eqs, n).unwrap();
        rewrite_to_two_generators(&build_g2(&g1, n).unwrap(), n).unwrap()
    }

    #[test]
    fn first_transport() {
        let t = transport_solution(1, &eq("x1.x1"), 2).unwrap();
        assert_eq!(t.summary.length, 5833);
        assert_eq!(t.summary.length, 48 * 48 * 2 + 1225);
        assert_eq!(t.summary.proof_bound, 2 * 48 * (48 * 5 + 1));
        assert_eq!(t.summary.proof_bound, 23136);
        assert_eq!(t.summary.theorem_bound, 27648);
        assert_eq!(t.summary.global_variables, [1]);
    }

    #[test]
    fn later_equations_use_their_block() {
        let t = transport_solution(3, &eq("x1.x2.x1^-1.x2^-1"), 4).unwrap();
        assert_eq!(t.summary.global_variables, [9, 10]);
        assert_eq!(t.tuple.get(9), Some(&SolutionValue::Word(v_word(18, 96).unwrap())));
        assert!(t.summary.length <= t.summary.proof_bound);
    }

    #[test]
    fn transported_tuples_kill_their_relators() {
        let eqs = [eq("x1.x1"), eq("x1.a1.x1^-1.a1"), eq("x2.a1.x2^-1.a1^-1")];
        let prh = prh_for(&eqs, 2);
        for (pos, e) in eqs.iter().enumerate() {
            let t = transport_solution(pos + 1, e, 2).unwrap();
            assert_eq!(verify_transport(pos + 1, e, &t.tuple, &prh), Ok(true), "{e}");
        }
        let v2 = v_word(2, 48).unwrap();
        assert_eq!(prh.equation_relator(1), Some(&v2.concat(&v2)));

        let eqs = [eq("x1.x2.x1^-1.x2^-1.a1.a1"), eq("x2.x1.x2.x1^-1")];
        let prh = prh_for(&eqs, 4);
        for (pos, e) in eqs.iter().enumerate() {
            let t = transport_solution(pos + 1, e, 4).unwrap();
            assert_eq!(verify_transport(pos + 1, e, &t.tuple, &prh), Ok(true), "{e}");
        }
    }

    #[test]
    fn off_by_one_tuple_fails() {
        let e = eq("x1.a1.x1^-1.a1");
        let prh = prh_for(std::slice::from_ref(&e), 2);
        let wrong = SolutionTuple::new(vec![(1, SolutionValue::Word(v_word(3, 48).unwrap()))]);
        assert_eq!(verify_transport(1, &e, &wrong, &prh), Ok(false));
        let mismatched = SolutionTuple::new(vec![(2, SolutionValue::Word(v_word(2, 48).unwrap()))]);
        assert!(matches!(
            verify_transport(1, &e, &mismatched, &prh),
            Err(EmbeddingError::TupleMismatch { .. })
        ));
    }

    #[test]
    fn retraction_on_z2() {
        let z2 = GroupBackend::FiniteTable(CayleyTable::cyclic(2));
        let solutions = vec![
            SolutionTuple::new(vec![(1, SolutionValue::Element(0))]),
            SolutionTuple::new(vec![(1, SolutionValue::Element(1)), (2, SolutionValue::Element(1))]),
        ];
        // Equation 2's x1 is global x3.
        assert_eq!(
            retract_psi_infinity(&w("x3"), &solutions, 2, &z2),
            Ok(GroupValue::Element(1))
        );
        assert_eq!(
            retract_psi_infinity(&w("a1"), &solutions, 2, &z2),
            Ok(GroupValue::Element(1))
        );
        assert_eq!(
            retract_psi_infinity(&w("x2"), &solutions, 2, &z2),
            Ok(GroupValue::Element(0))
        );
        assert_eq!(
            retract_psi_infinity(&w("x5"), &solutions, 2, &z2),
            Err(EmbeddingError::Uncovered(5))
        );
    }

    #[test]
    fn retraction_on_free_group() {
        let free = GroupBackend::FreeGroup { rank: 2, radius: 0 };
        let solutions = vec![SolutionTuple::new(vec![(1, SolutionValue::Word(w("a1.a2")))])];
        assert_eq!(
            retract_psi_infinity(&w("x1.x1.a2^-1"), &solutions, 2, &free),
            Ok(GroupValue::Word(w("a1.a2.a1")))
        );
        let killed = retract_psi_infinity(&w("x1.x1.a2^-1.a1^-1.a2^-1.a1^-1"), &solutions, 2, &free).unwrap();
        assert!(killed.is_identity(&free));
    }
}
