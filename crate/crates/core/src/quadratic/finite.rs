use rayon::prelude::*;

use super::{QuadraticEquation, QuadraticError, SolutionTuple, SolutionValue};
use crate::groups::{CayleyTable, TableError};
use crate::words::Sort;

const MAX_ASSIGNMENTS: u64 = 1 << 40;

#[derive(Clone, Copy)]
enum Step {
    Constant(usize),
    /// Slot into the assignment vector, and whether the letter is inverted.
    Variable(usize, bool),
}

/// Exhaustive search over all `|G|^k` assignments. Returns the least
/// satisfying assignment in lexicographic order (first variable most
/// significant, elements ordered by index), independent of thread schedule.
pub fn solve_finite(eq: &QuadraticEquation, table: &CayleyTable) -> Result<Option<SolutionTuple>, QuadraticError> {
    let vars = eq.variables();
    let steps = eq
        .word()
        .letters()
        .iter()
        .map(|&l| match l.sort() {
            Sort::X => {
                let slot = vars.binary_search(&l.index()).expect("variable of equation");
                Ok(Step::Variable(slot, l.is_inverse()))
            }
            Sort::A => {
                let g = table.generator(l.index()).ok_or(TableError::Unmapped(l))?;
                Ok(Step::Constant(if l.is_inverse() { table.inv(g) } else { g }))
            }
            Sort::H => Err(TableError::HLetter(l)),
        })
        .collect::<Result<Vec<_>, TableError>>()?;

    let order = table.order();
    let k = vars.len();
    let total = (order as u64)
        .checked_pow(k as u32)
        .filter(|&t| t <= MAX_ASSIGNMENTS)
        .ok_or(QuadraticError::SearchTooLarge { order, variables: k })?;

    let decode = |mut code: u64, out: &mut [usize]| {
        for slot in out.iter_mut().rev() {
            *slot = (code % order as u64) as usize;
            code /= order as u64;
        }
    };
    let satisfies = |code: u64| {
        let mut values = vec![0usize; k];
        decode(code, &mut values);
        let mut acc = table.identity();
        for step in &steps {
            let g = match *step {
                Step::Constant(g) => g,
                Step::Variable(slot, false) => values[slot],
                Step::Variable(slot, true) => table.inv(values[slot]),
            };
            acc = table.mul(acc, g);
        }
        acc == table.identity()
    };

    let found = (0..total as usize)
        .into_par_iter()
        .map(|code| code as u64)
        .with_min_len(4096)
        .find_first(|&code| satisfies(code));
    Ok(found.map(|code| {
        let mut values = vec![0usize; k];
        decode(code, &mut values);
        SolutionTuple::new(
            vars.iter()
                .zip(values)
                .map(|(&v, g)| (v, SolutionValue::Element(g)))
                .collect(),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn eq(s: &str) -> QuadraticEquation {
        QuadraticEquation::recognize(s.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn z2_examples() {
        let z2 = CayleyTable::cyclic(2);
        assert_eq!(
            solve_finite(&eq("x1.a1.x1^-1.a1"), &z2),
            Ok(Some(SolutionTuple::new(vec![(1, SolutionValue::Element(0))])))
        );
        assert_eq!(solve_finite(&eq("x1.x1.a1"), &z2), Ok(None));
    }

    #[test]
    fn trivial_group_solves_everything() {
        let trivial = CayleyTable::cyclic(1);
        let sol = solve_finite(&eq("x1.a1.x2.x1^-1.x2.a1^-1"), &trivial).unwrap().unwrap();
        assert_eq!(
            sol.assignments(),
            &[(1, SolutionValue::Element(0)), (2, SolutionValue::Element(0))]
        );
    }

    #[test]
    fn least_assignment_is_returned() {
        // x1.x1.a1 in Z/3: x1 = 1 gives 1+1+1 = 0; x1 = 0 gives 1.
        let z3 = CayleyTable::cyclic(3);
        let sol = solve_finite(&eq("x1.x1.a1"), &z3).unwrap().unwrap();
        assert_eq!(sol.get(1), Some(&SolutionValue::Element(1)));
        // In Z/5: 2(x1 + x2) + 1 = 0, least solution (0, 2).
        let z5 = CayleyTable::cyclic(5);
        let sol = solve_finite(&eq("x1.x2.x1.x2.a1"), &z5).unwrap().unwrap();
        assert_eq!(
            sol.assignments(),
            &[(1, SolutionValue::Element(0)), (2, SolutionValue::Element(2))]
        );
    }

    #[test]
    fn unmapped_constant_is_an_error() {
        let z2 = CayleyTable::cyclic(2);
        assert!(matches!(
            solve_finite(&eq("x1.x1.a3"), &z2),
            Err(QuadraticError::Table(TableError::Unmapped(_)))
        ));
    }
}
