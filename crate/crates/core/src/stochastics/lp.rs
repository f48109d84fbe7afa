//! Exact feasibility of `A x = b, x ≥ 0` over the rationals.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// One equality `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

/// Equality constraints over nonnegative variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpProblem {
    num_vars: usize,
    rows: Vec<LinearConstraint>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: coeffs.len(),
            });
        }
        self.rows.push(LinearConstraint { coeffs, rhs });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[LinearConstraint] {
        &self.rows
    }
}

/// Whether `x` is nonnegative and satisfies every row exactly.
pub fn check_assignment(prob: &LpProblem, x: &[BigRational]) -> bool {
    x.len() == prob.num_vars
        && x.iter().all(|v| !v.is_negative())
        && prob.rows.iter().all(|row| {
            let lhs: BigRational = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            lhs == row.rhs
        })
}

/// Phase-1 simplex with one artificial variable per row, minimizing their
/// sum. Pivots follow Bland's rule: the lowest-index improving column enters,
/// and ratio-test ties leave by lowest basic index. Returns a basic feasible
/// solution, or `None` if the optimum is positive.
pub fn lp_feasible(prob: &LpProblem) -> Option<Vec<BigRational>> {
    let n = prob.num_vars;
    let m = prob.rows.len();
    let width = n + m;
    let zero = BigRational::zero();

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (i, row) in prob.rows.iter().enumerate() {
        let flip = row.rhs.is_negative();
        let mut r: Vec<BigRational> = row
            .coeffs
            .iter()
            .map(|a| if flip { -a } else { a.clone() })
            .collect();
        r.extend((0..m).map(|j| {
            if j == i {
                BigRational::from_integer(1.into())
            } else {
                zero.clone()
            }
        }));
        tab.push(r);
        rhs.push(if flip { -&row.rhs } else { row.rhs.clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // reduced costs of the phase-1 objective and its negated value
    let mut cost: Vec<BigRational> = (0..width)
        .map(|j| {
            if j < n {
                -tab.iter().map(|r| &r[j]).sum::<BigRational>()
            } else {
                zero.clone()
            }
        })
        .collect();
    let mut neg_obj: BigRational = -rhs.iter().sum::<BigRational>();

    while let Some(col) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut pivot: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tab[i][col].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][col];
            let better = match &pivot {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                pivot = Some((i, ratio));
            }
        }
        // phase 1 is bounded below by zero, so an improving column always has a pivot
        let (r, _) = pivot.expect("phase-1 objective is bounded");
        let p = tab[r][col].clone();
        for v in tab[r].iter_mut() {
            *v /= &p;
        }
        rhs[r] /= &p;
        let pivot_row = tab[r].clone();
        let pivot_rhs = rhs[r].clone();
        for i in 0..m {
            if i == r || tab[i][col].is_zero() {
                continue;
            }
            let f = tab[i][col].clone();
            for (v, pv) in tab[i].iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
            rhs[i] -= &f * &pivot_rhs;
        }
        let f = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
        neg_obj -= &f * &pivot_rhs;
        basis[r] = col;
    }

    if !neg_obj.is_zero() {
        return None;
    }
    let mut x = vec![zero; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = rhs[i].clone();
        }
    }
    debug_assert!(check_assignment(prob, &x));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn int(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn single_variable() {
        let mut lp = LpProblem::new(1);
        lp.add_row(vec![int(1)], int(1)).unwrap();
        assert_eq!(lp_feasible(&lp), Some(vec![int(1)]));
        let mut neg = LpProblem::new(1);
        neg.add_row(vec![int(1)], int(-1)).unwrap();
        assert_eq!(lp_feasible(&neg), None);
    }

    #[test]
    fn empty_problem_is_feasible() {
        assert_eq!(lp_feasible(&LpProblem::new(3)), Some(vec![int(0); 3]));
    }

    #[test]
    fn redundant_rows() {
        let mut lp = LpProblem::new(2);
        lp.add_row(vec![int(1), int(1)], int(2)).unwrap();
        lp.add_row(vec![int(2), int(2)], int(4)).unwrap();
        lp.add_row(vec![int(1), int(-1)], int(0)).unwrap();
        let x = lp_feasible(&lp).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
    }

    #[test]
    fn contradictory_rows() {
        let mut lp = LpProblem::new(2);
        lp.add_row(vec![int(1), int(1)], int(1)).unwrap();
        lp.add_row(vec![int(1), int(1)], int(2)).unwrap();
        assert_eq!(lp_feasible(&lp), None);
    }

    #[test]
    fn fractional_solution() {
        // 3x + 6y = 2, x - y = 0
        let mut lp = LpProblem::new(2);
        lp.add_row(vec![int(3), int(6)], int(2)).unwrap();
        lp.add_row(vec![int(1), int(-1)], int(0)).unwrap();
        assert_eq!(lp_feasible(&lp), Some(vec![rat(2, 9), rat(2, 9)]));
    }

    #[test]
    fn nonnegativity_binds() {
        // x - y = 3 with x + y = 1 forces y = -1
        let mut lp = LpProblem::new(2);
        lp.add_row(vec![int(1), int(-1)], int(3)).unwrap();
        lp.add_row(vec![int(1), int(1)], int(1)).unwrap();
        assert_eq!(lp_feasible(&lp), None);
    }

    #[test]
    fn row_width_is_checked() {
        let mut lp = LpProblem::new(2);
        assert!(lp.add_row(vec![int(1)], int(1)).is_err());
    }
}
