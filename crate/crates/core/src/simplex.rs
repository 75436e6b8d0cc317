//! Exact two-phase simplex over rationals with Bland's rule.
//!
//! Constraint data is rational. The objective may be any type that supports
//! rational linear combinations and an exact sign test, which lets the same
//! solver maximize sums of logarithms of rationals without rounding.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Values the simplex can carry in its objective row.
pub trait ObjectiveValue: Clone {
    fn zero_like(&self) -> Self;
    /// `self += k · other`
    fn add_scaled(&mut self, k: &Rational, other: &Self);
    fn sign(&self) -> Ordering;
}

impl ObjectiveValue for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn add_scaled(&mut self, k: &Rational, other: &Self) {
        *self += k * other;
    }

    fn sign(&self) -> Ordering {
        self.cmp(&Rational::zero())
    }
}

/// `Σ coeffs[i] · ln(bases[i])` over a shared list of positive rational bases.
#[derive(Clone, Debug)]
pub struct LogForm {
    pub coeffs: Vec<Rational>,
    pub bases: Arc<Vec<Rational>>,
}

impl LogForm {
    pub fn zero(bases: Arc<Vec<Rational>>) -> Self {
        Self { coeffs: vec![Rational::zero(); bases.len()], bases }
    }

    pub fn unit(bases: Arc<Vec<Rational>>, index: usize, coeff: Rational) -> Self {
        let mut f = Self::zero(bases);
        f.coeffs[index] = coeff;
        f
    }

    pub fn approx(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.bases.iter())
            .map(|(q, b)| rational::to_f64(q) * rational::ln_rational(b))
            .sum()
    }
}

impl ObjectiveValue for LogForm {
    fn zero_like(&self) -> Self {
        Self::zero(self.bases.clone())
    }

    fn add_scaled(&mut self, k: &Rational, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += k * b;
            }
        }
    }

    fn sign(&self) -> Ordering {
        rational::log_sum_sign(&self.coeffs, &self.bases)
    }
}

#[derive(Clone, Debug)]
pub enum LpOutcome<O> {
    Optimal { x: Vec<Rational>, value: O },
    Unbounded,
    Infeasible,
}

/// Maximizes `c · x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize<O: ObjectiveValue>(a: &[Vec<Rational>], b: &[Rational], c: &[O]) -> LpOutcome<O> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));
    assert!(n > 0, "maximize needs at least one variable");
    let zero = c[0].zero_like();

    // Tableau with artificial columns n..n+m; rhs kept separately.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        rows.push(r);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut tab = Tableau { rows, rhs, basis: (n..n + m).collect() };

    // Phase 1: maximize -Σ artificials.
    let mut reduced: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { tab.rows.iter().map(|r| r[j].clone()).sum() } else { Rational::zero() })
        .collect();
    let mut value: Rational = -tab.rhs.iter().cloned().sum::<Rational>();
    let allowed: Vec<bool> = vec![true; n + m];
    if tab.run(&mut reduced, &mut value, &allowed).is_err() {
        unreachable!("phase 1 is bounded");
    }
    if value.is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase 2 over original columns only.
    let allowed: Vec<bool> = (0..n + m).map(|j| j < n).collect();
    let mut reduced: Vec<O> = (0..n + m)
        .map(|j| {
            if j >= n {
                return zero.clone();
            }
            let mut r = c[j].clone();
            for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
                if !row[j].is_zero() {
                    r.add_scaled(&-&row[j], &c[bv]);
                }
            }
            r
        })
        .collect();
    let mut value = zero.clone();
    for (rhs, &bv) in tab.rhs.iter().zip(&tab.basis) {
        value.add_scaled(rhs, &c[bv]);
    }
    if tab.run(&mut reduced, &mut value, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (rhs, &bv) in tab.rhs.iter().zip(&tab.basis) {
        if bv < n {
            x[bv] = rhs.clone();
        }
    }
    LpOutcome::Optimal { x, value }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

struct Unbounded;

impl Tableau {
    fn run<O: ObjectiveValue>(
        &mut self,
        reduced: &mut [O],
        value: &mut O,
        allowed: &[bool],
    ) -> Result<(), Unbounded> {
        loop {
            let entering = (0..reduced.len())
                .find(|&j| allowed[j] && !self.basis.contains(&j) && reduced[j].sign() == Ordering::Greater);
            let Some(e) = entering else { return Ok(()) };

            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e].is_positive() {
                    let t = &self.rhs[i] / &row[e];
                    let better = match &leave {
                        None => true,
                        Some((li, lt)) => t < *lt || (t == *lt && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, t));
                    }
                }
            }
            let Some((p, _)) = leave else { return Err(Unbounded) };

            self.pivot(p, e);
            let re = reduced[e].clone();
            for (j, r) in reduced.iter_mut().enumerate() {
                let coef = &self.rows[p][j];
                if !coef.is_zero() {
                    r.add_scaled(&-coef, &re);
                }
            }
            value.add_scaled(&self.rhs[p], &re);
        }
    }

    fn pivot(&mut self, p: usize, e: usize) {
        let piv = self.rows[p][e].clone();
        if !piv.is_one() {
            for v in self.rows[p].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
            self.rhs[p] /= &piv;
        }
        let pivot_row = self.rows[p].clone();
        let pivot_rhs = self.rhs[p].clone();
        for i in 0..self.rows.len() {
            if i == p {
                continue;
            }
            let f = self.rows[i][e].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[p] = e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn solves_a_small_rational_lp() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = q(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let b = vec![int(4), int(6)];
        let c = vec![int(1), int(1), int(0), int(0)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(14, 5));
                assert_eq!(x[0], ratio(8, 5));
                assert_eq!(x[1], ratio(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = q(&[&[1, 1]]);
        assert!(matches!(maximize(&a, &[int(-1)], &[int(1), int(0)]), LpOutcome::Infeasible));
        let a = q(&[&[1, -1]]);
        assert!(matches!(maximize(&a, &[int(0)], &[int(1), int(0)]), LpOutcome::Unbounded));
    }

    #[test]
    fn handles_redundant_rows() {
        let a = q(&[&[1, 1], &[2, 2]]);
        match maximize(&a, &[int(1), int(2)], &[int(1), int(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_objective_is_exact() {
        // max x ln 3 + y ln(1/2) + z ln(2/3) with x + y + z = 1: picks x.
        let bases = Arc::new(vec![int(3), ratio(1, 2), ratio(2, 3)]);
        let c: Vec<LogForm> =
            (0..3).map(|i| LogForm::unit(bases.clone(), i, int(1))).collect();
        let a = q(&[&[1, 1, 1]]);
        match maximize(&a, &[int(1)], &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![int(1), int(0), int(0)]);
                assert_eq!(value.sign(), Ordering::Greater);
                assert!((value.approx() - 3f64.ln()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
