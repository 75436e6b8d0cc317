//! Full-support beliefs compatible with corner demands, and the deviation
//! test behind the finite-marginal-utility requirement.
//!
//! A corner at state `c` with prices `p` is compatible with `π` when
//! `π_c·p_s − π_s·p_c > 0` for every other state `s` (or `≥ 0` in weak mode).

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{InadaLimit, UtilityFamily};
use crate::model::{Beliefs, Dataset, Observation};
use crate::rational::{self, Rational};
use crate::simplex::{self, LpOutcome};

/// Above this many candidate vertices the exact simplex is used instead of
/// vertex enumeration.
const VERTEX_LIMIT: u64 = 50_000;

/// `π_c·p_s − π_s·p_c (>|≥) 0` for one observation and alternative state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BeliefConstraint {
    pub observation: usize,
    pub corner_state: usize,
    pub state: usize,
}

impl BeliefConstraint {
    fn coefficients(&self, data: &Dataset) -> Vec<Rational> {
        let p = data.observations()[self.observation].prices();
        let mut a = vec![Rational::zero(); data.num_states()];
        a[self.corner_state] = p[self.state].clone();
        a[self.state] = -p[self.corner_state].clone();
        a
    }

    /// `p_c / p_s`, the lower limit on `π_c / π_s`.
    pub fn price_ratio(&self, data: &Dataset) -> Rational {
        let p = data.observations()[self.observation].prices();
        &p[self.corner_state] / &p[self.state]
    }

    pub fn describe(&self, data: &Dataset) -> String {
        format!(
            "observation {}: pi{}/pi{} > {}",
            self.observation + 1,
            self.corner_state + 1,
            self.state + 1,
            self.price_ratio(data)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackEntry {
    /// 1-based in JSON, 0-based in the API.
    #[serde(serialize_with = "one_based")]
    pub observation: usize,
    #[serde(serialize_with = "one_based")]
    pub state: usize,
    #[serde(serialize_with = "rational_text")]
    pub slack: Rational,
    pub ok: bool,
}

fn one_based<S: serde::Serializer>(v: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

fn rational_text<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_string(q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibilityReport {
    pub strict: bool,
    pub entries: Vec<SlackEntry>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SlackEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    /// 0-based indices of observations with at least one failing slack.
    pub fn failing_observations(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.failures().map(|e| e.observation).collect();
        v.dedup();
        v
    }

    pub fn min_slack(&self) -> Option<&Rational> {
        self.entries.iter().map(|e| &e.slack).min()
    }
}

fn constraints(data: &Dataset) -> Result<Vec<BeliefConstraint>> {
    let corners = data.corner_states()?;
    let n = data.num_states();
    Ok(corners
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| {
            (0..n).filter(move |&s| s != c).map(move |s| BeliefConstraint { observation: i, corner_state: c, state: s })
        })
        .collect())
}

fn slack(c: &BeliefConstraint, data: &Dataset, pi: &[Rational]) -> Rational {
    c.coefficients(data).iter().zip(pi).map(|(a, p)| a * p).sum()
}

/// Exact slack for every observation and alternative state.
pub fn check_belief_compatibility(data: &Dataset, beliefs: &Beliefs, strict: bool) -> Result<CompatibilityReport> {
    beliefs.check_states(data.num_states())?;
    let entries = constraints(data)?
        .iter()
        .map(|c| {
            let s = slack(c, data, beliefs.probabilities());
            let ok = if strict { s.is_positive() } else { !s.is_negative() };
            SlackEntry { observation: c.observation, state: c.state, slack: s, ok }
        })
        .collect();
    Ok(CompatibilityReport { strict, entries })
}

#[derive(Clone, Debug, PartialEq)]
pub enum BeliefSearch {
    Feasible { beliefs: Beliefs, min_slack: Rational },
    /// An irreducible set of constraints with no common full-support
    /// solution; a pair whenever there are two states.
    Infeasible { witness: Vec<BeliefConstraint> },
}

impl BeliefSearch {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BeliefSearch::Feasible { .. })
    }

    pub fn to_json(&self, data: &Dataset) -> serde_json::Value {
        match self {
            BeliefSearch::Feasible { beliefs, min_slack } => serde_json::json!({
                "pi": beliefs.probabilities().iter().map(rational::to_string).collect::<Vec<_>>(),
                "min_slack": rational::to_string(min_slack),
            }),
            BeliefSearch::Infeasible { witness } => serde_json::json!({
                "infeasible": true,
                "witness": witness.iter().map(|c| serde_json::json!({
                    "observation": c.observation + 1,
                    "corner_state": c.corner_state + 1,
                    "state": c.state + 1,
                    "requires": c.describe(data),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Strict mode: maximizes the smallest of all slacks and probabilities.
pub fn find_beliefs(data: &Dataset) -> Result<BeliefSearch> {
    find_beliefs_with(data, true)
}

/// `strict = false` requires only nonnegative slacks while keeping full
/// support.
pub fn find_beliefs_with(data: &Dataset, strict: bool) -> Result<BeliefSearch> {
    let all = constraints(data)?;
    let n = data.num_states();
    let rows: Vec<Vec<Rational>> = all.iter().map(|c| c.coefficients(data)).collect();
    if let Some((pi, _)) = best_beliefs(&rows, n, strict) {
        let min_slack = rows
            .iter()
            .map(|a| a.iter().zip(&pi).map(|(x, y)| x * y).sum::<Rational>())
            .min()
            .unwrap_or_else(Rational::zero);
        return Ok(BeliefSearch::Feasible { beliefs: Beliefs::new(pi)?, min_slack });
    }

    // Deletion filter: drop every constraint whose removal keeps the rest infeasible.
    let mut keep: Vec<usize> = (0..all.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<Vec<Rational>> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &k)| rows[k].clone()).collect();
        if best_beliefs(&trial, n, strict).is_none() {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(BeliefSearch::Infeasible { witness: keep.into_iter().map(|k| all[k]).collect() })
}

/// Maximizes `t` subject to `a·π ≥ t` (strict) or `a·π ≥ 0` (weak),
/// `π ≥ t`, `Σπ = 1`. Returns `(π, t)` when `t > 0`.
fn best_beliefs(rows: &[Vec<Rational>], n: usize, strict: bool) -> Option<(Vec<Rational>, Rational)> {
    let m = rows.len() + n;
    let (pi, t) = if n <= 4 && binomial(m as u64, n as u64) <= VERTEX_LIMIT {
        by_vertices(rows, n, strict)?
    } else {
        by_simplex(rows, n, strict)?
    };
    t.is_positive().then_some((pi, t))
}

fn binomial(m: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(m - i) / (i + 1))
}

/// Inequalities as rows over `(π, t)`: `row · z ≥ 0`.
fn inequality_rows(rows: &[Vec<Rational>], n: usize, strict: bool) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(rows.len() + n);
    for a in rows {
        let mut r = a.clone();
        r.push(if strict { -Rational::one() } else { Rational::zero() });
        out.push(r);
    }
    for s in 0..n {
        let mut r = vec![Rational::zero(); n + 1];
        r[s] = Rational::one();
        r[n] = -Rational::one();
        out.push(r);
    }
    out
}

fn by_vertices(rows: &[Vec<Rational>], n: usize, strict: bool) -> Option<(Vec<Rational>, Rational)> {
    let ineq = inequality_rows(rows, n, strict);
    let mut sum_row = vec![Rational::one(); n];
    sum_row.push(Rational::zero());
    let mut best: Option<(Vec<Rational>, Rational)> = None;
    let mut chosen = Vec::with_capacity(n);
    subsets(ineq.len(), n, 0, &mut chosen, &mut |subset| {
        let mut a: Vec<Vec<Rational>> = subset.iter().map(|&j| ineq[j].clone()).collect();
        let mut b = vec![Rational::zero(); n];
        a.push(sum_row.clone());
        b.push(Rational::one());
        let Some(z) = solve_square(a, b) else { return };
        let feasible = ineq.iter().all(|r| !r.iter().zip(&z).map(|(x, y)| x * y).sum::<Rational>().is_negative());
        if !feasible {
            return;
        }
        let t = z[n].clone();
        let pi = z[..n].to_vec();
        let better = match &best {
            None => true,
            Some((bp, bt)) => t > *bt || (t == *bt && pi < *bp),
        };
        if better {
            best = Some((pi, t));
        }
    });
    best
}

fn subsets(m: usize, k: usize, from: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for j in from..m {
        if m - j < k - chosen.len() {
            break;
        }
        chosen.push(j);
        subsets(m, k, j + 1, chosen, f);
        chosen.pop();
    }
}

/// Gaussian elimination; `None` for a singular system.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn by_simplex(rows: &[Vec<Rational>], n: usize, strict: bool) -> Option<(Vec<Rational>, Rational)> {
    // Variables: π (n), t⁺, t⁻, one surplus per inequality.
    let ineq = inequality_rows(rows, n, strict);
    let nvars = n + 2 + ineq.len();
    let mut a = Vec::with_capacity(ineq.len() + 1);
    let mut b = Vec::with_capacity(ineq.len() + 1);
    for (j, r) in ineq.iter().enumerate() {
        let mut row = vec![Rational::zero(); nvars];
        row[..n].clone_from_slice(&r[..n]);
        row[n] = r[n].clone();
        row[n + 1] = -r[n].clone();
        row[n + 2 + j] = -Rational::one();
        a.push(row);
        b.push(Rational::zero());
    }
    let mut sum = vec![Rational::zero(); nvars];
    for v in sum.iter_mut().take(n) {
        *v = Rational::one();
    }
    a.push(sum);
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); nvars];
    c[n] = Rational::one();
    c[n + 1] = -Rational::one();
    match simplex::maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, value } => Some((x[..n].to_vec(), value)),
        _ => None,
    }
}

/// Right limit of marginal utility at zero.
pub fn inada_limit(family: &UtilityFamily) -> InadaLimit {
    family.inada_limit()
}

/// For each `ε`, whether the corner bundle is at least as good as moving
/// `ε` units into `deviation_state` at the budget's exchange rate.
pub fn corner_deviation_test(
    family: &UtilityFamily,
    beliefs: &Beliefs,
    obs: &Observation,
    deviation_state: usize,
    epsilons: &[f64],
) -> Result<Vec<bool>> {
    beliefs.check_states(obs.num_states())?;
    let c = obs
        .corner_state()
        .ok_or_else(|| Error::Precondition("deviation test needs a corner demand".into()))?;
    if deviation_state >= obs.num_states() || deviation_state == c {
        return Err(Error::Precondition(format!(
            "deviation state {} must be a state other than the corner {}",
            deviation_state + 1,
            c + 1
        )));
    }
    let w = rational::to_f64(&obs.demand()[c]);
    let rate = rational::to_f64(&(&obs.prices()[deviation_state] / &obs.prices()[c]));
    let pi_c = rational::to_f64(beliefs.get(c));
    let pi_d = rational::to_f64(beliefs.get(deviation_state));
    epsilons
        .iter()
        .map(|&eps| {
            let spent = rate * eps;
            if !(eps >= 0.0) || spent > w * (1.0 + 1e-12) {
                return Err(Error::Precondition(format!("deviation ε = {eps} leaves the budget set")));
            }
            // Utility lost in the corner state against utility gained in the other.
            let loss = pi_c * family.decrement(w, spent.min(w))?;
            let gain = pi_d * family.evaluate(eps)?;
            Ok(gain <= loss * (1.0 + 1e-12))
        })
        .collect()
}

/// First `ε = w·2^{-j}` (j = 1, 2, …, 1000) at which the deviation test fails.
pub fn find_violating_epsilon(
    family: &UtilityFamily,
    beliefs: &Beliefs,
    obs: &Observation,
    deviation_state: usize,
) -> Result<Option<f64>> {
    let c = obs
        .corner_state()
        .ok_or_else(|| Error::Precondition("deviation test needs a corner demand".into()))?;
    let w = rational::to_f64(&obs.demand()[c]);
    let rate = rational::to_f64(&(&obs.prices()[deviation_state] / &obs.prices()[c]));
    let top = w / rate.max(1.0);
    let grid: Vec<f64> = (1..=1000).map(|j| top * 0.5f64.powi(j)).take_while(|e| *e > 0.0).collect();
    let verdicts = corner_deviation_test(family, beliefs, obs, deviation_state, &grid)?;
    Ok(grid.into_iter().zip(verdicts).find(|(_, ok)| !ok).map(|(e, _)| e))
}

impl fmt::Display for BeliefConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.observation + 1, self.corner_state + 1, self.state + 1)
    }
}
