//! Floating-point LP cross-check for SARSEU over explicit demand pairs.
//!
//! Maximizes `Σ δ_j · ln(p_high / p_low)` over nonnegative pair weights with
//! balanced states and observations and `Σ δ = 1`. A positive optimum means
//! some balanced combination has price product above one.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::Serialize;

use crate::axioms::sarseu::DemandPair;
use crate::model::Dataset;
use crate::rational;

pub const EPSILON_LP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum LpVerdict {
    NoPositiveCombination,
    /// Integer pair weights, smallest positive weight scaled to 1.
    Found { weights: Vec<(DemandPair, u64)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOracleReport {
    pub verdict: LpVerdict,
    /// Optimal objective; 0 when there are no pairs or the LP is infeasible.
    pub optimum: f64,
    /// Set when `|optimum| ≤ EPSILON_LP`, where float rounding could flip the verdict.
    pub near_zero: bool,
}

impl LpOracleReport {
    pub fn found(&self) -> bool {
        matches!(self.verdict, LpVerdict::Found { .. })
    }
}

#[derive(Serialize)]
struct WeightJson {
    pair: [usize; 4],
    weight: u64,
}

impl LpOracleReport {
    pub fn to_json(&self) -> serde_json::Value {
        match &self.verdict {
            LpVerdict::NoPositiveCombination => serde_json::json!({
                "found": false,
                "optimum": self.optimum,
                "near_zero": self.near_zero,
            }),
            LpVerdict::Found { weights } => serde_json::json!({
                "found": true,
                "optimum": self.optimum,
                "near_zero": self.near_zero,
                "weights": weights
                    .iter()
                    .map(|(p, w)| WeightJson { pair: p.one_based(), weight: *w })
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

pub fn sarseu_lp_oracle(data: &Dataset) -> LpOracleReport {
    let n = data.num_states();
    let k = data.len();
    let obs = data.observations();
    let mut pairs = Vec::new();
    for (a, oa) in obs.iter().enumerate() {
        for (b, ob) in obs.iter().enumerate() {
            for w in 0..n {
                for w2 in 0..n {
                    if oa.demand()[w] > ob.demand()[w2] {
                        pairs.push(DemandPair::new(a, w, b, w2));
                    }
                }
            }
        }
    }
    let none = LpOracleReport { verdict: LpVerdict::NoPositiveCombination, optimum: 0.0, near_zero: false };
    if pairs.is_empty() {
        return none;
    }

    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = pairs
        .iter()
        .map(|p| problem.add_var(rational::ln_rational(&p.price_ratio(data)), (0.0, f64::INFINITY)))
        .collect();

    let mut add_balance = |key: &dyn Fn(&DemandPair) -> (usize, usize), size: usize| {
        for target in 0..size {
            let terms: Vec<_> = pairs
                .iter()
                .zip(&vars)
                .filter_map(|(p, &v)| {
                    let (hi, lo) = key(p);
                    let c = (hi == target) as i32 - (lo == target) as i32;
                    (c != 0).then_some((v, c as f64))
                })
                .collect();
            if !terms.is_empty() {
                problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, 0.0);
            }
        }
    };
    add_balance(&|p| (p.high_state, p.low_state), n);
    add_balance(&|p| (p.high_obs, p.low_obs), k);
    let total: Vec<_> = vars.iter().map(|&v| (v, 1.0)).collect();
    problem.add_constraint(total.as_slice(), ComparisonOp::Eq, 1.0);

    let solution = match problem.solve() {
        Ok(s) => s,
        Err(_) => return none,
    };
    let optimum = solution.objective();
    let near_zero = optimum.abs() <= EPSILON_LP;
    if optimum <= EPSILON_LP {
        return LpOracleReport { near_zero, optimum, ..none };
    }

    let values: Vec<f64> = vars.iter().map(|&v| *solution.var_value(v)).collect();
    let smallest = values.iter().copied().filter(|&x| x > EPSILON_LP).fold(f64::INFINITY, f64::min);
    let weights = pairs
        .iter()
        .zip(&values)
        .filter(|(_, &x)| x > EPSILON_LP)
        .map(|(p, &x)| (*p, (x / smallest).round().max(1.0) as u64))
        .collect();
    LpOracleReport { verdict: LpVerdict::Found { weights }, optimum, near_zero }
}
