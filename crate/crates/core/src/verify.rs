//! Brute-force oracle: expected utility maximized over a grid on the budget
//! face, compared against the observed demand.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::UtilityFamily;
use crate::model::{Beliefs, Dataset, Observation};
use crate::rational::{self, Rational};

pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Edge refinement depth: points at budget share `2^-j` next to each vertex.
/// Deep enough to expose ascent at a corner, shallow enough that every point
/// stays distinguishable from the vertex in f64.
const REFINE_DEPTH: i32 = 40;

/// Per-dimension grid resolution used when none is given.
pub fn default_grid_points(states: usize) -> usize {
    match states {
        0..=2 => 10_000,
        3 => 300,
        4 => 40,
        _ => 12,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub bundle: Vec<f64>,
    /// Budget shares `p_ω·x_ω / wealth`.
    #[serde(skip)]
    pub shares: Vec<Rational>,
    pub expected_utility: f64,
}

/// Best point of the budget face `p·x = wealth` on a uniform simplex grid
/// with `grid_points` steps per dimension (rounded up to a power of two so
/// that refinements nest), plus geometric refinement along every edge near
/// each vertex. Convex families are evaluated at the vertices only.
pub fn grid_best(
    family: &UtilityFamily,
    beliefs: &Beliefs,
    prices: &[Rational],
    wealth: &Rational,
    grid_points: usize,
) -> Result<GridPoint> {
    let n = prices.len();
    beliefs.check_states(n)?;
    if grid_points < 2 {
        return Err(Error::Precondition("grid_points must be at least 2".into()));
    }
    if wealth.is_zero() {
        return Ok(GridPoint { bundle: vec![0.0; n], shares: vec![Rational::zero(); n], expected_utility: 0.0 });
    }
    let base: Vec<f64> = prices.iter().map(|p| rational::to_f64(&(wealth / p))).collect();
    if let Some(top) = family.monotone_range() {
        if let Some(x) = base.iter().find(|&&x| x > top) {
            return Err(Error::Domain(format!(
                "budget extreme {x} lies beyond the increasing range [0, {top}] of {family}"
            )));
        }
    }
    let pi = beliefs.as_f64();
    let mut best = Best::default();

    if family.is_convex() {
        for v in 0..n {
            let mut steps = vec![0u64; n];
            steps[v] = 1;
            best.offer_shares(&steps, 1, &base, &pi, family)?;
        }
        return Ok(best.finish(n));
    }

    let denom = grid_points.next_power_of_two() as u64;
    // u at every grid coordinate, per state.
    let table: Vec<Vec<f64>> = base
        .iter()
        .map(|&b| (0..=denom).map(|j| family.evaluate(b * (j as f64 / denom as f64))).collect())
        .collect::<Result<_>>()?;
    let mut steps = vec![0u64; n];
    compositions(denom, 0, &mut steps, &mut |s| {
        let eu: f64 = s.iter().enumerate().map(|(w, &j)| pi[w] * table[w][j as usize]).sum();
        best.offer(eu, || s.iter().zip(&base).map(|(&j, &b)| b * (j as f64 / denom as f64)).collect(), s, denom);
    });

    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for j in 1..=REFINE_DEPTH {
                let t = 0.5f64.powi(j);
                let mut bundle = vec![0.0; n];
                bundle[a] = base[a] * (1.0 - t);
                bundle[b] = base[b] * t;
                let eu = pi[a] * family.evaluate(bundle[a])? + pi[b] * family.evaluate(bundle[b])?;
                let mut shares = vec![Rational::zero(); n];
                let tq = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(j as u32));
                shares[a] = Rational::from_integer(1.into()) - &tq;
                shares[b] = tq;
                best.offer_exact(eu, bundle, shares);
            }
        }
    }
    Ok(best.finish(n))
}

#[derive(Default)]
struct Best {
    eu: f64,
    bundle: Option<Vec<f64>>,
    shares: Vec<Rational>,
}

impl Best {
    fn better(&self, eu: f64, bundle: &[f64]) -> bool {
        match &self.bundle {
            None => true,
            Some(b) => eu > self.eu || (eu == self.eu && bundle < b.as_slice()),
        }
    }

    fn offer(&mut self, eu: f64, bundle: impl FnOnce() -> Vec<f64>, steps: &[u64], denom: u64) {
        if self.bundle.is_some() && eu < self.eu {
            return;
        }
        let bundle = bundle();
        if self.better(eu, &bundle) {
            self.eu = eu;
            self.bundle = Some(bundle);
            self.shares = steps.iter().map(|&j| rational::ratio(j as i64, denom as i64)).collect();
        }
    }

    fn offer_exact(&mut self, eu: f64, bundle: Vec<f64>, shares: Vec<Rational>) {
        if self.better(eu, &bundle) {
            self.eu = eu;
            self.bundle = Some(bundle);
            self.shares = shares;
        }
    }

    fn offer_shares(
        &mut self,
        steps: &[u64],
        denom: u64,
        base: &[f64],
        pi: &[f64],
        family: &UtilityFamily,
    ) -> Result<()> {
        let bundle: Vec<f64> = steps.iter().zip(base).map(|(&j, &b)| b * (j as f64 / denom as f64)).collect();
        let eu = bundle.iter().zip(pi).map(|(&x, &p)| Ok(p * family.evaluate(x)?)).sum::<Result<f64>>()?;
        self.offer(eu, || bundle.clone(), steps, denom);
        Ok(())
    }

    fn finish(self, n: usize) -> GridPoint {
        GridPoint {
            bundle: self.bundle.unwrap_or_else(|| vec![0.0; n]),
            shares: self.shares,
            expected_utility: self.eu,
        }
    }
}

/// Every way to write `total` as an ordered sum of `steps.len()` nonnegative parts.
fn compositions(total: u64, at: usize, steps: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if at + 1 == steps.len() {
        steps[at] = total;
        f(steps);
        return;
    }
    for j in 0..=total {
        steps[at] = j;
        compositions(total - j, at + 1, steps, f);
    }
    steps[at] = 0;
}

pub fn expected_utility(family: &UtilityFamily, beliefs: &Beliefs, bundle: &[f64]) -> Result<f64> {
    beliefs.as_f64().iter().zip(bundle).map(|(p, &x)| Ok(p * family.evaluate(x)?)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservationVerdict {
    /// 1-based in JSON.
    pub observation: usize,
    pub observed_eu: f64,
    pub oracle_eu: f64,
    pub oracle_bundle: Vec<f64>,
    /// `observed_eu − oracle_eu`
    pub gap: f64,
    pub grid_ok: bool,
    /// Largest directional derivative of expected utility from the corner
    /// toward another budget vertex; concave families at corners only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corner_derivative: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_ok: Option<bool>,
}

impl ObservationVerdict {
    pub fn valid(&self) -> bool {
        self.grid_ok && self.derivative_ok.unwrap_or(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "beliefs_text")]
    pub beliefs: Beliefs,
    pub family: UtilityFamily,
    pub tolerance: f64,
    pub grid_points: usize,
    pub valid: bool,
    pub observations: Vec<ObservationVerdict>,
}

fn beliefs_text<S: serde::Serializer>(b: &Beliefs, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(b.probabilities().iter().map(rational::to_string))
}

impl Certificate {
    pub fn invalid_observations(&self) -> Vec<usize> {
        self.observations.iter().filter(|v| !v.valid()).map(|v| v.observation - 1).collect()
    }
}

/// Directional derivative at a corner toward each other vertex:
/// `π_s·u'(0) − π_c·u'(w)·p_s/p_c`, maximized over `s`.
fn corner_derivative(family: &UtilityFamily, beliefs: &Beliefs, obs: &Observation, corner: usize) -> f64 {
    let w = rational::to_f64(&obs.demand()[corner]);
    let at_zero = family.derivative(0.0);
    let at_w = family.derivative(w);
    let pi = beliefs.as_f64();
    (0..obs.num_states())
        .filter(|&s| s != corner)
        .map(|s| {
            let rate = rational::to_f64(&(&obs.prices()[s] / &obs.prices()[corner]));
            pi[s] * at_zero - pi[corner] * at_w * rate
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks every observation against the grid oracle; concave families at
/// corners must also have no ascent direction along the budget face.
pub fn verify_certificate(
    data: &Dataset,
    beliefs: &Beliefs,
    family: &UtilityFamily,
    tol: f64,
    grid_points: usize,
) -> Result<Certificate> {
    beliefs.check_states(data.num_states())?;
    family.validate()?;
    let mut observations = Vec::with_capacity(data.len());
    for (i, obs) in data.observations().iter().enumerate() {
        let demand: Vec<f64> = obs.demand().iter().map(rational::to_f64).collect();
        let observed_eu = expected_utility(family, beliefs, &demand)?;
        let best = grid_best(family, beliefs, obs.prices(), &obs.wealth(), grid_points)?;
        let gap = observed_eu - best.expected_utility;
        let (corner_derivative, derivative_ok) = match obs.corner_state() {
            Some(c) if !family.is_convex() => {
                let d = corner_derivative(family, beliefs, obs, c);
                let scale = family.derivative(rational::to_f64(&obs.demand()[c])).abs().max(f64::MIN_POSITIVE);
                (Some(d), Some(d <= 1e-12 * scale))
            }
            _ => (None, None),
        };
        observations.push(ObservationVerdict {
            observation: i + 1,
            observed_eu,
            oracle_eu: best.expected_utility,
            oracle_bundle: best.bundle,
            gap,
            grid_ok: gap >= -tol,
            corner_derivative,
            derivative_ok,
        });
    }
    let valid = observations.iter().all(ObservationVerdict::valid);
    Ok(Certificate { beliefs: beliefs.clone(), family: *family, tolerance: tol, grid_points, valid, observations })
}
