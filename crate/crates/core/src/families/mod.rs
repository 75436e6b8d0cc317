//! Parametric utility families, their marginal utilities, the domain
//! scaling operator and the corner first-order (MRS) condition.

pub mod region;
pub mod symbolic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Beliefs, Observation};
use crate::rational;

pub use region::{
    all_family_report, corner_ratios, solve_region, Binding, Bound, CornerRatio, FixedParameter, ParameterRegion,
    RegionShape,
};

/// Relative slack allowed before the MRS condition counts as violated.
pub const MRS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    ShiftedPower,
    Cara,
    Quadratic,
    Hyperbolic,
    Linear,
    ConvexQuadratic,
    Crra,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::ShiftedPower,
        FamilyTag::Cara,
        FamilyTag::Quadratic,
        FamilyTag::Hyperbolic,
        FamilyTag::Linear,
        FamilyTag::ConvexQuadratic,
        FamilyTag::Crra,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::ShiftedPower => "shifted_power",
            FamilyTag::Cara => "cara",
            FamilyTag::Quadratic => "quadratic",
            FamilyTag::Hyperbolic => "hyperbolic",
            FamilyTag::Linear => "linear",
            FamilyTag::ConvexQuadratic => "convex_quadratic",
            FamilyTag::Crra => "crra",
        }
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            FamilyTag::ShiftedPower => &["alpha", "c"],
            FamilyTag::Cara => &["beta"],
            FamilyTag::Quadratic => &["theta", "lambda"],
            FamilyTag::Hyperbolic => &["gamma"],
            FamilyTag::Linear => &[],
            FamilyTag::ConvexQuadratic => &["epsilon"],
            FamilyTag::Crra => &["alpha"],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str() == norm)
            .ok_or_else(|| Error::Usage(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UtilityFamily {
    /// `(x+c)^α`
    ShiftedPower { alpha: f64, c: f64 },
    /// `1 − e^{−βx}`
    Cara { beta: f64 },
    /// `θx − λx²`, increasing on `[0, θ/(2λ)]`
    Quadratic { theta: f64, lambda: f64 },
    /// `x/(1+γx)`
    Hyperbolic { gamma: f64 },
    Linear,
    /// `x + εx²`
    ConvexQuadratic { epsilon: f64 },
    /// `x^α`
    Crra { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InadaLimit {
    Finite { value: f64 },
    Infinite,
}

impl UtilityFamily {
    /// Builds a family and checks its parameter domain.
    pub fn new(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            UtilityFamily::ShiftedPower { .. } => FamilyTag::ShiftedPower,
            UtilityFamily::Cara { .. } => FamilyTag::Cara,
            UtilityFamily::Quadratic { .. } => FamilyTag::Quadratic,
            UtilityFamily::Hyperbolic { .. } => FamilyTag::Hyperbolic,
            UtilityFamily::Linear => FamilyTag::Linear,
            UtilityFamily::ConvexQuadratic { .. } => FamilyTag::ConvexQuadratic,
            UtilityFamily::Crra { .. } => FamilyTag::Crra,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{} requires {name} > 0, got {v}", self.tag())))
            }
        };
        let unit = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{} requires {name} in (0,1), got {v}", self.tag())))
            }
        };
        match *self {
            UtilityFamily::ShiftedPower { alpha, c } => {
                unit("alpha", alpha)?;
                positive("c", c)
            }
            UtilityFamily::Cara { beta } => positive("beta", beta),
            UtilityFamily::Quadratic { theta, lambda } => {
                positive("theta", theta)?;
                positive("lambda", lambda)
            }
            UtilityFamily::Hyperbolic { gamma } => positive("gamma", gamma),
            UtilityFamily::Linear => Ok(()),
            UtilityFamily::ConvexQuadratic { epsilon } => positive("epsilon", epsilon),
            UtilityFamily::Crra { alpha } => unit("alpha", alpha),
        }
    }

    /// Parses `name=value` assignments such as `alpha=0.95,c=1`. Missing
    /// ShiftedPower `c` defaults to 1.
    pub fn from_params(tag: FamilyTag, params: &str) -> Result<Self> {
        let mut values: Vec<(String, f64)> = Vec::new();
        for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("expected name=value, got {part:?}")))?;
            let name = name.trim().to_ascii_lowercase();
            if !tag.parameter_names().contains(&name.as_str()) {
                return Err(Error::Usage(format!("{tag} has no parameter {name:?}")));
            }
            let value = rational::to_f64(&rational::parse_rational(value)?);
            values.push((name, value));
        }
        let get = |name: &str| values.iter().rev().find(|(n, _)| n == name).map(|(_, v)| *v);
        let need = |name: &str| get(name).ok_or_else(|| Error::Usage(format!("{tag} needs {name}=...")));
        let family = match tag {
            FamilyTag::ShiftedPower => UtilityFamily::ShiftedPower { alpha: need("alpha")?, c: get("c").unwrap_or(1.0) },
            FamilyTag::Cara => UtilityFamily::Cara { beta: need("beta")? },
            FamilyTag::Quadratic => UtilityFamily::Quadratic { theta: need("theta")?, lambda: need("lambda")? },
            FamilyTag::Hyperbolic => UtilityFamily::Hyperbolic { gamma: need("gamma")? },
            FamilyTag::Linear => UtilityFamily::Linear,
            FamilyTag::ConvexQuadratic => UtilityFamily::ConvexQuadratic { epsilon: need("epsilon")? },
            FamilyTag::Crra => UtilityFamily::Crra { alpha: need("alpha")? },
        };
        family.new()
    }

    /// `name=value` pairs in declaration order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            UtilityFamily::ShiftedPower { alpha, c } => vec![("alpha", alpha), ("c", c)],
            UtilityFamily::Cara { beta } => vec![("beta", beta)],
            UtilityFamily::Quadratic { theta, lambda } => vec![("theta", theta), ("lambda", lambda)],
            UtilityFamily::Hyperbolic { gamma } => vec![("gamma", gamma)],
            UtilityFamily::Linear => vec![],
            UtilityFamily::ConvexQuadratic { epsilon } => vec![("epsilon", epsilon)],
            UtilityFamily::Crra { alpha } => vec![("alpha", alpha)],
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, UtilityFamily::ConvexQuadratic { .. })
    }

    /// Upper end of the range on which the family is increasing, if finite.
    pub fn monotone_range(&self) -> Option<f64> {
        match *self {
            UtilityFamily::Quadratic { theta, lambda } => Some(theta / (2.0 * lambda)),
            _ => None,
        }
    }

    /// `u(x)` normalized so that `u(0) = 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("utility evaluated at negative or NaN x = {x}")));
        }
        Ok(match *self {
            UtilityFamily::ShiftedPower { alpha, c } => (x + c).powf(alpha) - c.powf(alpha),
            UtilityFamily::Cara { beta } => -(-beta * x).exp_m1(),
            UtilityFamily::Quadratic { theta, lambda } => theta * x - lambda * x * x,
            UtilityFamily::Hyperbolic { gamma } => x / (1.0 + gamma * x),
            UtilityFamily::Linear => x,
            UtilityFamily::ConvexQuadratic { epsilon } => x + epsilon * x * x,
            UtilityFamily::Crra { alpha } => x.powf(alpha),
        })
    }

    /// `u(x) − u(x − d)` for `0 ≤ d ≤ x`, without cancellation for tiny `d`.
    pub fn decrement(&self, x: f64, d: f64) -> Result<f64> {
        if !(d >= 0.0 && d <= x) {
            return Err(Error::Domain(format!("decrement {d} outside [0, {x}]")));
        }
        let y = x - d;
        Ok(match *self {
            UtilityFamily::ShiftedPower { alpha, c } => -(x + c).powf(alpha) * (alpha * (-d / (x + c)).ln_1p()).exp_m1(),
            UtilityFamily::Cara { beta } => (-beta * x).exp() * (beta * d).exp_m1(),
            UtilityFamily::Quadratic { theta, lambda } => theta * d - lambda * d * (x + y),
            UtilityFamily::Hyperbolic { gamma } => d / ((1.0 + gamma * x) * (1.0 + gamma * y)),
            UtilityFamily::Linear => d,
            UtilityFamily::ConvexQuadratic { epsilon } => d + epsilon * d * (x + y),
            UtilityFamily::Crra { alpha } if x > 0.0 => -x.powf(alpha) * (alpha * (-d / x).ln_1p()).exp_m1(),
            UtilityFamily::Crra { .. } => 0.0,
        })
    }

    /// Like `evaluate`, but rejects Quadratic arguments past the monotone range.
    pub fn evaluate_for_optimization(&self, x: f64) -> Result<f64> {
        if let Some(top) = self.monotone_range() {
            if x > top * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "{} is decreasing beyond x = {top}, got x = {x}",
                    self.tag()
                )));
            }
        }
        self.evaluate(x)
    }

    /// `u'(x)`; infinite for CRRA at zero.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            UtilityFamily::ShiftedPower { alpha, c } => alpha * (x + c).powf(alpha - 1.0),
            UtilityFamily::Cara { beta } => beta * (-beta * x).exp(),
            UtilityFamily::Quadratic { theta, lambda } => theta - 2.0 * lambda * x,
            UtilityFamily::Hyperbolic { gamma } => 1.0 / ((1.0 + gamma * x) * (1.0 + gamma * x)),
            UtilityFamily::Linear => 1.0,
            UtilityFamily::ConvexQuadratic { epsilon } => 1.0 + 2.0 * epsilon * x,
            UtilityFamily::Crra { alpha } => {
                if x == 0.0 {
                    f64::INFINITY
                } else {
                    alpha * x.powf(alpha - 1.0)
                }
            }
        }
    }

    /// Right limit of `u'` at zero.
    pub fn inada_limit(&self) -> InadaLimit {
        match *self {
            UtilityFamily::Crra { .. } => InadaLimit::Infinite,
            UtilityFamily::ShiftedPower { alpha, c } => InadaLimit::Finite { value: alpha * c.powf(alpha - 1.0) },
            UtilityFamily::Cara { beta } => InadaLimit::Finite { value: beta },
            UtilityFamily::Quadratic { theta, .. } => InadaLimit::Finite { value: theta },
            UtilityFamily::Hyperbolic { .. } | UtilityFamily::Linear | UtilityFamily::ConvexQuadratic { .. } => {
                InadaLimit::Finite { value: 1.0 }
            }
        }
    }

    /// `u'(x) / u'(0)`.
    pub fn marginal_ratio(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("marginal ratio at negative or NaN x = {x}")));
        }
        Ok(match *self {
            UtilityFamily::ShiftedPower { alpha, c } => ((x + c) / c).powf(alpha - 1.0),
            UtilityFamily::Cara { beta } => (-beta * x).exp(),
            UtilityFamily::Quadratic { theta, lambda } => 1.0 - 2.0 * (lambda / theta) * x,
            UtilityFamily::Hyperbolic { gamma } => 1.0 / ((1.0 + gamma * x) * (1.0 + gamma * x)),
            UtilityFamily::Linear => 1.0,
            UtilityFamily::ConvexQuadratic { epsilon } => 1.0 + 2.0 * epsilon * x,
            UtilityFamily::Crra { .. } => {
                return Err(Error::Domain("crra has infinite marginal utility at zero".into()))
            }
        })
    }

    /// `v_κ(x) = v(κx)` expressed by a parameter change, up to a positive
    /// affine transformation.
    pub fn scale(&self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::Domain(format!("scale factor must lie in (0,1], got {kappa}")));
        }
        Ok(match *self {
            UtilityFamily::ShiftedPower { alpha, c } => UtilityFamily::ShiftedPower { alpha, c: c / kappa },
            UtilityFamily::Cara { beta } => UtilityFamily::Cara { beta: kappa * beta },
            UtilityFamily::Quadratic { theta, lambda } => UtilityFamily::Quadratic { theta, lambda: kappa * lambda },
            UtilityFamily::Hyperbolic { gamma } => UtilityFamily::Hyperbolic { gamma: kappa * gamma },
            UtilityFamily::ConvexQuadratic { epsilon } => UtilityFamily::ConvexQuadratic { epsilon: kappa * epsilon },
            UtilityFamily::Linear | UtilityFamily::Crra { .. } => *self,
        })
    }

    /// Smallest `x ≥ 0` with `u'(x) ≤ m`, for concave families and `m > 0`.
    pub(crate) fn inverse_marginal(&self, m: f64) -> f64 {
        let x = match *self {
            UtilityFamily::ShiftedPower { alpha, c } => (m / alpha).powf(1.0 / (alpha - 1.0)) - c,
            UtilityFamily::Cara { beta } => -(m / beta).ln() / beta,
            UtilityFamily::Quadratic { theta, lambda } => (theta - m) / (2.0 * lambda),
            UtilityFamily::Hyperbolic { gamma } => (1.0 / m.sqrt() - 1.0) / gamma,
            UtilityFamily::Crra { alpha } => (m / alpha).powf(1.0 / (alpha - 1.0)),
            UtilityFamily::Linear | UtilityFamily::ConvexQuadratic { .. } => {
                unreachable!("inverse marginal utility needs a strictly concave family")
            }
        };
        x.max(0.0)
    }

    /// `u⁻¹(y)` for the normalized utility, `None` outside the range.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        if y < 0.0 {
            return None;
        }
        let x = match *self {
            UtilityFamily::ShiftedPower { alpha, c } => (y + c.powf(alpha)).powf(1.0 / alpha) - c,
            UtilityFamily::Cara { beta } => {
                if y >= 1.0 {
                    return None;
                }
                -(-y).ln_1p() / beta
            }
            UtilityFamily::Quadratic { theta, lambda } => {
                let disc = theta * theta - 4.0 * lambda * y;
                if disc < 0.0 {
                    return None;
                }
                2.0 * y / (theta + disc.sqrt())
            }
            UtilityFamily::Hyperbolic { gamma } => {
                if gamma * y >= 1.0 {
                    return None;
                }
                y / (1.0 - gamma * y)
            }
            UtilityFamily::Linear => y,
            UtilityFamily::ConvexQuadratic { epsilon } => 2.0 * y / (1.0 + (1.0 + 4.0 * epsilon * y).sqrt()),
            UtilityFamily::Crra { alpha } => y.powf(1.0 / alpha),
        };
        Some(x.max(0.0))
    }
}

impl fmt::Display for UtilityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())?;
        let params = self.params();
        if !params.is_empty() {
            let text: Vec<String> = params.iter().map(|(n, v)| format!("{n}={v}")).collect();
            write!(f, "({})", text.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateMargin {
    /// 0-based state index.
    pub state: usize,
    /// `(π_corner/π_state)·u'(w)/u'(0) − p_corner/p_state`
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MrsReport {
    pub corner_state: usize,
    pub margins: Vec<StateMargin>,
}

impl MrsReport {
    pub fn holds(&self) -> bool {
        self.margins.iter().all(|m| m.holds)
    }

    /// First violated state and its margin.
    pub fn violation(&self) -> Option<&StateMargin> {
        self.margins.iter().find(|m| !m.holds)
    }
}

/// Corner first-order condition against every alternative state.
pub fn mrs_condition(family: &UtilityFamily, beliefs: &Beliefs, obs: &Observation) -> Result<MrsReport> {
    beliefs.check_states(obs.num_states())?;
    let corner = obs
        .corner_state()
        .ok_or_else(|| Error::Precondition("mrs condition needs a corner demand".into()))?;
    let w = rational::to_f64(&obs.demand()[corner]);
    let ratio = family.marginal_ratio(w)?;
    let pi = beliefs.as_f64();
    let prices = obs.prices();
    let margins = (0..obs.num_states())
        .filter(|&s| s != corner)
        .map(|s| {
            let lhs = pi[corner] / pi[s] * ratio;
            let rhs = rational::to_f64(&(&prices[corner] / &prices[s]));
            let margin = lhs - rhs;
            StateMargin { state: s, margin, holds: margin >= -MRS_TOLERANCE * rhs }
        })
        .collect();
    Ok(MrsReport { corner_state: corner, margins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn obs(p: [i64; 2], x: [i64; 2]) -> Observation {
        Observation::new(p.iter().map(|&v| int(v)).collect(), x.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn pi() -> Beliefs {
        Beliefs::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(UtilityFamily::Cara { beta: 1.0 }.evaluate(0.0).unwrap(), 0.0);
        assert_eq!(UtilityFamily::Hyperbolic { gamma: 1.0 }.evaluate(1.0).unwrap(), 0.5);
        let q = UtilityFamily::Quadratic { theta: 1.0, lambda: 1.0 / 800.0 };
        assert!((q.evaluate(100.0).unwrap() - 87.5).abs() < 1e-12);
        assert!(q.evaluate(-1.0).is_err());
        assert!(q.evaluate_for_optimization(401.0).is_err());
        assert!(q.evaluate(401.0).is_ok());
    }

    #[test]
    fn normalized_at_zero() {
        for f in [
            UtilityFamily::ShiftedPower { alpha: 0.5, c: 2.0 },
            UtilityFamily::Cara { beta: 0.3 },
            UtilityFamily::Quadratic { theta: 2.0, lambda: 0.1 },
            UtilityFamily::Hyperbolic { gamma: 0.7 },
            UtilityFamily::Linear,
            UtilityFamily::ConvexQuadratic { epsilon: 0.2 },
            UtilityFamily::Crra { alpha: 0.5 },
        ] {
            assert_eq!(f.evaluate(0.0).unwrap(), 0.0, "{f}");
            if f.tag() != FamilyTag::Crra {
                assert_eq!(f.marginal_ratio(0.0).unwrap(), 1.0, "{f}");
            }
        }
    }

    #[test]
    fn marginal_ratio_examples() {
        let sp = UtilityFamily::ShiftedPower { alpha: 0.95, c: 1.0 };
        assert!((sp.marginal_ratio(100.0).unwrap() - 101f64.powf(-0.05)).abs() < 1e-15);
        let h = UtilityFamily::Hyperbolic { gamma: 0.001 };
        assert!((h.marginal_ratio(100.0).unwrap() - 1.0 / 1.1f64.powi(2)).abs() < 1e-15);
        assert!(UtilityFamily::Crra { alpha: 0.5 }.marginal_ratio(1.0).is_err());
    }

    #[test]
    fn inada_limits() {
        assert_eq!(UtilityFamily::Crra { alpha: 0.5 }.inada_limit(), InadaLimit::Infinite);
        assert_eq!(UtilityFamily::Cara { beta: 0.2 }.inada_limit(), InadaLimit::Finite { value: 0.2 });
        let sp = UtilityFamily::ShiftedPower { alpha: 0.7, c: 1.0 };
        let InadaLimit::Finite { value } = sp.inada_limit() else { panic!() };
        assert!((value - 0.7).abs() < 1e-15);
        let h = 1e-7;
        let fd = (sp.evaluate(h).unwrap() - sp.evaluate(0.0).unwrap()) / h;
        assert!((fd - value).abs() < 1e-6);
    }

    #[test]
    fn scaling() {
        assert_eq!(UtilityFamily::Cara { beta: 0.01 }.scale(0.5).unwrap(), UtilityFamily::Cara { beta: 0.005 });
        let h = UtilityFamily::Hyperbolic { gamma: 0.003 }.scale(1.0 / 3.0).unwrap();
        let UtilityFamily::Hyperbolic { gamma } = h else { panic!() };
        assert!((gamma - 0.001).abs() < 1e-18);
        let sp = UtilityFamily::ShiftedPower { alpha: 0.5, c: 1.0 };
        assert_eq!(sp.scale(1.0).unwrap(), sp);
        assert!(sp.scale(0.0).is_err());
        assert!(sp.scale(1.5).is_err());
    }

    #[test]
    fn mrs_examples() {
        let d2 = obs([4, 1], [0, 80]);
        assert!(mrs_condition(&UtilityFamily::Cara { beta: 0.002 }, &pi(), &d2).unwrap().holds());
        let d1 = obs([1, 4], [100, 0]);
        assert!(mrs_condition(&UtilityFamily::Linear, &pi(), &d1).unwrap().holds());
        let r = mrs_condition(&UtilityFamily::Cara { beta: 0.01 }, &pi(), &d1).unwrap();
        let v = r.violation().unwrap();
        assert_eq!(v.state, 1);
        assert!((v.margin - ((-1f64).exp() / 3.0 - 0.25)).abs() < 1e-12);
        let diversified = obs([1, 1], [1, 1]);
        assert!(mrs_condition(&UtilityFamily::Linear, &pi(), &diversified).is_err());
    }

    #[test]
    fn params_round_trip() {
        let f = UtilityFamily::from_params(FamilyTag::ShiftedPower, "alpha=0.95").unwrap();
        assert_eq!(f, UtilityFamily::ShiftedPower { alpha: 0.95, c: 1.0 });
        assert!(UtilityFamily::from_params(FamilyTag::Cara, "gamma=1").is_err());
        assert!(UtilityFamily::from_params(FamilyTag::Cara, "beta=-1").is_err());
        let json = serde_json::to_string(&UtilityFamily::Cara { beta: 0.5 }).unwrap();
        assert_eq!(json, r#"{"family":"cara","beta":0.5}"#);
        assert_eq!("convex-quadratic".parse::<FamilyTag>().unwrap(), FamilyTag::ConvexQuadratic);
    }

    #[test]
    fn inverses() {
        for f in [
            UtilityFamily::ShiftedPower { alpha: 0.5, c: 2.0 },
            UtilityFamily::Cara { beta: 0.3 },
            UtilityFamily::Quadratic { theta: 2.0, lambda: 0.1 },
            UtilityFamily::Hyperbolic { gamma: 0.7 },
            UtilityFamily::ConvexQuadratic { epsilon: 0.2 },
            UtilityFamily::Crra { alpha: 0.5 },
        ] {
            let x = 3.0;
            let y = f.evaluate(x).unwrap();
            assert!((f.inverse(y).unwrap() - x).abs() < 1e-9, "{f}");
            if !f.is_convex() {
                let m = f.derivative(x);
                assert!((f.inverse_marginal(m) - x).abs() < 1e-9, "{f}");
            }
        }
    }

    #[test]
    fn decrement_matches_differences() {
        for f in [
            UtilityFamily::ShiftedPower { alpha: 0.4, c: 2.0 },
            UtilityFamily::Cara { beta: 0.3 },
            UtilityFamily::Quadratic { theta: 1.0, lambda: 0.001 },
            UtilityFamily::Hyperbolic { gamma: 0.5 },
            UtilityFamily::Linear,
            UtilityFamily::ConvexQuadratic { epsilon: 0.2 },
            UtilityFamily::Crra { alpha: 0.75 },
        ] {
            for (x, d) in [(10.0, 3.0), (5.0, 5.0), (1.0, 0.25)] {
                let direct = f.evaluate(x).unwrap() - f.evaluate(x - d).unwrap();
                assert!((f.decrement(x, d).unwrap() - direct).abs() < 1e-12, "{f} {x} {d}");
            }
            // Far below the rounding error of u(x) itself.
            let tiny = f.decrement(80.0, 1e-13).unwrap();
            assert!((tiny / 1e-13 - f.derivative(80.0)).abs() < 1e-6 * f.derivative(80.0), "{f}");
        }
    }
}
