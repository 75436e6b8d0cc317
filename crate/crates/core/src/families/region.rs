//! Exact parameter regions on which a family satisfies the corner condition
//! at every observation under fixed beliefs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::symbolic::{operand, Expr, QuadSurd};
use crate::families::{FamilyTag, UtilityFamily};
use crate::model::{Beliefs, Dataset};
use crate::rational::{self, Rational};

/// Per-observation belief-weighted price ratio at a corner:
/// `min over ω' of (π_corner · p_ω') / (π_ω' · p_corner)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerRatio {
    pub observation: usize,
    pub corner_state: usize,
    /// Corner demand `w`.
    pub demand: Rational,
    /// `None` for single-state data, where no alternative state exists.
    pub ratio: Option<Rational>,
    /// The alternative state attaining the minimum.
    pub binding_state: Option<usize>,
}

pub fn corner_ratios(data: &Dataset, beliefs: &Beliefs) -> Result<Vec<CornerRatio>> {
    beliefs.check_states(data.num_states())?;
    let corners = data.corner_states()?;
    Ok(data
        .observations()
        .iter()
        .zip(corners)
        .enumerate()
        .map(|(i, (obs, c))| {
            let p = obs.prices();
            let mut best: Option<(Rational, usize)> = None;
            for s in (0..obs.num_states()).filter(|&s| s != c) {
                let r = (beliefs.get(c) * &p[s]) / (beliefs.get(s) * &p[c]);
                if best.as_ref().is_none_or(|(b, _)| &r < b) {
                    best = Some((r, s));
                }
            }
            CornerRatio {
                observation: i,
                corner_state: c,
                demand: obs.demand()[c].clone(),
                ratio: best.as_ref().map(|(r, _)| r.clone()),
                binding_state: best.map(|(_, s)| s),
            }
        })
        .collect())
}

/// A parameter held fixed while another is solved for, e.g. `c=1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedParameter {
    pub name: String,
    pub value: f64,
}

impl FromStr for FixedParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("expected name=value, got {s:?}")))?;
        let value = rational::to_f64(&rational::parse_rational(value)?);
        Ok(Self { name: name.trim().to_ascii_lowercase(), value })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub expr: Expr,
    pub closed: bool,
}

impl Bound {
    fn closed(expr: Expr) -> Self {
        Self { expr, closed: true }
    }

    fn open(expr: Expr) -> Self {
        Self { expr, closed: false }
    }

    pub fn value(&self) -> f64 {
        self.expr.to_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionShape {
    /// `None` means unbounded on that side.
    Interval { lower: Option<Bound>, upper: Option<Bound> },
    /// `lambda/theta ≤ upper` (Quadratic).
    HalfSpace { upper: Bound },
    All,
    Empty { reason: String },
}

/// Observation and alternative state (0-based) whose constraint sets the
/// binding endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Binding {
    pub observation: usize,
    pub state: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterRegion {
    pub family: FamilyTag,
    /// Name of the free parameter (`lambda/theta` for Quadratic).
    pub parameter: &'static str,
    pub fixed: Option<FixedParameter>,
    pub shape: RegionShape,
    pub binding: Option<Binding>,
    /// Representative interior value of the free parameter.
    pub midpoint: Option<f64>,
}

impl ParameterRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self.shape, RegionShape::Empty { .. })
    }

    /// Whether a value of the free parameter lies in the region.
    pub fn contains(&self, v: f64) -> bool {
        let above = |b: &Option<Bound>| match b {
            None => true,
            Some(b) if b.closed => v >= b.value(),
            Some(b) => v > b.value(),
        };
        let below = |b: &Option<Bound>| match b {
            None => true,
            Some(b) if b.closed => v <= b.value(),
            Some(b) => v < b.value(),
        };
        match &self.shape {
            RegionShape::Interval { lower, upper } => above(lower) && below(upper),
            RegionShape::HalfSpace { upper } => v > 0.0 && below(&Some(upper.clone())),
            RegionShape::All => true,
            RegionShape::Empty { .. } => false,
        }
    }

    /// The family with its free parameter set to `v`.
    pub fn family_at(&self, v: f64) -> Result<UtilityFamily> {
        let fixed = self.fixed.as_ref().map(|f| f.value);
        let family = match (self.family, self.parameter) {
            (FamilyTag::ShiftedPower, "alpha") => UtilityFamily::ShiftedPower { alpha: v, c: fixed.unwrap_or(1.0) },
            (FamilyTag::ShiftedPower, _) => UtilityFamily::ShiftedPower { alpha: fixed.unwrap_or(0.5), c: v },
            (FamilyTag::Cara, _) => UtilityFamily::Cara { beta: v },
            (FamilyTag::Quadratic, _) => UtilityFamily::Quadratic { theta: 1.0, lambda: v },
            (FamilyTag::Hyperbolic, _) => UtilityFamily::Hyperbolic { gamma: v },
            (FamilyTag::Linear, _) => UtilityFamily::Linear,
            (FamilyTag::ConvexQuadratic, _) => UtilityFamily::ConvexQuadratic { epsilon: v },
            (FamilyTag::Crra, _) => UtilityFamily::Crra { alpha: v },
        };
        family.new()
    }

    /// The family at the midpoint, or `None` for an empty region.
    pub fn sample(&self) -> Option<UtilityFamily> {
        if self.is_empty() {
            return None;
        }
        match self.family {
            FamilyTag::Linear => Some(UtilityFamily::Linear),
            _ => self.midpoint.and_then(|m| self.family_at(m).ok()),
        }
    }

    fn empty(family: FamilyTag, parameter: &'static str, reason: String) -> Self {
        Self { family, parameter, fixed: None, shape: RegionShape::Empty { reason }, binding: None, midpoint: None }
    }

    fn with_midpoint(mut self, default: f64) -> Self {
        self.midpoint = match &self.shape {
            RegionShape::Interval { lower, upper } => {
                let lo = lower.as_ref().map_or(0.0, Bound::value);
                match upper {
                    Some(u) => Some((lo + u.value()) / 2.0),
                    None if lo > 0.0 => Some(2.0 * lo),
                    None => Some(default),
                }
            }
            RegionShape::HalfSpace { upper } => Some(upper.value() / 2.0),
            RegionShape::All => Some(default),
            RegionShape::Empty { .. } => None,
        };
        self
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ShapeJson {
    Interval {
        lower: Option<String>,
        lower_decimal: Option<f64>,
        closed_lower: bool,
        upper: Option<String>,
        upper_decimal: Option<f64>,
        closed_upper: bool,
    },
    HalfSpace {
        expression: &'static str,
        upper: String,
        upper_decimal: f64,
        closed_upper: bool,
        equivalent: String,
    },
    All,
    Empty {
        reason: String,
    },
}

#[derive(Serialize)]
struct FixedJson<'a> {
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct RegionJson<'a> {
    family: FamilyTag,
    parameter: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed: Option<FixedJson<'a>>,
    region: ShapeJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    binding_observation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    binding_state: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    midpoint: Option<f64>,
}

impl Serialize for ParameterRegion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let text = |b: &Option<Bound>| b.as_ref().map(|b| b.expr.to_string());
        let decimal = |b: &Option<Bound>| b.as_ref().map(Bound::value);
        let region = match &self.shape {
            RegionShape::Interval { lower, upper } => ShapeJson::Interval {
                lower: text(lower),
                lower_decimal: decimal(lower),
                closed_lower: lower.as_ref().is_some_and(|b| b.closed),
                upper: text(upper),
                upper_decimal: decimal(upper),
                closed_upper: upper.as_ref().is_some_and(|b| b.closed),
            },
            RegionShape::HalfSpace { upper } => ShapeJson::HalfSpace {
                expression: "lambda/theta",
                upper: upper.expr.to_string(),
                upper_decimal: upper.value(),
                closed_upper: upper.closed,
                equivalent: quadratic_equivalent(&upper.expr),
            },
            RegionShape::All => ShapeJson::All,
            RegionShape::Empty { reason } => ShapeJson::Empty { reason: reason.clone() },
        };
        RegionJson {
            family: self.family,
            parameter: self.parameter,
            fixed: self.fixed.as_ref().map(|f| FixedJson { name: &f.name, value: f.value }),
            region,
            binding_observation: self.binding.map(|b| b.observation + 1),
            binding_state: self.binding.map(|b| b.state + 1),
            midpoint: self.midpoint,
        }
        .serialize(serializer)
    }
}

/// `λ/θ ≤ n/d` read as `n·θ ≥ d·λ`.
fn quadratic_equivalent(expr: &Expr) -> String {
    match expr {
        Expr::Rational(q) => {
            let n = q.numer();
            let d = q.denom();
            let theta = if n.is_one() { "theta".to_string() } else { format!("{n}*theta") };
            format!("{theta} >= {d}*lambda")
        }
        other => format!("lambda/theta <= {other}"),
    }
}

fn parameter_name(tag: FamilyTag) -> &'static str {
    match tag {
        FamilyTag::ShiftedPower | FamilyTag::Crra => "alpha",
        FamilyTag::Cara => "beta",
        FamilyTag::Quadratic => "lambda/theta",
        FamilyTag::Hyperbolic => "gamma",
        FamilyTag::Linear => "none",
        FamilyTag::ConvexQuadratic => "epsilon",
    }
}

/// Exact region of the free parameter on which the corner condition holds
/// at every observation (weak inequality; strict dominance for the strictly
/// concave and convex families).
pub fn solve_region(
    tag: FamilyTag,
    fixed: Option<&FixedParameter>,
    beliefs: &Beliefs,
    data: &Dataset,
) -> Result<ParameterRegion> {
    let ratios = corner_ratios(data, beliefs)?;
    if let Some(f) = fixed {
        let allowed = tag == FamilyTag::ShiftedPower && (f.name == "c" || f.name == "alpha");
        if !allowed {
            return Err(Error::Usage(format!("{tag} does not accept a fixed parameter {:?}", f.name)));
        }
    }
    let parameter = match (tag, fixed) {
        (FamilyTag::ShiftedPower, Some(f)) if f.name == "alpha" => "c",
        _ => parameter_name(tag),
    };
    if tag == FamilyTag::Crra {
        return Ok(ParameterRegion::empty(tag, parameter, "infinite marginal utility at zero".into()));
    }

    let one = Rational::one();
    if let Some(bad) = ratios.iter().find(|r| r.ratio.as_ref().is_some_and(|q| q < &one)) {
        return Ok(ParameterRegion::empty(
            tag,
            parameter,
            format!(
                "beliefs fail the ratio condition at observation {} (ratio {})",
                bad.observation + 1,
                bad.ratio.as_ref().map(rational::to_string).unwrap_or_default()
            ),
        ));
    }
    let max_w = ratios.iter().map(|r| rational::to_f64(&r.demand)).fold(0.0, f64::max);
    if tag == FamilyTag::Linear {
        return Ok(ParameterRegion {
            family: tag,
            parameter,
            fixed: None,
            shape: RegionShape::All,
            binding: None,
            midpoint: None,
        });
    }
    if let Some(tie) = ratios.iter().find(|r| r.ratio.as_ref().is_some_and(|q| q == &one)) {
        return Ok(ParameterRegion::empty(
            tag,
            parameter,
            format!("ratio equals one at observation {}; {tag} needs strict dominance", tie.observation + 1),
        ));
    }
    // Every ratio now exceeds one.
    let constrained: Vec<(&CornerRatio, &Rational)> =
        ratios.iter().filter_map(|r| r.ratio.as_ref().map(|q| (r, q))).collect();
    let binding_of = |r: &CornerRatio| {
        r.binding_state.map(|state| Binding { observation: r.observation, state })
    };

    let region = match tag {
        FamilyTag::Cara => {
            let best = pick(&constrained, |(ra, qa), (rb, qb)| {
                // ln(qa)/wa vs ln(qb)/wb  ⇔  wb·ln(qa) vs wa·ln(qb)
                rational::log_sum_sign(&[rb.demand.clone(), -ra.demand.clone()], &[(*qa).clone(), (*qb).clone()])
            });
            let upper = best.map(|(r, q)| Bound::closed(Expr::LnQuotient { arg: (*q).clone(), div: r.demand.clone() }));
            ParameterRegion {
                family: tag,
                parameter,
                fixed: None,
                shape: RegionShape::Interval { lower: Some(Bound::open(Expr::zero())), upper },
                binding: best.and_then(|(r, _)| binding_of(r)),
                midpoint: None,
            }
            .with_midpoint(1.0 / max_w.max(1.0))
        }
        FamilyTag::ShiftedPower if parameter == "alpha" => {
            let c = fixed.map_or(1.0, |f| f.value);
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Domain(format!("shifted_power requires c > 0, got {c}")));
            }
            let c_q = decimal_rational(c);
            let bounds: Vec<(&CornerRatio, Expr)> = constrained
                .iter()
                .map(|(r, q)| {
                    let base = (&r.demand + &c_q) / &c_q;
                    (*r, Expr::OnePlusLnRatio { num: one.clone() / *q, den: base })
                })
                .collect();
            let best = bounds
                .iter()
                .enumerate()
                .max_by(|(ia, (_, a)), (ib, (_, b))| {
                    a.to_f64().total_cmp(&b.to_f64()).then(ib.cmp(ia))
                })
                .map(|(_, b)| b);
            let lower = match best {
                Some((_, e)) if e.to_f64() > 0.0 => Bound::closed(e.clone()),
                _ => Bound::open(Expr::zero()),
            };
            ParameterRegion {
                family: tag,
                parameter,
                fixed: Some(FixedParameter { name: "c".into(), value: c }),
                shape: RegionShape::Interval { lower: Some(lower), upper: Some(Bound::open(Expr::Rational(one.clone()))) },
                binding: best.and_then(|(r, _)| binding_of(r)),
                midpoint: None,
            }
            .with_midpoint(0.5)
        }
        FamilyTag::ShiftedPower => {
            let alpha = fixed.map(|f| f.value).expect("alpha fixed");
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Domain(format!("shifted_power requires alpha in (0,1), got {alpha}")));
            }
            // c ≥ w / (r^{1/(1−α)} − 1)
            let bounds: Vec<(&CornerRatio, f64, String)> = constrained
                .iter()
                .map(|(r, q)| {
                    let w = rational::to_f64(&r.demand);
                    let grow = (rational::ln_rational(q) / (1.0 - alpha)).exp_m1();
                    let text = format!("{}/({}^(1/(1-{alpha}))-1)", operand(&r.demand), operand(q));
                    (*r, w / grow, text)
                })
                .collect();
            let best = bounds
                .iter()
                .enumerate()
                .max_by(|(ia, (_, a, _)), (ib, (_, b, _))| a.total_cmp(b).then(ib.cmp(ia)))
                .map(|(_, b)| b);
            let lower = match best {
                Some((_, v, text)) if *v > 0.0 => Bound::closed(Expr::Opaque { text: text.clone(), value: *v }),
                _ => Bound::open(Expr::zero()),
            };
            ParameterRegion {
                family: tag,
                parameter,
                fixed: Some(FixedParameter { name: "alpha".into(), value: alpha }),
                shape: RegionShape::Interval { lower: Some(lower), upper: None },
                binding: best.and_then(|(r, _, _)| binding_of(r)),
                midpoint: None,
            }
            .with_midpoint(1.0)
        }
        FamilyTag::Quadratic => {
            // λ/θ ≤ (1 − 1/r)/(2w), and ≤ 1/(2·max w) to stay increasing.
            let mut best: Option<(Rational, Option<Binding>)> = None;
            for (r, q) in &constrained {
                if r.demand.is_zero() {
                    continue;
                }
                let b = (&one - &one / *q) / (Rational::from_integer(2.into()) * &r.demand);
                if best.as_ref().is_none_or(|(cur, _)| &b < cur) {
                    best = Some((b, binding_of(r)));
                }
            }
            let max_w = ratios.iter().map(|r| r.demand.clone()).max().unwrap_or_else(Rational::zero);
            if max_w.is_positive() {
                let cap = &one / (Rational::from_integer(2.into()) * &max_w);
                if best.as_ref().is_none_or(|(cur, _)| &cap < cur) {
                    best = Some((cap, None));
                }
            }
            match best {
                Some((b, binding)) => ParameterRegion {
                    family: tag,
                    parameter,
                    fixed: None,
                    shape: RegionShape::HalfSpace { upper: Bound::closed(Expr::Rational(b)) },
                    binding,
                    midpoint: None,
                }
                .with_midpoint(1.0),
                None => ParameterRegion {
                    family: tag,
                    parameter,
                    fixed: None,
                    shape: RegionShape::Interval { lower: Some(Bound::open(Expr::zero())), upper: None },
                    binding: None,
                    midpoint: None,
                }
                .with_midpoint(1.0),
            }
        }
        FamilyTag::Hyperbolic => {
            // (1+γw)² ≤ r  ⇔  γ ≤ (√r − 1)/w
            let bounds: Vec<(&CornerRatio, QuadSurd)> = constrained
                .iter()
                .filter(|(r, _)| !r.demand.is_zero())
                .map(|(r, q)| (*r, QuadSurd::sqrt(q).add_rational(&-one.clone()).div_rational(&r.demand)))
                .collect();
            let best = bounds
                .iter()
                .enumerate()
                .min_by(|(ia, (_, a)), (ib, (_, b))| a.to_f64().total_cmp(&b.to_f64()).then(ia.cmp(ib)))
                .map(|(_, b)| b);
            ParameterRegion {
                family: tag,
                parameter,
                fixed: None,
                shape: RegionShape::Interval {
                    lower: Some(Bound::open(Expr::zero())),
                    upper: best.map(|(_, s)| Bound::closed(Expr::Surd(s.clone()))),
                },
                binding: best.and_then(|(r, _)| binding_of(r)),
                midpoint: None,
            }
            .with_midpoint(1.0 / max_w.max(1.0))
        }
        FamilyTag::ConvexQuadratic => convex_quadratic_region(data, beliefs, parameter, max_w),
        FamilyTag::Linear | FamilyTag::Crra => unreachable!("handled above"),
    };
    Ok(region)
}

/// `x + εx²` is convex, so the optimum over a budget sits at a vertex. The
/// corner beats vertex `ω` iff `D + ε·C ≥ 0` with `a` the corner demand,
/// `b = a·p_corner/p_ω`, `D = π_c·a − π_ω·b` and `C = π_c·a² − π_ω·b²`.
/// Strict dominance makes every `D` positive, so only negative `C` bind.
fn convex_quadratic_region(data: &Dataset, beliefs: &Beliefs, parameter: &'static str, max_w: f64) -> ParameterRegion {
    let mut best: Option<(Rational, Binding)> = None;
    for (i, obs) in data.observations().iter().enumerate() {
        let c = obs.corner_state().expect("corners checked");
        let a = &obs.demand()[c];
        let p = obs.prices();
        for s in (0..obs.num_states()).filter(|&s| s != c) {
            let b = a * &p[c] / &p[s];
            let pc = beliefs.get(c);
            let ps = beliefs.get(s);
            let quad = pc * a * a - ps * &b * &b;
            let lin = pc * a - ps * &b;
            if quad.is_negative() {
                let bound = lin / -quad;
                if best.as_ref().is_none_or(|(cur, _)| &bound < cur) {
                    best = Some((bound, Binding { observation: i, state: s }));
                }
            }
        }
    }
    let default = if max_w > 0.0 { 1.0 / max_w } else { 1.0 };
    match best {
        None => ParameterRegion {
            family: FamilyTag::ConvexQuadratic,
            parameter,
            fixed: None,
            shape: RegionShape::All,
            binding: None,
            midpoint: None,
        }
        .with_midpoint(default),
        Some((bound, binding)) => ParameterRegion {
            family: FamilyTag::ConvexQuadratic,
            parameter,
            fixed: None,
            shape: RegionShape::Interval {
                lower: Some(Bound::open(Expr::zero())),
                upper: Some(Bound::closed(Expr::Rational(bound))),
            },
            binding: Some(binding),
            midpoint: None,
        }
        .with_midpoint(default),
    }
}

/// Minimum under `cmp`, earliest index on ties.
fn pick<'a, T>(items: &'a [T], cmp: impl Fn(&T, &T) -> Ordering) -> Option<&'a T> {
    let mut best: Option<&T> = None;
    for it in items {
        if best.is_none_or(|b| cmp(it, b) == Ordering::Less) {
            best = Some(it);
        }
    }
    best
}

/// Short decimal form of a float as an exact rational (`0.1` → `1/10`).
fn decimal_rational(x: f64) -> Rational {
    rational::parse_rational(&format!("{x}")).unwrap_or_else(|_| Rational::from_float(x).expect("finite"))
}

/// Regions for every family, CRRA included as the impossible case.
pub fn all_family_report(beliefs: &Beliefs, data: &Dataset) -> Result<BTreeMap<FamilyTag, ParameterRegion>> {
    FamilyTag::ALL
        .into_iter()
        .map(|tag| Ok((tag, solve_region(tag, None, beliefs, data)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::mrs_condition;
    use crate::rational::{int, ratio};

    fn data(rows: &[(&[i64], &[i64])]) -> Dataset {
        Dataset::from_rows(
            &rows
                .iter()
                .map(|(p, x)| (p.iter().map(|&v| int(v)).collect(), x.iter().map(|&v| int(v)).collect()))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn example() -> Dataset {
        data(&[(&[1, 4], &[100, 0]), (&[4, 1], &[0, 80]), (&[3, 1], &[0, 60])])
    }

    fn pi() -> Beliefs {
        Beliefs::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap()
    }

    fn upper(r: &ParameterRegion) -> &Bound {
        match &r.shape {
            RegionShape::Interval { upper: Some(u), .. } | RegionShape::HalfSpace { upper: u } => u,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn example_ratios() {
        let r = corner_ratios(&example(), &pi()).unwrap();
        let qs: Vec<Rational> = r.iter().map(|c| c.ratio.clone().unwrap()).collect();
        assert_eq!(qs, vec![ratio(4, 3), int(12), int(9)]);
    }

    #[test]
    fn cara_region() {
        let r = solve_region(FamilyTag::Cara, None, &pi(), &example()).unwrap();
        let u = upper(&r);
        assert_eq!(u.expr.to_string(), "ln(4/3)/100");
        assert!(u.closed);
        assert!(r.contains(0.00285));
        assert_eq!(r.binding, Some(Binding { observation: 0, state: 1 }));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"family":"cara","parameter":"beta","region":{"type":"interval","lower":"0""#), "{json}");
        assert!(json.contains(r#""upper":"ln(4/3)/100","upper_decimal":0.0028768207245178"#), "{json}");
        assert!(json.contains(r#""binding_observation":1"#));
    }

    #[test]
    fn other_example_regions() {
        let sp = solve_region(FamilyTag::ShiftedPower, None, &pi(), &example()).unwrap();
        let RegionShape::Interval { lower: Some(lo), .. } = &sp.shape else { panic!() };
        assert_eq!(lo.expr.to_string(), "1+ln(3/4)/ln(101)");
        assert!((lo.value() - 0.937_665).abs() < 1e-5);

        let q = solve_region(FamilyTag::Quadratic, None, &pi(), &example()).unwrap();
        assert_eq!(upper(&q).expr, Expr::Rational(ratio(1, 800)));
        assert!(serde_json::to_string(&q).unwrap().contains("theta >= 800*lambda"));

        let h = solve_region(FamilyTag::Hyperbolic, None, &pi(), &example()).unwrap();
        assert_eq!(upper(&h).expr.to_string(), "(2√3-3)/300");

        let cq = solve_region(FamilyTag::ConvexQuadratic, None, &pi(), &example()).unwrap();
        assert_eq!(cq.shape, RegionShape::All);
        let report = all_family_report(&pi(), &example()).unwrap();
        assert_eq!(report.values().filter(|r| !r.is_empty()).count(), 6);
        assert!(report[&FamilyTag::Crra].is_empty());
    }

    #[test]
    fn boundary_ratio_of_one() {
        let d = data(&[(&[1, 1], &[5, 0])]);
        let half = Beliefs::uniform(2);
        assert!(!solve_region(FamilyTag::Linear, None, &half, &d).unwrap().is_empty());
        assert!(solve_region(FamilyTag::ConvexQuadratic, None, &half, &d).unwrap().is_empty());
        assert!(solve_region(FamilyTag::Cara, None, &half, &d).unwrap().is_empty());
    }

    #[test]
    fn failing_beliefs_empty_everything() {
        let skewed = Beliefs::new(vec![ratio(9, 10), ratio(1, 10)]).unwrap();
        let report = all_family_report(&skewed, &example()).unwrap();
        assert!(report.values().all(ParameterRegion::is_empty));

        // Observation 3 sits exactly on the boundary under (3/4, 1/4).
        let flipped = Beliefs::new(vec![ratio(3, 4), ratio(1, 4)]).unwrap();
        let report = all_family_report(&flipped, &example()).unwrap();
        assert!(!report[&FamilyTag::Linear].is_empty());
        assert!(report[&FamilyTag::Cara].is_empty());
        assert!(report[&FamilyTag::ConvexQuadratic].is_empty());
    }

    #[test]
    fn convex_quadratic_can_be_bounded() {
        let d = data(&[(&[7, 5], &[5, 0])]);
        let b = Beliefs::new(vec![ratio(3, 5), ratio(2, 5)]).unwrap();
        let r = solve_region(FamilyTag::ConvexQuadratic, None, &b, &d).unwrap();
        let u = upper(&r).value();
        // Just inside the bound the corner vertex still wins, just outside it loses.
        let eu = |eps: f64, x: f64, pi: f64| pi * (x + eps * x * x);
        let (a, other) = (5.0, 5.0 * 7.0 / 5.0);
        assert!(eu(u * 0.999, a, 0.6) >= eu(u * 0.999, other, 0.4));
        assert!(eu(u * 1.001, a, 0.6) < eu(u * 1.001, other, 0.4));
    }

    #[test]
    fn shifted_power_with_alpha_fixed() {
        let fixed: FixedParameter = "alpha=0.5".parse().unwrap();
        let r = solve_region(FamilyTag::ShiftedPower, Some(&fixed), &pi(), &example()).unwrap();
        let RegionShape::Interval { lower: Some(lo), upper: None } = &r.shape else { panic!("{r:?}") };
        // obs 1: c ≥ 100/((4/3)^2 − 1) = 900/7
        assert!((lo.value() - 900.0 / 7.0).abs() < 1e-9);
        for obs in example().observations() {
            let f = r.family_at(lo.value()).unwrap();
            assert!(mrs_condition(&f, &pi(), obs).unwrap().holds());
        }
    }
}
