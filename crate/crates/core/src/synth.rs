//! Synthetic datasets from expected-utility maximizers.

use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::families::UtilityFamily;
use crate::model::{default_labels, Beliefs, Dataset, NumberText, Observation};
use crate::rational::{self, Rational};

/// One budget: positive prices and the wealth to spend.
#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    pub prices: Vec<Rational>,
    pub wealth: Rational,
}

#[derive(Deserialize)]
struct BudgetJson {
    prices: Vec<NumberText>,
    wealth: NumberText,
}

#[derive(Deserialize)]
struct BudgetFile {
    budgets: Vec<BudgetJson>,
}

/// Parses `{"budgets":[{"prices":["1","4"],"wealth":"100"}, ...]}`.
pub fn load_budgets(text: &str) -> Result<Vec<Budget>> {
    let file: BudgetFile = serde_json::from_str(text)?;
    file.budgets
        .into_iter()
        .map(|b| {
            Ok(Budget {
                prices: b.prices.iter().map(NumberText::to_rational).collect::<Result<_>>()?,
                wealth: b.wealth.to_rational()?,
            })
        })
        .collect()
}

/// Expected-utility maximizing bundle on `{p·x ≤ wealth}`.
///
/// Linear and convex families pick the best vertex (lowest state index on
/// ties). CARA on two states and CRRA use their first-order conditions in
/// closed form. The remaining concave families solve the first-order
/// conditions by bisection on the budget multiplier.
pub fn agent_demand(
    family: &UtilityFamily,
    beliefs: &Beliefs,
    prices: &[Rational],
    wealth: &Rational,
) -> Result<Vec<Rational>> {
    family.validate()?;
    beliefs.check_states(prices.len())?;
    if prices.iter().any(|p| !p.is_positive()) {
        return Err(Error::Precondition("prices must be strictly positive".into()));
    }
    if !wealth.is_positive() {
        return Err(Error::Precondition("wealth must be strictly positive".into()));
    }
    let n = prices.len();
    let corner = |s: usize| {
        let mut x = vec![Rational::zero(); n];
        x[s] = wealth / &prices[s];
        x
    };
    match *family {
        UtilityFamily::Linear => {
            // Best π_ω / p_ω, exactly.
            let mut best = 0;
            for s in 1..n {
                if beliefs.get(s) * &prices[best] > beliefs.get(best) * &prices[s] {
                    best = s;
                }
            }
            Ok(corner(best))
        }
        UtilityFamily::ConvexQuadratic { .. } => {
            let pi = beliefs.as_f64();
            let mut best = (0, f64::NEG_INFINITY);
            for s in 0..n {
                let x = rational::to_f64(&(wealth / &prices[s]));
                let eu = pi[s] * family.evaluate(x)?;
                if eu > best.1 {
                    best = (s, eu);
                }
            }
            Ok(corner(best.0))
        }
        UtilityFamily::Cara { beta } if n == 2 => {
            // x1 − x2 = ln(π1·p2 / (π2·p1)) / β on the budget face, clipped.
            let shift = rational::ln_rational(&((beliefs.get(0) * &prices[1]) / (beliefs.get(1) * &prices[0]))) / beta;
            let (p1, p2) = (rational::to_f64(&prices[0]), rational::to_f64(&prices[1]));
            let w = rational::to_f64(wealth);
            let x2 = (w - p1 * shift) / (p1 + p2);
            if x2 <= 0.0 {
                return Ok(corner(0));
            }
            if x2 + shift <= 0.0 {
                return Ok(corner(1));
            }
            snap(&[x2 + shift, x2], prices, wealth)
        }
        UtilityFamily::Crra { alpha } => {
            // x_ω ∝ (π_ω / p_ω)^{1/(1−α)}
            let pi = beliefs.as_f64();
            let p: Vec<f64> = prices.iter().map(rational::to_f64).collect();
            let weights: Vec<f64> = (0..n).map(|s| (pi[s] / p[s]).powf(1.0 / (1.0 - alpha))).collect();
            let spend: f64 = weights.iter().zip(&p).map(|(w, p)| w * p).sum();
            let w = rational::to_f64(wealth);
            let x: Vec<f64> = weights.iter().map(|v| v * w / spend).collect();
            snap(&x, prices, wealth)
        }
        _ => water_fill(family, beliefs, prices, wealth),
    }
}

/// Solves `π_ω·u'(x_ω) = μ·p_ω` (or `x_ω = 0` when `π_ω·u'(0) ≤ μ·p_ω`)
/// with `μ` chosen by bisection so that the budget binds.
fn water_fill(family: &UtilityFamily, beliefs: &Beliefs, prices: &[Rational], wealth: &Rational) -> Result<Vec<Rational>> {
    let pi = beliefs.as_f64();
    let p: Vec<f64> = prices.iter().map(rational::to_f64).collect();
    let w = rational::to_f64(wealth);
    let demand = |mu: f64| -> Vec<f64> {
        (0..p.len())
            .map(|s| {
                let target = mu * p[s] / pi[s];
                if target >= family.derivative(0.0) {
                    0.0
                } else {
                    family.inverse_marginal(target)
                }
            })
            .collect()
    };
    let spend = |x: &[f64]| x.iter().zip(&p).map(|(x, p)| x * p).sum::<f64>();
    // Spending falls as μ rises; bracket in log space.
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if spend(&demand(mid.exp())) > w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = demand(hi.exp());
    if let Some(top) = family.monotone_range() {
        if x.iter().any(|&v| v > top) {
            return Err(Error::Domain(format!("{family} demand leaves its increasing range")));
        }
    }
    snap(&x, prices, wealth)
}

/// Exact rationals from floats, with the largest coordinate adjusted so
/// that the budget binds exactly. Zero coordinates stay exactly zero.
fn snap(x: &[f64], prices: &[Rational], wealth: &Rational) -> Result<Vec<Rational>> {
    let mut q: Vec<Rational> = x
        .iter()
        .map(|&v| Rational::from_float(v.max(0.0)).ok_or_else(|| Error::Domain(format!("non-finite demand {v}"))))
        .collect::<Result<_>>()?;
    let top = (0..q.len()).max_by(|&a, &b| x[a].total_cmp(&x[b]).then(b.cmp(&a))).expect("nonempty");
    let others: Rational = q.iter().zip(prices).enumerate().filter(|(i, _)| *i != top).map(|(_, (x, p))| x * p).sum();
    let fixed = (wealth - others) / &prices[top];
    if !fixed.is_negative() {
        q[top] = fixed;
    }
    Ok(q)
}

/// Dataset of `(prices, agent_demand)` pairs with states labelled `s1..sn`.
pub fn generate_dataset(family: &UtilityFamily, beliefs: &Beliefs, budgets: &[Budget]) -> Result<Dataset> {
    if budgets.is_empty() {
        return Err(Error::Validation {
            observation: 0,
            state: None,
            message: "a dataset needs at least one observation".into(),
        });
    }
    let observations = budgets
        .iter()
        .map(|b| Observation::new(b.prices.clone(), agent_demand(family, beliefs, &b.prices, &b.wealth)?))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(default_labels(beliefs.len()), observations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::mrs_condition;
    use crate::rational::{int, ratio};
    use crate::verify::{expected_utility, grid_best};

    fn pi() -> Beliefs {
        Beliefs::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap()
    }

    #[test]
    fn linear_examples() {
        let x = agent_demand(&UtilityFamily::Linear, &pi(), &[int(1), int(4)], &int(100)).unwrap();
        assert_eq!(x, vec![int(100), int(0)]);
        let x = agent_demand(&UtilityFamily::Linear, &Beliefs::uniform(2), &[int(1), int(1)], &int(10)).unwrap();
        assert_eq!(x, vec![int(10), int(0)]);
    }

    #[test]
    fn crra_is_interior_and_exhausts_the_budget() {
        let p = [int(1), int(4)];
        let x = agent_demand(&UtilityFamily::Crra { alpha: 0.5 }, &pi(), &p, &int(100)).unwrap();
        assert!(x.iter().all(|v| v.is_positive()));
        assert_eq!(&x[0] * &p[0] + &x[1] * &p[1], int(100));
        // π1/√x1 : π2/√x2 = 1 : 4
        let (a, b) = (rational::to_f64(&x[0]), rational::to_f64(&x[1]));
        assert!(((0.75 / b.sqrt()) / (0.25 / a.sqrt()) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn concave_demands_match_the_grid_oracle() {
        let p = [int(2), int(3)];
        let w = int(60);
        for f in [
            UtilityFamily::Cara { beta: 0.05 },
            UtilityFamily::ShiftedPower { alpha: 0.5, c: 2.0 },
            UtilityFamily::Hyperbolic { gamma: 0.2 },
            UtilityFamily::Quadratic { theta: 1.0, lambda: 0.01 },
            UtilityFamily::Crra { alpha: 0.3 },
        ] {
            let x = agent_demand(&f, &pi(), &p, &w).unwrap();
            let xf: Vec<f64> = x.iter().map(rational::to_f64).collect();
            let eu = expected_utility(&f, &pi(), &xf).unwrap();
            let grid = grid_best(&f, &pi(), &p, &w, 10_000).unwrap();
            assert!(eu >= grid.expected_utility - 1e-9, "{f}: {eu} < {}", grid.expected_utility);
        }
    }

    #[test]
    fn three_state_water_filling_yields_corners_when_optimal() {
        let b = Beliefs::new(vec![ratio(3, 5), ratio(1, 5), ratio(1, 5)]).unwrap();
        let p = [int(1), int(3), int(3)];
        let f = UtilityFamily::Cara { beta: 0.01 };
        let x = agent_demand(&f, &b, &p, &int(10)).unwrap();
        assert_eq!(x, vec![int(10), int(0), int(0)]);
        let obs = Observation::new(p.to_vec(), x).unwrap();
        assert!(mrs_condition(&f, &b, &obs).unwrap().holds());
    }

    #[test]
    fn empty_budget_list_is_rejected() {
        assert!(generate_dataset(&UtilityFamily::Linear, &pi(), &[]).is_err());
    }

    #[test]
    fn budgets_parse() {
        let b = load_budgets(r#"{"budgets":[{"prices":["1","4"],"wealth":"100"},{"prices":[4,1],"wealth":"0.5"}]}"#)
            .unwrap();
        assert_eq!(b[1].wealth, ratio(1, 2));
        let d = generate_dataset(&UtilityFamily::Linear, &pi(), &b).unwrap();
        assert_eq!(d.len(), 2);
    }
}
