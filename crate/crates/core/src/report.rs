//! End-to-end pipeline: corners, axioms, beliefs, family regions, oracle
//! certificates at each region midpoint, and plot data.

use serde_json::{json, Value};

use crate::axioms::{check_garp, check_sarseu_with, GarpOutcome, SarseuCertificate, SarseuOptions, SarseuOutcome};
use crate::beliefs::{check_belief_compatibility, find_beliefs, BeliefSearch};
use crate::error::{Error, Result};
use crate::families::{all_family_report, FamilyTag};
use crate::model::{Beliefs, Dataset};
use crate::plot::{plot_data, PlotData};
use crate::rational;
use crate::verify::{default_grid_points, verify_certificate, DEFAULT_TOLERANCE};

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Use these beliefs instead of recovering them.
    pub beliefs: Option<Beliefs>,
    pub max_pairs: Option<usize>,
    pub tolerance: f64,
    pub grid_points: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { beliefs: None, max_pairs: None, tolerance: DEFAULT_TOLERANCE, grid_points: None }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    /// Axioms pass, beliefs are compatible, every non-CRRA family has a
    /// nonempty region and every midpoint certificate is valid.
    pub success: bool,
    /// Two-state data only: one plot per certified family.
    pub plots: Vec<(FamilyTag, PlotData)>,
}

/// GARP verdict with 1-based cycle indices.
pub fn garp_json(outcome: &GarpOutcome) -> Value {
    match outcome {
        GarpOutcome::Pass => json!({"verdict": "pass"}),
        GarpOutcome::Fail { cycle } => {
            json!({"verdict": "fail", "cycle": cycle.iter().map(|i| i + 1).collect::<Vec<_>>()})
        }
    }
}

pub fn build_report(data: &Dataset, options: &ReportOptions) -> Result<Report> {
    let corners: Vec<Value> = data
        .observations()
        .iter()
        .map(|o| o.corner_state().map_or(Value::Null, |s| json!(data.states()[s])))
        .collect();
    let garp = check_garp(data);
    let mut sarseu_options = SarseuOptions::for_dataset(data);
    if let Some(m) = options.max_pairs {
        sarseu_options.max_pairs = m;
    }
    let (sarseu_json, sarseu_ok) = match check_sarseu_with(data, sarseu_options) {
        Ok(SarseuOutcome::Pass { violation_beyond_bound }) => {
            (json!({"verdict": "pass", "max_pairs": sarseu_options.max_pairs, "violation_beyond_bound": violation_beyond_bound}), true)
        }
        Ok(SarseuOutcome::Fail { sequence, product, .. }) => {
            let cert = SarseuCertificate::new(&sequence, &product);
            (json!({"verdict": "fail", "certificate": cert}), false)
        }
        Err(Error::Inconclusive { nodes, max_pairs }) => {
            (json!({"verdict": "inconclusive", "nodes": nodes, "max_pairs": max_pairs}), false)
        }
        Err(e) => return Err(e),
    };
    let mut body = json!({
        "dataset": {"states": data.states(), "observations": data.len()},
        "corners": corners,
        "garp": garp_json(&garp),
        "sarseu": sarseu_json,
    });
    let all_corners = data.observations().iter().all(|o| o.corner_state().is_some());
    if !all_corners {
        body["beliefs"] = json!({"error": "every observation must be a corner demand"});
        return Ok(Report { json: body, success: false, plots: Vec::new() });
    }

    let (beliefs, beliefs_json, beliefs_ok) = match &options.beliefs {
        Some(b) => {
            let compat = check_belief_compatibility(data, b, true)?;
            let weak = check_belief_compatibility(data, b, false)?;
            let info = json!({
                "source": "given",
                "pi": b.probabilities().iter().map(rational::to_string).collect::<Vec<_>>(),
                "strict": compat.passed(),
                "weak": weak.passed(),
                "min_slack": compat.min_slack().map(rational::to_string),
            });
            (b.clone(), info, weak.passed())
        }
        None => match find_beliefs(data)? {
            found @ BeliefSearch::Feasible { .. } => {
                let mut info = found.to_json(data);
                info["source"] = json!("recovered");
                let BeliefSearch::Feasible { beliefs, .. } = found else { unreachable!() };
                (beliefs, info, true)
            }
            infeasible => {
                let mut info = infeasible.to_json(data);
                info["source"] = json!("recovered");
                body["beliefs"] = info;
                return Ok(Report { json: body, success: false, plots: Vec::new() });
            }
        },
    };
    body["beliefs"] = beliefs_json;

    let regions = all_family_report(&beliefs, data)?;
    let grid = options.grid_points.unwrap_or_else(|| default_grid_points(data.num_states()));
    let mut certificates = serde_json::Map::new();
    let mut plots = Vec::new();
    let mut all_valid = true;
    let mut all_nonempty = true;
    for (tag, region) in &regions {
        if *tag == FamilyTag::Crra {
            continue;
        }
        let Some(family) = region.sample() else {
            all_nonempty = false;
            continue;
        };
        let cert = verify_certificate(data, &beliefs, &family, options.tolerance, grid)?;
        all_valid &= cert.valid;
        let worst = cert.observations.iter().map(|v| v.gap).fold(f64::INFINITY, f64::min);
        certificates.insert(
            tag.to_string(),
            json!({"family": family, "valid": cert.valid, "min_gap": worst, "grid_points": grid, "tolerance": options.tolerance}),
        );
        if data.num_states() == 2 {
            plots.push((*tag, plot_data(data, &beliefs, &family)?));
        }
    }
    body["regions"] = serde_json::to_value(&regions)?;
    body["certificates"] = Value::Object(certificates);
    body["crra"] = json!({"possible": false, "reason": "infinite marginal utility at zero"});
    body["plots"] = json!(plots
        .iter()
        .map(|(tag, p)| json!({"family": tag, "panels": p.panels.len()}))
        .collect::<Vec<_>>());

    let success = garp.passed() && sarseu_ok && beliefs_ok && all_nonempty && all_valid;
    body["success"] = json!(success);
    Ok(Report { json: body, success, plots })
}
