//! Budget lines and indifference curves for two-state data, as CSV rows and
//! a standalone SVG with one panel per observation.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::families::UtilityFamily;
use crate::model::{Beliefs, Dataset};
use crate::rational;
use crate::verify::expected_utility;

pub const SAMPLES: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub observation: usize,
    pub chosen: [f64; 2],
    pub budget: Vec<[f64; 2]>,
    /// Points of `{x : E_π u(x) = E_π u(chosen)}`.
    pub indifference: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotData {
    pub family: UtilityFamily,
    pub panels: Vec<Panel>,
}

pub fn plot_data(data: &Dataset, beliefs: &Beliefs, family: &UtilityFamily) -> Result<PlotData> {
    if data.num_states() != 2 {
        return Err(Error::Precondition("plots need exactly two states".into()));
    }
    beliefs.check_states(2)?;
    family.validate()?;
    let pi = beliefs.as_f64();
    let mut panels = Vec::with_capacity(data.len());
    for (i, obs) in data.observations().iter().enumerate() {
        let wealth = obs.wealth();
        let ends = [
            rational::to_f64(&(&wealth / &obs.prices()[0])),
            rational::to_f64(&(&wealth / &obs.prices()[1])),
        ];
        let chosen = [rational::to_f64(&obs.demand()[0]), rational::to_f64(&obs.demand()[1])];
        let budget = (0..SAMPLES)
            .map(|k| {
                let t = k as f64 / (SAMPLES - 1) as f64;
                [ends[0] * t, ends[1] * (1.0 - t)]
            })
            .collect();

        let level = expected_utility(family, beliefs, &chosen)?;
        let reach = family.inverse(level / pi[0]).unwrap_or(3.0 * ends[0].max(ends[1]));
        let mut indifference = Vec::with_capacity(SAMPLES);
        for k in 0..SAMPLES {
            let x1 = reach * k as f64 / (SAMPLES - 1) as f64;
            let rest = (level - pi[0] * family.evaluate(x1)?) / pi[1];
            if rest < 0.0 {
                continue;
            }
            if let Some(x2) = family.inverse(rest) {
                indifference.push([x1, x2]);
            }
        }
        panels.push(Panel { observation: i + 1, chosen, budget, indifference });
    }
    Ok(PlotData { family: *family, panels })
}

impl PlotData {
    /// `observation,curve,x1,x2` with curve `budget`, `indifference` or `chosen`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("observation,curve,x1,x2\n");
        for p in &self.panels {
            for (name, pts) in [("budget", &p.budget), ("indifference", &p.indifference)] {
                for [a, b] in pts {
                    let _ = writeln!(out, "{},{name},{a},{b}", p.observation);
                }
            }
            let _ = writeln!(out, "{},chosen,{},{}", p.observation, p.chosen[0], p.chosen[1]);
        }
        out
    }

    pub fn to_svg(&self) -> String {
        const W: f64 = 300.0;
        const PAD: f64 = 30.0;
        let width = self.panels.len() as f64 * (W + PAD) + PAD;
        let height = W + 2.0 * PAD;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{PAD}" y="18" font-family="sans-serif" font-size="13">{}</text>"#,
            self.family
        );
        for (k, p) in self.panels.iter().enumerate() {
            let left = PAD + k as f64 * (W + PAD);
            let top = PAD;
            let span = p
                .budget
                .iter()
                .flat_map(|[a, b]| [*a, *b])
                .fold(0.0f64, f64::max)
                .max(f64::MIN_POSITIVE)
                * 1.1;
            let map = |[a, b]: [f64; 2]| (left + a / span * W, top + W - b / span * W);
            let _ = writeln!(
                out,
                r##"<rect x="{left}" y="{top}" width="{W}" height="{W}" fill="none" stroke="#999"/>"##
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">observation {}</text>"#,
                left + 4.0,
                top + 14.0,
                p.observation
            );
            for (pts, colour) in [(&p.budget, "#1f5fbf"), (&p.indifference, "#c0392b")] {
                let path: Vec<String> = pts
                    .iter()
                    .filter(|[a, b]| *a <= span && *b <= span)
                    .map(|&pt| {
                        let (x, y) = map(pt);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                if !path.is_empty() {
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                        path.join(" ")
                    );
                }
            }
            let (cx, cy) = map(p.chosen);
            let _ = writeln!(out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="black"/>"#);
        }
        out.push_str("</svg>\n");
        out
    }
}
