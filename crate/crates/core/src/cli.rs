//! Command-line front end. Every subcommand prints JSON (or CSV for
//! `plot-data`) on stdout and returns an exit code: 0 pass or feasible,
//! 1 fail, infeasible or invalid, 2 input, usage or inconclusive.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::axioms::{
    check_garp, check_sarseu_with, sarseu_lp_oracle, SarseuCertificate, SarseuOptions, SarseuOutcome,
};
use crate::beliefs::{check_belief_compatibility, find_beliefs_with};
use crate::error::{Error, Result};
use crate::families::{solve_region, FamilyTag, FixedParameter, UtilityFamily};
use crate::model::{load_dataset_path, validation_report, Beliefs, Dataset};
use crate::plot::plot_data;
use crate::report::{build_report, garp_json, ReportOptions};
use crate::synth::{generate_dataset, load_budgets};
use crate::verify::{default_grid_points, verify_certificate, DEFAULT_TOLERANCE};

#[derive(Parser, Debug)]
#[command(name = "corner-seu", version, about = "Revealed SEU tests for corner demand data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Beliefs, e.g. `1/4,3/4` or `0.25,0.75`.
    #[arg(long, value_parser = parse_beliefs)]
    pi: Beliefs,
    /// shifted_power, cara, quadratic, hyperbolic, linear, convex_quadratic, crra
    #[arg(long)]
    family: FamilyTag,
    /// Parameters, e.g. `alpha=0.95,c=1`.
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a dataset and classify every demand.
    Validate { file: PathBuf },
    Garp { file: PathBuf },
    Sarseu {
        file: PathBuf,
        #[arg(long)]
        max_pairs: Option<usize>,
        /// Also run the floating-point LP cross-check.
        #[arg(long)]
        lp_oracle: bool,
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Corner state of every observation.
    Corners { file: PathBuf },
    /// Recover full-support beliefs compatible with every corner.
    Beliefs {
        file: PathBuf,
        #[arg(long, conflicts_with = "weak")]
        strict: bool,
        #[arg(long)]
        weak: bool,
    },
    /// Exact parameter region of one family under fixed beliefs.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_beliefs)]
        pi: Beliefs,
        #[arg(long)]
        family: FamilyTag,
        #[arg(long)]
        fix: Option<FixedParameter>,
    },
    /// Check a (beliefs, family) certificate against the grid oracle.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Generate a dataset from an expected-utility maximizer.
    Synth {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        budgets: PathBuf,
    },
    /// Full pipeline from corners to certified regions.
    Report {
        file: PathBuf,
        #[arg(long, value_parser = parse_beliefs)]
        pi: Option<Beliefs>,
        /// Write `<family>.csv` and `<family>.svg` plots here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Budget lines and indifference curves; CSV on stdout unless `--out`.
    PlotData {
        file: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Writes `<prefix>.csv` and `<prefix>.svg`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_beliefs(text: &str) -> std::result::Result<Beliefs, String> {
    Beliefs::parse(text).map_err(|e| e.to_string())
}

impl ModelArgs {
    fn family(&self) -> Result<UtilityFamily> {
        UtilityFamily::from_params(self.family, &self.params)
    }
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn exit(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn load(path: &Path) -> Result<Dataset> {
    load_dataset_path(path).map_err(|e| match e {
        Error::Io(io) => Error::Parse(format!("{}: {io}", path.display())),
        other => other,
    })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { file } => {
            let data = load(&file)?;
            emit(
                out,
                &json!({"states": data.states(), "observations": validation_report(&data)}),
            )?;
            Ok(0)
        }
        Command::Garp { file } => {
            let outcome = check_garp(&load(&file)?);
            emit(out, &garp_json(&outcome))?;
            Ok(exit(outcome.passed()))
        }
        Command::Sarseu { file, max_pairs, lp_oracle, node_budget } => {
            let data = load(&file)?;
            let mut options = SarseuOptions::for_dataset(&data);
            if let Some(m) = max_pairs {
                options.max_pairs = m;
            }
            if let Some(b) = node_budget {
                options.node_budget = b;
            }
            let (mut body, code) = match check_sarseu_with(&data, options) {
                Ok(SarseuOutcome::Pass { violation_beyond_bound }) => (
                    json!({"verdict": "pass", "max_pairs": options.max_pairs, "violation_beyond_bound": violation_beyond_bound}),
                    0,
                ),
                Ok(SarseuOutcome::Fail { sequence, product, canonical }) => (
                    json!({"verdict": "fail", "canonical": canonical, "certificate": SarseuCertificate::new(&sequence, &product)}),
                    1,
                ),
                Err(Error::Inconclusive { nodes, max_pairs }) => {
                    (json!({"verdict": "inconclusive", "nodes": nodes, "max_pairs": max_pairs}), 2)
                }
                Err(e) => return Err(e),
            };
            if lp_oracle {
                body["lp_oracle"] = sarseu_lp_oracle(&data).to_json();
            }
            emit(out, &body)?;
            Ok(code)
        }
        Command::Corners { file } => {
            let data = load(&file)?;
            let corners: Vec<Value> = data
                .observations()
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    json!({
                        "observation": i + 1,
                        "corner_state": o.corner_state().map(|s| s + 1),
                        "label": o.corner_state().map(|s| data.states()[s].clone()),
                    })
                })
                .collect();
            let all = data.observations().iter().all(|o| o.corner_state().is_some());
            emit(out, &json!({"all_corners": all, "observations": corners}))?;
            Ok(exit(all))
        }
        Command::Beliefs { file, weak, .. } => {
            let data = load(&file)?;
            let search = find_beliefs_with(&data, !weak)?;
            let mut body = search.to_json(&data);
            body["mode"] = json!(if weak { "weak" } else { "strict" });
            emit(out, &body)?;
            Ok(exit(search.is_feasible()))
        }
        Command::Solve { file, pi, family, fix } => {
            let data = load(&file)?;
            let region = solve_region(family, fix.as_ref(), &pi, &data)?;
            emit(out, &serde_json::to_value(&region)?)?;
            Ok(exit(!region.is_empty()))
        }
        Command::Verify { file, model, grid, tol } => {
            let data = load(&file)?;
            let family = model.family()?;
            let grid = grid.unwrap_or_else(|| default_grid_points(data.num_states()));
            let cert = verify_certificate(&data, &model.pi, &family, tol, grid)?;
            let mut body = serde_json::to_value(&cert)?;
            let compat = check_belief_compatibility(&data, &model.pi, false);
            if let Ok(c) = compat {
                body["beliefs_compatible"] = json!(c.passed());
            }
            emit(out, &body)?;
            Ok(exit(cert.valid))
        }
        Command::Synth { model, budgets } => {
            let text = std::fs::read_to_string(&budgets)
                .map_err(|e| Error::Parse(format!("{}: {e}", budgets.display())))?;
            let budgets = load_budgets(&text)?;
            let data = generate_dataset(&model.family()?, &model.pi, &budgets)?;
            writeln!(out, "{}", data.to_json())?;
            Ok(0)
        }
        Command::Report { file, pi, out_dir } => {
            let data = load(&file)?;
            let report = build_report(&data, &ReportOptions { beliefs: pi, ..Default::default() })?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)?;
                for (tag, plot) in &report.plots {
                    std::fs::write(dir.join(format!("{tag}.csv")), plot.to_csv())?;
                    std::fs::write(dir.join(format!("{tag}.svg")), plot.to_svg())?;
                }
            }
            emit(out, &report.json)?;
            Ok(exit(report.success))
        }
        Command::PlotData { file, model, out: prefix } => {
            let data = load(&file)?;
            let plot = plot_data(&data, &model.pi, &model.family()?)?;
            match prefix {
                Some(prefix) => {
                    let with = |ext: &str| {
                        let mut name = prefix.clone().into_os_string();
                        name.push(ext);
                        PathBuf::from(name)
                    };
                    std::fs::write(with(".csv"), plot.to_csv())?;
                    std::fs::write(with(".svg"), plot.to_svg())?;
                    emit(out, &json!({"csv": with(".csv"), "svg": with(".svg"), "panels": plot.panels.len()}))?;
                }
                None => write!(out, "{}", plot.to_csv())?,
            }
            Ok(0)
        }
    }
}
