//! The whole pipeline with plot files, as `corner-seu report` runs it.
//!
//! cargo run --release --example report -- [dataset] [pi] [out-dir]

use corner_seu::model::load_dataset_path;
use corner_seu::report::{build_report, ReportOptions};
use corner_seu::Beliefs;

fn main() -> corner_seu::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/example.json").to_string());
    let beliefs = args.next().map(|t| Beliefs::parse(&t)).transpose()?;
    let out = std::path::PathBuf::from(args.next().unwrap_or_else(|| "target/plots".into()));

    let data = load_dataset_path(path.as_ref())?;
    let report = build_report(&data, &ReportOptions { beliefs, ..Default::default() })?;
    println!("{}", serde_json::to_string_pretty(&report.json)?);

    std::fs::create_dir_all(&out)?;
    for (tag, plot) in &report.plots {
        std::fs::write(out.join(format!("{tag}.svg")), plot.to_svg())?;
    }
    eprintln!("{} plots in {}; success = {}", report.plots.len(), out.display(), report.success);
    Ok(())
}
