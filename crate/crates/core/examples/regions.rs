//! Exact parameter regions for every family under fixed beliefs.
//!
//! cargo run --example regions

use corner_seu::families::{all_family_report, corner_ratios, solve_region, FamilyTag, FixedParameter};
use corner_seu::model::load_dataset_path;
use corner_seu::rational::to_string;
use corner_seu::Beliefs;

fn main() -> corner_seu::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/example.json");
    let data = load_dataset_path(path.as_ref())?;
    let pi = Beliefs::parse("1/4,3/4")?;

    for r in corner_ratios(&data, &pi)? {
        let ratio = r.ratio.as_ref().map(to_string).unwrap_or_default();
        println!("observation {}: corner {} wealth {} ratio {ratio}", r.observation + 1, r.corner_state + 1, to_string(&r.demand));
    }

    for (tag, region) in all_family_report(&pi, &data)? {
        println!("{tag:>16}: {}", serde_json::to_string(&region)?);
    }

    // Hold alpha fixed and solve for the shift instead.
    let fix: FixedParameter = "alpha=0.5".parse()?;
    let shifted = solve_region(FamilyTag::ShiftedPower, Some(&fix), &pi, &data)?;
    println!("shifted power with alpha=0.5: {}", serde_json::to_string(&shifted)?);
    Ok(())
}
