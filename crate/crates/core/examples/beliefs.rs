//! Recovering beliefs from corner demands, and why CRRA cannot produce them.
//!
//! cargo run --example beliefs

use corner_seu::beliefs::{check_belief_compatibility, find_beliefs, find_violating_epsilon, inada_limit, BeliefSearch};
use corner_seu::families::UtilityFamily;
use corner_seu::model::load_dataset_path;
use corner_seu::rational::to_string;
use corner_seu::Beliefs;

fn main() -> corner_seu::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let data = load_dataset_path(format!("{dir}/example.json").as_ref())?;

    if let BeliefSearch::Feasible { beliefs, min_slack } = find_beliefs(&data)? {
        let pi: Vec<String> = beliefs.probabilities().iter().map(to_string).collect();
        println!("recovered pi = ({}), min slack {}", pi.join(", "), to_string(&min_slack));
    }

    for text in ["1/4,3/4", "3/4,1/4"] {
        let report = check_belief_compatibility(&data, &Beliefs::parse(text)?, true)?;
        let slacks: Vec<String> = report.entries.iter().map(|e| to_string(&e.slack)).collect();
        println!("pi = ({text}): slacks [{}], passes: {}", slacks.join(", "), report.passed());
    }

    let conflicting = load_dataset_path(format!("{dir}/conflicting.json").as_ref())?;
    if let BeliefSearch::Infeasible { witness } = find_beliefs(&conflicting)? {
        for c in &witness {
            println!("conflict: {}", c.describe(&conflicting));
        }
    }

    let pi = Beliefs::parse("1/4,3/4")?;
    for alpha in [0.25, 0.5, 0.75] {
        let crra = UtilityFamily::Crra { alpha };
        println!("crra alpha={alpha}: u'(0+) {:?}", inada_limit(&crra));
        for (i, obs) in data.observations().iter().enumerate() {
            let other = 1 - obs.corner_state().expect("corner");
            let eps = find_violating_epsilon(&crra, &pi, obs, other)?;
            println!("  observation {}: profitable deviation at eps = {eps:?}", i + 1);
        }
    }
    Ok(())
}
