//! Synthetic agents: a Linear agent produces corner data that passes every
//! test and gives back its beliefs; a CRRA agent never chooses a corner.
//!
//! cargo run --example synth

use corner_seu::axioms::{check_garp, check_sarseu, default_max_pairs};
use corner_seu::beliefs::{check_belief_compatibility, find_beliefs, BeliefSearch};
use corner_seu::families::UtilityFamily;
use corner_seu::rational::{int, ratio};
use corner_seu::synth::{generate_dataset, Budget};
use corner_seu::Beliefs;

fn main() -> corner_seu::Result<()> {
    let pi = Beliefs::new(vec![ratio(1, 5), ratio(1, 2), ratio(3, 10)])?;
    let budgets: Vec<Budget> = [[1, 2, 2], [3, 2, 1], [1, 4, 1], [2, 3, 5]]
        .iter()
        .map(|p| Budget { prices: p.iter().map(|&v| int(v)).collect(), wealth: int(60) })
        .collect();

    let linear = generate_dataset(&UtilityFamily::Linear, &pi, &budgets)?;
    println!("{}", linear.to_json());
    println!("garp: {}", check_garp(&linear).passed());
    println!("sarseu: {}", check_sarseu(&linear, default_max_pairs(&linear))?.passed());
    println!("generating pi compatible (weak): {}", check_belief_compatibility(&linear, &pi, false)?.passed());
    if let BeliefSearch::Feasible { beliefs, .. } = find_beliefs(&linear)? {
        println!("recovered: {:?}", beliefs.as_f64());
    }

    let crra = generate_dataset(&UtilityFamily::Crra { alpha: 0.5 }, &pi, &budgets)?;
    let corners = crra.observations().iter().filter(|o| o.corner_state().is_some()).count();
    println!("crra corner demands: {corners} of {}", crra.len());
    Ok(())
}
