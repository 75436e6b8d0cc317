//! GARP and SARSEU on the three-observation corner dataset and on a small
//! diversified dataset that violates SARSEU.
//!
//! cargo run --example axioms

use corner_seu::axioms::{check_garp, check_sarseu, default_max_pairs, sarseu_lp_oracle, SarseuCertificate, SarseuOutcome};
use corner_seu::model::load_dataset_path;
use corner_seu::rational::{int, to_string};
use corner_seu::Dataset;

fn describe(name: &str, data: &Dataset) -> corner_seu::Result<()> {
    println!("{name}");
    println!("  garp: {:?}", check_garp(data));
    match check_sarseu(data, default_max_pairs(data))? {
        SarseuOutcome::Pass { .. } => println!("  sarseu: pass"),
        SarseuOutcome::Fail { sequence, product, .. } => {
            let cert = SarseuCertificate::new(&sequence, &product);
            println!("  sarseu: fail, product {}", to_string(&product));
            println!("  certificate: {}", serde_json::to_string(&cert)?);
        }
    }
    let lp = sarseu_lp_oracle(data);
    println!("  lp oracle: found={} optimum={:.6}", lp.found(), lp.optimum);
    Ok(())
}

fn main() -> corner_seu::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/example.json");
    describe("corner example", &load_dataset_path(path.as_ref())?)?;

    // Buying more of the state that got relatively dearer.
    let bad = Dataset::from_rows(&[
        (vec![int(3), int(1)], vec![int(2), int(1)]),
        (vec![int(1), int(1)], vec![int(1), int(2)]),
    ])?;
    describe("diversified violation", &bad)
}
