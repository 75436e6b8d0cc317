//! Grid-oracle certificates: a parameter inside the CARA region, one just
//! outside it, and CRRA.
//!
//! cargo run --release --example verify

use corner_seu::families::{mrs_condition, UtilityFamily};
use corner_seu::model::load_dataset_path;
use corner_seu::verify::{verify_certificate, DEFAULT_TOLERANCE};
use corner_seu::Beliefs;

fn main() -> corner_seu::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/example.json");
    let data = load_dataset_path(path.as_ref())?;
    let pi = Beliefs::parse("1/4,3/4")?;
    let edge = (4.0f64 / 3.0).ln() / 100.0;

    for family in [
        UtilityFamily::Cara { beta: 0.00285 },
        UtilityFamily::Cara { beta: edge * 1.01 },
        UtilityFamily::Crra { alpha: 0.5 },
    ] {
        let cert = verify_certificate(&data, &pi, &family, DEFAULT_TOLERANCE, 10_000)?;
        println!("{family}: valid = {}", cert.valid);
        for v in &cert.observations {
            println!(
                "  observation {}: observed {:.6} oracle {:.6} at {:?}",
                v.observation, v.observed_eu, v.oracle_eu, v.oracle_bundle
            );
        }
        if let Ok(first) = mrs_condition(&family, &pi, &data.observations()[0]) {
            println!("  corner condition at observation 1 holds: {}", first.holds());
        }
    }
    Ok(())
}
