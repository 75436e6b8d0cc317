use corner_seu::axioms::{check_garp, check_sarseu, default_max_pairs, SarseuOutcome};
use corner_seu::beliefs::{check_belief_compatibility, find_beliefs, find_beliefs_with, BeliefSearch};
use corner_seu::families::{all_family_report, mrs_condition, UtilityFamily};
use corner_seu::model::{load_dataset, Format};
use corner_seu::rational::{int, parse_rational, ratio, to_string};
use corner_seu::synth::agent_demand;
use corner_seu::{Beliefs, Dataset, Rational};
use proptest::prelude::*;

fn dataset(max_obs: usize, states: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Dataset> {
    states.prop_flat_map(move |n| {
        prop::collection::vec((prop::collection::vec(1i64..=7, n), prop::collection::vec(0i64..=4, n)), 1..=max_obs)
            .prop_filter("some demand", |rows| rows.iter().all(|(_, x)| x.iter().any(|&v| v > 0)))
            .prop_map(|rows| {
                let rows: Vec<(Vec<Rational>, Vec<Rational>)> = rows
                    .into_iter()
                    .map(|(p, x)| (p.into_iter().map(int).collect(), x.into_iter().map(int).collect()))
                    .collect();
                Dataset::from_rows(&rows).unwrap()
            })
    })
}

/// Every observation buys a single state.
fn corner_dataset(max_obs: usize, n: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec((prop::collection::vec(1i64..=12, n), 0..n, 1i64..=100), 1..=max_obs).prop_map(move |rows| {
        let rows: Vec<(Vec<Rational>, Vec<Rational>)> = rows
            .into_iter()
            .map(|(p, c, w)| {
                let mut x = vec![int(0); n];
                x[c] = int(w);
                (p.into_iter().map(int).collect(), x)
            })
            .collect();
        Dataset::from_rows(&rows).unwrap()
    })
}

fn beliefs(n: usize) -> impl Strategy<Value = Beliefs> {
    prop::collection::vec(1i64..=30, n).prop_map(|w| {
        let total: i64 = w.iter().sum();
        Beliefs::new(w.iter().map(|&v| ratio(v, total)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_print_and_parse_back(num in -10_000i64..10_000, den in 1i64..10_000) {
        let q = ratio(num, den);
        prop_assert_eq!(parse_rational(&to_string(&q)).unwrap(), q);
    }

    #[test]
    fn decimals_parse_exactly(whole in 0u32..1000, frac in 0u32..1000) {
        let text = format!("{whole}.{frac:03}");
        prop_assert_eq!(parse_rational(&text).unwrap(), ratio(i64::from(whole) * 1000 + i64::from(frac), 1000));
    }

    #[test]
    fn json_and_csv_round_trip(d in dataset(4, 1..=3)) {
        prop_assert_eq!(&load_dataset(d.to_json().as_bytes(), Format::Json).unwrap(), &d);
        prop_assert_eq!(&load_dataset(d.to_csv().as_bytes(), Format::Csv).unwrap(), &d);
    }

    #[test]
    fn sarseu_failures_carry_valid_certificates(d in dataset(3, 2..=3)) {
        if let SarseuOutcome::Fail { sequence, product, .. } = check_sarseu(&d, default_max_pairs(&d)).unwrap() {
            sequence.validate(&d).unwrap();
            prop_assert_eq!(sequence.product(&d), product.clone());
            prop_assert!(product > int(1));
        }
    }

    #[test]
    fn sarseu_implies_garp(d in dataset(4, 2..=3)) {
        if check_sarseu(&d, default_max_pairs(&d)).unwrap().passed() {
            prop_assert!(check_garp(&d).passed());
        }
    }

    #[test]
    fn recovered_beliefs_are_compatible(d in corner_dataset(5, 3)) {
        match find_beliefs(&d).unwrap() {
            BeliefSearch::Feasible { beliefs, min_slack } => {
                prop_assert!(min_slack > int(0));
                prop_assert!(check_belief_compatibility(&d, &beliefs, true).unwrap().passed());
            }
            BeliefSearch::Infeasible { witness } => {
                prop_assert!(!witness.is_empty());
                let mut rows: Vec<usize> = witness.iter().map(|c| c.observation).collect();
                rows.sort_unstable();
                rows.dedup();
                let sub = d.subset(&rows).unwrap();
                prop_assert!(!find_beliefs(&sub).unwrap().is_feasible());
            }
        }
    }

    #[test]
    fn strict_feasibility_implies_weak(d in corner_dataset(5, 2)) {
        if find_beliefs_with(&d, true).unwrap().is_feasible() {
            prop_assert!(find_beliefs_with(&d, false).unwrap().is_feasible());
        }
    }

    #[test]
    fn region_midpoints_satisfy_every_corner((d, pi) in (corner_dataset(4, 2), beliefs(2))) {
        for region in all_family_report(&pi, &d).unwrap().values() {
            if let Some(f) = region.sample() {
                for obs in d.observations() {
                    prop_assert!(mrs_condition(&f, &pi, obs).unwrap().holds(), "{} at {:?}", f, obs);
                }
            }
        }
    }

    #[test]
    fn agents_spend_their_whole_budget(
        p in prop::collection::vec(1i64..=9, 2..=3),
        w in 1i64..=200,
        which in 0usize..4,
    ) {
        let n = p.len();
        let prices: Vec<Rational> = p.into_iter().map(int).collect();
        let f = [
            UtilityFamily::Cara { beta: 0.05 },
            UtilityFamily::ShiftedPower { alpha: 0.5, c: 1.0 },
            UtilityFamily::Hyperbolic { gamma: 0.1 },
            UtilityFamily::Crra { alpha: 0.5 },
        ][which];
        let x = agent_demand(&f, &Beliefs::uniform(n), &prices, &int(w)).unwrap();
        let spent: Rational = x.iter().zip(&prices).map(|(a, b)| a * b).sum();
        prop_assert_eq!(spent, int(w));
        prop_assert!(x.iter().all(|v| v >= &int(0)));
    }
}
