#![allow(dead_code)]

use corner_seu::rational::{int, ratio};
use corner_seu::{Beliefs, Dataset, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// `SEU_CORNER_SEED` when set, so failures can be replayed.
pub fn seed() -> u64 {
    std::env::var("SEU_CORNER_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn example() -> Dataset {
    Dataset::from_rows(&[
        (vec![int(1), int(4)], vec![int(100), int(0)]),
        (vec![int(4), int(1)], vec![int(0), int(80)]),
        (vec![int(3), int(1)], vec![int(0), int(60)]),
    ])
    .unwrap()
}

pub fn quarter() -> Beliefs {
    Beliefs::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap()
}

/// Full-support beliefs with integer weights in `1..=20`.
pub fn random_beliefs(rng: &mut impl Rng, n: usize) -> Beliefs {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = w.iter().sum();
    Beliefs::new(w.iter().map(|&v| ratio(v, total)).collect()).unwrap()
}

/// Small integer prices and demands, so ties and exact-one products are common.
pub fn random_dataset(rng: &mut impl Rng, max_obs: usize, max_states: usize) -> Dataset {
    let n = rng.gen_range(2..=max_states);
    let k = rng.gen_range(1..=max_obs);
    let rows: Vec<(Vec<Rational>, Vec<Rational>)> = (0..k)
        .map(|_| {
            let prices = (0..n).map(|_| int(rng.gen_range(1..=6))).collect();
            let mut demand: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(0..=4))).collect();
            if demand.iter().all(|d| d == &int(0)) {
                demand[rng.gen_range(0..n)] = int(rng.gen_range(1..=4));
            }
            (prices, demand)
        })
        .collect();
    Dataset::from_rows(&rows).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}
