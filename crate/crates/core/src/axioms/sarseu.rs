//! The strong axiom of revealed subjective expected utility.
//!
//! A sequence of demand comparisons `x[k][ω] > x[k'][ω']` is balanced when
//! every state and every observation occurs as often on the high side as on
//! the low side. The axiom holds when every balanced sequence has
//! price-ratio product `Π p[k][ω] / p[k'][ω'] ≤ 1`.
//!
//! The price product of a sequence depends only on the multisets of high and
//! low items, so the search works over item multisets: a high multiset `H`
//! and a low multiset `L` with equal state and observation marginals, where
//! the items of `H` can be matched one-to-one onto strictly smaller items of
//! `L`. An exact simplex over the same constraints (with log-price objective
//! signs decided in rational arithmetic) settles whether any such pair exists
//! at all; bounded enumeration then finds the shortest and lexicographically
//! smallest violating sequence.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::rational::{self, Rational};
use crate::simplex::{self, LogForm, LpOutcome, ObjectiveValue};

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// `x[high_obs][high_state] > x[low_obs][low_state]`, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DemandPair {
    pub high_obs: usize,
    pub high_state: usize,
    pub low_obs: usize,
    pub low_state: usize,
}

impl DemandPair {
    pub fn new(high_obs: usize, high_state: usize, low_obs: usize, low_state: usize) -> Self {
        Self { high_obs, high_state, low_obs, low_state }
    }

    /// `p[high] / p[low]`
    pub fn price_ratio(&self, data: &Dataset) -> Rational {
        let obs = data.observations();
        &obs[self.high_obs].prices()[self.high_state] / &obs[self.low_obs].prices()[self.low_state]
    }

    /// 1-based `[k, ω, k', ω']`.
    pub fn one_based(&self) -> [usize; 4] {
        [self.high_obs + 1, self.high_state + 1, self.low_obs + 1, self.low_state + 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SarseuSequence {
    pairs: Vec<DemandPair>,
}

impl SarseuSequence {
    /// Stores the pairs sorted; order is irrelevant to the axiom.
    pub fn new(mut pairs: Vec<DemandPair>) -> Self {
        pairs.sort();
        Self { pairs }
    }

    pub fn pairs(&self) -> &[DemandPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks the strict comparison of every pair and both balance conditions.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        let obs = data.observations();
        let (k, n) = (data.len(), data.num_states());
        let mut state_balance = vec![0i64; n];
        let mut obs_balance = vec![0i64; k];
        for (i, p) in self.pairs.iter().enumerate() {
            if p.high_obs >= k || p.low_obs >= k || p.high_state >= n || p.low_state >= n {
                return Err(Error::Precondition(format!("pair {} indexes outside the dataset", i + 1)));
            }
            let hi = &obs[p.high_obs].demand()[p.high_state];
            let lo = &obs[p.low_obs].demand()[p.low_state];
            if hi <= lo {
                return Err(Error::Precondition(format!(
                    "pair {} is not a strict comparison ({hi} vs {lo})",
                    i + 1
                )));
            }
            state_balance[p.high_state] += 1;
            state_balance[p.low_state] -= 1;
            obs_balance[p.high_obs] += 1;
            obs_balance[p.low_obs] -= 1;
        }
        if let Some(s) = state_balance.iter().position(|&b| b != 0) {
            return Err(Error::Precondition(format!("state {} is unbalanced", s + 1)));
        }
        if let Some(o) = obs_balance.iter().position(|&b| b != 0) {
            return Err(Error::Precondition(format!("observation {} is unbalanced", o + 1)));
        }
        Ok(())
    }

    pub fn product(&self, data: &Dataset) -> Rational {
        self.pairs.iter().map(|p| p.price_ratio(data)).product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SarseuOutcome {
    /// No balanced sequence of at most `max_pairs` pairs has product above
    /// one. `violation_beyond_bound` carries the length of a longer
    /// violating sequence when one exists.
    Pass { violation_beyond_bound: Option<usize> },
    /// `canonical` is false when the node budget ran out before the shortest,
    /// lexicographically smallest witness was confirmed; the sequence is
    /// still a genuine violation.
    Fail { sequence: SarseuSequence, product: Rational, canonical: bool },
}

impl SarseuOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, SarseuOutcome::Pass { .. })
    }
}

/// JSON failure certificate: `{"axiom":"sarseu","sequence":[[k,w,k2,w2],...],"product":"3/1"}`.
#[derive(Clone, Debug, Serialize)]
pub struct SarseuCertificate {
    pub axiom: &'static str,
    pub sequence: Vec<[usize; 4]>,
    pub product: String,
}

impl SarseuCertificate {
    pub fn new(sequence: &SarseuSequence, product: &Rational) -> Self {
        Self {
            axiom: "sarseu",
            sequence: sequence.pairs().iter().map(DemandPair::one_based).collect(),
            product: rational::to_fraction_string(product),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SarseuOptions {
    pub max_pairs: usize,
    pub node_budget: u64,
}

impl SarseuOptions {
    pub fn for_dataset(data: &Dataset) -> Self {
        Self { max_pairs: default_max_pairs(data), node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// `2 · observations · states`
pub fn default_max_pairs(data: &Dataset) -> usize {
    2 * data.len() * data.num_states()
}

pub fn check_sarseu(data: &Dataset, max_pairs: usize) -> Result<SarseuOutcome> {
    check_sarseu_with(data, SarseuOptions { max_pairs, node_budget: DEFAULT_NODE_BUDGET })
}

pub fn check_sarseu_with(data: &Dataset, options: SarseuOptions) -> Result<SarseuOutcome> {
    if options.max_pairs < 2 {
        return Err(Error::Precondition("max_pairs must be at least 2".into()));
    }
    let items = Items::new(data);
    let Some(lp_witness) = items.exact_violation() else {
        return Ok(SarseuOutcome::Pass { violation_beyond_bound: None });
    };
    let witness_len = lp_witness.len();
    let upper = witness_len.min(options.max_pairs);
    let mut search = Search { items: &items, nodes: 0, budget: options.node_budget };

    for length in 2..=upper {
        match search.shortest_at(length) {
            Ok(Some(found)) => {
                let sequence = items.canonical_sequence(&found);
                let product = sequence.product(data);
                return Ok(SarseuOutcome::Fail { sequence, product, canonical: true });
            }
            Ok(None) => {}
            Err(OutOfBudget) => {
                if witness_len <= options.max_pairs {
                    let sequence = items.canonical_sequence(&lp_witness);
                    let product = sequence.product(data);
                    return Ok(SarseuOutcome::Fail { sequence, product, canonical: false });
                }
                return Err(Error::Inconclusive { nodes: search.nodes, max_pairs: options.max_pairs });
            }
        }
    }
    debug_assert!(witness_len > options.max_pairs, "enumeration missed the LP witness");
    if witness_len <= options.max_pairs {
        let sequence = items.canonical_sequence(&lp_witness);
        let product = sequence.product(data);
        return Ok(SarseuOutcome::Fail { sequence, product, canonical: false });
    }
    Ok(SarseuOutcome::Pass { violation_beyond_bound: Some(witness_len) })
}

/// High and low item multisets (counts indexed by item `k·n + ω`).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Multisets {
    high: Vec<u32>,
    low: Vec<u32>,
}

impl Multisets {
    fn len(&self) -> usize {
        self.high.iter().map(|&c| c as usize).sum()
    }
}

struct Items {
    n_states: usize,
    n_obs: usize,
    prices: Vec<Rational>,
    ln_prices: Vec<f64>,
    /// 0 for the largest demand level.
    rank: Vec<usize>,
    levels: usize,
}

impl Items {
    fn new(data: &Dataset) -> Self {
        let n_states = data.num_states();
        let n_obs = data.len();
        let mut prices = Vec::with_capacity(n_states * n_obs);
        let mut demand = Vec::with_capacity(n_states * n_obs);
        for o in data.observations() {
            prices.extend(o.prices().iter().cloned());
            demand.extend(o.demand().iter().cloned());
        }
        let mut distinct: Vec<Rational> = demand.clone();
        distinct.sort_by(|a, b| b.cmp(a));
        distinct.dedup();
        let rank = demand
            .iter()
            .map(|x| distinct.binary_search_by(|v| x.cmp(v)).expect("level present"))
            .collect();
        let ln_prices = prices.iter().map(rational::ln_rational).collect();
        Self { n_states, n_obs, prices, ln_prices, rank, levels: distinct.len() }
    }

    fn count(&self) -> usize {
        self.prices.len()
    }

    /// Solves the balanced-combination LP exactly and returns an integral
    /// violating pair of multisets, if any exists at any length.
    fn exact_violation(&self) -> Option<Multisets> {
        let m = self.count();
        if self.levels < 2 {
            return None;
        }
        let nvars = 2 * m + self.levels;
        let mut a: Vec<Vec<Rational>> = Vec::new();
        let mut b: Vec<Rational> = Vec::new();
        let one = Rational::one();
        let zero_row = || vec![Rational::zero(); nvars];

        for s in 0..self.n_states {
            let mut row = zero_row();
            for k in 0..self.n_obs {
                let i = k * self.n_states + s;
                row[i] = one.clone();
                row[m + i] = -one.clone();
            }
            a.push(row);
            b.push(Rational::zero());
        }
        // The last observation row is implied by the others plus the state rows.
        for k in 0..self.n_obs.saturating_sub(1) {
            let mut row = zero_row();
            for s in 0..self.n_states {
                let i = k * self.n_states + s;
                row[i] = one.clone();
                row[m + i] = -one.clone();
            }
            a.push(row);
            b.push(Rational::zero());
        }
        for level in 0..self.levels {
            let mut row = zero_row();
            for i in 0..m {
                if self.rank[i] < level {
                    row[i] = one.clone();
                }
                if self.rank[i] <= level {
                    row[m + i] = -one.clone();
                }
            }
            row[2 * m + level] = -one.clone();
            a.push(row);
            b.push(Rational::zero());
        }
        let mut norm = zero_row();
        for v in norm.iter_mut().take(m) {
            *v = one.clone();
        }
        a.push(norm);
        b.push(one.clone());

        let bases = Arc::new(self.prices.clone());
        let c: Vec<LogForm> = (0..nvars)
            .map(|j| {
                if j < m {
                    LogForm::unit(bases.clone(), j, one.clone())
                } else if j < 2 * m {
                    LogForm::unit(bases.clone(), j - m, -one.clone())
                } else {
                    LogForm::zero(bases.clone())
                }
            })
            .collect();

        let LpOutcome::Optimal { x, value } = simplex::maximize(&a, &b, &c) else {
            return None;
        };
        if value.sign() != Ordering::Greater {
            return None;
        }
        let net: Vec<Rational> = (0..m).map(|i| &x[i] - &x[m + i]).collect();
        let scale = Rational::from_integer(rational::lcm_of_denominators(&net));
        let ints: Vec<BigInt> = net.iter().map(|q| (q * &scale).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let to_count = |v: &BigInt| (v / &g).to_u32().expect("witness multiplicity fits in u32");
        let high = ints.iter().map(|v| if v.is_positive() { to_count(v) } else { 0 }).collect();
        let low = ints.iter().map(|v| if v.is_negative() { to_count(&-v) } else { 0 }).collect();
        let witness = Multisets { high, low };
        debug_assert!(self.dominates(&witness.high, &witness.low));
        debug_assert!(self.product_exceeds_one(&witness));
        Some(witness)
    }

    /// Whether the high units can be matched onto strictly smaller low units.
    fn dominates(&self, high: &[u32], low: &[u32]) -> bool {
        let mut high_by_level = vec![0i64; self.levels];
        let mut low_by_level = vec![0i64; self.levels];
        for i in 0..self.count() {
            high_by_level[self.rank[i]] += high[i] as i64;
            low_by_level[self.rank[i]] += low[i] as i64;
        }
        let mut above = 0i64;
        let mut below_or_at = 0i64;
        for level in 0..self.levels {
            below_or_at += low_by_level[level];
            if above < below_or_at {
                return false;
            }
            above += high_by_level[level];
        }
        above == below_or_at
    }

    fn product_exceeds_one(&self, sets: &Multisets) -> bool {
        let mut approx = 0.0;
        let mut magnitude = 0.0;
        for i in 0..self.count() {
            let e = sets.high[i] as f64 - sets.low[i] as f64;
            approx += e * self.ln_prices[i];
            magnitude += (e * self.ln_prices[i]).abs();
        }
        if approx < -1e-9 * magnitude {
            return false;
        }
        let coeffs: Vec<Rational> = (0..self.count())
            .map(|i| rational::int(sets.high[i] as i64 - sets.low[i] as i64))
            .collect();
        rational::log_sum_sign(&coeffs, &self.prices) == Ordering::Greater
    }

    /// Lexicographically smallest sorted pair list realizing the multisets.
    fn canonical_sequence(&self, sets: &Multisets) -> SarseuSequence {
        let mut high = sets.high.clone();
        let mut low = sets.low.clone();
        let mut pairs = Vec::with_capacity(sets.len());
        while let Some(a) = high.iter().position(|&c| c > 0) {
            let mut chosen = None;
            for b in 0..self.count() {
                if low[b] == 0 || self.rank[a] >= self.rank[b] {
                    continue;
                }
                high[a] -= 1;
                low[b] -= 1;
                let ok = self.dominates(&high, &low);
                high[a] += 1;
                low[b] += 1;
                if ok {
                    chosen = Some(b);
                    break;
                }
            }
            let b = chosen.expect("dominance guarantees a match");
            high[a] -= 1;
            low[b] -= 1;
            pairs.push(DemandPair::new(
                a / self.n_states,
                a % self.n_states,
                b / self.n_states,
                b % self.n_states,
            ));
        }
        SarseuSequence::new(pairs)
    }
}

struct OutOfBudget;

struct Search<'a> {
    items: &'a Items,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> std::result::Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// Every violating pair of disjoint multisets with `length` units each;
    /// returns the one whose canonical sequence is lexicographically smallest.
    fn shortest_at(&mut self, length: usize) -> std::result::Result<Option<Multisets>, OutOfBudget> {
        let items = self.items;
        let m = items.count();
        // The lowest level can never be on the high side.
        let eligible: Vec<usize> = (0..m).filter(|&i| items.rank[i] + 1 < items.levels).collect();
        let mut high = vec![0u32; m];
        let mut best: Option<(SarseuSequence, Multisets)> = None;
        self.choose_high(&eligible, 0, length, &mut high, &mut best)?;
        Ok(best.map(|(_, sets)| sets))
    }

    fn choose_high(
        &mut self,
        eligible: &[usize],
        from: usize,
        remaining: usize,
        high: &mut Vec<u32>,
        best: &mut Option<(SarseuSequence, Multisets)>,
    ) -> std::result::Result<(), OutOfBudget> {
        self.tick()?;
        if remaining == 0 {
            return self.choose_low(high, best);
        }
        for e in from..eligible.len() {
            let i = eligible[e];
            high[i] += 1;
            let r = self.choose_high(eligible, e, remaining - 1, high, best);
            high[i] -= 1;
            r?;
        }
        Ok(())
    }

    fn choose_low(
        &mut self,
        high: &[u32],
        best: &mut Option<(SarseuSequence, Multisets)>,
    ) -> std::result::Result<(), OutOfBudget> {
        let items = self.items;
        let n = items.n_states;
        let mut row_left = vec![0u32; n];
        let mut col_left = vec![0u32; items.n_obs];
        let mut top_rank = usize::MAX;
        for (i, &c) in high.iter().enumerate() {
            if c > 0 {
                row_left[i % n] += c;
                col_left[i / n] += c;
                top_rank = top_rank.min(items.rank[i]);
            }
        }
        let mut low = vec![0u32; items.count()];
        self.fill_low(high, 0, top_rank, &mut row_left, &mut col_left, &mut low, best)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_low(
        &mut self,
        high: &[u32],
        i: usize,
        top_rank: usize,
        row_left: &mut [u32],
        col_left: &mut [u32],
        low: &mut Vec<u32>,
        best: &mut Option<(SarseuSequence, Multisets)>,
    ) -> std::result::Result<(), OutOfBudget> {
        self.tick()?;
        let items = self.items;
        let n = items.n_states;
        if i == items.count() {
            if row_left.iter().all(|&r| r == 0) && items.dominates(high, low) {
                let sets = Multisets { high: high.to_vec(), low: low.clone() };
                if items.product_exceeds_one(&sets) {
                    let seq = items.canonical_sequence(&sets);
                    if best.as_ref().is_none_or(|(b, _)| seq.pairs < b.pairs) {
                        *best = Some((seq, sets));
                    }
                }
            }
            return Ok(());
        }
        let (obs, state) = (i / n, i % n);
        let last_in_obs = state == n - 1;
        let usable = high[i] == 0 && items.rank[i] > top_rank;
        let cap = if usable { row_left[state].min(col_left[obs]) } else { 0 };
        let range: Vec<u32> = if last_in_obs {
            // The observation's column must be exhausted here.
            if col_left[obs] <= cap {
                vec![col_left[obs]]
            } else {
                Vec::new()
            }
        } else {
            (0..=cap).collect()
        };
        for c in range {
            row_left[state] -= c;
            col_left[obs] -= c;
            low[i] = c;
            let r = self.fill_low(high, i + 1, top_rank, row_left, col_left, low, best);
            low[i] = 0;
            row_left[state] += c;
            col_left[obs] += c;
            r?;
        }
        Ok(())
    }
}
