//! Revealed preference relations and the GARP test.

use std::collections::VecDeque;

use serde::Serialize;

use crate::model::{dot, Dataset};

/// `weak[i][j]`: bundle `i` was chosen when bundle `j` was affordable.
/// `strict[i][j]`: bundle `j` was strictly cheaper than bundle `i` at `i`'s prices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevealedPreference {
    weak: Vec<Vec<bool>>,
    strict: Vec<Vec<bool>>,
}

impl RevealedPreference {
    pub fn new(data: &Dataset) -> Self {
        let obs = data.observations();
        let wealth: Vec<_> = obs.iter().map(|o| o.wealth()).collect();
        let mut weak = vec![vec![false; obs.len()]; obs.len()];
        let mut strict = vec![vec![false; obs.len()]; obs.len()];
        for (i, oi) in obs.iter().enumerate() {
            for (j, oj) in obs.iter().enumerate() {
                let cost = dot(oi.prices(), oj.demand());
                weak[i][j] = wealth[i] >= cost;
                strict[i][j] = wealth[i] > cost;
            }
        }
        Self { weak, strict }
    }

    pub fn len(&self) -> usize {
        self.weak.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weak.is_empty()
    }

    pub fn weak(&self, i: usize, j: usize) -> bool {
        self.weak[i][j]
    }

    pub fn strict(&self, i: usize, j: usize) -> bool {
        self.strict[i][j]
    }

    /// Transitive closure of the weak relation (Warshall).
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut reach = self.weak.clone();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    /// Shortest weak path `from → … → to`, preferring low indices.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let n = self.len();
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for v in 0..n {
                if self.weak[u][v] && prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GarpOutcome {
    Pass,
    /// Observation indices `c0 → c1 → … → c0`, each weakly revealed preferred
    /// to the next, with the first edge strict.
    Fail { cycle: Vec<usize> },
}

impl GarpOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, GarpOutcome::Pass)
    }
}

pub fn check_garp(data: &Dataset) -> GarpOutcome {
    let rel = RevealedPreference::new(data);
    let reach = rel.closure();
    for s in 0..rel.len() {
        for t in 0..rel.len() {
            if rel.strict(s, t) && reach[t][s] {
                let mut cycle = vec![s];
                if t != s {
                    let back = rel.path(t, s);
                    cycle.extend_from_slice(&back[..back.len() - 1]);
                }
                return GarpOutcome::Fail { cycle };
            }
        }
    }
    GarpOutcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn data(rows: &[(&[i64], &[i64])]) -> Dataset {
        Dataset::from_rows(
            &rows
                .iter()
                .map(|(p, x)| (p.iter().map(|&v| int(v)).collect(), x.iter().map(|&v| int(v)).collect()))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn example_dataset_passes() {
        let d = data(&[(&[1, 4], &[100, 0]), (&[4, 1], &[0, 80]), (&[3, 1], &[0, 60])]);
        assert_eq!(check_garp(&d), GarpOutcome::Pass);
    }

    #[test]
    fn single_observation_passes() {
        assert!(check_garp(&data(&[(&[2, 3], &[1, 5])])).passed());
    }

    #[test]
    fn two_cycle_is_reported() {
        // p1·x2 = 2 < 3 and p2·x1 = 3 < 8
        let d = data(&[(&[1, 1], &[3, 0]), (&[1, 4], &[0, 2])]);
        let rel = RevealedPreference::new(&d);
        assert!(rel.strict(0, 1) && rel.strict(1, 0));
        assert_eq!(check_garp(&d), GarpOutcome::Fail { cycle: vec![0, 1] });
    }

    #[test]
    fn longer_cycle_through_weak_edges() {
        // 0 ≻ 1 strictly, 1 ≽ 2 and 2 ≽ 0 weakly; no 2-cycle violates.
        let d = data(&[(&[5, 3, 2], &[2, 4, 4]), (&[2, 3, 1], &[3, 2, 4]), (&[5, 2, 3], &[4, 2, 2])]);
        match check_garp(&d) {
            GarpOutcome::Fail { cycle } => {
                let rel = RevealedPreference::new(&d);
                for w in 0..cycle.len() {
                    assert!(rel.weak(cycle[w], cycle[(w + 1) % cycle.len()]));
                }
                assert!(rel.strict(cycle[0], cycle[1 % cycle.len()]));
                assert_eq!(cycle.len(), 3);
            }
            GarpOutcome::Pass => panic!("expected a violation"),
        }
    }

    #[test]
    fn strict_implies_weak() {
        let d = data(&[(&[1, 2], &[3, 1]), (&[2, 1], &[1, 3]), (&[1, 1], &[2, 2])]);
        let rel = RevealedPreference::new(&d);
        for i in 0..3 {
            for j in 0..3 {
                assert!(!rel.strict(i, j) || rel.weak(i, j));
            }
        }
    }
}
