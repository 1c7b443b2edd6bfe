//! Layered state space of window assignments shared by all k-near programs.
//!
//! Level `i` holds every feasible `(occupant, prefix set)` pair for position
//! `i`. The predecessors of a state are the level `i-1` states whose prefix
//! plus occupant equals its prefix.

use std::collections::HashMap;

use super::window::{enumerate_window_sets_with, WindowAssignment, WindowGeometry, WindowMethod};
use crate::error::Result;

#[derive(Debug, Clone, Default)]
pub(crate) struct Level {
    pub states: Vec<WindowAssignment>,
    pub preds: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    pub geo: WindowGeometry,
    /// `levels[i]` for `i` in `1..=n`; `levels[0]` is empty.
    pub levels: Vec<Level>,
}

impl Lattice {
    pub fn build(n: usize, k: usize, method: WindowMethod) -> Result<Lattice> {
        let geo = WindowGeometry::new(n, k)?;
        let mut levels = vec![Level::default(); n + 1];
        let mut prev_index: HashMap<(usize, u64), usize> = HashMap::new();
        for i in 1..=n {
            let mut level = Level::default();
            for occupant in geo.occupant_range(i) {
                for mask in enumerate_window_sets_with(i, occupant, geo.k, n, method)? {
                    level.states.push(WindowAssignment {
                        center: i,
                        occupant,
                        prefix_mask: mask,
                    });
                }
            }
            level.preds = level
                .states
                .iter()
                .map(|wa| {
                    if i == 1 {
                        return Vec::new();
                    }
                    predecessor_keys(&geo, wa)
                        .into_iter()
                        .filter_map(|key| prev_index.get(&key).copied())
                        .collect()
                })
                .collect();
            prev_index = level
                .states
                .iter()
                .enumerate()
                .map(|(idx, wa)| ((wa.occupant, wa.prefix_mask), idx))
                .collect();
            levels[i] = level;
        }
        Ok(Lattice { geo, levels })
    }

    #[cfg(test)]
    pub fn n(&self) -> usize {
        self.geo.n
    }
}

/// Candidate `(occupant, mask)` keys at level `i-1` compatible with `wa`:
/// the previous occupant is some member of `wa`'s prefix and the previous
/// prefix is the rest of it.
fn predecessor_keys(geo: &WindowGeometry, wa: &WindowAssignment) -> Vec<(usize, u64)> {
    let i = wa.center;
    let prefix: Vec<usize> = geo.prefix_members(wa).collect();
    let lowest_reachable = (i - 1).saturating_sub(geo.k).max(1);
    let mut keys = Vec::new();
    for &prev in prefix.iter().filter(|&&l| l >= lowest_reachable) {
        let rest = prefix
            .iter()
            .copied()
            .filter(|&l| l != prev && l > geo.forced(i - 1));
        if let Some(mask) = geo.mask_of(i - 1, rest) {
            keys.push((prev, mask));
        }
    }
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of complete paths through the lattice.
    fn paths(l: &Lattice) -> u64 {
        let n = l.n();
        let mut counts = vec![1u64; l.levels[1].states.len()];
        for i in 2..=n {
            counts = l.levels[i]
                .preds
                .iter()
                .map(|ps| ps.iter().map(|&p| counts[p]).sum())
                .collect();
        }
        counts.iter().sum()
    }

    #[test]
    fn paths_are_k_near_permutations() {
        // 1-near permutations of n are Fibonacci numbers
        let fib = [1u64, 1, 2, 3, 5, 8, 13, 21, 34, 55];
        for n in 1..=8 {
            let l = Lattice::build(n, 1, WindowMethod::Matching).unwrap();
            assert_eq!(paths(&l), fib[n], "n={n}");
        }
        // k >= n gives all n! orders
        let l = Lattice::build(5, 5, WindowMethod::Matching).unwrap();
        assert_eq!(paths(&l), 120);
        let l = Lattice::build(6, 0, WindowMethod::Matching).unwrap();
        assert_eq!(paths(&l), 1);
    }
}
