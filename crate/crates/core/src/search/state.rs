//! Incremental feasibility state for the two extremal problems.

use crate::family::TraceProblem;
use crate::mask::{masks_of_size, SubsetMask};
use crate::poset::{embeds_with_root, TreePoset};

/// Hereditary constraint maintained along a search path.
pub trait Constraint: Clone + Send + Sync {
    /// Can `candidate` join `chosen` (a canonical-order family satisfying the constraint)?
    fn can_add(&self, chosen: &[SubsetMask], candidate: SubsetMask) -> bool;
    fn add(&mut self, member: SubsetMask);
    fn remove(&mut self, member: SubsetMask);
    /// Upper bound on how many members one chain of `2^[n]` can contribute.
    fn chain_cap(&self) -> usize;
}

/// Per-window multiset of traces for the `l`-trace `k`-Sperner constraint.
#[derive(Clone)]
pub struct TraceState {
    k: usize,
    cap: usize,
    windows: Vec<u64>,
    traces: Vec<Vec<(u64, u32)>>,
}

impl TraceState {
    pub fn new(problem: &TraceProblem) -> Self {
        let windows: Vec<u64> = masks_of_size(problem.n(), problem.l).map(|m| m.0).collect();
        // With l >= k a chain of k + 1 members already shows k + 1 distinct
        // traces on a window hitting k of its steps; with l < k nothing binds.
        let cap = if (problem.l as usize) >= problem.k {
            problem.k
        } else {
            problem.n() as usize + 1
        };
        Self {
            k: problem.k,
            cap,
            traces: vec![Vec::new(); windows.len()],
            windows,
        }
    }
}

/// Longest chain through `t` among `present ∪ {t}`, assuming `t ∉ present`.
fn chain_through(present: &[(u64, u32)], t: u64, limit: usize) -> usize {
    let mut below: Vec<u64> = present
        .iter()
        .map(|&(s, _)| s)
        .filter(|&s| s & !t == 0)
        .collect();
    let mut above: Vec<u64> = present
        .iter()
        .map(|&(s, _)| s)
        .filter(|&s| t & !s == 0)
        .collect();
    let down = longest(&mut below);
    if down + 1 > limit {
        return down + 1;
    }
    down + 1 + longest(&mut above)
}

fn longest(sets: &mut [u64]) -> usize {
    if sets.len() <= 1 {
        return sets.len();
    }
    sets.sort_unstable_by_key(|s| (s.count_ones(), *s));
    let mut len = vec![1usize; sets.len()];
    let mut best = 1;
    for j in 1..sets.len() {
        for i in 0..j {
            if sets[i] & !sets[j] == 0 && sets[i] != sets[j] && len[i] + 1 > len[j] {
                len[j] = len[i] + 1;
            }
        }
        best = best.max(len[j]);
    }
    best
}

impl Constraint for TraceState {
    fn can_add(&self, _chosen: &[SubsetMask], candidate: SubsetMask) -> bool {
        for (w, present) in self.windows.iter().zip(&self.traces) {
            let t = candidate.0 & w;
            if present.iter().any(|&(s, _)| s == t) {
                continue;
            }
            if present.len() < self.k {
                continue;
            }
            if chain_through(present, t, self.k) > self.k {
                return false;
            }
        }
        true
    }

    fn add(&mut self, member: SubsetMask) {
        for (w, present) in self.windows.iter().zip(self.traces.iter_mut()) {
            let t = member.0 & w;
            match present.iter_mut().find(|(s, _)| *s == t) {
                Some((_, c)) => *c += 1,
                None => present.push((t, 1)),
            }
        }
    }

    fn remove(&mut self, member: SubsetMask) {
        for (w, present) in self.windows.iter().zip(self.traces.iter_mut()) {
            let t = member.0 & w;
            let i = present
                .iter()
                .position(|&(s, _)| s == t)
                .expect("removing a member that was never added");
            present[i].1 -= 1;
            if present[i].1 == 0 {
                present.swap_remove(i);
            }
        }
    }

    fn chain_cap(&self) -> usize {
        self.cap
    }
}

/// `P`-freeness for a tree poset. Candidates arrive in canonical order, so a
/// newcomer has no proper superset among the chosen sets and can only play
/// the root of a fresh copy.
#[derive(Clone)]
pub struct PosetState<'a> {
    poset: &'a TreePoset,
}

impl<'a> PosetState<'a> {
    pub fn new(poset: &'a TreePoset) -> Self {
        Self { poset }
    }
}

impl Constraint for PosetState<'_> {
    fn can_add(&self, chosen: &[SubsetMask], candidate: SubsetMask) -> bool {
        debug_assert!(chosen.iter().all(|&m| m < candidate));
        if chosen.len() + 1 < self.poset.node_count() {
            return true;
        }
        let mut members = chosen.to_vec();
        members.push(candidate);
        !embeds_with_root(&members, self.poset, candidate)
    }

    fn add(&mut self, _member: SubsetMask) {}

    fn remove(&mut self, _member: SubsetMask) {}

    fn chain_cap(&self) -> usize {
        // a chain of |P| sets hosts P along any linear extension
        self.poset.node_count() - 1
    }
}
