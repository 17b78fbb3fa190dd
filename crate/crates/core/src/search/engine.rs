//! Generic include/exclude branch and bound over candidate masks.
//!
//! The bound adds, for every chain of a symmetric chain decomposition, the
//! smaller of its spare capacity and its undecided candidates. Subtrees are
//! handed to workers at a fixed depth; in deterministic mode every subtree
//! runs against the seeded incumbent only, so results do not depend on
//! scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::state::Constraint;
use super::symmetry::TranspositionLeader;
use super::{SearchBudget, SearchOptions};
use crate::mask::SubsetMask;

pub(crate) struct Problem<'a, C> {
    pub candidates: &'a [SubsetMask],
    pub chain_of: &'a [usize],
    pub chain_count: usize,
    pub constraint: C,
    pub leader: Option<&'a TranspositionLeader>,
}

pub(crate) struct Outcome {
    pub best: usize,
    /// Families of size `best` found by the search, in discovery order.
    pub witnesses: Vec<Vec<SubsetMask>>,
    pub exhausted: bool,
    pub nodes: u64,
}

struct Limits {
    deadline: Option<Instant>,
    max_nodes: u64,
}

struct Worker<'p, 'a, C> {
    problem: &'p Problem<'a, C>,
    state: C,
    chosen: Vec<SubsetMask>,
    decided: Vec<bool>,
    chain_used: Vec<usize>,
    chain_left: Vec<usize>,
    cap: usize,
    best: usize,
    witnesses: Vec<Vec<SubsetMask>>,
    witness_limit: usize,
    shared: Option<&'p AtomicUsize>,
    nodes: u64,
    limits: &'p Limits,
    aborted: bool,
    started: Instant,
    /// Frontier mode: stop at this depth and record the prefix instead.
    frontier_depth: Option<usize>,
    frontier: Vec<Vec<bool>>,
}

impl<'p, 'a, C: Constraint> Worker<'p, 'a, C> {
    fn new(
        problem: &'p Problem<'a, C>,
        incumbent: usize,
        witness_limit: usize,
        shared: Option<&'p AtomicUsize>,
        limits: &'p Limits,
        started: Instant,
    ) -> Self {
        let mut chain_left = vec![0usize; problem.chain_count];
        for &c in problem.chain_of {
            chain_left[c] += 1;
        }
        Self {
            problem,
            state: problem.constraint.clone(),
            chosen: Vec::new(),
            decided: vec![false; problem.candidates.len()],
            chain_used: vec![0; problem.chain_count],
            chain_left,
            cap: problem.constraint.chain_cap(),
            best: incumbent,
            witnesses: Vec::new(),
            witness_limit,
            shared,
            nodes: 0,
            limits,
            aborted: false,
            started,
            frontier_depth: None,
            frontier: Vec::new(),
        }
    }

    fn include(&mut self, pos: usize) {
        let c = self.problem.candidates[pos];
        let chain = self.problem.chain_of[pos];
        self.state.add(c);
        self.chosen.push(c);
        self.chain_used[chain] += 1;
        self.decided[pos] = true;
    }

    fn exclude_undo(&mut self, pos: usize) {
        let c = self.problem.candidates[pos];
        let chain = self.problem.chain_of[pos];
        self.state.remove(c);
        self.chosen.pop();
        self.chain_used[chain] -= 1;
        self.decided[pos] = false;
    }

    /// Replays a frontier prefix without searching.
    fn replay(&mut self, prefix: &[bool]) {
        for (pos, &take) in prefix.iter().enumerate() {
            self.chain_left[self.problem.chain_of[pos]] -= 1;
            if take {
                self.include(pos);
            }
        }
    }

    fn upper_bound(&self) -> usize {
        self.chosen.len()
            + self
                .chain_used
                .iter()
                .zip(&self.chain_left)
                .map(|(&used, &left)| self.cap.saturating_sub(used).min(left))
                .sum::<usize>()
    }

    fn target(&self) -> usize {
        match self.shared {
            Some(s) => self.best.max(s.load(Ordering::Relaxed)),
            None => self.best,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.nodes >= self.limits.max_nodes {
            self.aborted = true;
        } else if self.nodes & 1023 == 0 {
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn record_leaf(&mut self) {
        let size = self.chosen.len();
        if size > self.best {
            self.best = size;
            self.witnesses.clear();
            self.witnesses.push(self.chosen.clone());
            if let Some(s) = self.shared {
                s.fetch_max(size, Ordering::Relaxed);
            }
            log::info!(
                "incumbent size={} elapsed={:.3}s nodes={}",
                size,
                self.started.elapsed().as_secs_f64(),
                self.nodes
            );
        } else if size == self.best && self.witnesses.len() < self.witness_limit {
            self.witnesses.push(self.chosen.clone());
        }
    }

    fn dfs(&mut self, pos: usize) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        if Some(pos) == self.frontier_depth {
            self.frontier.push(self.decided[..pos].to_vec());
            return;
        }
        if pos == self.problem.candidates.len() {
            self.record_leaf();
            return;
        }
        let ub = self.upper_bound();
        let target = self.target();
        if ub < target
            || (ub == target && (self.best < target || self.witnesses.len() >= self.witness_limit))
        {
            return;
        }
        let c = self.problem.candidates[pos];
        let chain = self.problem.chain_of[pos];
        self.chain_left[chain] -= 1;
        if self.chain_used[chain] < self.cap && self.state.can_add(&self.chosen, c) {
            self.include(pos);
            if self.leader_ok(pos) {
                self.dfs(pos + 1);
            }
            self.exclude_undo(pos);
        }
        if self.leader_ok(pos) {
            self.dfs(pos + 1);
        }
        self.chain_left[chain] += 1;
    }

    fn leader_ok(&self, pos: usize) -> bool {
        self.problem
            .leader
            .is_none_or(|l| l.is_leader(&self.decided, pos))
    }
}

/// Runs the search from the empty family with `incumbent` as the size to beat.
pub(crate) fn run<C: Constraint>(
    problem: &Problem<'_, C>,
    incumbent: usize,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Outcome {
    let started = Instant::now();
    let limits_for = |max_nodes: u64| Limits {
        deadline: budget
            .max_seconds
            .map(|s| started + std::time::Duration::from_secs_f64(s)),
        max_nodes,
    };

    let depth = options.frontier_depth.min(problem.candidates.len());
    let front_limits = limits_for(budget.max_nodes);
    let mut front = Worker::new(problem, incumbent, options.witness_limit, None, &front_limits, started);
    front.frontier_depth = Some(depth);
    front.dfs(0);
    let mut nodes = front.nodes;
    if front.aborted {
        return Outcome {
            best: incumbent,
            witnesses: Vec::new(),
            exhausted: false,
            nodes,
        };
    }
    let prefixes = std::mem::take(&mut front.frontier);
    if prefixes.is_empty() {
        return Outcome {
            best: incumbent,
            witnesses: Vec::new(),
            exhausted: true,
            nodes,
        };
    }

    let per_subtree = budget
        .max_nodes
        .saturating_sub(nodes)
        .div_ceil(prefixes.len() as u64)
        .max(1);
    let limits = limits_for(per_subtree);
    let shared = AtomicUsize::new(incumbent);
    let shared_ref = (!budget.deterministic).then_some(&shared);

    let solve = |prefix: &Vec<bool>| {
        let mut w = Worker::new(problem, incumbent, options.witness_limit, shared_ref, &limits, started);
        w.replay(prefix);
        w.dfs(prefix.len());
        (w.best, w.witnesses, w.aborted, w.nodes)
    };
    let results: Vec<_> = if budget.threads <= 1 {
        prefixes.iter().map(solve).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(budget.threads)
            .build()
            .expect("thread pool");
        pool.install(|| prefixes.par_iter().map(solve).collect())
    };

    let best = results.iter().map(|r| r.0).max().unwrap_or(incumbent).max(incumbent);
    let mut witnesses = Vec::new();
    let mut exhausted = true;
    for (size, ws, aborted, n) in results {
        nodes += n;
        exhausted &= !aborted;
        if size == best {
            for w in ws {
                if witnesses.len() < options.witness_limit && w.len() == best {
                    witnesses.push(w);
                }
            }
        }
    }
    Outcome {
        best,
        witnesses,
        exhausted,
        nodes,
    }
}
