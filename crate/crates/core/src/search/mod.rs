//! Exact extremal sizes `f(n, k, l)` and `La(n, P)` by branch and bound,
//! plus a local-search lower bound for larger ground sets.

mod chains;
mod checks;
mod engine;
mod heuristic;
mod state;
mod symmetry;

use std::time::Instant;

use serde::Serialize;

use crate::constructions::{band, high_levels, low_levels, midband, BandSpec};
use crate::family::{SetFamily, TraceProblem};
use crate::mask::{all_masks_canonical, SubsetMask};
use crate::poset::{contains_poset, TreePoset};

pub use chains::symmetric_chain_ids;
pub use checks::{
    max_disjoint_shadow_packing, max_tight_path_free_subfamily, theorem3_inequality_check,
    InequalityStatus, Theorem3Report,
};
pub use heuristic::heuristic_lower_bound;
pub use state::{Constraint, PosetState, TraceState};
pub use symmetry::TranspositionLeader;

/// Largest ground size searched exhaustively; beyond it only lower bounds are produced.
pub const EXACT_MAX_N: u32 = 10;

/// Resource limits for one search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchBudget {
    /// Wall-clock limit; `None` runs to completion.
    pub max_seconds: Option<f64>,
    pub max_nodes: u64,
    pub threads: usize,
    /// Schedule-independent results (subtrees do not share incumbents).
    pub deterministic: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_seconds: None,
            max_nodes: u64::MAX,
            threads: 1,
            deterministic: true,
        }
    }
}

/// Engine knobs that do not limit resources.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Lexicographic-leader pruning under transpositions of `[n]`.
    pub symmetry: bool,
    /// Depth at which subtrees are handed to workers.
    pub frontier_depth: usize,
    /// Maximum number of extremal families reported.
    pub witness_limit: usize,
    /// Seed for the local-search lower bound.
    pub seed: u64,
    /// Move attempts of the local search.
    pub heuristic_rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            symmetry: true,
            frontier_depth: 3,
            witness_limit: 4,
            seed: 0,
            heuristic_rounds: 200,
        }
    }
}

impl SearchOptions {
    /// No symmetry pruning; used when results are cross-checked against brute force.
    pub fn exact() -> Self {
        Self {
            symmetry: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    ProvenOptimal,
    LowerBoundOnly,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::ProvenOptimal => "proven-optimal",
            SearchStatus::LowerBoundOnly => "lower-bound-only",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_size: usize,
    /// Distinct families of size `best_size`.
    pub witnesses: Vec<SetFamily>,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub elapsed: f64,
}

impl SearchResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SearchStatus::ProvenOptimal
    }
}

/// Largest `l`-trace `k`-Sperner family in `2^[n]`.
pub fn max_trace_sperner(problem: &TraceProblem, budget: &SearchBudget) -> SearchResult {
    max_trace_sperner_with(problem, budget, &SearchOptions::default())
}

pub fn max_trace_sperner_with(
    problem: &TraceProblem,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> SearchResult {
    let n = problem.n();
    if n > EXACT_MAX_N {
        return heuristic_lower_bound(problem, budget, options);
    }
    let seed = best_trace_construction(problem);
    let constraint = TraceState::new(problem);
    solve_exact(n, seed, constraint, budget, options)
}

/// Largest `P`-free family in `2^[n]`.
pub fn max_p_free(ground: crate::mask::GroundSize, poset: &TreePoset, budget: &SearchBudget) -> SearchResult {
    max_p_free_with(ground, poset, budget, &SearchOptions::default())
}

pub fn max_p_free_with(
    ground: crate::mask::GroundSize,
    poset: &TreePoset,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> SearchResult {
    let n = ground.get();
    let seed = best_free_band(ground, poset);
    if n > EXACT_MAX_N {
        return SearchResult {
            best_size: seed.len(),
            witnesses: vec![seed],
            status: SearchStatus::LowerBoundOnly,
            nodes_explored: 0,
            elapsed: 0.0,
        };
    }
    solve_exact(n, seed, PosetState::new(poset), budget, options)
}

fn solve_exact<C: Constraint>(
    n: u32,
    seed: SetFamily,
    constraint: C,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> SearchResult {
    let started = Instant::now();
    let ground = seed.ground();
    let candidates = all_masks_canonical(n);
    let (ids, chain_count) = symmetric_chain_ids(n);
    let chain_of: Vec<usize> = candidates.iter().map(|m| ids[m.0 as usize]).collect();
    let leader = options
        .symmetry
        .then(|| TranspositionLeader::new(n, &candidates));
    let problem = engine::Problem {
        candidates: &candidates,
        chain_of: &chain_of,
        chain_count,
        constraint,
        leader: leader.as_ref(),
    };
    let outcome = engine::run(&problem, seed.len(), budget, options);
    finish(ground, seed, outcome, options, started)
}

fn finish(
    ground: crate::mask::GroundSize,
    seed: SetFamily,
    outcome: engine::Outcome,
    options: &SearchOptions,
    started: Instant,
) -> SearchResult {
    let mut witnesses: Vec<SetFamily> = outcome
        .witnesses
        .into_iter()
        .map(|w| SetFamily::from_canonical_unchecked(ground, w))
        .collect();
    if outcome.best == seed.len() && witnesses.len() < options.witness_limit && !witnesses.contains(&seed) {
        witnesses.push(seed);
    }
    SearchResult {
        best_size: outcome.best,
        witnesses,
        status: if outcome.exhausted {
            SearchStatus::ProvenOptimal
        } else {
            SearchStatus::LowerBoundOnly
        },
        nodes_explored: outcome.nodes,
        elapsed: started.elapsed().as_secs_f64(),
    }
}

/// The largest named construction known to satisfy the trace constraint:
/// everything when `l < k`, the middle band when `l' < k`, the low or high
/// levels when `l <= k`, and a single set otherwise.
pub(crate) fn best_trace_construction(problem: &TraceProblem) -> SetFamily {
    let g = problem.ground;
    let (l, k, lp) = (problem.l as usize, problem.k, problem.l_prime() as usize);
    let mut options: Vec<SetFamily> = Vec::new();
    if l < k && g.get() <= 16 {
        options.push(SetFamily::power_set(g));
    }
    if lp < k {
        if let Ok(m) = midband(g, problem.k, problem.l_prime()) {
            options.push(m);
        }
    }
    if l <= k {
        if let Ok(f) = low_levels(g, problem.l) {
            options.push(f);
        }
        if let Ok(f) = high_levels(g, problem.l) {
            options.push(f);
        }
    }
    options.push(SetFamily::new(g, [SubsetMask::EMPTY]).expect("empty set fits"));
    // first of the largest, so low levels win ties against their complements
    options
        .into_iter()
        .reduce(|best, f| if f.len() > best.len() { f } else { best })
        .expect("at least the single-set family")
}

/// The largest union of consecutive full levels that is `P`-free.
pub(crate) fn best_free_band(ground: crate::mask::GroundSize, poset: &TreePoset) -> SetFamily {
    let n = ground.get();
    let mut best = SetFamily::empty(ground);
    let mut best_size = 0u128;
    for width in 1..=n + 1 {
        for lo in 0..=n + 1 - width {
            let spec = BandSpec::new(ground, lo, lo + width - 1).expect("band fits");
            if spec.size() <= best_size {
                continue;
            }
            let Ok(f) = band(&spec) else { continue };
            if contains_poset(&f, poset).is_none() {
                best_size = spec.size();
                best = f;
            }
        }
    }
    best
}
