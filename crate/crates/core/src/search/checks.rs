//! Desk-scale checks built on the exact searches.

use serde::Serialize;

use super::engine;
use super::state::Constraint;
use super::symmetry::TranspositionLeader;
use super::{max_p_free_with, max_trace_sperner_with, SearchBudget, SearchOptions, SearchResult};
use crate::constructions::level;
use crate::error::{Error, Result};
use crate::family::{shadow, SetFamily, TraceProblem};
use crate::mask::{GroundSize, SubsetMask};
use crate::poset::TreePoset;
use crate::tight_path::find_tight_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum InequalityStatus {
    Holds { slack: i64 },
    Violated { excess: i64 },
    Inconclusive,
}

/// `f(n,k,n-l')` against `f(n,l',n-l') + La(n, P_{k-l'+1, 2^{l'}})`.
#[derive(Debug, Clone)]
pub struct Theorem3Report {
    pub n: u32,
    pub k: usize,
    pub l_prime: u32,
    pub lhs: SearchResult,
    pub base: SearchResult,
    pub tree_free: SearchResult,
    pub tree: TreePoset,
    pub status: InequalityStatus,
}

pub fn theorem3_inequality_check(
    ground: GroundSize,
    k: usize,
    l_prime: u32,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<Theorem3Report> {
    if l_prime < 1 || (l_prime as usize) >= k {
        return Err(Error::InvalidProblem(format!(
            "need 1 <= l' < k, got l' = {l_prime}, k = {k}"
        )));
    }
    if l_prime >= 16 {
        return Err(Error::InvalidProblem("2^{l'} children is too many".into()));
    }
    let lhs_problem = TraceProblem::co_window(ground, l_prime, k)?;
    let base_problem = TraceProblem::co_window(ground, l_prime, l_prime as usize)?;
    let tree = TreePoset::complete_tree(k - l_prime as usize + 1, 1usize << l_prime)?;
    let lhs = max_trace_sperner_with(&lhs_problem, budget, options);
    let base = max_trace_sperner_with(&base_problem, budget, options);
    let tree_free = max_p_free_with(ground, &tree, budget, options);
    let status = if lhs.is_optimal() && base.is_optimal() && tree_free.is_optimal() {
        let slack = (base.best_size + tree_free.best_size) as i64 - lhs.best_size as i64;
        if slack >= 0 {
            InequalityStatus::Holds { slack }
        } else {
            InequalityStatus::Violated { excess: -slack }
        }
    } else {
        InequalityStatus::Inconclusive
    };
    Ok(Theorem3Report {
        n: ground.get(),
        k,
        l_prime,
        lhs,
        base,
        tree_free,
        tree,
        status,
    })
}

#[derive(Clone)]
struct TightPathFree {
    ground: GroundSize,
    length: usize,
}

impl Constraint for TightPathFree {
    fn can_add(&self, chosen: &[SubsetMask], candidate: SubsetMask) -> bool {
        if chosen.len() + 1 < self.length {
            return true;
        }
        let family = SetFamily::new(self.ground, chosen.iter().copied().chain([candidate]))
            .expect("level members fit");
        find_tight_path(&family, self.length)
            .expect("level subfamilies are uniform")
            .is_none()
    }

    fn add(&mut self, _member: SubsetMask) {}

    fn remove(&mut self, _member: SubsetMask) {}

    fn chain_cap(&self) -> usize {
        1
    }
}

/// Largest subfamily of the `i`-th level with no tight path of `length` steps,
/// by exhaustive include/exclude search over the level.
pub fn max_tight_path_free_subfamily(
    ground: GroundSize,
    i: u32,
    length: usize,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    if length == 0 {
        return Err(Error::InvalidProblem("tight path length must be at least 1".into()));
    }
    let members = level(ground, i)?.members().to_vec();
    if members.len() > 4096 {
        return Err(Error::Capacity {
            nodes: members.len() as u128,
            cap: 4096,
        });
    }
    let chain_of: Vec<usize> = (0..members.len()).collect();
    let leader = TranspositionLeader::new(ground.get(), &members);
    let problem = engine::Problem {
        candidates: &members,
        chain_of: &chain_of,
        chain_count: members.len(),
        constraint: TightPathFree { ground, length },
        leader: Some(&leader),
    };
    let options = SearchOptions {
        frontier_depth: 0,
        witness_limit: 1,
        ..SearchOptions::default()
    };
    let started = std::time::Instant::now();
    let outcome = engine::run(&problem, 0, budget, &options);
    Ok(super::finish(
        ground,
        SetFamily::empty(ground),
        outcome,
        &options,
        started,
    ))
}

/// Largest subfamily of the `i`-th level whose shadows are pairwise disjoint,
/// with the witness. Each member uses up `i` of the `C(n, i-1)` shadow sets,
/// which drives the pruning bound.
pub fn max_disjoint_shadow_packing(ground: GroundSize, i: u32) -> Result<(usize, SetFamily)> {
    if i == 0 {
        return Err(Error::InvalidProblem("level 0 has no shadow".into()));
    }
    let members = level(ground, i)?.members().to_vec();
    let lower: Vec<SubsetMask> = level(ground, i - 1)?.members().to_vec();
    let index: std::collections::HashMap<u64, usize> =
        lower.iter().enumerate().map(|(j, m)| (m.0, j)).collect();
    let shadows: Vec<Vec<usize>> = members
        .iter()
        .map(|&m| {
            shadow(ground, m)
                .expect("nonempty member")
                .iter()
                .map(|s| index[&s.0])
                .collect()
        })
        .collect();
    let mut search = Packing {
        shadows: &shadows,
        per_member: i as usize,
        covered: vec![false; lower.len()],
        free: lower.len(),
        chosen: Vec::new(),
        best: Vec::new(),
    };
    search.dfs(0);
    let best = search.best.iter().map(|&j| members[j]).collect::<Vec<_>>();
    Ok((best.len(), SetFamily::new(ground, best)?))
}

struct Packing<'a> {
    shadows: &'a [Vec<usize>],
    per_member: usize,
    covered: Vec<bool>,
    free: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Packing<'_> {
    fn dfs(&mut self, pos: usize) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if pos == self.shadows.len() {
            return;
        }
        let remaining = self.shadows.len() - pos;
        let bound = self.chosen.len() + remaining.min(self.free / self.per_member);
        if bound <= self.best.len() {
            return;
        }
        let sh = &self.shadows[pos];
        if sh.iter().all(|&s| !self.covered[s]) {
            for &s in sh {
                self.covered[s] = true;
            }
            self.free -= sh.len();
            self.chosen.push(pos);
            self.dfs(pos + 1);
            self.chosen.pop();
            self.free += sh.len();
            for &s in sh {
                self.covered[s] = false;
            }
        }
        self.dfs(pos + 1);
    }
}
