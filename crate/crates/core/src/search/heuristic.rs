use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{Constraint, TraceState};
use super::{best_trace_construction, SearchBudget, SearchOptions, SearchResult, SearchStatus};
use crate::constructions::BandSpec;
use crate::family::{SetFamily, TraceProblem};
use crate::mask::{all_masks_canonical, binomial, masks_of_size, SubsetMask};

/// Candidate pools above this size are not searched; the start family is returned.
const POOL_CAP: u128 = 1 << 14;
/// Candidates tried per move.
const TRIES_PER_MOVE: usize = 64;

/// Local search from the best named construction: a greedy fill, then
/// drop-one/refill moves. The status is always lower-bound-only.
pub fn heuristic_lower_bound(
    problem: &TraceProblem,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> SearchResult {
    let started = Instant::now();
    let start = if problem.n() <= 16 {
        best_trace_construction(problem)
    } else {
        SetFamily::empty(problem.ground)
    };
    let Some(mut pool) = candidate_pool(problem) else {
        return SearchResult {
            best_size: start.len(),
            witnesses: vec![start],
            status: SearchStatus::LowerBoundOnly,
            nodes_explored: 0,
            elapsed: started.elapsed().as_secs_f64(),
        };
    };
    let deadline = (!budget.deterministic)
        .then_some(budget.max_seconds)
        .flatten()
        .map(|s| started + Duration::from_secs_f64(s));
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut state = TraceState::new(problem);
    let mut current: Vec<SubsetMask> = start.members().to_vec();
    for &m in &current {
        state.add(m);
    }
    let mut moves: u64 = 0;

    pool.shuffle(&mut rng);
    fill(&mut state, &mut current, &pool, usize::MAX, &mut moves);
    let mut best = current.clone();

    let rounds = (options.heuristic_rounds as u64).min(budget.max_nodes);
    for _ in 0..rounds {
        if deadline.is_some_and(|d| Instant::now() >= d) || current.is_empty() {
            break;
        }
        let victim = current.swap_remove(rng.gen_range(0..current.len()));
        state.remove(victim);
        let offset = rng.gen_range(0..pool.len());
        let window: Vec<SubsetMask> = pool
            .iter()
            .cycle()
            .skip(offset)
            .take(TRIES_PER_MOVE.min(pool.len()))
            .copied()
            .filter(|&c| c != victim)
            .collect();
        let added = fill(&mut state, &mut current, &window, usize::MAX, &mut moves);
        if added == 0 {
            state.add(victim);
            current.push(victim);
        }
        if current.len() > best.len() {
            best = current.clone();
            log::info!(
                "incumbent size={} elapsed={:.3}s nodes={}",
                best.len(),
                started.elapsed().as_secs_f64(),
                moves
            );
        }
    }

    let family = SetFamily::new(problem.ground, best).expect("pool respects ground");
    SearchResult {
        best_size: family.len(),
        witnesses: vec![family],
        status: SearchStatus::LowerBoundOnly,
        nodes_explored: moves,
        elapsed: started.elapsed().as_secs_f64(),
    }
}

fn fill(
    state: &mut TraceState,
    current: &mut Vec<SubsetMask>,
    pool: &[SubsetMask],
    limit: usize,
    moves: &mut u64,
) -> usize {
    let mut added = 0;
    for &c in pool {
        if added >= limit {
            break;
        }
        *moves += 1;
        if current.contains(&c) {
            continue;
        }
        if state.chain_cap() > 0 && state.can_add(current, c) {
            state.add(c);
            current.push(c);
            added += 1;
        }
    }
    added
}

/// Every mask for small `n`; otherwise the levels around the middle band.
fn candidate_pool(problem: &TraceProblem) -> Option<Vec<SubsetMask>> {
    let n = problem.n();
    if n <= 10 {
        return Some(all_masks_canonical(n));
    }
    let (lo, hi) = match BandSpec::middle(problem.ground, problem.k, problem.l_prime()) {
        Some(b) => (b.lo.saturating_sub(1), (b.hi + 1).min(n)),
        None => ((n / 2).saturating_sub(1), (n / 2 + 1).min(n)),
    };
    let size: u128 = (lo..=hi).map(|i| binomial(n as u64, i as i64)).sum();
    if size > POOL_CAP {
        return None;
    }
    Some((lo..=hi).flat_map(|i| masks_of_size(n, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::middle_band_size;
    use crate::mask::GroundSize;

    fn g(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    #[test]
    fn never_below_the_middle_band() {
        for n in 2..=9u32 {
            for k in 2..=3usize {
                for lp in 1..(k as u32).min(n) {
                    let p = TraceProblem::co_window(g(n), lp, k).unwrap();
                    let r = heuristic_lower_bound(&p, &SearchBudget::default(), &SearchOptions::default());
                    assert_eq!(r.status, SearchStatus::LowerBoundOnly);
                    assert!(r.best_size as u128 >= middle_band_size(n, k, lp));
                    assert!(r.witnesses[0].is_trace_sperner(&p).unwrap());
                }
            }
        }
    }

    #[test]
    fn matches_exact_on_tiny_case() {
        let p = TraceProblem::new(g(2), 1, 1).unwrap();
        let r = heuristic_lower_bound(&p, &SearchBudget::default(), &SearchOptions::default());
        assert_eq!(r.best_size, 1);
    }

    #[test]
    fn same_seed_same_witness() {
        let p = TraceProblem::co_window(g(7), 2, 2).unwrap();
        let opts = SearchOptions {
            seed: 11,
            ..SearchOptions::default()
        };
        let a = heuristic_lower_bound(&p, &SearchBudget::default(), &opts);
        let b = heuristic_lower_bound(&p, &SearchBudget::default(), &opts);
        assert_eq!(a.witnesses, b.witnesses);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn large_ground_falls_back_to_construction() {
        let p = TraceProblem::co_window(g(40), 1, 3).unwrap();
        let r = heuristic_lower_bound(&p, &SearchBudget::default(), &SearchOptions::default());
        assert_eq!(r.best_size, 0);
        assert_eq!(r.status, SearchStatus::LowerBoundOnly);
    }
}
