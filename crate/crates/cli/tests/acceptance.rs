//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{binom, contains_poset_brute, is_chain, is_trace_sperner, longest_chain_dag, SplitMix, TraceOracle};
use trace_sperner::constructions::{level, midband};
use trace_sperner::search::{
    max_p_free_with, max_tight_path_free_subfamily, max_trace_sperner_with, theorem3_inequality_check,
    InequalityStatus, SearchBudget, SearchOptions, SearchResult, SearchStatus,
};
use trace_sperner::{find_tight_path, for_each_tight_path, GroundSize, SetFamily, SubsetMask, TraceProblem, TreePoset};

type Outcome = Result<String, String>;

fn g(n: u32) -> GroundSize {
    GroundSize::new(n).unwrap()
}

fn raw(f: &SetFamily) -> Vec<u64> {
    f.iter().map(|m| m.0).collect()
}

fn fam(n: u32, sets: &[u64]) -> SetFamily {
    let ground = g(n);
    SetFamily::new(ground, sets.iter().map(|&s| SubsetMask(s & ground.full().0))).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn proven(r: &SearchResult, what: &str) -> Result<usize, String> {
    ensure(r.status == SearchStatus::ProvenOptimal, || format!("{what}: not proven optimal"))?;
    Ok(r.best_size)
}

fn trace_witnesses_valid(r: &SearchResult, p: &TraceProblem) -> Result<usize, String> {
    for w in &r.witnesses {
        ensure(w.len() == r.best_size, || format!("witness size {} != {}", w.len(), r.best_size))?;
        ensure(is_trace_sperner(&raw(w), p.n(), p.l, p.k), || format!("invalid witness for {p:?}: {w}"))?;
    }
    Ok(r.witnesses.len())
}

fn free_witnesses_valid(r: &SearchResult, parents: &[Option<usize>]) -> Result<usize, String> {
    for w in &r.witnesses {
        ensure(w.len() == r.best_size, || format!("witness size {} != {}", w.len(), r.best_size))?;
        ensure(!contains_poset_brute(&raw(w), parents), || format!("witness contains {parents:?}: {w}"))?;
    }
    Ok(r.witnesses.len())
}

fn parents_of(p: &TreePoset) -> Vec<Option<usize>> {
    (0..p.node_count()).map(|v| p.parent(v)).collect()
}

fn sperner_erdos() -> Outcome {
    let mut cases = 0;
    for n in 1..=5u32 {
        for m in 1..=n as usize {
            let mut sizes: Vec<u64> = (0..=n as u64).map(|i| binom(n as u64, i)).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            let expected: u64 = sizes[..m].iter().sum();
            let chain = TreePoset::chain(m + 1).unwrap();
            let r = max_p_free_with(g(n), &chain, &SearchBudget::default(), &SearchOptions::default());
            let got = proven(&r, &format!("La({n}, P_{})", m + 1))? as u64;
            ensure(got == expected, || format!("La({n}, P_{}) = {got}, expected {expected}", m + 1))?;
            free_witnesses_valid(&r, &parents_of(&chain))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} instances"))
}

fn midband_validity() -> Outcome {
    let mut cases = 0;
    for n in 1..=12u32 {
        for k in 2..=4usize {
            for lp in 1..(k as u32).min(n) {
                let band = midband(g(n), k, lp).unwrap();
                let p = TraceProblem::co_window(g(n), lp, k).unwrap();
                ensure(band.is_trace_sperner(&p).unwrap(), || format!("midband(n={n},k={k},l'={lp}) fails"))?;
                if n <= 8 {
                    ensure(is_trace_sperner(&raw(&band), n, n - lp, k), || {
                        format!("oracle rejects midband(n={n},k={k},l'={lp})")
                    })?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} constructions"))
}

fn theorem3() -> Outcome {
    let mut cells = Vec::new();
    for n in [3u32, 4] {
        for (k, lp) in [(2usize, 1u32), (3, 1), (3, 2)] {
            let rep = theorem3_inequality_check(g(n), k, lp, &SearchBudget::default(), &SearchOptions::default())
                .map_err(|e| e.to_string())?;
            let lhs_p = TraceProblem::co_window(g(n), lp, k).unwrap();
            let base_p = TraceProblem::co_window(g(n), lp, lp as usize).unwrap();
            trace_witnesses_valid(&rep.lhs, &lhs_p)?;
            trace_witnesses_valid(&rep.base, &base_p)?;
            free_witnesses_valid(&rep.tree_free, &parents_of(&rep.tree))?;
            match rep.status {
                InequalityStatus::Holds { .. } => cells.push(format!(
                    "n={n},k={k},l'={lp}: {}<={}+{}",
                    rep.lhs.best_size, rep.base.best_size, rep.tree_free.best_size
                )),
                other => return Err(format!("n={n} k={k} l'={lp}: {other:?}")),
            }
        }
    }
    Ok(cells.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut trees = Vec::new();
    for nodes in 1..=5 {
        trees.extend(common::rooted_trees(nodes));
    }
    let mut cases = 0;
    for n in 1..=4u32 {
        let oracle = TraceOracle::new(n);
        for l in 1..=n {
            for k in 1..=3usize {
                let expected = oracle.f(l, k);
                let p = TraceProblem::new(g(n), l, k).unwrap();
                for opts in [SearchOptions::default(), SearchOptions::exact()] {
                    let r = max_trace_sperner_with(&p, &SearchBudget::default(), &opts);
                    let got = proven(&r, &format!("f({n},{k},{l})"))?;
                    ensure(got == expected, || {
                        format!("f({n},{k},{l}) = {got}, exhaustive {expected} (symmetry {})", opts.symmetry)
                    })?;
                    trace_witnesses_valid(&r, &p)?;
                    cases += 1;
                }
            }
        }
        for parents in &trees {
            let expected = common::la_exhaustive(n, parents);
            let poset = TreePoset::from_parents(parents).unwrap();
            for opts in [SearchOptions::default(), SearchOptions::exact()] {
                let r = max_p_free_with(g(n), &poset, &SearchBudget::default(), &opts);
                let got = proven(&r, &format!("La({n}, {parents:?})"))?;
                ensure(got == expected, || format!("La({n}, {parents:?}) = {got}, exhaustive {expected}"))?;
                free_witnesses_valid(&r, parents)?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} searches against exhaustive enumeration, {} posets", trees.len()))
}

fn tight_path_base_case() -> Outcome {
    let mut cells = Vec::new();
    for n in 2..=6u32 {
        for i in 2..=4u32.min(n) {
            let r = max_tight_path_free_subfamily(g(n), i, 2, &SearchBudget::default()).map_err(|e| e.to_string())?;
            let size = proven(&r, &format!("n={n} i={i}"))? as u64;
            let cap = binom(n as u64, i as u64 - 1);
            ensure(size * i as u64 <= cap, || format!("n={n} i={i}: {size} > {cap}/{i}"))?;
            for w in &r.witnesses {
                ensure(find_tight_path(w, 2).unwrap().is_none(), || format!("witness has a tight path: {w}"))?;
            }
            cells.push(format!("({n},{i})={size}"));
        }
    }
    Ok(cells.join(" "))
}

const ALGEBRA_CASES: usize = 10_000;

fn random_problem(rng: &mut SplitMix, n: u32) -> TraceProblem {
    let l = 1 + rng.below(n as u64) as u32;
    let k = 1 + rng.below(3) as usize;
    TraceProblem::new(g(n), l, k).unwrap()
}

fn random_subfamily(f: &SetFamily, rng: &mut SplitMix) -> SetFamily {
    f.filter(|_| rng.below(2) == 0)
}

fn trace_algebra() -> Outcome {
    let mut rng = SplitMix(2024);
    let mut counts = [0usize; 4];
    for _ in 0..ALGEBRA_CASES {
        let n = 1 + rng.below(10) as u32;
        let full = g(n).full().0;
        let f = fam(n, &rng.family(n, 24));
        let (a, b) = (SubsetMask(rng.next_u64() & full), SubsetMask(rng.next_u64() & full));
        let lhs = f.trace(a).unwrap().trace(b).unwrap();
        ensure(lhs == f.trace(a.intersect(b)).unwrap(), || format!("composition fails for {f} on {a}, {b}"))?;
        counts[0] += 1;
    }
    for _ in 0..ALGEBRA_CASES {
        let n = 1 + rng.below(10) as u32;
        let f = fam(n, &rng.family(n, 16));
        let p = random_problem(&mut rng, n);
        let perm = rng.permutation(n);
        let moved = f.map(|m| SubsetMask(common::permute(m.0, &perm))).unwrap();
        let verdict = f.is_trace_sperner(&p).unwrap();
        ensure(moved.is_trace_sperner(&p).unwrap() == verdict, || format!("permutation changes verdict on {f}"))?;
        counts[1] += 1;
        ensure(f.complemented().is_trace_sperner(&p).unwrap() == verdict, || {
            format!("complement changes verdict on {f}")
        })?;
        counts[2] += 1;
    }
    for _ in 0..ALGEBRA_CASES {
        let n = 2 + rng.below(9) as u32;
        let lp = 1 + rng.below((n - 1).min(3) as u64) as u32;
        let k = lp as usize + 1 + rng.below(2) as usize;
        let p = TraceProblem::co_window(g(n), lp, k).unwrap();
        let f = random_subfamily(&midband(g(n), k, lp).unwrap(), &mut rng);
        let holds = f.is_trace_sperner(&p).unwrap();
        let sub = random_subfamily(&f, &mut rng);
        ensure(holds, || format!("subfamily of the midband fails: {f}"))?;
        ensure(sub.is_trace_sperner(&p).unwrap(), || format!("subfamily of {f} loses the property"))?;
        counts[3] += 1;
    }
    Ok(format!(
        "composition {}, permutation {}, complement {}, subfamily {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn witness_integrity() -> Outcome {
    let mut rng = SplitMix(77);
    let mut violations = 0;
    for _ in 0..4000 {
        let n = 1 + rng.below(8) as u32;
        let sets = rng.family(n, 24);
        let f = fam(n, &sets);
        let p = random_problem(&mut rng, n);
        let found = f.find_violation(&p).unwrap();
        ensure(found.is_none() == is_trace_sperner(&sets, n, p.l, p.k), || format!("verdict differs on {f}"))?;
        if let Some(v) = found {
            let links: Vec<u64> = v.chain.links().iter().map(|m| m.0).collect();
            let tr = common::trace(&sets, v.window.0);
            ensure(
                v.window.len() == p.l
                    && v.removed.0 == !v.window.0 & g(n).full().0
                    && links.len() == p.k + 1
                    && is_chain(&links)
                    && links.iter().all(|x| tr.contains(x))
                    && longest_chain_dag(&tr) > p.k,
                || format!("bad violation {v:?} for {f}"),
            )?;
            violations += 1;
        }
    }
    let mut witnesses = 0;
    for n in 1..=5u32 {
        for l in 1..=n {
            for k in 1..=4usize {
                let p = TraceProblem::new(g(n), l, k).unwrap();
                let r = max_trace_sperner_with(&p, &SearchBudget::default(), &SearchOptions::default());
                witnesses += trace_witnesses_valid(&r, &p)?;
            }
        }
        for nodes in 1..=5 {
            for parents in common::rooted_trees(nodes) {
                let poset = TreePoset::from_parents(&parents).unwrap();
                let r = max_p_free_with(g(n), &poset, &SearchBudget::default(), &SearchOptions::default());
                witnesses += free_witnesses_valid(&r, &parents)?;
            }
        }
    }
    Ok(format!("{violations} violations and {witnesses} search witnesses re-validated"))
}

fn tight_path_link() -> Outcome {
    let mut checked = 0usize;
    let mut failure: Option<String> = None;
    for n in 1..=8u32 {
        for i in 1..=4u32.min(n) {
            let lvl = level(g(n), i).unwrap();
            for m in 1..=4usize {
                for_each_tight_path(&lvl, m, |steps| {
                    let (first, last) = (steps[0], steps[steps.len() - 1]);
                    if last.minus(first).len() as usize + 1 != m {
                        return true;
                    }
                    let window = g(n).complement(first).0;
                    let traces: Vec<u64> = steps.iter().map(|s| s.0 & window).collect();
                    if !is_chain(&traces) || common::dedup(&traces).len() != m {
                        failure = Some(format!("{steps:?} on window {window:b}"));
                        return false;
                    }
                    checked += 1;
                    true
                })
                .map_err(|e| e.to_string())?;
                if let Some(f) = failure.take() {
                    return Err(f);
                }
            }
        }
    }
    let mut rng = SplitMix(31);
    let mut sampled = 0;
    for _ in 0..3000 {
        let n = 2 + rng.below(7) as u32;
        let i = 1 + rng.below(4.min(n as u64)) as u32;
        let f = random_subfamily(&level(g(n), i).unwrap(), &mut rng);
        let m = 1 + rng.below(4) as usize;
        if let Some(path) = find_tight_path(&f, m).unwrap() {
            ensure(path.steps().iter().all(|s| f.contains(*s)), || "path leaves the family".into())?;
            if path.last().minus(path.first()).len() as usize + 1 == m {
                let window = g(n).complement(path.first()).0;
                let traces: Vec<u64> = path.steps().iter().map(|s| s.0 & window).collect();
                ensure(is_chain(&traces), || format!("{:?} on {window:b}", path.steps()))?;
                sampled += 1;
            }
        }
    }
    Ok(format!("{checked} paths in full levels, {sampled} found in random subfamilies"))
}

fn cli_json(args: &[String]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let full: Vec<String> = std::iter::once("tsperner".to_string()).chain(args.iter().cloned()).collect();
    let code = tsperner::run_from_args(full, &mut out, &mut err);
    ensure(code == 0, || format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)))?;
    Ok(out)
}

fn determinism() -> Outcome {
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for n in [3u32, 4] {
        for (k, lp) in [(2usize, 1u32), (3, 1), (3, 2)] {
            for kk in [k, lp as usize] {
                invocations.push(
                    ["search", "--n", &n.to_string(), "--k", &kk.to_string(), "--lp", &lp.to_string()]
                        .map(String::from)
                        .to_vec(),
                );
            }
            let tree = format!("tree:h={},c={}", k - lp as usize + 1, 1 << lp);
            invocations.push(["la", "--n", &n.to_string(), "--poset", &tree].map(String::from).to_vec());
        }
    }
    invocations.sort();
    invocations.dedup();
    for inv in &invocations {
        let mut outputs = Vec::new();
        for threads in [1, 2, 8] {
            let mut args = vec!["--deterministic".to_string(), "--threads".into(), threads.to_string()];
            args.extend(inv.iter().cloned());
            outputs.push(cli_json(&args)?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{inv:?} differs across thread counts"))?;
    }
    Ok(format!("{} invocations byte-identical at 1, 2, 8 threads", invocations.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "chain-free regression", limit: Duration::from_secs(300), run: sperner_erdos },
        Criterion { id: 2, name: "midband validity", limit: Duration::from_secs(600), run: midband_validity },
        Criterion { id: 3, name: "inequality at small n", limit: Duration::from_secs(900), run: theorem3 },
        Criterion { id: 4, name: "oracle equivalence", limit: Duration::from_secs(600), run: oracle_equivalence },
        Criterion { id: 5, name: "tight-path-free base case", limit: Duration::from_secs(300), run: tight_path_base_case },
        Criterion { id: 6, name: "trace algebra", limit: Duration::from_secs(120), run: trace_algebra },
        Criterion { id: 7, name: "witness integrity", limit: Duration::MAX, run: witness_integrity },
        Criterion { id: 8, name: "tight-path trace chains", limit: Duration::from_secs(300), run: tight_path_link },
        Criterion { id: 9, name: "deterministic output", limit: Duration::MAX, run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("over time limit {:?}: {detail}", c.limit)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {} {} ({:.2}s): {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
