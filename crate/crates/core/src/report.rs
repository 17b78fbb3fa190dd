//! Result documents (JSON canonical, CSV projection) and conjecture tables.

use serde::Serialize;

use crate::constructions::middle_band_size;
use crate::error::Result;
use crate::family::{SetFamily, TraceProblem, Violation};
use crate::mask::{binomial, GroundSize};
use crate::poset::TreePoset;
use crate::search::{max_trace_sperner_with, SearchBudget, SearchOptions, SearchResult};
use crate::text::{write_family, write_poset};

/// What a search document describes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemDescriptor {
    TraceSperner { n: u32, k: usize, l: u32, l_prime: u32 },
    PFree { n: u32, poset: String },
}

impl ProblemDescriptor {
    pub fn trace(problem: &TraceProblem) -> Self {
        Self::TraceSperner {
            n: problem.n(),
            k: problem.k,
            l: problem.l,
            l_prime: problem.l_prime(),
        }
    }

    /// Uses the `chain:`/`tree:` shorthand when the poset has one, else the poset text format.
    pub fn p_free(ground: GroundSize, poset: &TreePoset) -> Self {
        Self::PFree {
            n: ground.get(),
            poset: poset.shorthand().unwrap_or_else(|| write_poset(poset)),
        }
    }
}

/// Engine settings echoed into documents. The worker count is left out so
/// deterministic documents do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineConfig {
    pub max_seconds: Option<f64>,
    pub max_nodes: Option<u64>,
    pub deterministic: bool,
    pub symmetry: bool,
    pub frontier_depth: usize,
    pub witness_limit: usize,
    pub seed: u64,
}

impl EngineConfig {
    pub fn new(budget: &SearchBudget, options: &SearchOptions) -> Self {
        Self {
            max_seconds: budget.max_seconds,
            max_nodes: (budget.max_nodes != u64::MAX).then_some(budget.max_nodes),
            deterministic: budget.deterministic,
            symmetry: options.symmetry,
            frontier_depth: options.frontier_depth,
            witness_limit: options.witness_limit,
            seed: options.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchDocument {
    pub problem: ProblemDescriptor,
    pub best_size: usize,
    pub status: &'static str,
    /// Each witness in the family text format.
    pub witnesses: Vec<String>,
    pub nodes_explored: u64,
    /// `null` in deterministic mode so documents are byte-stable.
    pub elapsed_seconds: Option<f64>,
    pub engine_config: EngineConfig,
}

impl SearchDocument {
    pub fn new(
        problem: ProblemDescriptor,
        result: &SearchResult,
        budget: &SearchBudget,
        options: &SearchOptions,
    ) -> Self {
        Self {
            problem,
            best_size: result.best_size,
            status: result.status.as_str(),
            witnesses: result.witnesses.iter().map(write_family).collect(),
            nodes_explored: result.nodes_explored,
            elapsed_seconds: (!budget.deterministic).then_some(result.elapsed),
            engine_config: EngineConfig::new(budget, options),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    /// Column order: kind, n, k, l, l_prime, poset, best_size, status,
    /// nodes_explored, elapsed_seconds, witness_count.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SEARCH_CSV_HEADER).expect("in-memory write");
        let (kind, n, k, l, lp, poset) = match &self.problem {
            ProblemDescriptor::TraceSperner { n, k, l, l_prime } => (
                "trace-sperner",
                n.to_string(),
                k.to_string(),
                l.to_string(),
                l_prime.to_string(),
                String::new(),
            ),
            ProblemDescriptor::PFree { n, poset } => (
                "p-free",
                n.to_string(),
                String::new(),
                String::new(),
                String::new(),
                poset.clone(),
            ),
        };
        w.write_record([
            kind.to_string(),
            n,
            k,
            l,
            lp,
            poset,
            self.best_size.to_string(),
            self.status.to_string(),
            self.nodes_explored.to_string(),
            self.elapsed_seconds.map(|e| format!("{e:.6}")).unwrap_or_default(),
            self.witnesses.len().to_string(),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "problem: {}\nbest_size: {}\nstatus: {}\nnodes_explored: {}\n",
            serde_json::to_string(&self.problem).expect("serializes"),
            self.best_size,
            self.status,
            self.nodes_explored
        );
        if let Some(e) = self.elapsed_seconds {
            out.push_str(&format!("elapsed_seconds: {e:.3}\n"));
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            out.push_str(&format!("witness {}:\n{}", i + 1, w));
        }
        out
    }
}

pub const SEARCH_CSV_HEADER: [&str; 11] = [
    "kind",
    "n",
    "k",
    "l",
    "l_prime",
    "poset",
    "best_size",
    "status",
    "nodes_explored",
    "elapsed_seconds",
    "witness_count",
];

/// Outcome of checking one family against one trace problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckDocument {
    pub problem: ProblemDescriptor,
    pub family_size: usize,
    pub holds: bool,
    pub violation: Option<ViolationDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationDocument {
    /// The `l`-window, as a set line.
    pub window: String,
    /// The removed `l'`-set, as a set line.
    pub removed: String,
    /// The chain of traces in family text format.
    pub chain: String,
}

impl CheckDocument {
    pub fn new(family: &SetFamily, problem: &TraceProblem, violation: Option<&Violation>) -> Self {
        Self {
            problem: ProblemDescriptor::trace(problem),
            family_size: family.len(),
            holds: violation.is_none(),
            violation: violation.map(|v| ViolationDocument {
                window: v.window.to_string(),
                removed: v.removed.to_string(),
                chain: write_family(
                    &SetFamily::new(family.ground(), v.chain.links().iter().copied())
                        .expect("trace chain lives in the ground set"),
                ),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "k", "l", "l_prime", "family_size", "holds", "window", "removed"])
            .expect("in-memory write");
        let ProblemDescriptor::TraceSperner { n, k, l, l_prime } = &self.problem else {
            unreachable!("check documents describe trace problems")
        };
        let v = self.violation.as_ref();
        w.write_record([
            n.to_string(),
            k.to_string(),
            l.to_string(),
            l_prime.to_string(),
            self.family_size.to_string(),
            self.holds.to_string(),
            v.map(|v| v.window.clone()).unwrap_or_default(),
            v.map(|v| v.removed.clone()).unwrap_or_default(),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        match &self.violation {
            None => "holds\n".to_string(),
            Some(v) => format!(
                "violation\nwindow: {}\nremoved: {}\nchain:\n{}",
                v.window, v.removed, v.chain
            ),
        }
    }
}

/// `num / den` with `digits` decimals, truncated, by exact integer division.
pub fn decimal_ratio(num: u128, den: u128, digits: usize) -> String {
    assert!(den > 0, "zero denominator");
    let whole = num / den;
    let mut rem = num % den;
    let mut out = whole.to_string();
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            out.push(char::from(b'0' + (rem / den) as u8));
            rem %= den;
        }
    }
    out
}

/// One `(n, k, l')` cell of the conjecture table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub k: usize,
    pub l_prime: u32,
    /// `f(n, k, n - l')` when the search proved optimality.
    pub exact_f: Option<usize>,
    /// Best size found, exact or not.
    pub best_size: usize,
    pub status: &'static str,
    /// `Σ_{i=1}^{k-l'} C(n, ⌊(n-(k-l'))/2 + i⌋)`; zero when `k <= l'`.
    pub conjecture1_rhs: u128,
    pub midband_size: u128,
    /// `best_size / C(n, ⌊n/2⌋)`.
    pub ratio_to_central_binomial: String,
    /// `n^{l'-k+1} · best_size / C(n, ⌊n/2⌋)`, only for `k <= l'`.
    pub conjecture3_normalized: Option<String>,
}

const RATIO_DIGITS: usize = 6;

/// Rows for every `1 <= l' < n`, `1 <= k <= k_max`, `l' <= k_max`, `n <= n_max`.
pub fn conjecture_table(
    n_max: u32,
    k_max: usize,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let ground = GroundSize::new(n)?;
        for lp in 1..n.min(k_max as u32 + 1) {
            for k in 1..=k_max {
                let problem = TraceProblem::co_window(ground, lp, k)?;
                let result = max_trace_sperner_with(&problem, budget, options);
                rows.push(report_row(&problem, &result));
            }
        }
    }
    Ok(rows)
}

pub fn report_row(problem: &TraceProblem, result: &SearchResult) -> ReportRow {
    let (n, k, lp) = (problem.n(), problem.k, problem.l_prime());
    let central = binomial(n as u64, (n / 2) as i64);
    let best = result.best_size as u128;
    let rhs = middle_band_size(n, k, lp);
    let conjecture3_normalized = (k <= lp as usize).then(|| {
        let scale = (n as u128).pow(lp + 1 - k as u32);
        decimal_ratio(scale * best, central, RATIO_DIGITS)
    });
    ReportRow {
        n,
        k,
        l_prime: lp,
        exact_f: result.is_optimal().then_some(result.best_size),
        best_size: result.best_size,
        status: result.status.as_str(),
        conjecture1_rhs: rhs,
        midband_size: rhs,
        ratio_to_central_binomial: decimal_ratio(best, central, RATIO_DIGITS),
        conjecture3_normalized,
    }
}

pub const TABLE_CSV_HEADER: [&str; 10] = [
    "n",
    "k",
    "l_prime",
    "exact_f",
    "best_size",
    "status",
    "conjecture1_rhs",
    "midband_size",
    "ratio_to_central_binomial",
    "conjecture3_normalized",
];

pub fn table_to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

pub fn table_to_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.l_prime.to_string(),
            r.exact_f.map(|v| v.to_string()).unwrap_or_default(),
            r.best_size.to_string(),
            r.status.to_string(),
            r.conjecture1_rhs.to_string(),
            r.midband_size.to_string(),
            r.ratio_to_central_binomial.clone(),
            r.conjecture3_normalized.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn table_to_text(rows: &[ReportRow]) -> String {
    let mut out = format!(
        "{:>3} {:>3} {:>3} {:>8} {:>6} {:>16} {:>8} {:>12} {:>12}\n",
        "n", "k", "l'", "f", "best", "status", "conj1", "ratio", "conj3"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>3} {:>3} {:>3} {:>8} {:>6} {:>16} {:>8} {:>12} {:>12}\n",
            r.n,
            r.k,
            r.l_prime,
            r.exact_f.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            r.best_size,
            r.status,
            r.conjecture1_rhs,
            r.ratio_to_central_binomial,
            r.conjecture3_normalized.as_deref().unwrap_or("-"),
        ));
    }
    out
}
