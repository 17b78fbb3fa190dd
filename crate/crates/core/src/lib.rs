//! Exact engine for traces of set families.
//!
//! A family `F ⊆ 2^[n]` is *`l`-trace `k`-Sperner* when, for every `l`-subset
//! `L` of `[n]`, the traces `{F ∩ L : F ∈ F}` contain no chain of `k + 1` sets.
//! This crate checks that property with witnesses, finds tight paths and
//! tree-poset copies inside families, and computes the extremal sizes
//! `f(n, k, l)` and `La(n, P)` exactly for small `n` by branch and bound.
//!
//! Subsets of `[n]` are single machine words ([`SubsetMask`]), so `n ≤ 64`.

pub mod constructions;
pub mod error;
pub mod family;
pub mod mask;
pub mod poset;
pub mod report;
pub mod search;
pub mod tight_path;
pub mod text;

pub use constructions::{band, level, low_levels, midband, BandSpec};
pub use error::{Error, Result};
pub use family::{modified_shadow, shadow, Chain, SetFamily, TraceProblem, Violation};
pub use mask::{binomial, GroundSize, SubsetMask};
pub use poset::{contains_poset, descend_chain_avoiding, peel_roots, Embedding, TreePoset};
pub use tight_path::{find_tight_path, for_each_tight_path, TightPath};
pub use search::{
    heuristic_lower_bound, max_p_free, max_trace_sperner, theorem3_inequality_check, SearchBudget,
    SearchOptions, SearchResult, SearchStatus,
};
