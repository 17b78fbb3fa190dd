//! Set families over a fixed ground set, their traces, and chain predicates.

use std::fmt;

use crate::error::{Error, Result};
use crate::mask::{masks_of_size, GroundSize, SubsetMask};

/// A deduplicated family of subsets of `[n]`, kept in canonical order
/// (cardinality, then numeric value).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSize,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    pub fn empty(ground: GroundSize) -> Self {
        Self {
            ground,
            members: Vec::new(),
        }
    }

    /// Builds a family, dropping duplicates. Fails if a member leaves `[n]`.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ground: GroundSize, members: I) -> Result<Self> {
        let mut members: Vec<SubsetMask> = members
            .into_iter()
            .map(|m| ground.check(m))
            .collect::<Result<_>>()?;
        members.sort_unstable();
        members.dedup();
        Ok(Self { ground, members })
    }

    /// Members must already be distinct, in canonical order, and inside the ground set.
    pub(crate) fn from_canonical_unchecked(ground: GroundSize, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| ground.admits(m)));
        Self { ground, members }
    }

    /// The power set `2^[n]`.
    pub fn power_set(ground: GroundSize) -> Self {
        assert!(ground.get() <= 24, "power set of [{}] is too large", ground);
        let n = ground.get();
        let members = (0..=n).flat_map(|k| masks_of_size(n, k)).collect();
        Self::from_canonical_unchecked(ground, members)
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.ground
    }

    #[inline]
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    /// Applies `f` to every member and rebuilds the family.
    pub fn map<F: FnMut(SubsetMask) -> SubsetMask>(&self, f: F) -> Result<Self> {
        Self::new(self.ground, self.members.iter().copied().map(f))
    }

    /// Every member replaced by its complement in `[n]`.
    pub fn complemented(&self) -> Self {
        let g = self.ground;
        let mut members: Vec<_> = self.members.iter().map(|&m| g.complement(m)).collect();
        members.sort_unstable();
        Self::from_canonical_unchecked(g, members)
    }

    /// Members selected by `keep`.
    pub fn filter<F: FnMut(SubsetMask) -> bool>(&self, mut keep: F) -> Self {
        let members = self.members.iter().copied().filter(|&m| keep(m)).collect();
        Self::from_canonical_unchecked(self.ground, members)
    }

    /// Union of two families over the same ground set.
    pub fn union(&self, other: &SetFamily) -> Result<Self> {
        if self.ground != other.ground {
            return Err(Error::GroundSizeDiffers {
                left: self.ground.get(),
                right: other.ground.get(),
            });
        }
        Self::new(self.ground, self.iter().chain(other.iter()))
    }

    /// The trace `{F ∩ window : F ∈ self}`, deduplicated.
    pub fn trace(&self, window: SubsetMask) -> Result<SetFamily> {
        self.ground.check(window)?;
        let mut members: Vec<_> = self.members.iter().map(|m| m.intersect(window)).collect();
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_canonical_unchecked(self.ground, members))
    }

    /// Members of cardinality exactly `i`.
    pub fn uniform_slice(&self, i: u32) -> Result<SetFamily> {
        if i > self.ground.get() {
            return Err(Error::OutOfRange {
                what: "cardinality",
                value: i as i64,
                lo: 0,
                hi: self.ground.get() as i64,
            });
        }
        Ok(self.filter(|m| m.len() == i))
    }

    /// The common cardinality of all members, or `None` when empty.
    pub fn uniform_cardinality(&self) -> Result<Option<u32>> {
        let Some(first) = self.members.first() else {
            return Ok(None);
        };
        let i = first.len();
        match self.members.iter().find(|m| m.len() != i) {
            Some(other) => Err(Error::NotUniform {
                first: i,
                other: other.len(),
            }),
            None => Ok(Some(i)),
        }
    }

    /// A maximum-length chain, lexicographically least by canonical order of links.
    pub fn longest_chain(&self) -> Result<Chain> {
        if self.members.is_empty() {
            return Err(Error::EmptyInput("longest_chain of an empty family"));
        }
        Ok(Chain {
            links: longest_chain_links(&self.members),
        })
    }

    pub fn longest_chain_len(&self) -> usize {
        longest_chain_length(&self.members)
    }

    /// No chain of `k + 1` sets. The empty family qualifies for every `k`.
    pub fn is_k_sperner(&self, k: usize) -> bool {
        longest_chain_length(&self.members) <= k
    }

    /// Every trace on an `l`-window is `k`-Sperner.
    pub fn is_trace_sperner(&self, problem: &TraceProblem) -> Result<bool> {
        Ok(self.find_violation(problem)?.is_none())
    }

    /// First window (increasing mask order) whose trace holds a chain of `k + 1` sets.
    pub fn find_violation(&self, problem: &TraceProblem) -> Result<Option<Violation>> {
        if problem.ground != self.ground {
            return Err(Error::GroundSizeDiffers {
                left: self.ground.get(),
                right: problem.ground.get(),
            });
        }
        if self.members.len() <= problem.k {
            return Ok(None);
        }
        let n = self.ground.get();
        let mut scratch = Vec::with_capacity(self.members.len());
        for window in masks_of_size(n, problem.l) {
            scratch.clear();
            scratch.extend(self.members.iter().map(|m| m.intersect(window)));
            scratch.sort_unstable();
            scratch.dedup();
            if scratch.len() <= problem.k {
                continue;
            }
            if longest_chain_length(&scratch) > problem.k {
                let mut links = longest_chain_links(&scratch);
                links.truncate(problem.k + 1);
                let removed = self.ground.complement(window);
                return Ok(Some(Violation {
                    window,
                    removed,
                    chain: Chain { links },
                }));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{{{}}}", if m.is_empty() { String::new() } else { m.to_string() })?;
        }
        f.write_str("}")
    }
}

/// Length of the longest chain among `members`, which must be in canonical order.
pub(crate) fn longest_chain_length(members: &[SubsetMask]) -> usize {
    let mut down = vec![1usize; members.len()];
    let mut best = 0;
    for j in 0..members.len() {
        for i in 0..j {
            if members[i].is_proper_subset_of(members[j]) && down[i] + 1 > down[j] {
                down[j] = down[i] + 1;
            }
        }
        best = best.max(down[j]);
    }
    best
}

fn longest_chain_links(members: &[SubsetMask]) -> Vec<SubsetMask> {
    // up[i]: longest chain with members[i] as its bottom
    let mut up = vec![1usize; members.len()];
    for i in (0..members.len()).rev() {
        for j in i + 1..members.len() {
            if members[i].is_proper_subset_of(members[j]) && up[j] + 1 > up[i] {
                up[i] = up[j] + 1;
            }
        }
    }
    let best = up.iter().copied().max().unwrap_or(0);
    let mut links = Vec::with_capacity(best);
    let mut cur = match up.iter().position(|&u| u == best) {
        Some(i) => i,
        None => return links,
    };
    links.push(members[cur]);
    while up[cur] > 1 {
        let next = (cur + 1..members.len())
            .find(|&j| up[j] + 1 == up[cur] && members[cur].is_proper_subset_of(members[j]))
            .expect("chain DP is consistent");
        links.push(members[next]);
        cur = next;
    }
    links
}

/// Strictly increasing sequence of sets; its length is the number of sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    links: Vec<SubsetMask>,
}

impl Chain {
    pub fn new(links: Vec<SubsetMask>) -> Result<Self> {
        if links.is_empty() {
            return Err(Error::EmptyInput("chain with no links"));
        }
        if let Some(w) = links.windows(2).find(|w| !w[0].is_proper_subset_of(w[1])) {
            return Err(Error::InvalidProblem(format!(
                "chain links {} and {} are not strictly nested",
                w[0], w[1]
            )));
        }
        Ok(Self { links })
    }

    pub fn links(&self) -> &[SubsetMask] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// A window together with a chain of `k + 1` distinct traces on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// The `l`-set the family was traced on.
    pub window: SubsetMask,
    /// `[n] \ window`, the `l'`-set removed.
    pub removed: SubsetMask,
    pub chain: Chain,
}

/// Parameters of `f(n, k, l)`: traces on `l`-windows must avoid chains of `k + 1` sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceProblem {
    pub ground: GroundSize,
    pub l: u32,
    pub k: usize,
}

impl TraceProblem {
    pub fn new(ground: GroundSize, l: u32, k: usize) -> Result<Self> {
        if l < 1 || l > ground.get() {
            return Err(Error::InvalidProblem(format!(
                "window size l = {l} must lie in 1..={}",
                ground.get()
            )));
        }
        if k < 1 {
            return Err(Error::InvalidProblem("Sperner depth k must be at least 1".into()));
        }
        Ok(Self { ground, l, k })
    }

    /// The co-window form: windows of size `n - l'`.
    pub fn co_window(ground: GroundSize, l_prime: u32, k: usize) -> Result<Self> {
        if l_prime >= ground.get() {
            return Err(Error::InvalidProblem(format!(
                "l' = {l_prime} leaves no window inside [{ground}]"
            )));
        }
        Self::new(ground, ground.get() - l_prime, k)
    }

    pub fn n(&self) -> u32 {
        self.ground.get()
    }

    /// `n - l`, the number of removed elements.
    pub fn l_prime(&self) -> u32 {
        self.ground.get() - self.l
    }
}

/// All subsets of `set` with exactly one element removed.
pub fn shadow(ground: GroundSize, set: SubsetMask) -> Result<SetFamily> {
    modified_shadow(ground, set, set)
}

/// Subsets of `set` with one element removed, where the removed element lies in `anchor`.
pub fn modified_shadow(ground: GroundSize, set: SubsetMask, anchor: SubsetMask) -> Result<SetFamily> {
    ground.check(set)?;
    ground.check(anchor)?;
    if set.is_empty() {
        return Err(Error::EmptyInput("shadow of the empty set"));
    }
    let members = set
        .intersect(anchor)
        .elements()
        .map(|e| set.minus(SubsetMask::from_elements([e])));
    SetFamily::new(ground, members)
}
