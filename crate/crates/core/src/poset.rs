//! Posets whose Hasse graph is a tree with a unique maximum, and their
//! containment inside set families.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::{Chain, SetFamily};
use crate::mask::SubsetMask;

/// Default cap on the node count of generated trees.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

/// A finite poset whose Hasse graph is a tree, arcs pointing toward the root
/// (the unique maximum). Nodes are numbered breadth-first from the root, so
/// node 0 is the root and every parent precedes its children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePoset {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl TreePoset {
    /// Builds a poset from parent links. Exactly one node may lack a parent.
    /// Nodes are renumbered breadth-first, children keeping their input order.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let count = parents.len();
        if count == 0 {
            return Err(Error::InvalidPoset("no nodes".into()));
        }
        let mut roots = parents.iter().enumerate().filter(|(_, p)| p.is_none());
        let root = match (roots.next(), roots.next()) {
            (Some((r, _)), None) => r,
            (None, _) => return Err(Error::InvalidPoset("no root (every node has a parent)".into())),
            (Some(_), Some(_)) => return Err(Error::InvalidPoset("more than one root".into())),
        };
        let mut kids = vec![Vec::new(); count];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= count {
                    return Err(Error::InvalidPoset(format!("node {v} has parent {p} out of range")));
                }
                if p == v {
                    return Err(Error::InvalidPoset(format!("node {v} is its own parent")));
                }
                kids[p].push(v);
            }
        }
        let mut order = Vec::with_capacity(count);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend(kids[v].iter().copied());
        }
        if order.len() != count {
            return Err(Error::InvalidPoset("parent links contain a cycle or a detached part".into()));
        }
        let mut relabel = vec![0usize; count];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let parent = order
            .iter()
            .map(|&old| parents[old].map(|p| relabel[p]))
            .collect();
        let children = order
            .iter()
            .map(|&old| kids[old].iter().map(|&c| relabel[c]).collect())
            .collect();
        Ok(Self { parent, children })
    }

    /// The chain `P_k` of `k` nodes.
    pub fn chain(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPoset("a chain needs at least one node".into()));
        }
        let parents: Vec<_> = (0..k).map(|i| i.checked_sub(1)).collect();
        Self::from_parents(&parents)
    }

    /// The complete tree of height `h` where every non-leaf has exactly `c` children.
    pub fn complete_tree(h: usize, c: usize) -> Result<Self> {
        Self::complete_tree_with_cap(h, c, DEFAULT_NODE_CAP)
    }

    pub fn complete_tree_with_cap(h: usize, c: usize, cap: u64) -> Result<Self> {
        if h == 0 || c == 0 {
            return Err(Error::InvalidPoset("complete tree needs h >= 1 and c >= 1".into()));
        }
        let nodes = complete_tree_size(h, c);
        if nodes > cap as u128 {
            return Err(Error::Capacity { nodes, cap });
        }
        let nodes = nodes as usize;
        let parents: Vec<_> = (0..nodes)
            .map(|i| if i == 0 { None } else { Some((i - 1) / c) })
            .collect();
        Self::from_parents(&parents)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn root(&self) -> usize {
        0
    }

    #[inline]
    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    #[inline]
    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn depth(&self, node: usize) -> usize {
        let mut d = 0;
        let mut v = node;
        while let Some(p) = self.parent[v] {
            d += 1;
            v = p;
        }
        d
    }

    /// `(h, l)`: the number of nodes on a longest root-to-leaf path, and
    /// `h - 1`, the largest number of consecutive levels that never host the poset.
    pub fn height_and_level_count(&self) -> (usize, usize) {
        let mut depth = vec![0usize; self.node_count()];
        let mut h = 1;
        for v in 1..self.node_count() {
            depth[v] = depth[self.parent[v].expect("non-root")] + 1;
            h = h.max(depth[v] + 1);
        }
        (h, h - 1)
    }

    pub fn height(&self) -> usize {
        self.height_and_level_count().0
    }

    /// `true` when `below` lies strictly under `above` in the poset order.
    pub fn is_below(&self, below: usize, above: usize) -> bool {
        let mut v = below;
        while let Some(p) = self.parent[v] {
            if p == above {
                return true;
            }
            v = p;
        }
        false
    }

    /// Recognizes `chain:<k>` and `tree:h=<h>,c=<c>` shapes.
    pub fn shorthand(&self) -> Option<String> {
        if self.children.iter().all(|c| c.len() <= 1) {
            return Some(format!("chain:{}", self.node_count()));
        }
        let c = self.children[0].len();
        let h = self.height();
        let complete = (0..self.node_count()).all(|v| {
            let leaf = self.children[v].is_empty();
            if leaf {
                self.depth(v) + 1 == h
            } else {
                self.children[v].len() == c
            }
        });
        complete.then(|| format!("tree:h={h},c={c}"))
    }

    /// Preorder node sequence (parents before children).
    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev().copied());
        }
        out
    }

    /// Subtree sizes and an isomorphism class id per node.
    fn subtree_shapes(&self) -> (Vec<usize>, Vec<usize>) {
        let count = self.node_count();
        let mut size = vec![1usize; count];
        let mut shape = vec![0usize; count];
        let mut classes: HashMap<Vec<usize>, usize> = HashMap::new();
        for v in (0..count).rev() {
            let mut key: Vec<usize> = self.children[v].iter().map(|&c| shape[c]).collect();
            key.sort_unstable();
            for &c in &self.children[v] {
                size[v] += size[c];
            }
            let next = classes.len();
            shape[v] = *classes.entry(key).or_insert(next);
        }
        (size, shape)
    }
}

/// `1 + c + … + c^(h-1)`, saturating.
pub fn complete_tree_size(h: usize, c: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..h {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(c as u128);
    }
    total
}

/// An injective, order-preserving map from poset nodes to family members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    assignment: Vec<SubsetMask>,
}

impl Embedding {
    pub fn assignment(&self) -> &[SubsetMask] {
        &self.assignment
    }

    pub fn image(&self, node: usize) -> SubsetMask {
        self.assignment[node]
    }

    pub fn root_image(&self) -> SubsetMask {
        self.assignment[0]
    }

    /// Checks injectivity, membership, and strict containment along every Hasse arc.
    pub fn is_valid_for(&self, poset: &TreePoset, family: &SetFamily) -> bool {
        if self.assignment.len() != poset.node_count() {
            return false;
        }
        let mut seen: Vec<_> = self.assignment.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.assignment.len()
            && self.assignment.iter().all(|&m| family.contains(m))
            && (1..poset.node_count()).all(|v| {
                let p = poset.parent(v).expect("non-root");
                self.assignment[v].is_proper_subset_of(self.assignment[p])
            })
    }
}

/// Some embedding of `poset` into `family`, or `None` if the family is `P`-free.
///
/// Nodes are assigned depth-first from the root over members in canonical
/// order; the first solution found is returned.
pub fn contains_poset(family: &SetFamily, poset: &TreePoset) -> Option<Embedding> {
    EmbeddingSearch::new(family.members(), poset).run(None)
}

/// Like [`contains_poset`], but with the root pinned to `root`.
pub fn contains_poset_rooted_at(
    family: &SetFamily,
    poset: &TreePoset,
    root: SubsetMask,
) -> Option<Embedding> {
    EmbeddingSearch::new(family.members(), poset).run(Some(root))
}

/// Root-pinned containment over a canonical-order member slice.
pub(crate) fn embeds_with_root(members: &[SubsetMask], poset: &TreePoset, root: SubsetMask) -> bool {
    EmbeddingSearch::new(members, poset).run(Some(root)).is_some()
}

struct EmbeddingSearch<'a> {
    members: &'a [SubsetMask],
    poset: &'a TreePoset,
    order: Vec<usize>,
    size: Vec<usize>,
    shape: Vec<usize>,
    /// (shape, member) -> can the subtree hang below that member, ignoring injectivity
    relaxed: HashMap<(usize, usize), bool>,
    below_count: Vec<usize>,
    used: Vec<bool>,
    image: Vec<usize>,
}

impl<'a> EmbeddingSearch<'a> {
    fn new(members: &'a [SubsetMask], poset: &'a TreePoset) -> Self {
        let (size, shape) = poset.subtree_shapes();
        let below_count = members
            .iter()
            .map(|&m| members.iter().filter(|&&x| x.is_proper_subset_of(m)).count())
            .collect();
        Self {
            members,
            poset,
            order: poset.preorder(),
            size,
            shape,
            relaxed: HashMap::new(),
            below_count,
            used: vec![false; members.len()],
            image: vec![usize::MAX; poset.node_count()],
        }
    }

    fn run(mut self, root: Option<SubsetMask>) -> Option<Embedding> {
        if self.members.len() < self.poset.node_count() {
            return None;
        }
        let candidates: Vec<usize> = match root {
            Some(r) => self.members.iter().position(|&m| m == r).into_iter().collect(),
            None => (0..self.members.len()).collect(),
        };
        for m in candidates {
            if !self.relaxed_ok(0, m) {
                continue;
            }
            self.used[m] = true;
            self.image[0] = m;
            if self.assign(1) {
                let assignment = self.image.iter().map(|&i| self.members[i]).collect();
                return Some(Embedding { assignment });
            }
            self.used[m] = false;
        }
        None
    }

    fn relaxed_ok(&mut self, node: usize, member: usize) -> bool {
        if self.below_count[member] + 1 < self.size[node] {
            return false;
        }
        let key = (self.shape[node], member);
        if let Some(&v) = self.relaxed.get(&key) {
            return v;
        }
        let top = self.members[member];
        let mut ok = true;
        let kids = self.poset.children(node).to_vec();
        for c in kids {
            let mut any = false;
            for x in 0..member {
                if self.members[x].is_proper_subset_of(top) && self.relaxed_ok(c, x) {
                    any = true;
                    break;
                }
            }
            if !any {
                ok = false;
                break;
            }
        }
        self.relaxed.insert(key, ok);
        ok
    }

    fn assign(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let node = self.order[pos];
        let parent = self.poset.parent(node).expect("non-root in preorder tail");
        let top = self.members[self.image[parent]];
        // isomorphic earlier siblings take smaller member indices
        let floor = self
            .poset
            .children(parent)
            .iter()
            .take_while(|&&s| s != node)
            .filter(|&&s| self.shape[s] == self.shape[node])
            .map(|&s| self.image[s] + 1)
            .max()
            .unwrap_or(0);
        for m in floor..self.members.len() {
            if self.used[m] || !self.members[m].is_proper_subset_of(top) {
                continue;
            }
            if !self.relaxed_ok(node, m) {
                continue;
            }
            self.used[m] = true;
            self.image[node] = m;
            if self.assign(pos + 1) {
                return true;
            }
            self.used[m] = false;
        }
        self.image[node] = usize::MAX;
        false
    }
}

/// Repeatedly removes the root image of the first embedding until the
/// family is `P`-free. Returns `(removed, residual)`.
pub fn peel_roots(family: &SetFamily, poset: &TreePoset) -> (SetFamily, SetFamily) {
    let mut residual = family.clone();
    let mut removed = Vec::new();
    while let Some(e) = contains_poset(&residual, poset) {
        let root = e.root_image();
        removed.push(root);
        residual = residual.filter(|m| m != root);
    }
    let removed = SetFamily::new(family.ground(), removed).expect("members come from the family");
    (removed, residual)
}

/// Walks an embedding from the root down, each time taking the first child
/// (in canonical order of images) whose difference from the current set is
/// not inside `forbidden`. Returns the chain bottom-up.
pub fn descend_chain_avoiding(
    embedding: &Embedding,
    poset: &TreePoset,
    forbidden: SubsetMask,
) -> Result<Chain> {
    let mut node = poset.root();
    let mut picked = vec![embedding.image(node)];
    let mut level = 0;
    while !poset.children(node).is_empty() {
        level += 1;
        let current = embedding.image(node);
        let mut kids: Vec<usize> = poset.children(node).to_vec();
        kids.sort_by_key(|&c| embedding.image(c));
        let next = kids
            .into_iter()
            .find(|&c| !current.minus(embedding.image(c)).is_subset_of(forbidden))
            .ok_or(Error::PigeonholeViolation { level })?;
        picked.push(embedding.image(next));
        node = next;
    }
    picked.reverse();
    Chain::new(picked)
}
