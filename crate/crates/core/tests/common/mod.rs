//! Reference implementations kept deliberately naive and independent of the
//! library internals. Sets are raw `u64` bit masks, families are plain vectors.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn dedup(family: &[u64]) -> Vec<u64> {
    family.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn trace(family: &[u64], window: u64) -> Vec<u64> {
    dedup(&family.iter().map(|&f| f & window).collect::<Vec<_>>())
}

fn proper_subset(a: u64, b: u64) -> bool {
    a != b && a & !b == 0
}

/// Longest chain (number of sets) by longest path in the strict-containment DAG,
/// processed in a topological order obtained by Kahn's algorithm.
pub fn longest_chain_dag(family: &[u64]) -> usize {
    let sets = dedup(family);
    let m = sets.len();
    if m == 0 {
        return 0;
    }
    let mut indeg = vec![0usize; m];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in 0..m {
            if proper_subset(sets[a], sets[b]) {
                out[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..m).filter(|&v| indeg[v] == 0).collect();
    let mut dist = vec![1usize; m];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in &out[v] {
            dist[w] = dist[w].max(dist[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    assert_eq!(queue.len(), m, "containment graph must be acyclic");
    dist.into_iter().max().unwrap()
}

pub fn is_chain(links: &[u64]) -> bool {
    links.windows(2).all(|w| proper_subset(w[0], w[1]))
}

pub fn windows(n: u32, l: u32) -> Vec<u64> {
    (0u64..1 << n).filter(|w| w.count_ones() == l).collect()
}

pub fn is_trace_sperner(family: &[u64], n: u32, l: u32, k: usize) -> bool {
    windows(n, l)
        .into_iter()
        .all(|w| longest_chain_dag(&trace(family, w)) <= k)
}

/// Strict order of a rooted tree given by parent pointers: `below[a][b]` iff `a < b`.
pub fn tree_order(parents: &[Option<usize>]) -> Vec<Vec<bool>> {
    let p = parents.len();
    let mut below = vec![vec![false; p]; p];
    for a in 0..p {
        let mut cur = parents[a];
        while let Some(b) = cur {
            below[a][b] = true;
            cur = parents[b];
        }
    }
    below
}

/// Brute-force injective order-preserving assignment of poset nodes to members.
pub fn contains_poset_brute(family: &[u64], parents: &[Option<usize>]) -> bool {
    let below = tree_order(parents);
    let sets = dedup(family);
    let mut image = vec![0u64; parents.len()];
    let mut used = vec![false; sets.len()];
    fn go(
        node: usize,
        sets: &[u64],
        below: &[Vec<bool>],
        image: &mut [u64],
        used: &mut [bool],
    ) -> bool {
        if node == image.len() {
            return true;
        }
        for (idx, &s) in sets.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let consistent = (0..node).all(|q| {
                (!below[q][node] || proper_subset(image[q], s))
                    && (!below[node][q] || proper_subset(s, image[q]))
            });
            if !consistent {
                continue;
            }
            used[idx] = true;
            image[node] = s;
            if go(node + 1, sets, below, image, used) {
                return true;
            }
            used[idx] = false;
        }
        false
    }
    go(0, &sets, &below, &mut image, &mut used)
}

/// All unlabeled rooted trees with `p` nodes, as parent arrays (node 0 root).
pub fn rooted_trees(p: usize) -> Vec<Vec<Option<usize>>> {
    fn canon(children: &[Vec<usize>], v: usize) -> String {
        let mut parts: Vec<String> = children[v].iter().map(|&c| canon(children, c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut parents = vec![None; p];
    fn rec(
        i: usize,
        parents: &mut Vec<Option<usize>>,
        seen: &mut BTreeSet<String>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        let p = parents.len();
        if i == p {
            let mut children = vec![Vec::new(); p];
            for (v, par) in parents.iter().enumerate() {
                if let Some(u) = par {
                    children[*u].push(v);
                }
            }
            if seen.insert(canon(&children, 0)) {
                out.push(parents.clone());
            }
            return;
        }
        for j in 0..i {
            parents[i] = Some(j);
            rec(i + 1, parents, seen, out);
        }
    }
    if p > 0 {
        rec(1, &mut parents, &mut seen, &mut out);
    }
    out
}

/// Exhaustive optimum over all `2^(2^n)` families (n <= 4), given a predicate on
/// the family encoded as a bit set over the `2^n` subsets.
pub fn exhaustive_max(n: u32, mut ok: impl FnMut(u32) -> bool) -> usize {
    assert!(n <= 4);
    let total = 1u64 << (1u32 << n);
    let mut best = 0;
    for code in 0..total {
        let code = code as u32;
        let size = code.count_ones() as usize;
        if size > best && ok(code) {
            best = size;
        }
    }
    best
}

pub fn decode(code: u32) -> Vec<u64> {
    (0..32u64).filter(|&s| code >> s & 1 == 1).collect()
}

/// Exhaustive `f(n, k, l)` for n <= 4 using a table of longest chains over all
/// subfamilies of `2^[n]`.
pub struct TraceOracle {
    n: u32,
    chain_len: Vec<u8>,
}

impl TraceOracle {
    pub fn new(n: u32) -> Self {
        assert!(n <= 4);
        let chain_len = (0u32..1 << (1u32 << n))
            .map(|code| longest_chain_dag(&decode(code)) as u8)
            .collect();
        Self { n, chain_len }
    }

    fn trace_code(code: u32, window: u64) -> u32 {
        let mut out = 0u32;
        let mut rest = code;
        while rest != 0 {
            let s = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            out |= 1 << (s & window);
        }
        out
    }

    pub fn f(&self, l: u32, k: usize) -> usize {
        let wins = windows(self.n, l);
        exhaustive_max(self.n, |code| {
            wins.iter()
                .all(|&w| self.chain_len[Self::trace_code(code, w) as usize] as usize <= k)
        })
    }
}

pub fn la_exhaustive(n: u32, parents: &[Option<usize>]) -> usize {
    exhaustive_max(n, |code| !contains_poset_brute(&decode(code), parents))
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Small deterministic generator so oracle-side randomness does not depend on
/// the library's RNG choice.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn family(&mut self, n: u32, max_size: usize) -> Vec<u64> {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let size = self.below(max_size as u64 + 1) as usize;
        (0..size).map(|_| self.next_u64() & full).collect()
    }

    pub fn permutation(&mut self, n: u32) -> Vec<u32> {
        let mut p: Vec<u32> = (0..n).collect();
        for i in (1..n as usize).rev() {
            let j = self.below(i as u64 + 1) as usize;
            p.swap(i, j);
        }
        p
    }
}

pub fn permute(set: u64, perm: &[u32]) -> u64 {
    (0..perm.len()).filter(|&i| set >> i & 1 == 1).fold(0, |acc, i| acc | 1 << perm[i])
}
