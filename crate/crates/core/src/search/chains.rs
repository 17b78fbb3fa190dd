//! Symmetric chain decomposition of `2^[n]` by bracket matching.
//!
//! Reading a mask from element 1 upward, an absent element opens a bracket
//! and a present one closes the nearest open bracket. Masks that agree on
//! the matched positions form one chain; along it the unmatched positions
//! run `1…1 0…0` with the boundary moving one step at a time.

use std::collections::HashMap;

/// Chain index of every mask in `0..2^n`, plus the number of chains.
pub fn symmetric_chain_ids(n: u32) -> (Vec<usize>, usize) {
    assert!(n <= 20, "chain decomposition of 2^[{n}] is too large");
    let total = 1usize << n;
    let mut ids = vec![0usize; total];
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut open = Vec::with_capacity(n as usize);
    for (x, id) in ids.iter_mut().enumerate() {
        let x = x as u64;
        open.clear();
        let mut matched = 0u64;
        for i in 0..n {
            if x >> i & 1 == 0 {
                open.push(i);
            } else if let Some(j) = open.pop() {
                matched |= (1 << i) | (1 << j);
            }
        }
        let key = (matched, x & matched);
        let next = index.len();
        *id = *index.entry(key).or_insert(next);
    }
    (ids, index.len())
}
