//! Lexicographic-leader pruning under coordinate transpositions.
//!
//! A family is encoded by its include flags over the candidate list in
//! canonical order. Only families whose flag vector is lexicographically
//! greatest against every transposition image survive; every orbit keeps
//! its overall greatest member, so no optimum is lost.

use crate::mask::SubsetMask;

pub struct TranspositionLeader {
    /// For each transposition, candidate index -> index of its image.
    images: Vec<Vec<usize>>,
}

impl TranspositionLeader {
    /// `candidates` must be closed under every transposition of `[n]`.
    pub fn new(n: u32, candidates: &[SubsetMask]) -> Self {
        let position: std::collections::HashMap<u64, usize> = candidates
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0, i))
            .collect();
        let mut images = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let image = candidates
                    .iter()
                    .map(|m| position[&swap_bits(m.0, a, b)])
                    .collect();
                images.push(image);
            }
        }
        Self { images }
    }

    /// `false` when some transposition provably maps the family to a
    /// lexicographically greater one, judged from `decided[0..=last]` alone.
    pub fn is_leader(&self, decided: &[bool], last: usize) -> bool {
        'perm: for image in &self.images {
            for p in 0..=last {
                let q = image[p];
                if q > last {
                    continue 'perm;
                }
                match (decided[p], decided[q]) {
                    (false, true) => return false,
                    (true, false) => continue 'perm,
                    _ => {}
                }
            }
        }
        true
    }
}

#[inline]
fn swap_bits(x: u64, a: u32, b: u32) -> u64 {
    let ba = x >> a & 1;
    let bb = x >> b & 1;
    if ba == bb {
        x
    } else {
        x ^ (1 << a) ^ (1 << b)
    }
}
