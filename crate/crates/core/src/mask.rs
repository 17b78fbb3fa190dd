use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size of the ground set `[n]`, always in `1..=64` so a subset fits in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroundSize(u32);

impl GroundSize {
    pub const MAX: u32 = 64;

    pub fn new(n: u32) -> Result<Self> {
        if (1..=Self::MAX).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidGround(n))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// The mask of `[n]` itself.
    #[inline]
    pub fn full(self) -> SubsetMask {
        SubsetMask(full_bits(self.0))
    }

    #[inline]
    pub fn admits(self, mask: SubsetMask) -> bool {
        mask.0 & !full_bits(self.0) == 0
    }

    pub fn check(self, mask: SubsetMask) -> Result<SubsetMask> {
        if self.admits(mask) {
            Ok(mask)
        } else {
            Err(Error::GroundMismatch {
                mask: mask.0,
                n: self.0,
            })
        }
    }

    /// Complement of `mask` within `[n]`.
    #[inline]
    pub fn complement(self, mask: SubsetMask) -> SubsetMask {
        SubsetMask(!mask.0 & full_bits(self.0))
    }
}

impl TryFrom<u32> for GroundSize {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<GroundSize> for u32 {
    fn from(g: GroundSize) -> u32 {
        g.0
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub(crate) fn full_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// One subset of `[n]`: element `i` is present iff bit `i - 1` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// Builds a mask from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        let mut bits = 0u64;
        for e in elements {
            debug_assert!((1..=64).contains(&e));
            bits |= 1u64 << (e - 1);
        }
        SubsetMask(bits)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, element: u32) -> bool {
        (1..=64).contains(&element) && self.0 >> (element - 1) & 1 == 1
    }

    #[inline]
    pub fn intersect(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn minus(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset_of(self, other: SubsetMask) -> bool {
        self.0 != other.0 && self.is_subset_of(other)
    }

    /// 1-based labels in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                Some(bit + 1)
            }
        })
    }

    /// Sort key for the canonical order: cardinality first, then numeric value.
    #[inline]
    pub fn canonical_key(self) -> (u32, u64) {
        (self.len(), self.0)
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for e in self.elements() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// All masks of popcount `k` over `n` bits, in increasing numeric order.
pub fn masks_of_size(n: u32, k: u32) -> impl Iterator<Item = SubsetMask> {
    let limit = full_bits(n);
    let mut next = if k > n {
        None
    } else {
        Some(full_bits(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        // Gosper's hack
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt & !limit == 0).then_some(nxt)
            }
        };
        Some(SubsetMask(cur))
    })
}

/// Every subset of `[n]` in canonical order. Only sensible for small `n`.
pub fn all_masks_canonical(n: u32) -> Vec<SubsetMask> {
    (0..=n).flat_map(|k| masks_of_size(n, k)).collect()
}

/// Binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> u128 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
