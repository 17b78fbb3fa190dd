//! Generators for full levels, consecutive bands, and low/high level unions.

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{binomial, masks_of_size, GroundSize, SubsetMask};
use crate::text::{lookup, parse_key_values};

/// Inclusive cardinality range `lo..=hi` over `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandSpec {
    pub ground: GroundSize,
    pub lo: u32,
    pub hi: u32,
}

impl BandSpec {
    pub fn new(ground: GroundSize, lo: u32, hi: u32) -> Result<Self> {
        if lo > hi || hi > ground.get() {
            return Err(Error::InvalidProblem(format!(
                "band {lo}..={hi} does not fit inside 0..={}",
                ground.get()
            )));
        }
        Ok(Self { ground, lo, hi })
    }

    /// Levels `⌊(n-d)/2⌋ + 1 ..= ⌊(n-d)/2⌋ + d` with `d = k - l'`, clipped to `0..=n`.
    /// `None` when `k <= l'` or the clipped range is empty.
    pub fn middle(ground: GroundSize, k: usize, l_prime: u32) -> Option<Self> {
        let d = k as i64 - l_prime as i64;
        if d < 1 {
            return None;
        }
        let n = ground.get() as i64;
        let lo = (n - d).div_euclid(2) + 1;
        let hi = lo + d - 1;
        let (lo, hi) = (lo.max(0), hi.min(n));
        (lo <= hi).then_some(Self {
            ground,
            lo: lo as u32,
            hi: hi as u32,
        })
    }

    pub fn size(&self) -> u128 {
        (self.lo..=self.hi)
            .map(|i| binomial(self.ground.get() as u64, i as i64))
            .sum()
    }
}

/// Refuses to materialize anything bigger than this many sets.
pub const MAX_MATERIALIZED: u128 = 1 << 24;

fn check_size(size: u128) -> Result<()> {
    if size > MAX_MATERIALIZED {
        return Err(Error::Capacity {
            nodes: size,
            cap: MAX_MATERIALIZED as u64,
        });
    }
    Ok(())
}

/// All `i`-subsets of `[n]`.
pub fn level(ground: GroundSize, i: u32) -> Result<SetFamily> {
    if i > ground.get() {
        return Err(Error::OutOfRange {
            what: "level",
            value: i as i64,
            lo: 0,
            hi: ground.get() as i64,
        });
    }
    check_size(binomial(ground.get() as u64, i as i64))?;
    Ok(SetFamily::from_canonical_unchecked(
        ground,
        masks_of_size(ground.get(), i).collect(),
    ))
}

/// Union of levels `lo..=hi`.
pub fn band(spec: &BandSpec) -> Result<SetFamily> {
    check_size(spec.size())?;
    let n = spec.ground.get();
    Ok(SetFamily::from_canonical_unchecked(
        spec.ground,
        (spec.lo..=spec.hi).flat_map(|i| masks_of_size(n, i)).collect(),
    ))
}

/// All sets of size at most `l - 1`.
pub fn low_levels(ground: GroundSize, l: u32) -> Result<SetFamily> {
    if l < 1 || l > ground.get() {
        return Err(Error::OutOfRange {
            what: "l",
            value: l as i64,
            lo: 1,
            hi: ground.get() as i64,
        });
    }
    band(&BandSpec::new(ground, 0, l - 1)?)
}

/// All sets of size at least `n - l + 1`; the complement image of [`low_levels`].
pub fn high_levels(ground: GroundSize, l: u32) -> Result<SetFamily> {
    Ok(low_levels(ground, l)?.complemented())
}

/// The middle band of `k - l'` consecutive levels; empty when `k <= l'`.
pub fn midband(ground: GroundSize, k: usize, l_prime: u32) -> Result<SetFamily> {
    match BandSpec::middle(ground, k, l_prime) {
        Some(spec) => band(&spec),
        None => Ok(SetFamily::empty(ground)),
    }
}

/// `Σ_{i=1}^{k-l'} C(n, ⌊(n-(k-l'))/2⌋ + i)`, zero when `k <= l'`.
pub fn middle_band_size(n: u32, k: usize, l_prime: u32) -> u128 {
    let d = k as i64 - l_prime as i64;
    if d < 1 {
        return 0;
    }
    let base = (n as i64 - d).div_euclid(2);
    (1..=d).map(|i| binomial(n as u64, base + i)).sum()
}

/// Parses `level:n=..,i=..`, `band:n=..,lo=..,hi=..`, `low:n=..,l=..`,
/// or `midband:n=..,k=..,lp=..`.
pub fn parse_construction(spec: &str) -> Result<SetFamily> {
    let bad = || Error::Shorthand(spec.to_string());
    let (kind, args) = spec.trim().split_once(':').ok_or_else(bad)?;
    let kv = parse_key_values(args).ok_or_else(bad)?;
    let get = |key: &str| lookup(&kv, key).ok_or_else(bad);
    let expect_keys = |count: usize| if kv.len() == count { Ok(()) } else { Err(bad()) };
    let ground = |v: u64| GroundSize::new(u32::try_from(v).map_err(|_| bad())?);
    let small = |v: u64| u32::try_from(v).map_err(|_| bad());
    match kind {
        "level" => {
            expect_keys(2)?;
            level(ground(get("n")?)?, small(get("i")?)?)
        }
        "band" => {
            expect_keys(3)?;
            let spec = BandSpec::new(ground(get("n")?)?, small(get("lo")?)?, small(get("hi")?)?)?;
            band(&spec)
        }
        "low" => {
            expect_keys(2)?;
            low_levels(ground(get("n")?)?, small(get("l")?)?)
        }
        "midband" => {
            expect_keys(3)?;
            midband(ground(get("n")?)?, get("k")? as usize, small(get("lp")?)?)
        }
        _ => Err(bad()),
    }
}

/// A single set `{1, …, i}`; handy in tests and examples.
pub fn initial_segment(i: u32) -> SubsetMask {
    SubsetMask::from_elements(1..=i)
}
