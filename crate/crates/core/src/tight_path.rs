//! Tight paths in uniform families: each step swaps one element for one never seen before.

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::SubsetMask;

/// Equal-size sets `H_1, …, H_m` where `H_{j+1} \ H_j` is a single element
/// lying outside `H_1 ∪ … ∪ H_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TightPath {
    steps: Vec<SubsetMask>,
}

impl TightPath {
    pub fn new(steps: Vec<SubsetMask>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyInput("tight path with no steps"));
        }
        let i = steps[0].len();
        let mut seen = SubsetMask::EMPTY;
        for (j, w) in steps.windows(2).enumerate() {
            seen = seen.union(w[0]);
            if !is_tight_step(w[0], w[1], seen) || w[1].len() != i {
                return Err(Error::InvalidProblem(format!(
                    "steps {} and {} do not form a tight step",
                    j + 1,
                    j + 2
                )));
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[SubsetMask] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first(&self) -> SubsetMask {
        self.steps[0]
    }

    pub fn last(&self) -> SubsetMask {
        *self.steps.last().expect("nonempty")
    }

    /// Elements added along the way that are still present at the end.
    pub fn surviving_fresh(&self) -> SubsetMask {
        self.last().minus(self.first())
    }
}

#[inline]
fn is_tight_step(from: SubsetMask, to: SubsetMask, seen: SubsetMask) -> bool {
    let added = to.minus(from);
    added.len() == 1 && from.minus(to).len() == 1 && added.intersect(seen).is_empty()
}

/// First tight path of `length` steps in depth-first canonical order.
pub fn find_tight_path(family: &SetFamily, length: usize) -> Result<Option<TightPath>> {
    let mut found = None;
    for_each_tight_path(family, length, |steps| {
        found = Some(TightPath {
            steps: steps.to_vec(),
        });
        false
    })?;
    Ok(found)
}

/// Every tight path of `length` steps, in depth-first canonical order.
pub fn all_tight_paths(family: &SetFamily, length: usize) -> Result<Vec<TightPath>> {
    let mut out = Vec::new();
    for_each_tight_path(family, length, |steps| {
        out.push(TightPath {
            steps: steps.to_vec(),
        });
        true
    })?;
    Ok(out)
}

/// Visits tight paths until `visit` returns `false`.
pub fn for_each_tight_path<F>(family: &SetFamily, length: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[SubsetMask]) -> bool,
{
    if length == 0 {
        return Err(Error::InvalidProblem("tight path length must be at least 1".into()));
    }
    family.uniform_cardinality()?;
    let members = family.members();
    let mut path = Vec::with_capacity(length);
    for &start in members {
        path.push(start);
        let go_on = extend(members, length, &mut path, start, &mut visit);
        path.pop();
        if !go_on {
            break;
        }
    }
    Ok(())
}

fn extend<F>(
    members: &[SubsetMask],
    length: usize,
    path: &mut Vec<SubsetMask>,
    seen: SubsetMask,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[SubsetMask]) -> bool,
{
    if path.len() == length {
        return visit(path);
    }
    let last = *path.last().expect("path is seeded");
    for &next in members {
        if is_tight_step(last, next, seen) {
            path.push(next);
            let go_on = extend(members, length, path, seen.union(next), visit);
            path.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}
