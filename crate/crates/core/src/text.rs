//! Line-oriented text formats for families and posets.
//!
//! Family files:
//!
//! ```text
//! # comment
//! n=4
//! -          # the empty set
//! 1,2
//! 2,3,4
//! ```
//!
//! Poset files list `nodes=<N>` followed by `parent(<i>)=<j>` for every
//! non-root node `i` in `1..N`; node 0 is the root.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{GroundSize, SubsetMask};
use crate::poset::TreePoset;

/// Yields `(1-based line number, content)` with comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header_value<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<int>`")))?;
    if k.trim() != key {
        return Err(parse_err(line, format!("expected `{key}=<int>`, found `{text}`")));
    }
    Ok(v.trim())
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n=<int>` header"))?;
    let n: u32 = header_value(hline, header, "n")?
        .parse()
        .map_err(|_| parse_err(hline, "ground size is not an integer"))?;
    let ground = GroundSize::new(n).map_err(|e| parse_err(hline, e.to_string()))?;
    let mut members = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (lineno, line) in lines {
        let set = parse_set_line(lineno, line, n)?;
        if let Some(first) = seen.insert(set, lineno) {
            return Err(parse_err(
                lineno,
                format!("duplicate set `{line}` (first on line {first})"),
            ));
        }
        members.push(set);
    }
    SetFamily::new(ground, members)
}

fn parse_set_line(lineno: usize, line: &str, n: u32) -> Result<SubsetMask> {
    if line == "-" {
        return Ok(SubsetMask::EMPTY);
    }
    let mut bits = 0u64;
    let mut prev = 0u32;
    for tok in line.split(',') {
        let tok = tok.trim();
        let e: u32 = tok
            .parse()
            .map_err(|_| parse_err(lineno, format!("`{tok}` is not an element label")))?;
        if e < 1 || e > n {
            return Err(parse_err(lineno, format!("element {e} outside 1..={n}")));
        }
        if e <= prev {
            return Err(parse_err(lineno, "elements must be strictly increasing"));
        }
        prev = e;
        bits |= 1u64 << (e - 1);
    }
    Ok(SubsetMask(bits))
}

pub fn write_family(family: &SetFamily) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", family.ground()).unwrap();
    for m in family.iter() {
        writeln!(out, "{m}").unwrap();
    }
    out
}

pub fn parse_poset(text: &str) -> Result<TreePoset> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `nodes=<int>` header"))?;
    let count: usize = header_value(hline, header, "nodes")?
        .parse()
        .map_err(|_| parse_err(hline, "node count is not an integer"))?;
    if count == 0 {
        return Err(parse_err(hline, "a poset needs at least one node"));
    }
    let mut parents: Vec<Option<usize>> = vec![None; count];
    let mut given = vec![false; count];
    for (lineno, line) in lines {
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, "expected `parent(<i>)=<j>`"))?;
        let idx = lhs
            .trim()
            .strip_prefix("parent(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| parse_err(lineno, "expected `parent(<i>)=<j>`"))?;
        let i: usize = idx
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, "node index is not an integer"))?;
        let j: usize = rhs
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, "parent index is not an integer"))?;
        if i == 0 || i >= count {
            return Err(parse_err(lineno, format!("node {i} outside 1..{count}")));
        }
        if j >= count {
            return Err(parse_err(lineno, format!("parent {j} outside 0..{count}")));
        }
        if given[i] {
            return Err(parse_err(lineno, format!("parent of node {i} given twice")));
        }
        given[i] = true;
        parents[i] = Some(j);
    }
    if let Some(missing) = (1..count).find(|&i| !given[i]) {
        return Err(parse_err(hline, format!("no parent given for node {missing}")));
    }
    TreePoset::from_parents(&parents)
}

pub fn write_poset(poset: &TreePoset) -> String {
    let mut out = String::new();
    writeln!(out, "nodes={}", poset.node_count()).unwrap();
    for v in 1..poset.node_count() {
        writeln!(out, "parent({v})={}", poset.parent(v).expect("non-root")).unwrap();
    }
    out
}

/// `chain:<k>` or `tree:h=<h>,c=<c>`.
pub fn parse_poset_shorthand(spec: &str) -> Result<TreePoset> {
    let bad = || Error::Shorthand(spec.to_string());
    let (kind, args) = spec.trim().split_once(':').ok_or_else(bad)?;
    match kind {
        "chain" => {
            let k: usize = args.trim().parse().map_err(|_| bad())?;
            TreePoset::chain(k)
        }
        "tree" => {
            let kv = parse_key_values(args).ok_or_else(bad)?;
            let h = lookup(&kv, "h").ok_or_else(bad)?;
            let c = lookup(&kv, "c").ok_or_else(bad)?;
            if kv.len() != 2 {
                return Err(bad());
            }
            TreePoset::complete_tree(h as usize, c as usize)
        }
        _ => Err(bad()),
    }
}

/// Parses `a=1,b=2` into pairs. `None` on malformed input or negative values.
pub(crate) fn parse_key_values(args: &str) -> Option<Vec<(String, u64)>> {
    args.split(',')
        .map(|pair| {
            let (k, v) = pair.split_once('=')?;
            Some((k.trim().to_string(), v.trim().parse().ok()?))
        })
        .collect()
}

pub(crate) fn lookup(kv: &[(String, u64)], key: &str) -> Option<u64> {
    let mut hits = kv.iter().filter(|(k, _)| k == key);
    let v = hits.next()?.1;
    hits.next().is_none().then_some(v)
}
