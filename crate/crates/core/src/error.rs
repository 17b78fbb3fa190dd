use thiserror::Error;

/// Errors raised by the family, poset, and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground size {0} is outside 1..=64")]
    InvalidGround(u32),
    #[error("mask {mask:#x} has bits outside a ground set of size {n}")]
    GroundMismatch { mask: u64, n: u32 },
    #[error("families live over different ground sizes ({left} vs {right})")]
    GroundSizeDiffers { left: u32, right: u32 },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("family is not uniform: found cardinalities {first} and {other}")]
    NotUniform { first: u32, other: u32 },
    #[error("{what} = {value} is out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("invalid trace problem: {0}")]
    InvalidProblem(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("poset would have {nodes} nodes, above the cap of {cap}")]
    Capacity { nodes: u128, cap: u64 },
    #[error("no child at level {level} avoids the forbidden set; branching too small")]
    PigeonholeViolation { level: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bad shorthand `{0}`")]
    Shorthand(String),
}

pub type Result<T> = std::result::Result<T, Error>;
