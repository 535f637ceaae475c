use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid map specification: {0}")]
    InvalidSpec(String),

    #[error("branch {branch} out of range for degree {degree}")]
    BranchOutOfRange { branch: u32, degree: u32 },

    #[error("symbol {symbol} out of range for degree {degree}")]
    SymbolOutOfRange { symbol: u32, degree: u32 },

    #[error("value {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("root not bracketed on [{lo}, {hi}]: lift is not monotone there")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root solver did not converge after {iterations} iterations")]
    NotConverged { iterations: u32 },

    #[error("depth {requested} exceeds the depth cap {cap}")]
    DepthCapExceeded { requested: usize, cap: usize },

    #[error("{requested} cells exceed the cell cap {cap}")]
    CellCapExceeded { requested: u128, cap: usize },

    #[error("{requested} interval evaluations exceed the work cap {cap}")]
    WorkCapExceeded { requested: u128, cap: u64 },

    #[error("degree mismatch: {from} vs {to}")]
    DegreeMismatch { from: u32, to: u32 },

    #[error("operation needs a nonempty word")]
    EmptyWord,

    #[error("cannot parse word: {0}")]
    BadWord(String),

    #[error("mesh of the {which} map does not decay up to level {level}")]
    NoMeshDecay { which: &'static str, level: usize },

    #[error("resolution exhausted: increment {increment:e} below numeric floor")]
    ResolutionExhausted { increment: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
