use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes in `main`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not regular: vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("graph is not connected: vertex {vertex} is unreachable from vertex 0")]
    NotConnected { vertex: usize },

    #[error("graph degree {degree} is below 3 (need q >= 2)")]
    DegreeTooSmall { degree: usize },

    #[error("invalid word: generator index {index} out of range 1..={rank}")]
    UnknownGenerator { index: i64, rank: usize },

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("the identity element has no conjugacy class")]
    IdentityClass,

    #[error("budget exceeded: need {needed} enumerated tree vertices, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("count table too short: need at least {needed} parity steps, have {have}")]
    TableTooShort { needed: usize, have: usize },

    #[error("graph is not bipartite; bipartite bounds do not apply")]
    NotBipartite,

    #[error("displacement parity violated: d = {displacement}, mu = {mu}")]
    ParityViolation { displacement: usize, mu: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
