use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported: 1/2 must exist in F_p")]
    EvenPrime,
    #[error("modulus {0} outside the supported range 3 <= p < 65536")]
    ModulusOutOfRange(u64),
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("{what}: enumeration of {needed} items exceeds the budget of {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("inexact division while computing {0}")]
    InexactDivision(&'static str),
    #[error("p-adic valuation of zero is infinite")]
    ZeroValuation,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("avoiding-subspace search exhausted its budget (seed {seed}, {restarts} restarts, {steps} steps)")]
    SearchExhausted { seed: u64, restarts: u32, steps: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("certificate schema {found} does not match supported schema {expected}")]
    VersionMismatch { expected: String, found: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::SearchExhausted { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
