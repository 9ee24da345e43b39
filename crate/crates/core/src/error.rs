use thiserror::Error;

/// Errors raised across the library. Variant names are the names reported
/// by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("CyclicQuiver: oriented cycle through vertex {0}")]
    CyclicQuiver(String),
    #[error("MalformedInput: {0}")]
    MalformedInput(String),
    #[error("IndexMismatch: expected {expected} coordinates, got {got}")]
    IndexMismatch { expected: usize, got: usize },
    #[error("NotBelow: {0} is not componentwise below {1}")]
    NotBelow(String, String),
    #[error("BudgetExceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
    },
    #[error("ZeroVector: operation is undefined on the zero vector")]
    ZeroVector,
    #[error("KappaNotPositive: (d,i) = {value} >= 0 at vertex {vertex}")]
    KappaNotPositive { vertex: String, value: i64 },
    #[error("Disconnected: quiver has {0} connected components")]
    Disconnected(usize),
    #[error("NotWild: quiver is {0}")]
    NotWild(String),
    #[error("NotInterior: dimension vector {0} is not in the interior of the fundamental domain")]
    NotInterior(String),
    #[error("GammaTooLarge: gamma = {gamma} is not below threshold {threshold}")]
    GammaTooLarge { gamma: f64, threshold: f64 },
    #[error("SearchExhausted: no certified dimension vector for t <= {0}")]
    SearchExhausted(u64),
    #[error("OutOfRange: {0}")]
    OutOfRange(String),
    #[error("DynkinInput: the Coxeter transformation of a Dynkin quiver has finite order")]
    DynkinInput,
    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),
    #[error("Overflow: {0}")]
    Overflow(String),
    #[error("CacheMismatch: embedding cache belongs to a different quiver")]
    CacheMismatch,
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
