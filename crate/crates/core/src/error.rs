use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph contains a directed cycle through node `{0}`")]
    CyclicGraph(String),
    #[error("node `{0}` has no directed path to the receiver")]
    UnreachableReceiver(String),
    #[error("node `{0}` has no in-edges but is not a source")]
    SourcelessLeaf(String),
    #[error("receiver `{0}` is also listed as a source")]
    ReceiverIsSource(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid target function: {0}")]
    InvalidFunction(String),
    #[error("symbol {symbol} at position {position} is outside the alphabet of size {alphabet}")]
    OutOfAlphabet {
        position: usize,
        symbol: u64,
        alphabet: u64,
    },
    #[error("function arity {function} does not match {expected}")]
    ArityMismatch { function: usize, expected: usize },
    #[error("linear functions require a prime field size, got {0}")]
    NonPrimeFieldForLinear(u64),

    #[error("{what} needs {needed} states, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("target function is not symmetric")]
    NotSymmetric,
    #[error("target function is not divisible: {0}")]
    NotDivisible(String),
    #[error("node `{0}` is neither a source nor the receiver")]
    NotAllSources(String),
    #[error("network is not a multi-edge tree: node `{0}` feeds more than one node")]
    NotTree(String),
    #[error("rate {k}/{n} infeasible at node `{node}`")]
    RateInfeasible { node: String, k: usize, n: usize },
    #[error("block length k={0} must be even")]
    OddK(usize),
    #[error("message block k={k} does not fit an edge block n={n}")]
    BlockTooSmall { k: usize, n: usize },
    #[error("incompatible alphabet embedding: {0}")]
    IncompatibleEmbedding(String),
    #[error("code does not match the network: {0}")]
    CodeShape(String),
    #[error("malformed code document: {0}")]
    CodeFormat(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("lower bound {tag} = {lower} exceeds upper bound {upper}")]
    BoundViolation { tag: String, lower: f64, upper: f64 },
}

pub(crate) fn check_budget(what: &'static str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded {
            what,
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
