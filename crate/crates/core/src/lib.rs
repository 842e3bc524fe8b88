//! Computing capacity of single-receiver networks.
//!
//! A network is a directed acyclic multigraph with source nodes, one
//! receiver and unit-capacity edges that each carry `n` symbols of the
//! alphabet `{0..q-1}` per block. The receiver must compute a target
//! function of the sources' `k`-symbol messages, componentwise. This crate
//! computes the cut-set upper bound on the best achievable rate `k/n`,
//! every lower bound we know how to compute for it, and builds and
//! exhaustively verifies explicit codes that witness those rates.
//!
//! Modules:
//! - [`network`]: graph model, cut classification and enumeration, max-flow.
//! - [`function`]: target functions, footprint sizes and function classes.
//! - [`bounds`]: the cut-set bound, Steiner tree packing, lower bounds, the
//!   N(M,L) family and the consolidated [`bounds::BoundsReport`].
//! - [`codes`]: explicit `(k, n)` codes, verification and constructions.
//! - [`sumset`]: sumset compression machinery behind the N(M,L) converse.
//! - [`catalog`]: builtin example networks and random generators.

pub mod bounds;
pub mod catalog;
pub mod codes;
pub mod error;
pub mod function;
pub mod network;
pub mod sumset;

pub use bounds::{BoundsReport, LowerBound};
pub use codes::{NetworkCode, VerificationOutcome};
pub use error::{Error, Result};
pub use function::{FootprintResult, FunctionKind, TargetFunction, Value};
pub use network::{Cut, Network, NetworkSpec, SourceSet};
pub use sumset::BlockFamily;

/// Default absolute tolerance for comparing bound values.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Limits on exhaustive work. Every enumeration checks its size against
/// the relevant field before starting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum edge count for cut and Steiner tree enumeration.
    pub edges: usize,
    /// Maximum `q^s` for tabulating a target function.
    pub states: u64,
    /// Maximum number of message generators (and table entries) for codes.
    pub generators: u64,
    /// Maximum number of Steiner trees.
    pub trees: usize,
    /// Maximum product size for sumset enumeration.
    pub sumset: u64,
    /// Maximum search nodes for exhaustive code search.
    pub search_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            edges: 22,
            states: 1 << 20,
            generators: 1 << 22,
            trees: 1 << 16,
            sumset: 1 << 22,
            search_nodes: 1 << 22,
        }
    }
}
