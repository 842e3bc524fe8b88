use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "netfuncap",
    version,
    about = "Computing capacity of single-receiver networks"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,

    /// Builtin network: N2, N3, diamond, NML, line, single_edge
    #[arg(long, global = true, conflicts_with = "network")]
    pub example: Option<String>,

    /// Network document (JSON)
    #[arg(long, global = true)]
    pub network: Option<PathBuf>,

    /// Target function: a kind name such as `arithmetic_sum` or `mod_sum(3)`,
    /// an inline JSON document, or a path to one
    #[arg(long, global = true)]
    pub function: Option<String>,

    /// Override the alphabet size of a builtin example
    #[arg(long, global = true)]
    pub q: Option<u64>,

    /// Number of sources for the `line` example
    #[arg(long, global = true)]
    pub s: Option<usize>,

    /// Message block length
    #[arg(long, global = true)]
    pub k: Option<usize>,

    /// Edge block length
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(long = "M", global = true)]
    pub m: Option<usize>,

    #[arg(long = "L", global = true)]
    pub l: Option<usize>,

    /// Absolute tolerance for bound comparisons
    #[arg(long, global = true, default_value_t = netfuncap_core::DEFAULT_TOL)]
    pub tol: f64,

    /// Largest edge count for cut and tree enumeration
    #[arg(long, global = true)]
    pub budget_edges: Option<usize>,

    /// Largest q^s for function tables
    #[arg(long, global = true, env = "NETFUNCAP_BUDGET_STATES")]
    pub budget_states: Option<u64>,

    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Code document to read (verify-code)
    #[arg(long, global = true)]
    pub code: Option<PathBuf>,

    /// Where to write a constructed code
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Cut-set upper bound and every applicable lower bound
    Bounds,
    /// Footprint sizes R(I,f) for every nonempty source subset
    Footprint,
    /// Fractional Steiner tree packing
    Steiner,
    /// Multi-edge tree code; picks the best k/n with n <= 12 if not given
    TreeCode,
    /// Diamond network code for the arithmetic sum (even k)
    DiamondCode,
    /// Rate-2 mod-2 sum code on the reverse butterfly
    XorCode,
    /// Exhaustive search for a (k, n) code
    SearchCode,
    /// Verify a code document against a network and function
    VerifyCode,
    /// N(M,L) sweep: cut-set bound against the sumset rate bound
    Gap,
    /// Print the network and function documents
    Export,
    /// Randomized run of the sumset compression checks
    AppendixCheck {
        #[arg(long, default_value_t = 100)]
        families: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}
