use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wilfpoly",
    version,
    about = "Generalized Dedekind sums, Wilf polynomials and period polynomials"
)]
pub struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory holding `L_<p>.json` polynomial caches.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,
    /// Size of the worker pool (default: all cores). Never changes results.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Working precision for numeric sums, in bits (default 128).
    #[arg(long, global = true, value_name = "B")]
    pub precision_bits: Option<u32>,
    /// Seed selecting the cache verification prime.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock timings in the report (makes JSON output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Crt,
    Numeric,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Crt => "crt",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Bernoulli number B_N.
    Bernoulli { n: usize },
    /// Exact generalized Dedekind sum s(r,h,k).
    Dedekind {
        #[arg(long)]
        r: u64,
        #[arg(long, allow_negative_numbers = true)]
        h: i64,
        #[arg(long)]
        k: u64,
    },
    /// The integers p^2 s(p-3,h,p), for one h or all h in 1..p.
    ScaledSum {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_negative_numbers = true)]
        h: Option<i64>,
    },
    /// Power-law, parity and reciprocity congruences plus the periodicity lemma.
    CheckCongruences {
        #[arg(long)]
        p: u64,
    },
    /// The period polynomial L(p,x).
    #[command(name = "compute-L")]
    ComputeL {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Method::Crt)]
        method: Method,
        /// Only L(p,0), via the product of the periods.
        #[arg(long)]
        constant_only: bool,
    },
    /// The generalized Wilf polynomial W(r,k,x), numerically rounded.
    #[command(name = "compute-W")]
    ComputeW {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
    },
    /// Compare W(p-3,p,x) with L(p,x) and report the sign case.
    CheckTheorem1 {
        #[arg(long)]
        p: u64,
    },
    /// The determinant matrix A and its circulant relatives.
    Granville {
        #[arg(long)]
        p: u64,
        /// Entrywise permutation identities between x I - B and A.
        #[arg(long)]
        verify_identity: bool,
        /// Eigenvector identities in finite fields.
        #[arg(long)]
        verify_eigen: bool,
        /// det(A) against L(p,x), modularly and (p <= 11) numerically.
        #[arg(long)]
        verify_det: bool,
    },
    /// Wieferich condition q^(p-1) = 1 (mod p^2), for one q or a scan.
    Wieferich {
        #[arg(long)]
        p: u64,
        #[arg(long, conflicts_with = "scan")]
        q: Option<u64>,
        #[arg(long, requires = "qmax")]
        scan: bool,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Whether L(p,x) splits into linear factors mod q.
    Splitting {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// The exponent of q in L(p,0).
    Valuation {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Reproduce the table of Wieferich pairs and constant-term valuations.
    Table {
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<u64>>,
        /// Add the expensive rows p = 863 and p = 1093.
        #[arg(long)]
        stretch: bool,
    },
}
