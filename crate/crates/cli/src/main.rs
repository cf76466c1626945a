//! `chainlattice`: build, check and measure chain decompositions of the
//! Boolean lattice from the command line.
//!
//! Every subcommand writes one JSON record (with `"schema": 1`) to stdout or
//! to `--out`. Exit status is 0 on success, 1 when a check or verification
//! fails and 2 on usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "chainlattice",
    version,
    about = "Chain decompositions of the Boolean lattice"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Ground-set size.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Grid dimension.
    #[arg(long, global = true)]
    d: Option<u32>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Decomposition method.
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    /// Comma-separated tolerances for the near-uniform statistics.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0.5")]
    eps: Vec<f64>,
    /// Write the JSON record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Chain dump to write (decompose) or read (verify, stats).
    #[arg(long, global = true)]
    chains: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run this many consecutive seeds and keep the most uniform output.
    #[arg(long = "best-of", global = true, default_value_t = 1)]
    best_of: u32,
    /// Skip writing chain dumps larger than this.
    #[arg(long = "max-bytes", global = true)]
    max_bytes: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Symmetric,
    Uniform,
}

impl From<MethodArg> for chainlattice::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Symmetric => chainlattice::Method::Symmetric,
            MethodArg::Uniform => chainlattice::Method::Uniform,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroundArg {
    Full,
    UpperHalf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Oracle,
    Bound,
    Partition,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a minimum chain partition of 2^[n].
    Decompose,
    /// Check a chain dump.
    Verify {
        /// Family the dump is supposed to partition.
        #[arg(long, value_enum, default_value = "full")]
        ground: GroundArg,
    },
    /// Chain-size statistics of a dump or of a fresh decomposition.
    Stats,
    /// Sperner graph of a decomposition and its certificates.
    Sperner,
    /// Extremal numbers and bounds for forbidden configurations.
    Extremal {
        /// sperner, unionfree, boolean2 or poset:<file>.
        #[arg(long)]
        config: String,
        #[arg(long, value_enum, default_value = "oracle")]
        mode: ModeArg,
        /// Side length of the grid [k]^d for the oracle.
        #[arg(long)]
        k: Option<u32>,
        /// Forbid the poset as an induced rather than a weak subposet.
        #[arg(long)]
        induced: bool,
        /// Grid constant c in ex(k, d, C) <= c k^(d - alpha).
        #[arg(long)]
        c: Option<f64>,
        /// Exponent alpha in ex(k, d, C) <= c k^(d - alpha).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Container statistics for random antichains.
    Containers {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Binomial estimates and the fixed-point table.
    Numerics {
        /// claim22:<part> with part 1..6, or appendix.
        #[arg(long)]
        check: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.global, &cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `chainlattice --help` for usage");
            ExitCode::from(2)
        }
        Err(commands::Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
