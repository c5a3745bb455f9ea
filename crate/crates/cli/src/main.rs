//! `pcoh`: exact distributions, denotations, coherence-space certification
//! and stable-function analysis from the command line.

mod commands;
mod functions;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "pcoh", version, about = "Probabilistic coherence spaces and PCF with fair choice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

/// Budgets and knobs shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Reduction steps per branch.
    #[arg(long, global = true, default_value_t = 64)]
    pub fuel: u64,
    /// Numerals at or above this cutoff are dropped from denotations.
    #[arg(long, visible_alias = "W", global = true, default_value_t = 8)]
    pub web_cutoff: u64,
    /// Monomial degree bound; `extract` defaults to the source's degree.
    #[arg(long, visible_alias = "D", global = true)]
    pub degree: Option<u32>,
    /// Kleene iterations per fixpoint.
    #[arg(long, visible_alias = "K", global = true, default_value_t = 32)]
    pub fixpoint_iters: u32,
    /// Random trials for sampling-based checks.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    /// Seed for every randomized subcommand. There is no default.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact output distribution of a program.
    Dist { file: PathBuf },
    /// Sample a program repeatedly.
    Sample { file: PathBuf },
    /// Denotation of a closed term: a vector for programs, a morphism for functions.
    Denote { file: PathBuf },
    /// Compare operational and denotational results along budget schedules.
    Adequacy {
        file: PathBuf,
        /// Fuel schedule; defaults to doubling from 4 up to --fuel.
        #[arg(long, value_delimiter = ',')]
        fuels: Vec<u64>,
        /// Fixpoint-iteration schedule; defaults to --fixpoint-iters.
        #[arg(long, value_delimiter = ',')]
        ks: Vec<u32>,
    },
    /// Certify the coherence-space axioms of a space descriptor.
    PcsCheck { file: PathBuf },
    /// Probe whether a morphism maps cliques to cliques.
    MorphismCheck { file: PathBuf },
    /// Recover power-series coefficients from a function's derivatives at 0.
    Extract {
        /// Morphism JSON.
        #[arg(long, conflicts_with = "from_denote", required_unless_present = "from_denote")]
        morphism: Option<PathBuf>,
        /// Program of function type whose denotation is the source.
        #[arg(long)]
        from_denote: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Randomized pre-stability test up to a difference order.
    Prestable {
        #[command(flatten)]
        function: FnArgs,
        /// Highest difference order.
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Uniform-split derivative trace.
    Derivative {
        #[command(flatten)]
        function: FnArgs,
        /// Base point, comma separated.
        #[arg(long)]
        x: String,
        /// One direction per occurrence.
        #[arg(long = "dir", required = true)]
        dirs: Vec<String>,
        /// Split counts; defaults to 1, 2, 4, …, 4096.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<u64>,
    },
    /// Taylor remainders of a function at a point.
    Bernstein {
        #[command(flatten)]
        function: FnArgs,
        /// Point, comma separated.
        #[arg(long)]
        x: String,
        /// Highest Taylor order; defaults to the function's degree, else 8.
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Common refinement of two partitions of the same point.
    Refine { file: PathBuf },
}

/// The function under analysis.
#[derive(Args, Debug, Clone)]
pub struct FnArgs {
    /// Morphism JSON.
    #[arg(long, group = "function")]
    pub morphism: Option<PathBuf>,
    /// Power series on the half-line, lowest degree first; may be negative.
    #[arg(long, group = "function", value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<String>,
    /// `e^(t−1)` on the half-line.
    #[arg(long, group = "function")]
    pub exp: bool,
    /// `e^(−1)·Σ_{k≤n} tᵏ/k!` on the half-line.
    #[arg(long, group = "function")]
    pub exp_degree: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct ModeArgs {
    /// Derivative estimator: exact (interpolation), scaling (limit), or splits.
    #[arg(long, default_value = "auto")]
    pub mode: String,
    /// Halvings allowed in scaling mode.
    #[arg(long, default_value_t = 20)]
    pub j_max: u32,
    /// Richardson extrapolation in scaling mode.
    #[arg(long)]
    pub richardson: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.violation { 4 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
