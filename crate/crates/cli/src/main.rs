//! `bcff`: command-line front end for bcff-core.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bcff", version, about = "Bost–Connes systems over F_q(T) at finite level")]
pub struct Cli {
    /// Size of the constant field.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,

    /// Modulus for a prime-power q, ascending coefficients over F_p ("1,1,1").
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    /// Directory for cached prime tables.
    #[arg(long, global = true, env = "BCFF_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Also write the report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// The extension `L = F_{q^n} K_m`.
#[derive(Args, Debug, Clone)]
pub struct ExtArgs {
    /// Constant-field degree, or "inf".
    #[arg(long, default_value = "1")]
    pub n: String,

    /// Conductor, a polynomial in T.
    #[arg(long, default_value = "1")]
    pub m: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monic irreducibles of degree d.
    Primes {
        #[arg(long)]
        d: u32,
        /// Report only the count.
        #[arg(long)]
        count_only: bool,
    },
    /// Truncated partition function.
    Zeta {
        #[arg(long, default_value_t = 10)]
        dmax: u32,
        #[arg(long)]
        beta: Option<String>,
        /// Finite primes of S, comma separated.
        #[arg(long, default_value = "")]
        exclude: String,
    },
    /// Evaluate a KMS state on f·u_D.
    Kms {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Truncation degree for the enumerated cross-check.
        #[arg(long, default_value_t = 12)]
        dmax: u32,
        /// Extremal state label "a,u".
        #[arg(long, default_value = "0,1")]
        state: String,
        /// Cylinder or weighted sum of cylinders, JSON.
        #[arg(long, default_value = "{}")]
        cylinder: String,
        /// Divisor D, e.g. "(T)^2*(T+1)^-1".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        divisor: String,
        #[arg(long, default_value = "")]
        exclude: String,
        /// KMS₀ character as prime phases "T:1/2,T+1:1/2".
        #[arg(long, default_value = "")]
        chi: String,
    },
    /// Type of the unique KMS state through the tail ratio set.
    RatioSet {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 16)]
        dmax: u32,
        #[arg(long, default_value = "")]
        exclude: String,
        #[arg(long, default_value_t = 2.0)]
        theta: f64,
        /// Random tail transforms sampled on the kernel (uses --seed).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Carlitz module maps, torsion and exponential.
    #[command(group(clap::ArgGroup::new("what").required(true).args(["phi", "torsion", "exp"])))]
    Carlitz {
        #[arg(long)]
        phi: Option<String>,
        /// "m,p".
        #[arg(long)]
        torsion: Option<String>,
        #[arg(long)]
        exp: Option<u32>,
        #[arg(long, default_value_t = 16)]
        bound: u32,
    },
    /// Finite-level check of the torsion realization.
    BcCheck {
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
    },
    /// Prime counts by Artin class.
    Chebotarev {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, default_value_t = 10)]
        dmax: u32,
        #[arg(long, default_value_t = 4.0)]
        c: f64,
    },
    /// Flow of weights at β.
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        n: Option<u32>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
