use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_core::hayashi::{G0Formula, HayashiConfig};
use hardy_core::{HardyError, ToleranceConfig};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "hardy", version, about = "Toeplitz kernels of nearly invariant subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the built-in worked examples.
    Examples(Common),
    /// Classify G K_U from symbol files for G and U.
    Classify {
        g: PathBuf,
        u: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build G, F and phi from G0' and U.
    Construct {
        g0: PathBuf,
        u: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a residual CSV for one identity over its fixtures.
    Verify {
        identity: Identity,
        /// Restrict to these fixture names (comma separated).
        #[arg(long, value_delimiter = ',')]
        fixtures: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Truncation degree N.
    #[arg(long, default_value_t = 64)]
    degree: usize,
    /// Boundary grid size; defaults to the smallest valid power of two (at least 512).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    rank_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    residual_tol: f64,
    /// Strictly increasing truncation degrees.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    ladder: Vec<usize>,
    /// Output file (verify) or directory (other commands).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    #[arg(long, value_enum, default_value_t = Formula::Inverse)]
    g0_formula: Formula,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Formula {
    Inverse,
    AsPrinted,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Lemma31,
    Thm34,
    Thm35,
    PairIdentity,
    Cor53,
    Prop52,
}

impl Common {
    fn config(&self) -> Result<HayashiConfig, HardyError> {
        let grid = match self.grid {
            Some(k) => k,
            None => {
                let mut k = 512;
                while k < 4 * (self.degree + 1) {
                    k *= 2;
                }
                k
            }
        };
        let tol = ToleranceConfig::new(self.degree, grid, self.rank_tol, self.residual_tol)?;
        let cfg = HayashiConfig {
            tol,
            ladder: self.ladder.clone(),
            angle_tol: 1e-5,
            g0_formula: match self.g0_formula {
                Formula::Inverse => G0Formula::Inverse,
                Formula::AsPrinted => G0Formula::AsPrinted,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numerical(String),
    Io(String),
}

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::Singular(_) | HardyError::OutOfRange(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Examples(common) => commands::examples(&common.config()?, common.json, common.out.as_deref()),
        Command::Classify { g, u, common } => commands::classify(&g, &u, &common.config()?, common.out.as_deref()),
        Command::Construct { g0, u, common } => commands::construct(&g0, &u, &common.config()?, common.out.as_deref()),
        Command::Verify { identity, fixtures, common } => {
            commands::verify(identity, &fixtures, &common.config()?, common.json, common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(1)
        }
    }
}
