use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use syzrep::cli::{self, AppendixTask, MuChoice, Outcome};
use syzrep::implicit::{GcdOptions, DEFAULT_SAMPLE_BUDGET};
use syzrep::system::AnySystem;
use syzrep::Error;

/// Threshold degrees, syzygy matrices and implicit equations of
/// hypersurfaces given by n+1 forms of equal degree in n variables.
#[derive(Parser)]
#[command(name = "syzrep", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct MuArgs {
    /// Degree of the matrix rows: an integer or 'auto' for the threshold.
    #[arg(long, conflicts_with = "tune")]
    mu: Option<String>,
    /// Pick mu from the syzygy order l instead.
    #[arg(long)]
    tune: Option<u32>,
}

impl MuArgs {
    fn choice(&self) -> Result<MuChoice, Error> {
        match (&self.mu, self.tune) {
            (_, Some(l)) => Ok(MuChoice::Tune(l)),
            (Some(s), None) => s.parse(),
            (None, None) => Ok(MuChoice::Auto),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert data, Koszul homology and threshold degrees.
    Analyze { input: PathBuf },
    /// The matrix M_mu.
    Matrix {
        input: PathBuf,
        #[command(flatten)]
        mu: MuArgs,
        /// Largest T-degree of columns.
        #[arg(long)]
        lmax: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Implicit equation from M_mu, verified against the forms.
    Implicitize {
        input: PathBuf,
        #[command(flatten)]
        mu: MuArgs,
        /// Column subsets tried in colex order before block combinations.
        #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
        budget: usize,
    },
    /// Grids for the truncated monomial algebra statements.
    Appendix {
        #[command(subcommand)]
        task: AppendixCmd,
    },
}

#[derive(Subcommand)]
enum AppendixCmd {
    /// Multiplication by powers of x_1+...+x_n, all n' <= n, m' <= m.
    Lefschetz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Signs of (1-t^d)^n/(1-t)^(n-1), all 2 <= n' <= n, 2 <= d' <= d.
    Signs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    /// (x+a)^t P_j = 0, all m' <= m, t' <= t, j.
    Lemme {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u32,
    },
    /// Kernel of (x+a)^t over Q[a]/a^N, all m' <= m, t' <= t, N' <= N.
    Kernel {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u32,
        #[arg(long = "N")]
        nilpotency: u32,
    },
}

fn load(path: &PathBuf) -> Result<AnySystem, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    AnySystem::from_json(&text)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Analyze { input } => cli::analyze(&load(input)?),
        Cmd::Matrix { input, mu, lmax, format } => {
            cli::matrix(&load(input)?, mu.choice()?, *lmax, matches!(format, Format::Text))
        }
        Cmd::Implicitize { input, mu, budget } => {
            let opts = GcdOptions { sample_budget: *budget, ..GcdOptions::default() };
            cli::implicit(&load(input)?, mu.choice()?, &opts)
        }
        Cmd::Appendix { task } => cli::appendix(match *task {
            AppendixCmd::Lefschetz { n, m } => AppendixTask::Lefschetz { n, m },
            AppendixCmd::Signs { n, d } => AppendixTask::Signs { n, d },
            AppendixCmd::Lemme { m, t } => AppendixTask::Lemme { m, t },
            AppendixCmd::Kernel { m, t, nilpotency } => AppendixTask::Kernel { m, t, nilpotency },
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = outcome.render();
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.exit_code() as u8)
}
