//! `symdiff`: local invariants of A₂ singularities and bigness reports for
//! singular surfaces in P³.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unsupported input.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symdiff_core::criterion::Criterion;
use symdiff_core::local_invariants::{Method, SingularityClass};
use symdiff_core::monomials::FType;

use commands::{DegreesArgs, Fault, H0Args};
use output::Format;

#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Unsupported(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Unsupported(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Verification(m) | Failure::Unsupported(m) => f.write_str(m),
        }
    }
}

impl From<symdiff_core::Error> for Failure {
    fn from(e: symdiff_core::Error) -> Self {
        use symdiff_core::Error as E;
        match e {
            E::CacheMismatch { .. } | E::Cache { .. } | E::Csv(_) | E::Io(_) => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Unsupported(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "symdiff",
    version,
    about = "Symmetric-differential invariants of A_n singularities"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Closed,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => Method::ClosedForm,
            MethodArg::Oracle => Method::RankOracle,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CriterionArg {
    Thm1,
    Segre,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Thm1 => Criterion::LocalH1,
            CriterionArg::Segre => Criterion::SegreSum,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact s2, h0 and h1 of an A_n germ (n = 1, 2).
    Invariants {
        /// Singularity type, e.g. a2.
        sing: String,
    },
    /// Tabulate Q(m) and estimate its cubic leading coefficient h0.
    H0 {
        #[arg(long)]
        m_max: u32,
        /// Stride of the third finite difference.
        #[arg(long, default_value_t = symdiff_core::local_invariants::QUASI_PERIOD)]
        step: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Q-sweep cache (CSV m,q,method).
        #[arg(long, env = "SYMDIFF_CACHE")]
        cache: Option<PathBuf>,
        /// Recompute cached values and check them against the cache.
        #[arg(long)]
        revalidate: bool,
        /// Allow the rank oracle beyond m = 40.
        #[arg(long)]
        allow_expensive: bool,
    },
    /// Compare closed-form and rank-oracle dim G on every block with m ≤ m_max.
    VerifyDimg {
        #[arg(long)]
        m_max: u32,
        /// Zero row Q of the degree-M coefficient table (M:Q) to exercise failure reporting.
        #[arg(long, hide = true, value_parser = parse_fault)]
        inject_fault: Option<Fault>,
    },
    /// Per-degree bigness report for surfaces in P³ with A_n points.
    Degrees {
        #[arg(long, default_value_t = 5)]
        d_min: u32,
        #[arg(long, default_value_t = 40)]
        d_max: u32,
        #[arg(long, default_value = "a2")]
        sing: String,
        #[arg(long, value_enum, default_value_t = CriterionArg::Thm1)]
        criterion: CriterionArg,
        /// CSV table `d,available` replacing the construction formula.
        #[arg(long)]
        counts_file: Option<PathBuf>,
    },
    /// Pull a u-monomial i1,i2,m1,m2 back to the smoothing chart.
    Pullback {
        #[arg(allow_hyphen_values = true, value_parser = commands::parse_ftype)]
        ftype: FType,
    },
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    let (m, q) = s.split_once(':').ok_or("expected M:Q")?;
    Ok(Fault {
        m: m.parse().map_err(|_| "bad M")?,
        q: q.parse().map_err(|_| "bad Q")?,
    })
}

fn parse_sing(s: &str) -> Result<SingularityClass, Failure> {
    s.parse::<SingularityClass>().map_err(Failure::from)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Invariants { sing } => commands::invariants(&parse_sing(&sing)?, format),
        Command::H0 {
            m_max,
            step,
            method,
            cache,
            revalidate,
            allow_expensive,
        } => commands::h0(
            &H0Args {
                m_max,
                step,
                method: method.into(),
                cache,
                revalidate,
                allow_expensive,
            },
            format,
        ),
        Command::VerifyDimg {
            m_max,
            inject_fault,
        } => {
            let (out, passed) = commands::verify_dimg(m_max, inject_fault, format)?;
            if passed {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Verification(
                    "closed form and rank oracle disagree".into(),
                ))
            }
        }
        Command::Degrees {
            d_min,
            d_max,
            sing,
            criterion,
            counts_file,
        } => commands::degrees(
            &DegreesArgs {
                d_min,
                d_max,
                sing: parse_sing(&sing)?,
                criterion: criterion.into(),
                counts_file,
            },
            format,
        ),
        Command::Pullback { ftype } => commands::pullback(&ftype, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
