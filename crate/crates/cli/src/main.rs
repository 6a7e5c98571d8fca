use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use erglab::recurrence::{Exponent, ScanOptions};
use erglab_cli::commands::{self, BoundsArgs, ScanArgs, BOX_MAX_POINTS, DEFAULT_MAX_POINTS};
use erglab_cli::fuzz::{self, Suite};
use erglab_cli::report::Outcome;
use erglab_cli::write_atomic;

#[derive(Parser)]
#[command(name = "erglab", version, about = "Exact experiments with two commuting measure-preserving maps")]
struct Cli {
    /// Refuse systems with more points than this.
    #[arg(long, global = true, env = "ERGLAB_MAX_POINTS")]
    max_points: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExponentArg {
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a system and report its orbit structure.
    Inspect { path: PathBuf },
    /// Fourth power of the box seminorm, two ways.
    Seminorm {
        path: PathBuf,
        /// `one` or comma-separated rationals, one per point.
        #[arg(long)]
        f: Option<String>,
        /// Points of a set whose indicator is used.
        #[arg(long)]
        set: Option<String>,
    },
    /// Build the magic extension and check it.
    MagicExtend {
        path: PathBuf,
        /// Also write the extension as a system document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Scan one period of μ(A ∩ T₁⁻ⁿA ∩ T₂⁻ⁿA).
    RecurrenceScan {
        path: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value = "4")]
        exponent: ExponentArg,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        allow_non_ergodic: bool,
    },
    /// Cesàro-average, J₀ and difference bounds.
    BoundsCheck {
        path: PathBuf,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        set: Option<String>,
        /// Second function; defaults to the first.
        #[arg(long)]
        f1: Option<String>,
        /// Third function; defaults to the first.
        #[arg(long)]
        f2: Option<String>,
        /// Frequency of the character weight.
        #[arg(long, default_value = "0")]
        t: String,
    },
    /// The three-sequence counterexample for exponent 3.
    Counterexample {
        #[arg(long, default_value = "1")]
        c: String,
        /// Shifts at which to report the intersection measure.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,-1,5,-7")]
        n: Vec<i64>,
    },
    /// Seeded property suites.
    Fuzz {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let limit = |default: usize| cli.max_points.unwrap_or(default);
    match &cli.command {
        Command::Inspect { path } => Ok(commands::inspect(&commands::load(path, limit(DEFAULT_MAX_POINTS))?)),
        Command::Seminorm { path, f, set } => {
            let input = commands::load(path, limit(BOX_MAX_POINTS))?;
            let f = commands::parse_observable(&input.loaded, f.as_deref(), set.as_deref())?;
            commands::seminorm(&input, &f)
        }
        Command::MagicExtend { path, emit } => {
            commands::magic_extend(&commands::load(path, limit(BOX_MAX_POINTS))?, emit.as_deref())
        }
        Command::RecurrenceScan { path, set, exponent, epsilon, horizon, allow_non_ergodic } => {
            let input = commands::load(path, limit(DEFAULT_MAX_POINTS))?;
            let args = ScanArgs {
                set: commands::parse_set(&input.loaded, set)?,
                exponent: match exponent {
                    ExponentArg::Three => Exponent::Three,
                    ExponentArg::Four => Exponent::Four,
                },
                epsilon: commands::parse_rational(epsilon)?,
                options: ScanOptions { horizon: *horizon, allow_non_ergodic: *allow_non_ergodic },
            };
            commands::recurrence_scan(&input, &args)
        }
        Command::BoundsCheck { path, f, set, f1, f2, t } => {
            let input = commands::load(path, limit(BOX_MAX_POINTS))?;
            let f0 = commands::parse_observable(&input.loaded, f.as_deref(), set.as_deref())?;
            let other = |g: &Option<String>| match g {
                Some(g) => commands::parse_observable(&input.loaded, Some(g), None),
                None => Ok(f0.clone()),
            };
            let args = BoundsArgs { f1: other(f1)?, f2: other(f2)?, f0: f0.clone(), t: commands::parse_rational(t)? };
            commands::bounds_check(&input, &args)
        }
        Command::Counterexample { c, n } => commands::counterexample(&commands::parse_rational(c)?, n),
        Command::Fuzz { suite, count, seed } => fuzz::run(*suite, *seed, *count),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.report)? + "\n",
        Format::Csv => match &outcome.csv {
            Some(csv) => csv.clone(),
            None => bail!("--format csv is available for recurrence-scan and counterexample"),
        },
    };
    match &cli.output {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(&cli).and_then(|o| emit(&cli, &o).map(|()| o));
    eprintln!("elapsed {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok(o) if o.violated => {
            eprintln!("property violated; see verdicts");
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
