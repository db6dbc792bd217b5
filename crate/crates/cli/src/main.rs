use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sixteenons::io::{load_set, render_bound_report, render_history, render_search_record, save_set};
use sixteenons::search::{run_search, SearchConfig};
use sixteenons::verify::{run_suite, Suite};
use sixteenons::{evaluate_bound, CountBasis, Error, EvalOptions, Mode, Side};

/// Exit status for each kind of failure. Usage errors exit with 2 (clap).
mod exit {
    pub const OTHER: u8 = 1;
    pub const VALIDATION: u8 = 3;
    pub const DEGENERATE: u8 = 4;
    pub const SUITE_FAILURE: u8 = 5;
}

#[derive(Parser)]
#[command(name = "sixteenons", version, about = "Exact 2^n-on arithmetic and the k16 lower-bound functional")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Setops,
    Pipeline,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Octonion,
    #[value(name = "sixteen_on")]
    SixteenOn,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomised exact law suites; exits 5 if any law fails.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bound chain on a set file.
    Eval {
        set: PathBuf,
        #[arg(long, value_enum, default_value = "sixteen_on")]
        mode: ModeArg,
        /// Quotient side for S_x; defaults to left (octonion) or right (sixteen_on).
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Compute S_x even when the set is not in one privileged orthant.
        #[arg(long)]
        allow_uncertified: bool,
        /// Bucket by the count on the S_x side instead of the left count.
        #[arg(long)]
        strict_counts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded search from a TOML config and save the best set.
    Search {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Where to save the best set (default: <config>.best.toml).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the history as a tab-separated table.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Write the record here instead of stdout.
        #[arg(long)]
        record: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateR { .. } => exit::DEGENERATE,
            Error::Parse(_)
            | Error::FlagMismatch(_)
            | Error::Config { .. }
            | Error::ModeRequirement(_)
            | Error::ZeroInSet
            | Error::EmptySet
            | Error::LevelOutOfRange(_)
            | Error::LevelMismatch { .. }
            | Error::CoordCount { .. }
            | Error::WrongLevel { .. } => exit::VALIDATION,
            _ => exit::OTHER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: exit::OTHER,
        message: format!("{}: {e}", path.display()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify {
            suite,
            trials,
            seed,
            out,
        } => {
            let suite = match suite {
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Setops => Suite::Setops,
                SuiteArg::Pipeline => Suite::Pipeline,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(suite, trials, seed);
            emit(&report.render(), out.as_deref())?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure {
                    code: exit::SUITE_FAILURE,
                    message: "law suite failed".into(),
                })
            }
        }
        Command::Eval {
            set,
            mode,
            side,
            allow_uncertified,
            strict_counts,
            out,
        } => {
            let a = load_set(&set)?;
            let mode = match mode {
                ModeArg::Octonion => Mode::Octonion,
                ModeArg::SixteenOn => Mode::SixteenOn,
            };
            let mut opts = EvalOptions::new(mode);
            if let Some(side) = side {
                opts.side = match side {
                    SideArg::Left => Side::Left,
                    SideArg::Right => Side::Right,
                };
            }
            opts.allow_uncertified = allow_uncertified;
            if strict_counts {
                opts.basis = CountBasis::Strict;
            }
            let report = evaluate_bound(&a, opts)?;
            emit(&render_bound_report(&report), out.as_deref())
        }
        Command::Search {
            config,
            seed,
            out,
            history,
            record,
        } => {
            let text = fs::read_to_string(&config).map_err(|e| io_failure(&config, e))?;
            let mut parsed = SearchConfig::from_toml_str(&text)?;
            if let Some(seed) = seed {
                parsed.seed = seed;
            }
            let rec = run_search(&parsed)?;
            let best_path = out.unwrap_or_else(|| config.with_extension("best.toml"));
            save_set(&best_path, &rec.best_set)?;
            if let Some(path) = history {
                fs::write(&path, render_history(&rec.history)).map_err(|e| io_failure(&path, e))?;
            }
            emit(&render_search_record(&rec), record.as_deref())?;
            eprintln!("best set saved to {}", best_path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
