use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use germslice::invariants::Budget;
use germslice::oracle::OracleOptions;
use germslice::unfolding::{whitney_report, DegreeMode, WhitneyOptions, WhitneyVerdict};
use germslice_cli::corpus::{load_rows, summary_table, verify_corpus, VerifyOptions};
use germslice_cli::input::{parse_rational_arg, read_file, unfolding_from_toml};
use germslice_cli::render::{analysis_text, whitney_text};
use germslice_cli::{analyze, exit_code, AnalyzeOptions, GermInput, InputError};

#[derive(Parser)]
#[command(name = "germslice", version, about = "Double point curves, invariants and transversal slices of corank-1 germs (C^2,0) -> (C^3,0)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OracleArgs {
    /// Number of random planes.
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Seed for the random planes and coordinate mixes.
    #[arg(long, default_value_t = 0x51ce)]
    seed: u64,
    /// Largest series truncation before giving up.
    #[arg(long, default_value_t = 4096)]
    max_truncation: usize,
}

impl OracleArgs {
    fn options(&self) -> OracleOptions {
        OracleOptions {
            samples: self.samples,
            seed: self.seed,
            start_truncation: None,
            max_truncation: self.max_truncation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one germ file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        skip_oracle: bool,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Reduction steps allowed for each local algebra computation.
        #[arg(long, default_value_t = germslice::invariants::DEFAULT_MAX_REDUCTIONS)]
        max_reductions: u64,
        /// Add per-stage timings (makes the output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Check every row of a corpus file against its expected values.
    VerifyCorpus {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        skip_oracle: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Check a one-parameter unfolding at sample parameter values.
    Unfold {
        file: PathBuf,
        /// Parameter values (rationals such as 1/2); default 1, 1/2, -2.
        #[arg(long = "t", allow_hyphen_values = true)]
        t: Vec<String>,
        /// Also accept added terms of higher weighted degree.
        #[arg(long)]
        upper: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

fn input_failure(e: InputError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match &e {
        InputError::Germ(g) => exit_code(g) as u8,
        _ => 1,
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            file,
            json,
            skip_oracle,
            oracle,
            max_reductions,
            timings,
        } => {
            let input = match GermInput::load(&file) {
                Ok(i) => i,
                Err(e) => return input_failure(e),
            };
            let opts = AnalyzeOptions {
                skip_oracle,
                oracle: oracle.options(),
                budget: Budget::with_max(max_reductions),
                timings,
            };
            let analysis = match analyze(&input, &opts) {
                Ok(a) => a,
                Err(e) => return input_failure(e.into()),
            };
            if json {
                println!("{}", to_json(&analysis.report));
            } else {
                print!("{}", analysis_text(&analysis.report));
            }
            for f in &analysis.failures {
                eprintln!("error: {f}");
            }
            ExitCode::from(analysis.exit_code() as u8)
        }
        Command::VerifyCorpus {
            file,
            json,
            skip_oracle,
            oracle,
        } => {
            let rows = match load_rows(&file) {
                Ok(r) => r,
                Err(e) => return input_failure(e),
            };
            let opts = VerifyOptions {
                skip_oracle,
                oracle: oracle.options(),
            };
            let outcomes = verify_corpus(&rows, &opts);
            if json {
                println!("{}", to_json(&outcomes));
            } else {
                print!("{}", summary_table(&outcomes));
            }
            if outcomes.iter().all(|o| o.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Command::Unfold {
            file,
            t,
            upper,
            json,
            oracle,
        } => {
            let parsed = read_file(&file).and_then(|text| unfolding_from_toml(&text));
            let (_, unfolding) = match parsed {
                Ok(p) => p,
                Err(e) => return input_failure(e),
            };
            let t = if t.is_empty() {
                vec!["1".into(), "1/2".into(), "-2".into()]
            } else {
                t
            };
            let samples = match t.iter().map(|s| parse_rational_arg(s)).collect::<Result<Vec<_>, _>>() {
                Ok(v) => v,
                Err(e) => return input_failure(e),
            };
            let opts = WhitneyOptions {
                mode: if upper { DegreeMode::Upper } else { DegreeMode::Strict },
                budget: Budget::default(),
                oracle: oracle.options(),
            };
            let report = match whitney_report(&unfolding, &samples, &opts) {
                Ok(r) => r,
                Err(e) => return input_failure(e.into()),
            };
            if json {
                println!("{}", to_json(&report));
            } else {
                print!("{}", whitney_text(&report));
            }
            match report.verdict {
                WhitneyVerdict::Alarm(_) => ExitCode::from(2),
                WhitneyVerdict::NotSameDegree => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
    }
}
