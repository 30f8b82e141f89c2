use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fcarel::experiment::{run_experiment, ExperimentConfig, IndexKind};
use fcarel::export::{lattice_json, score_csv, score_lattice, ScoreOptions, ScoreSelection};
use fcarel::format::{parse_csv, parse_cxt, write_cxt};
use fcarel_core::eval::SplitOrder;
use fcarel_core::lattice::DEFAULT_MAX_CONCEPTS;
use fcarel_core::relevance::STABILITY_BRUTE_FORCE_MAX_EXTENT;
use fcarel_core::{Activation, ConceptLattice, Error, FormalContext, LatticeOptions, StabilityMethod};

/// Concept lattices, Conceptual Relevance and stability scores.
#[derive(Parser)]
#[command(name = "fcarel", version)]
struct Cli {
    /// Worker threads for per-concept scoring (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the concept lattice; print `|G| |M| |L|`.
    Lattice {
        #[command(flatten)]
        input: InputArgs,
        /// Lattice JSON destination.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the per-concept score CSV.
    Score {
        #[command(flatten)]
        input: InputArgs,
        /// cr, stability or all.
        #[arg(long, default_value = "cr")]
        index: String,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Split, score shared concepts on both sides, correlate and time.
    Eval {
        #[command(flatten)]
        input: InputArgs,
        /// cr or stability.
        #[arg(long, default_value = "cr")]
        index: String,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Fraction of objects in the reference side.
        #[arg(long, default_value_t = fcarel_core::eval::DEFAULT_SPLIT_RATIO)]
        ratio: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// shuffle (seeded) or ordered (file order).
        #[arg(long, default_value = "shuffle")]
        split: String,
        /// Directory for scores.csv, summary.csv and timings.csv.
        #[arg(long)]
        output: PathBuf,
    },
    /// Write a random context as `.cxt`; each incidence holds with probability p.
    Gen {
        #[arg(long)]
        objects: usize,
        #[arg(long)]
        attributes: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// cxt or csv; by default taken from the file extension.
    #[arg(long)]
    format: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_CONCEPTS)]
    max_concepts: usize,
}

#[derive(Args)]
struct ScoringArgs {
    #[arg(long, default_value = "arithmetic")]
    activation: String,
    /// brute or dp.
    #[arg(long, default_value = "brute")]
    stability_method: String,
    #[arg(long, default_value_t = STABILITY_BRUTE_FORCE_MAX_EXTENT)]
    max_stability_extent: usize,
}

enum Failure {
    Input(String),
    Cap(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Cap(_) => 2,
            Failure::Config(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Config(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooManyConcepts { .. } | Error::OracleLimit { .. } => Failure::Cap(e.to_string()),
            Error::UnknownActivation(_) => Failure::Config(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn read_context(args: &InputArgs) -> Result<FormalContext, Failure> {
    let format = match &args.format {
        Some(f) => f.to_ascii_lowercase(),
        None => args
            .input
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default(),
    };
    if format != "cxt" && format != "csv" {
        return Err(Failure::Input(format!(
            "{}: cannot tell the format; use --format cxt or --format csv",
            args.input.display()
        )));
    }
    let text = fs::read_to_string(&args.input).map_err(|e| io_failure(&args.input, e))?;
    let parsed = if format == "cxt" {
        parse_cxt(&text)
    } else {
        parse_csv(&text)
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))
}

fn build(ctx: &FormalContext, args: &InputArgs) -> Result<ConceptLattice, Failure> {
    let opts = LatticeOptions {
        max_concepts: args.max_concepts,
        ..Default::default()
    };
    Ok(ConceptLattice::build_with(ctx, &opts)?)
}

fn parse_activation(name: &str) -> Result<Activation, Failure> {
    name.parse()
        .map_err(|_| Failure::Config(format!("unknown activation {name:?}")))
}

fn parse_stability_method(name: &str) -> Result<StabilityMethod, Failure> {
    match name {
        "brute" => Ok(StabilityMethod::BruteForce),
        "dp" => Ok(StabilityMethod::LatticeDp),
        _ => Err(Failure::Config(format!("unknown stability method {name:?}"))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Lattice { input, output } => {
            let ctx = read_context(&input)?;
            let lat = build(&ctx, &input)?;
            if let Some(path) = output {
                write_file(&path, &lattice_json(&ctx, &lat))?;
            }
            println!("{} {} {}", ctx.n_objects(), ctx.n_attributes(), lat.len());
        }
        Command::Score {
            input,
            index,
            scoring,
            output,
        } => {
            let select = match index.as_str() {
                "cr" => ScoreSelection {
                    relevance: true,
                    stability: false,
                },
                "stability" => ScoreSelection {
                    relevance: false,
                    stability: true,
                },
                "all" => ScoreSelection {
                    relevance: true,
                    stability: true,
                },
                _ => return Err(Failure::Config(format!("unknown index {index:?}"))),
            };
            let opts = ScoreOptions {
                activation: parse_activation(&scoring.activation)?,
                stability_method: parse_stability_method(&scoring.stability_method)?,
                max_stability_extent: scoring.max_stability_extent,
                select,
            };
            let ctx = read_context(&input)?;
            let lat = build(&ctx, &input)?;
            let scores = score_lattice(&ctx, &lat, &opts);
            write_file(&output, &score_csv(&lat, &scores))?;
        }
        Command::Eval {
            input,
            index,
            scoring,
            ratio,
            seed,
            split,
            output,
        } => {
            let config = ExperimentConfig {
                ratio,
                seed,
                index: index.parse::<IndexKind>().map_err(Failure::Config)?,
                activation: parse_activation(&scoring.activation)?,
                stability_method: parse_stability_method(&scoring.stability_method)?,
                max_stability_extent: scoring.max_stability_extent,
                split_order: match split.as_str() {
                    "shuffle" => SplitOrder::Shuffled,
                    "ordered" => SplitOrder::Ordered,
                    _ => return Err(Failure::Config(format!("unknown split order {split:?}"))),
                },
                lattice: LatticeOptions {
                    max_concepts: input.max_concepts,
                    ..Default::default()
                },
            };
            let ctx = read_context(&input)?;
            let report = run_experiment(&ctx, &config)?;
            fs::create_dir_all(&output).map_err(|e| io_failure(&output, e))?;
            write_file(&output.join("scores.csv"), &report.scores_csv())?;
            write_file(&output.join("summary.csv"), &report.summary_csv())?;
            write_file(&output.join("timings.csv"), &report.timings_csv())?;
            if report.dropped > 0 {
                eprintln!(
                    "note: {} shared concepts exceed the stability extent cap of {} and were dropped",
                    report.dropped, config.max_stability_extent
                );
            }
            println!("{}", report.summary_line());
        }
        Command::Gen {
            objects,
            attributes,
            p,
            seed,
            output,
        } => {
            let ctx = FormalContext::coin_toss(objects, attributes, p, seed)?;
            write_file(&output, &write_cxt(&ctx))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fcarel: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
