use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mscount_core::bench::{rows_to_csv, rows_to_json, run_sweep, SweepConfig};
use mscount_core::count::{
    count_random_a1, signed_count_exhaustive_threaded, signed_count_pruned_threaded,
};
use mscount_core::dimacs::{parse_dimacs, write_dimacs};
use mscount_core::generator::{random_formula, GeneratorConfig};
use mscount_core::inflation::{count_a2, inflate_formula, verify_inflation};
use mscount_core::oracle::{brute_force_count, brute_force_signed_sum, MAX_SIGNED_SUM_CLAUSES};
use mscount_core::{Error, Formula};

use crate::report::{OutputFormat, Report};

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> CliError {
        let code = match err {
            Error::IdentityOutOfRange { .. } | Error::SplitCountOutOfRange { .. } => 2,
            _ => 1,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::input(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "mscount",
    version,
    about = "Model counting via monotone sub-formula enumeration"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count satisfying assignments of a DIMACS CNF file.
    Count(CountArgs),
    /// Generate a seeded uniform random k-CNF instance.
    Generate(GenerateArgs),
    /// Widen a formula with a count-preserving random inflation.
    Inflate(InflateArgs),
    /// Cross-check counting engines against the brute-force oracles.
    Validate(ValidateArgs),
    /// Run a benchmark sweep from a JSON grid specification.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Pruned,
    A1,
    A2,
    Oracle,
}

#[derive(Args)]
struct CountArgs {
    /// Input CNF file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Split tuning parameter for the a1/a2 modes.
    #[arg(long, default_value_t = 2)]
    sigma: u32,
    /// RNG seed; required by mode a2.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the partitioned traversal (exhaustive/pruned).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args)]
struct GenerateArgs {
    /// Variable count.
    #[arg(long)]
    n: u32,
    /// Clause count.
    #[arg(long)]
    m: usize,
    /// Exact clause width.
    #[arg(long)]
    k: u32,
    #[arg(long)]
    seed: u64,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct InflateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    sigma: u32,
    #[arg(long)]
    seed: u64,
    /// Output path for the widened formula, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional JSON audit record of the inflation.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Validate a file instead of a generated corpus.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Second file whose model count must match `--in`.
    #[arg(long)]
    against: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    /// Number of seeds (0..seeds) in corpus mode.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long, default_value_t = 2)]
    sigma: u32,
}

#[derive(Args)]
struct BenchArgs {
    /// Sweep grid specification (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    format: BenchFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Inflate(args) => cmd_inflate(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_formula(path: &PathBuf) -> Result<Formula, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(parse_dimacs(&text)?)
}

fn write_output(target: &str, content: &str) -> Result<(), CliError> {
    if target == "-" {
        print!("{content}");
    } else {
        fs::write(target, content)?;
        eprintln!("wrote {target}");
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<(), CliError> {
    let formula = read_formula(&args.input)?;
    let started = Instant::now();
    let report: Report = match args.mode {
        Mode::Exhaustive => signed_count_exhaustive_threaded(&formula, args.threads)?.into(),
        Mode::Pruned => signed_count_pruned_threaded(&formula, args.threads)?.into(),
        Mode::A1 => count_random_a1(&formula, args.sigma)?.into(),
        Mode::A2 => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::input("mode a2 requires --seed"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            count_a2(&formula, args.sigma, &mut rng)?.into()
        }
        Mode::Oracle => {
            let count = brute_force_count(&formula)?;
            Report {
                model_count: count.to_string(),
                mode: "oracle".into(),
                exact: true,
                nodes_visited: 1u64.checked_shl(formula.num_vars()).unwrap_or(u64::MAX),
                subtrees_pruned: 0,
            }
        }
    };
    let elapsed = started.elapsed();
    match args.format {
        OutputFormat::Text => print!("{}", report.render_text()),
        OutputFormat::Json => print!("{}", report.render_json()),
    }
    eprintln!("wall time: {elapsed:?}");
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let formula = random_formula(&GeneratorConfig {
        num_vars: args.n,
        num_clauses: args.m,
        width: args.k,
        seed: args.seed,
    })?;
    write_output(&args.out, &write_dimacs(&formula))
}

fn cmd_inflate(args: InflateArgs) -> Result<(), CliError> {
    let formula = read_formula(&args.input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (inflated, record) = inflate_formula(&formula, args.sigma, &mut rng)?;
    if let Err(defect) = verify_inflation(&formula, &inflated, &record) {
        return Err(CliError {
            code: 2,
            message: format!("inflation self-check failed: {defect}"),
        });
    }
    write_output(&args.out, &write_dimacs(&inflated))?;
    if let Some(record_path) = &args.record {
        let mut json =
            serde_json::to_string_pretty(&record).map_err(|e| CliError::input(e.to_string()))?;
        json.push('\n');
        fs::write(record_path, json)?;
        eprintln!("wrote {}", record_path.display());
    }
    Ok(())
}

/// Every engine that is feasible for the instance, as (name, count).
fn feasible_counts(
    formula: &Formula,
    sigma: u32,
) -> Result<Vec<(&'static str, BigUint)>, CliError> {
    let mut counts = Vec::new();
    if formula.num_vars() <= mscount_core::oracle::MAX_BRUTE_FORCE_VARS {
        counts.push(("oracle", brute_force_count(formula)?));
    }
    if formula.num_clauses() <= MAX_SIGNED_SUM_CLAUSES as usize {
        counts.push(("signed-sum", brute_force_signed_sum(formula)?));
        counts.push((
            "exhaustive",
            signed_count_exhaustive_threaded(formula, 1)?.model_count,
        ));
        counts.push((
            "pruned",
            signed_count_pruned_threaded(formula, 1)?.model_count,
        ));
    }
    if formula.num_clauses() <= sigma as usize * formula.num_vars() as usize {
        // Degenerate split: the split counter covers the full lattice and
        // must agree exactly.
        counts.push(("a1", count_random_a1(formula, sigma)?.model_count));
    }
    if counts.is_empty() {
        return Err(CliError::input(
            "instance exceeds every engine's practical ceiling",
        ));
    }
    Ok(counts)
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    if let Some(input) = &args.input {
        return validate_files(input, args.against.as_ref(), args.sigma);
    }
    let (Some(n), Some(m), Some(k), Some(seeds)) = (args.n, args.m, args.k, args.seeds) else {
        return Err(CliError::input(
            "validate needs either --in FILE or all of --n --m --k --seeds",
        ));
    };

    let mut agreeing = 0u64;
    for seed in 0..seeds {
        let formula = random_formula(&GeneratorConfig {
            num_vars: n,
            num_clauses: m,
            width: k,
            seed,
        })?;
        let counts = feasible_counts(&formula, args.sigma)?;
        let agree = counts.iter().all(|(_, c)| c == &counts[0].1);
        let engines: Vec<&str> = counts.iter().map(|(name, _)| *name).collect();
        println!(
            "seed {seed}: count={} engines=[{}] {}",
            counts[0].1,
            engines.join(","),
            if agree { "agree" } else { "DISAGREE" }
        );
        if agree {
            agreeing += 1;
        }
    }
    println!("{agreeing}/{seeds} agree");
    if agreeing != seeds {
        return Err(CliError {
            code: 3,
            message: "engine disagreement".into(),
        });
    }
    Ok(())
}

fn validate_files(input: &PathBuf, against: Option<&PathBuf>, sigma: u32) -> Result<(), CliError> {
    let formula = read_formula(input)?;
    let counts = feasible_counts(&formula, sigma)?;
    let agree = counts.iter().all(|(_, c)| c == &counts[0].1);
    let engines: Vec<&str> = counts.iter().map(|(name, _)| *name).collect();
    println!(
        "{}: count={} engines=[{}] {}",
        input.display(),
        counts[0].1,
        engines.join(","),
        if agree { "agree" } else { "DISAGREE" }
    );
    let mut ok = agree;

    if let Some(other_path) = against {
        let other = read_formula(other_path)?;
        let other_counts = feasible_counts(&other, sigma)?;
        let other_agree = other_counts.iter().all(|(_, c)| c == &other_counts[0].1);
        let other_engines: Vec<&str> = other_counts.iter().map(|(name, _)| *name).collect();
        println!(
            "{}: count={} engines=[{}] {}",
            other_path.display(),
            other_counts[0].1,
            other_engines.join(","),
            if other_agree { "agree" } else { "DISAGREE" }
        );
        let counts_match = counts[0].1 == other_counts[0].1;
        println!("counts {}", if counts_match { "agree" } else { "DIFFER" });
        ok = ok && other_agree && counts_match;
    }

    if !ok {
        return Err(CliError {
            code: 3,
            message: "engine disagreement".into(),
        });
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::input(format!("{}: {e}", args.config.display())))?;
    let config: SweepConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("bad sweep config: {e}")))?;
    let rows = run_sweep(&config);
    let rendered = match args.format {
        BenchFormat::Csv => rows_to_csv(&rows),
        BenchFormat::Json => {
            let mut json = rows_to_json(&rows);
            json.push('\n');
            json
        }
    };
    write_output(&args.out, &rendered)
}
