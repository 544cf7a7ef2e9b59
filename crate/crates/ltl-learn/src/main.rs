//! Command-line frontend for the LTL learners.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ltl_learn::benchgen::{generate_sample, pattern_catalog, BenchmarkSpec};
use ltl_learn::dt::{learn_dt, RoundStats, SamplingConfig, Strategy};
use ltl_learn::encoding::SampleEncoding;
use ltl_learn::error::{LearnError, SolverError};
use ltl_learn::exact::{learn_observed, LearnerConfig, SolveStats};
use ltl_learn::eval::evaluate;
use ltl_learn::solver::SolverBackend;
use ltl_learn::trace_io::{read_sample, write_sample, SampleFile};
use ltl_learn::{parse, OperatorSet, Sample};

const EXIT_USER: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ltl-learn",
    version,
    about = "Learn linear temporal logic formulas from positive and negative example traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn minimal consistent formulas via the exact solver-backed search
    Learn(LearnArgs),
    /// Learn a decision tree over solver-derived LTL primitives
    LearnDt(LearnDtArgs),
    /// Generate benchmark samples from the pattern catalog
    Gen(GenArgs),
    /// Print the valuation of a formula on every word of a sample
    Eval(EvalArgs),
    /// Export the size-n encoding of a sample in DIMACS CNF format
    ExportCnf(ExportCnfArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Text,
    JsonLines,
}

#[derive(Args)]
struct CommonLearnArgs {
    /// Sample file to learn from
    #[arg(long)]
    input: PathBuf,
    /// Largest formula size to try
    #[arg(long, default_value_t = 30)]
    max_size: usize,
    /// Total time budget in seconds
    #[arg(long)]
    timeout_seconds: Option<f64>,
    /// Operators to allow, e.g. "G,F,!,&" (overrides the file's .ops block)
    #[arg(long)]
    ops: Option<String>,
    /// embedded | dimacs:<path-to-solver>
    #[arg(long, default_value = "embedded")]
    solver: String,
    /// Statistics stream format
    #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
    stats: StatsFormat,
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    common: CommonLearnArgs,
    /// Number of distinct minimal formulas to report
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args)]
struct LearnDtArgs {
    #[command(flatten)]
    common: CommonLearnArgs,
    /// Subset-selection strategy
    #[arg(long, value_enum, default_value_t = StrategyArg::Alpha)]
    strategy: StrategyArg,
    /// Words per side (alpha) or pairs per batch (beta)
    #[arg(long, default_value_t = 3)]
    subset_size: usize,
    /// Weight boost for misclassified words (alpha)
    #[arg(long, default_value_t = 2.0)]
    boost: f64,
    /// Rounds without progress before weights reset (alpha)
    #[arg(long, default_value_t = 32)]
    restart: usize,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Alpha,
    Beta,
}

#[derive(Args)]
struct GenArgs {
    /// Pattern number 1-9, or "all"
    #[arg(long, default_value = "all")]
    pattern: String,
    /// Comma-separated sample sizes (word counts)
    #[arg(long, default_value = "50,200,500")]
    sizes: String,
    /// Comma-separated seeds
    #[arg(long, default_value = "0")]
    seeds: String,
    /// Total length |u| + |v| of every generated word
    #[arg(long, default_value_t = 10)]
    word_length: usize,
    /// Number of unconstrained noise propositions
    #[arg(long, default_value_t = 1)]
    noise: usize,
    /// Directory to write sample files and the manifest into
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Formula text, e.g. "G (! p0)"
    #[arg(long)]
    formula: String,
    /// Sample file with the words to evaluate
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ExportCnfArgs {
    /// Sample file to encode
    #[arg(long)]
    input: PathBuf,
    /// Formula size bound n
    #[arg(long)]
    size: usize,
    /// Output .cnf path
    #[arg(long)]
    output: PathBuf,
    /// Operators to allow (overrides the file's .ops block)
    #[arg(long)]
    ops: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn user(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USER,
            message: message.into(),
        }
    }
}

impl From<LearnError> for Failure {
    fn from(err: LearnError) -> Failure {
        let code = match &err {
            LearnError::Timeout { .. } | LearnError::SizeBudgetExhausted { .. } => EXIT_BUDGET,
            LearnError::Invariant(_) | LearnError::Solver(SolverError::BadModel) => EXIT_INTERNAL,
            _ => EXIT_USER,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.exit_code() == 0 { 0 } else { EXIT_USER };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Learn(args) => cmd_learn(args),
        Command::LearnDt(args) => cmd_learn_dt(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::ExportCnf(args) => cmd_export_cnf(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_sample(path: &Path) -> Result<SampleFile, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::user(format!("cannot open {}: {e}", path.display())))?;
    read_sample(BufReader::new(file))
        .map_err(|e| Failure::user(format!("{}: {e}", path.display())))
}

fn resolve_ops(flag: &Option<String>, file: &SampleFile) -> Result<OperatorSet, Failure> {
    match flag {
        Some(text) => OperatorSet::parse(text).map_err(|e| Failure::user(e.to_string())),
        None => Ok(file.ops.clone().unwrap_or_default()),
    }
}

fn resolve_backend(flag: &str) -> Result<SolverBackend, Failure> {
    if flag == "embedded" {
        return Ok(SolverBackend::Embedded);
    }
    if let Some(path) = flag.strip_prefix("dimacs:") {
        if path.is_empty() {
            return Err(Failure::user("dimacs: requires a solver path"));
        }
        return Ok(SolverBackend::External(PathBuf::from(path)));
    }
    Err(Failure::user(format!(
        "unknown solver {flag:?}; use \"embedded\" or \"dimacs:<path>\""
    )))
}

fn learner_config(
    common: &CommonLearnArgs,
    count: usize,
    file: &SampleFile,
) -> Result<LearnerConfig, Failure> {
    if common.max_size < 1 {
        return Err(Failure::user("--max-size must be at least 1"));
    }
    if count < 1 {
        return Err(Failure::user("--count must be at least 1"));
    }
    Ok(LearnerConfig {
        max_size: common.max_size,
        solve_timeout: None,
        total_timeout: common.timeout_seconds.map(Duration::from_secs_f64),
        ops: resolve_ops(&common.ops, file)?,
        count,
        constraints: Vec::new(),
        backend: resolve_backend(&common.solver)?,
    })
}

fn print_solve_stats(format: StatsFormat, stats: &SolveStats) {
    match format {
        StatsFormat::Text => println!(
            "n={} vars={} (primary {}) clauses={} time={:.3}s verdict={}",
            stats.n,
            stats.variables,
            stats.primary_variables,
            stats.clauses,
            stats.seconds,
            stats.verdict
        ),
        StatsFormat::JsonLines => {
            println!("{}", serde_json::to_string(stats).expect("stats serialize"))
        }
    }
}

fn print_round_stats(format: StatsFormat, stats: &RoundStats) {
    match format {
        StatsFormat::Text => println!(
            "round={} subset={}+{} primitive={} pairs_remaining={} time={:.3}s",
            stats.round,
            stats.subset_positives,
            stats.subset_negatives,
            stats.primitive,
            stats.pairs_remaining,
            stats.seconds
        ),
        StatsFormat::JsonLines => {
            println!("{}", serde_json::to_string(stats).expect("stats serialize"))
        }
    }
}

fn cmd_learn(args: LearnArgs) -> Result<(), Failure> {
    let file = load_sample(&args.common.input)?;
    let config = learner_config(&args.common, args.count, &file)?;
    let format = args.common.stats;
    let result = learn_observed(&file.sample, &config, |s| print_solve_stats(format, s))?;
    for formula in &result.formulas {
        println!("formula := {}", formula.render());
    }
    println!("size := {}", result.size);
    Ok(())
}

fn cmd_learn_dt(args: LearnDtArgs) -> Result<(), Failure> {
    let file = load_sample(&args.common.input)?;
    if args.boost <= 1.0 {
        return Err(Failure::user("--boost must be greater than 1"));
    }
    if args.restart < 1 {
        return Err(Failure::user("--restart must be at least 1"));
    }
    if args.subset_size < 1 {
        return Err(Failure::user("--subset-size must be at least 1"));
    }
    let learner = learner_config(&args.common, 1, &file)?;
    let sampling = SamplingConfig {
        strategy: match args.strategy {
            StrategyArg::Alpha => Strategy::Alpha,
            StrategyArg::Beta => Strategy::Beta,
        },
        subset_size: args.subset_size,
        boost: args.boost,
        restart_rounds: args.restart,
        seed: args.seed,
    };
    let result = learn_dt(&file.sample, &learner, &sampling)?;
    for stats in &result.rounds {
        print_round_stats(args.common.stats, stats);
    }
    for primitive in result.primitives.primitives() {
        println!("primitive := {}", primitive.render());
    }
    println!("tree :=");
    print!("{}", result.tree.render(result.primitives.primitives()));
    println!("formula := {}", result.formula.render());
    println!("size := {}", result.formula.size());
    println!("inner_nodes := {}", result.tree.inner_count());
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let catalog = pattern_catalog();
    let patterns: Vec<(usize, _)> = if args.pattern == "all" {
        catalog.into_iter().enumerate().collect()
    } else {
        let idx: usize = args
            .pattern
            .parse()
            .map_err(|_| Failure::user("--pattern must be 1-9 or \"all\""))?;
        if !(1..=9).contains(&idx) {
            return Err(Failure::user("--pattern must be 1-9 or \"all\""));
        }
        vec![(idx - 1, catalog[idx - 1].clone())]
    };
    let parse_list = |text: &str, what: &str| -> Result<Vec<u64>, Failure> {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::user(format!("bad {what} list entry {s:?}")))
            })
            .collect()
    };
    let sizes = parse_list(&args.sizes, "size")?;
    let seeds = parse_list(&args.seeds, "seed")?;
    if args.word_length < 2 {
        return Err(Failure::user("--word-length must be at least 2"));
    }
    if sizes.iter().any(|&s| s < 2) {
        return Err(Failure::user("sample sizes must be at least 2"));
    }
    if sizes.iter().any(|&s| s > 1000) {
        eprintln!("note: sizes above 1000 generate large samples; learning on them can take long");
    }

    std::fs::create_dir_all(&args.output)
        .map_err(|e| Failure::user(format!("cannot create {}: {e}", args.output.display())))?;
    let mut manifest = String::new();
    for (idx, pattern) in &patterns {
        for &size in &sizes {
            for &seed in &seeds {
                let spec = BenchmarkSpec {
                    pattern: pattern.clone(),
                    sample_size: size as usize,
                    word_length: args.word_length,
                    noise_props: args.noise,
                    seed,
                    draw_budget: 1_000_000,
                };
                let sample = generate_sample(&spec).map_err(|e| Failure::user(e.to_string()))?;
                let name = format!("pattern{}-size{}-seed{}.trace", idx + 1, size, seed);
                let path = args.output.join(&name);
                let out = File::create(&path)
                    .map_err(|e| Failure::user(format!("cannot write {}: {e}", path.display())))?;
                write_sample(&sample, None, out)
                    .map_err(|e| Failure::user(format!("write {}: {e}", path.display())))?;
                manifest.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    pattern.render(),
                    size,
                    seed,
                    name
                ));
                println!("wrote {}", path.display());
            }
        }
    }
    let manifest_path = args.output.join("manifest.txt");
    let mut out = File::create(&manifest_path)
        .map_err(|e| Failure::user(format!("cannot write manifest: {e}")))?;
    out.write_all(manifest.as_bytes())
        .map_err(|e| Failure::user(format!("write manifest: {e}")))?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let file = load_sample(&args.input)?;
    let formula = parse(&args.formula).map_err(|e| Failure::user(e.to_string()))?;
    let sample: &Sample = &file.sample;
    for word in sample.words() {
        let value = evaluate(&formula, sample.alphabet(), word, 0)
            .map_err(|e| Failure::user(e.to_string()))?;
        println!("{value}");
    }
    Ok(())
}

fn cmd_export_cnf(args: ExportCnfArgs) -> Result<(), Failure> {
    let file = load_sample(&args.input)?;
    if args.size < 1 {
        return Err(Failure::user("--size must be at least 1"));
    }
    let ops = resolve_ops(&args.ops, &file)?;
    let encoding = SampleEncoding::build(args.size, &file.sample, &ops);
    let instance = encoding.to_instance(true);
    let out = File::create(&args.output)
        .map_err(|e| Failure::user(format!("cannot write {}: {e}", args.output.display())))?;
    instance
        .write_dimacs(out)
        .map_err(|e| Failure::user(format!("write {}: {e}", args.output.display())))?;
    println!(
        "wrote {} ({} variables, {} primary, {} clauses)",
        args.output.display(),
        instance.num_vars(),
        encoding.primary_var_count(),
        instance.num_clauses()
    );
    Ok(())
}
