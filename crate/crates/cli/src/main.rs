use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lmmaes::problems::{make_biobjective, SingleKind, PROBLEM_IDS};
use lmmaes_cli::config::{Algorithm, Budget, ExperimentConfig, Format, Mode, ProblemRef};
use lmmaes_cli::summary::{write_summary, Column, SummaryOptions};
use lmmaes_cli::{default_output_dir, read_stream, run_experiment, summarize, CliError, FileSink, RunOptions};

#[derive(Parser)]
#[command(name = "lmmaes", version, about = "Limited-memory matrix adaptation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded repetitions and log trajectories.
    Run(RunArgs),
    /// Reduce logged runs to a median trajectory.
    Summarize(SummarizeArgs),
    /// List the available test problems.
    ListProblems,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Defaults to the mode of the problem.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    algo: Option<Algorithm>,
    /// Function name (sphere, cigar, ...) or bi-objective id 1-9.
    #[arg(long)]
    problem: Option<ProblemRef>,
    /// One or more dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    #[arg(long)]
    mu: Option<usize>,
    /// Absolute evaluation budget.
    #[arg(long, conflicts_with = "budget_per_mu_n")]
    budget: Option<u64>,
    /// Budget in multiples of mu*n (n in single mode).
    #[arg(long)]
    budget_per_mu_n: Option<f64>,
    /// Fitness target (single) or hypervolume-gap target (multi).
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Condition number of the bi-objective ellipsoids.
    #[arg(long)]
    condition: Option<f64>,
    /// Evaluations between log records.
    #[arg(long)]
    log_every: Option<u64>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file. Defaults to a file in $LMMAES_OUTPUT_DIR or ./results.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time. Off by default so that logs are reproducible byte for byte.
    #[arg(long)]
    timing: bool,
    /// Worker threads for repetitions.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Log files written by `run`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    column: Option<Column>,
    /// Drop single-objective runs whose final value exceeds this.
    #[arg(long)]
    trapped_threshold: Option<f64>,
    /// Summary CSV; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&args.config, args.problem) {
        (Some(path), _) => ExperimentConfig::from_json_file(path)?,
        (None, Some(problem)) => ExperimentConfig::new(problem, args.dim.clone()),
        (None, None) => return Err(CliError::usage("either --problem or --config is required")),
    };
    if let Some(problem) = args.problem {
        if problem.mode() != cfg.problem.mode() {
            let fresh = ExperimentConfig::new(problem, cfg.dimensions.clone());
            cfg.mode = fresh.mode;
            cfg.algorithm = fresh.algorithm;
            cfg.target = fresh.target;
        }
        cfg.problem = problem;
    }
    if !args.dim.is_empty() {
        cfg.dimensions = args.dim.clone();
    }
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if let Some(algo) = args.algo {
        cfg.algorithm = algo;
    }
    if let Some(mu) = args.mu {
        cfg.mu = mu;
    }
    if let Some(b) = args.budget {
        cfg.budget = Budget::Evaluations(b);
    }
    if let Some(per) = args.budget_per_mu_n {
        cfg.budget = Budget::PerMuN(per);
    }
    if let Some(t) = args.target {
        cfg.target = t;
    }
    if let Some(r) = args.reps {
        cfg.repetitions = r;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(c) = args.condition {
        cfg.condition = c;
    }
    if args.log_every.is_some() {
        cfg.log_every = args.log_every;
    }
    if let Some(s) = args.sigma0 {
        cfg.sigma0 = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let cfg = build_config(&args)?;
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    };
    let out = args.out.clone().unwrap_or_else(|| {
        let problem = cfg.problem.to_string();
        let name = match cfg.dimensions.as_slice() {
            [n] => format!("{}_{problem}_n{n}.{ext}", cfg.algorithm),
            _ => format!("{}_{problem}.{ext}", cfg.algorithm),
        };
        default_output_dir().join(name)
    });
    let mut sink = FileSink::new(out, args.format, cfg.dimensions.len());
    let result = run_experiment(&cfg, RunOptions { timing: args.timing, jobs: args.jobs }, &mut sink);
    for path in &sink.written {
        eprintln!("wrote {}", path.display());
    }
    for o in result.as_deref().unwrap_or_default() {
        let last = o.last();
        match last.gap {
            Some(gap) => eprintln!(
                "n={} run={} seed={} stop={:?} evaluations={} hypervolume={} gap={gap:e}",
                o.n, o.run, o.seed, o.stop, last.evaluations, last.quality
            ),
            None => eprintln!(
                "n={} run={} seed={} stop={:?} evaluations={} fitness={:e}",
                o.n, o.run, o.seed, o.stop, last.evaluations, last.quality
            ),
        }
    }
    result.map(|_| ())
}

fn summarize_files(args: SummarizeArgs) -> Result<(), CliError> {
    let mut header = None;
    let mut records = Vec::new();
    for path in &args.inputs {
        let (h, rs) = read_stream(path)?;
        header.get_or_insert(h);
        records.extend(rs);
    }
    let options = SummaryOptions { column: args.column, trapped_threshold: args.trapped_threshold };
    let rows = summarize(header.as_ref(), &records, options)?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            write_summary(std::io::BufWriter::new(file), &rows)
        }
        None => write_summary(std::io::stdout().lock(), &rows),
    }
}

fn list_problems() -> Result<(), CliError> {
    println!("single-objective (--mode single):");
    for kind in SingleKind::ALL {
        println!("  {kind}");
    }
    println!("bi-objective (--mode multi), linear front from (0,1) to (1,0):");
    for id in PROBLEM_IDS {
        let p = make_biobjective(id, 2, 1e3, 0)?;
        let aligned = p.axis_aligned();
        println!(
            "  {id}  {:<24} same hessian: {:<3}  axis aligned: {}/{}",
            p.name(),
            if p.same_hessian() { "yes" } else { "no" },
            if aligned[0] { "yes" } else { "no" },
            if aligned[1] { "yes" } else { "no" },
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Summarize(args) => summarize_files(args),
        Command::ListProblems => list_problems(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
