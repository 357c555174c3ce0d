use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use dagqr::graph::{build_task_graph, to_dot, validate_graph};
use dagqr::sched::{execute, write_trace_csv, ExecOptions, SchedulerKind};
use dagqr::{gen_dominant_matrix, gen_matrix, sequential_factorize, solve, Factorization, Matrix, ReflectorStore};
use dagqr_bench::experiments::{sweep_argmin, write_csv};
use dagqr_bench::args::{parse_positive, parse_size, Size, UsizeList};
use dagqr_bench::{cmd_check, cmd_scale, cmd_sweep, cmd_throughput, time_run, BenchRecord, CheckGrid, RunSettings, ScaleRow, SweepRow, ThroughputRow};

const EXIT_INCORRECT: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "dagqr", version, about = "Task-graph scheduled in-place Householder factorization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every executor is bitwise identical to the sequential reference.
    Check(CheckArgs),
    /// Time the dual-queue executors over an (alpha, beta) grid.
    Sweep(SweepArgs),
    /// Time all parallel executors over several matrix sizes.
    Scale(ScaleArgs),
    /// Time all parallel executors over several thread counts.
    Throughput(ThroughputArgs),
    /// Factor A, solve A x = A·1 and report the error.
    Solve(SolveArgs),
    /// Factor one matrix with one executor.
    Factor(FactorArgs),
}

#[derive(Args)]
struct Timing {
    /// Timed repetitions per configuration (median reported).
    #[arg(long, default_value_t = 3, value_parser = parse_positive)]
    reps: usize,
    /// Run once untimed before measuring.
    #[arg(long)]
    warmup: bool,
    /// Write zero for every timing.
    #[arg(long)]
    no_time: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH.csv")]
    out: Option<PathBuf>,
}

impl Timing {
    fn settings(&self) -> RunSettings {
        RunSettings {
            reps: self.reps,
            warmup: self.warmup,
            no_time: self.no_time,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_size, default_value = "5,16,64,300")]
    sizes: Vec<Size>,
    #[arg(long, default_value = "1,2,3,5,12")]
    alphas: UsizeList,
    #[arg(long, default_value = "1,2,3,5,12")]
    betas: UsizeList,
    /// Thread counts, `a,b,c` or `lo:hi:step`.
    #[arg(long = "threads-list", default_value = "1,2,4,8")]
    threads: UsizeList,
    #[arg(long, value_delimiter = ',', default_value = "barrier,lockfree,priority")]
    schedulers: Vec<SchedulerKind>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_positive, default_value_t = 1024)]
    size: usize,
    #[arg(long, value_parser = parse_positive)]
    threads: Option<usize>,
    #[arg(long = "alpha-range", default_value = "2:32:2")]
    alphas: UsizeList,
    #[arg(long = "beta-range", default_value = "2:32:2")]
    betas: UsizeList,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long, default_value = "300,512,1024,2048")]
    sizes: UsizeList,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    alpha: usize,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    beta: usize,
    #[arg(long, value_parser = parse_positive)]
    threads: Option<usize>,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct ThroughputArgs {
    #[arg(long, value_parser = parse_positive, default_value_t = 2048)]
    size: usize,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    alpha: usize,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    beta: usize,
    /// Thread counts, `lo:hi:step` or `a,b,c`.
    #[arg(long = "threads-range", default_value = "1,2,4,8")]
    threads: UsizeList,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct RunArgs {
    /// `M` or `MxN`.
    #[arg(long, value_parser = parse_size, default_value = "300")]
    size: Size,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    alpha: usize,
    #[arg(long, value_parser = parse_positive, default_value_t = 12)]
    beta: usize,
    #[arg(long, value_parser = parse_positive)]
    threads: Option<usize>,
    #[arg(long, default_value = "lockfree")]
    scheduler: SchedulerKind,
    /// Add m to every diagonal entry.
    #[arg(long)]
    dominant: bool,
    /// Write the task graph in DOT format.
    #[arg(long, value_name = "PATH.dot")]
    dot: Option<PathBuf>,
    /// Write a per-task execution trace CSV.
    #[arg(long, value_name = "PATH.csv")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Compare against the sequential reference bit for bit.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_file(path: &Path, contents: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    contents(&mut w)?;
    w.flush()?;
    Ok(())
}

fn input_matrix(run: &RunArgs, seed: u64) -> Matrix {
    if run.dominant {
        gen_dominant_matrix(run.size.m, run.size.n, seed)
    } else {
        gen_matrix(run.size.m, run.size.n, seed)
    }
}

fn run_check(args: CheckArgs) -> Result<u8> {
    let grid = CheckGrid {
        sizes: args.sizes,
        alphas: args.alphas.0,
        betas: args.betas.0,
        threads: args.threads.0,
        schedulers: args.schedulers,
        seeds: args.seeds,
    };
    eprintln!("checking {} combinations", grid.combinations());
    match cmd_check(&grid) {
        Ok(summary) => {
            println!("{summary}");
            Ok(0)
        }
        Err(m) => {
            println!("{m}");
            Ok(EXIT_INCORRECT)
        }
    }
}

fn run_sweep(args: SweepArgs) -> Result<u8> {
    let threads = args.threads.unwrap_or_else(default_threads);
    let rows = cmd_sweep(args.size, threads, &args.alphas.0, &args.betas.0, args.timing.seed, &args.timing.settings())?;
    let mut out = output(&args.timing.out)?;
    write_csv(&mut out, SweepRow::CSV_HEADER, &rows)?;
    out.flush()?;
    for best in sweep_argmin(&rows) {
        eprintln!(
            "argmin {}: alpha={} beta={} median_seconds={:.9}",
            best.scheduler, best.alpha, best.beta, best.median_seconds
        );
    }
    Ok(0)
}

fn run_scale(args: ScaleArgs) -> Result<u8> {
    let threads = args.threads.unwrap_or_else(default_threads);
    let rows = cmd_scale(&args.sizes.0, args.alpha, args.beta, threads, args.timing.seed, &args.timing.settings())?;
    let mut out = output(&args.timing.out)?;
    write_csv(&mut out, ScaleRow::CSV_HEADER, &rows)?;
    out.flush()?;
    Ok(0)
}

fn run_throughput(args: ThroughputArgs) -> Result<u8> {
    let rows = cmd_throughput(args.size, args.alpha, args.beta, &args.threads.0, args.timing.seed, &args.timing.settings())?;
    let mut out = output(&args.timing.out)?;
    write_csv(&mut out, ThroughputRow::CSV_HEADER, &rows)?;
    out.flush()?;
    Ok(0)
}

fn write_side_outputs(run: &RunArgs, input: &Matrix, threads: usize) -> Result<()> {
    let graph = build_task_graph(run.size.m, run.size.n, run.alpha, run.beta)?;
    if let Some(path) = &run.dot {
        write_file(path, |w| w.write_all(to_dot(&graph).as_bytes()))?;
    }
    if let Some(path) = &run.trace {
        let mut m = input.clone();
        let mut s = ReflectorStore::new(m.pivot_count());
        let opts = ExecOptions {
            trace: true,
            ..Default::default()
        };
        let report = execute(run.scheduler, &graph, &mut m, &mut s, threads, &opts)?;
        write_file(path, |w| write_trace_csv(w, &graph, &report.trace))?;
    }
    Ok(())
}

fn run_factor(args: FactorArgs) -> Result<u8> {
    let run = &args.run;
    let threads = run.threads.unwrap_or_else(default_threads);
    let seed = args.timing.seed;
    let input = input_matrix(run, seed);
    let graph = build_task_graph(run.size.m, run.size.n, run.alpha, run.beta)?;
    let report = validate_graph(&graph);
    if !report.passed() {
        eprintln!("task graph invalid: {report}");
        return Ok(EXIT_INCORRECT);
    }
    let (secs, fm, fs) = time_run(run.scheduler, &graph, &input, threads, &args.timing.settings())?;
    let correct = args.check.then(|| {
        let mut rm = input.clone();
        let rs = sequential_factorize(&mut rm);
        fm.bit_eq(&rm) && fs.bit_eq(&rs)
    });
    let record = BenchRecord {
        scheduler: run.scheduler,
        m: run.size.m,
        n: run.size.n,
        alpha: run.alpha,
        beta: run.beta,
        threads,
        seed,
        reps: args.timing.reps,
        median_seconds: secs,
        correct,
    };
    let mut out = output(&args.timing.out)?;
    writeln!(out, "{}", BenchRecord::CSV_HEADER)?;
    writeln!(out, "{record}")?;
    out.flush()?;
    write_side_outputs(run, &input, threads)?;
    Ok(if correct == Some(false) { EXIT_INCORRECT } else { 0 })
}

fn run_solve(args: SolveArgs) -> Result<u8> {
    let run = &args.run;
    if run.size.m != run.size.n {
        eprintln!("solve needs a square matrix, got {}", run.size);
        return Ok(EXIT_USAGE);
    }
    let threads = run.threads.unwrap_or_else(default_threads);
    let a = input_matrix(run, args.seed);
    let graph = build_task_graph(run.size.m, run.size.n, run.alpha, run.beta)?;
    let mut fm = a.clone();
    let mut fs = ReflectorStore::new(fm.pivot_count());
    execute(run.scheduler, &graph, &mut fm, &mut fs, threads, &ExecOptions::default())?;
    let fact = Factorization::new(fm, fs);
    let ones = vec![1.0; run.size.n];
    let rhs = a.matvec(&ones);
    let x = match solve(&fact, &rhs) {
        Ok(x) => x,
        Err(e) => {
            println!("error: {e}");
            return Ok(EXIT_INCORRECT);
        }
    };
    let max_err = x.iter().fold(0.0f64, |acc, v| acc.max((v - 1.0).abs()));
    let ax = a.matvec(&x);
    let residual = ax.iter().zip(&rhs).fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
    println!("scheduler={} size={} threads={}", run.scheduler, run.size, threads);
    println!("max_error={max_err:.3e}");
    println!("residual_inf={residual:.3e}");
    println!("condition_estimate={:.3e}", fact.condition_estimate());
    write_side_outputs(run, &a, threads)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => run_check(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Scale(a) => run_scale(a),
        Command::Throughput(a) => run_throughput(a),
        Command::Solve(a) => run_solve(a),
        Command::Factor(a) => run_factor(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
