use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vnqp_core::bench::{
    generate_instance, run_benchmark, write_report_csv, write_summary, BenchConfig, Variant,
};
use vnqp_core::bracketing::{
    bracket, build_adversarial, write_bracket_csv, AsymmetricQuadratic, Convex1D,
    IntervalDistanceSq,
};
use vnqp_core::cone::ConeProblem;
use vnqp_core::linalg::{read_matrix, write_matrix_binary, write_matrix_csv};
use vnqp_core::separation::{separate_hulls, SeparationConfig};
use vnqp_core::solver::{solve, write_trace_csv, Aggregation, Algo, MaxSet, SolveConfig};
use vnqp_core::Error;

#[derive(Parser)]
#[command(
    name = "vnqp",
    version,
    about = "Von Neumann type conic feasibility solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance with unit columns.
    Gen(GenArgs),
    /// Decide `Aᵀy > 0` against `Ax = 0, x ≥ 0, 1ᵀx = 1`.
    Solve(SolveArgs),
    /// Run solver variants over seeded instances.
    Bench(BenchArgs),
    /// Separate the hulls of two column sets or find a common point.
    Separate(SeparateArgs),
    /// Bracket the minimizer of a one-dimensional convex function.
    Bracket(BracketArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.315)]
    shift: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.csv` extension selects text output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Enhanced,
    Vn,
    Perceptron,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "enhanced")]
    algo: AlgoArg,
    /// Largest active set kept between iterations; 0 for no cap.
    #[arg(long, default_value_t = 0)]
    max_set: usize,
    #[arg(long, default_value = "accumulator")]
    aggregation: String,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Per-iteration trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long, default_value_t = 30)]
    m: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.315)]
    shift: f64,
    /// Comma-separated `vn`, `perceptron` or `N[:rule]` tokens.
    #[arg(long, default_value = "2,5,10,15,20,25,0")]
    variants: String,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long)]
    threads: Option<usize>,
    /// 80000 columns and 491 seeds unless overridden.
    #[arg(long)]
    full_scale: bool,
    #[arg(long)]
    out: PathBuf,
    /// Counts against the two-point variant.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BracketArgs {
    /// `quad`, `quad:<l>,<r>`, `flat:<a>,<b>` or `adversarial:<a0>;<a1>;…/<b0>;<b1>;…`.
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    a0: f64,
    #[arg(long)]
    b0: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Solve(args) => run_solve(args),
        Command::Bench(args) => run_bench(args),
        Command::Separate(args) => run_separate(args),
        Command::Bracket(args) => run_bracket(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::InvalidInput(_) | Error::InvalidSequence(_) | Error::Format(_) => 1,
        _ => 2,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn run_gen(args: GenArgs) -> Result<(), Error> {
    let a = generate_instance(args.m, args.n, args.shift, args.seed)?;
    let mut w = create(&args.out)?;
    if is_csv(&args.out) {
        write_matrix_csv(&mut w, &a)?;
    } else {
        write_matrix_binary(&mut w, &a)?;
    }
    w.flush()?;
    Ok(())
}

fn run_solve(args: SolveArgs) -> Result<(), Error> {
    let a = read_matrix(&args.matrix)?;
    let problem = ConeProblem::orthant(a)?;
    let algo = match args.algo {
        AlgoArg::Enhanced => Algo::Enhanced,
        AlgoArg::Vn => Algo::VonNeumann,
        AlgoArg::Perceptron => Algo::Perceptron,
    };
    let cfg = SolveConfig {
        algo,
        max_set: MaxSet::from_count(args.max_set)?,
        aggregation: Aggregation::parse(&args.aggregation)?,
        eps: args.eps,
        max_iters: args.max_iters,
        ..SolveConfig::default()
    };
    let out = solve(&problem, &cfg)?;
    let norm_y = out.trace.last().map_or(0.0, |t| t.norm_y);
    println!(
        "status={} iterations={} norm_y={:.6e}",
        out.status.name(),
        out.iterations,
        norm_y
    );
    if let Some(path) = &args.trace {
        let mut w = create(path)?;
        write_trace_csv(&mut w, &out.trace)?;
        w.flush()?;
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), Error> {
    let variants = Variant::parse_list(&args.variants)?;
    let (n, runs) = if args.full_scale {
        (args.n.unwrap_or(80_000), 491)
    } else {
        (args.n.unwrap_or(8000), args.runs)
    };
    let cfg = BenchConfig {
        m: args.m,
        n,
        shift: args.shift,
        seeds: (args.first_seed..args.first_seed + runs as u64).collect(),
        variants,
        max_iters: args.max_iters,
        eps: args.eps,
        threads: args.threads,
    };
    let report = run_benchmark(&cfg)?;
    let mut w = create(&args.out)?;
    write_report_csv(&mut w, &report)?;
    w.flush()?;
    match &args.summary {
        Some(path) => {
            let mut w = create(path)?;
            write_summary(&mut w, &report)?;
            w.flush()?;
        }
        None => write_summary(io::stdout().lock(), &report)?,
    }
    Ok(())
}

fn run_separate(args: SeparateArgs) -> Result<(), Error> {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let cfg = SeparationConfig {
        eps: args.eps,
        max_iters: args.max_iters,
        ..SeparationConfig::default()
    };
    let out = separate_hulls(&a, &b, &cfg)?;
    let gap = out.gaps.last().copied().unwrap_or(0.0);
    let line = format!("{},{},{:.16e}", out.status.name(), out.iterations, gap);
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "status,iterations,final_gap")?;
            writeln!(w, "{line}")?;
            w.flush()?;
        }
        None => {
            println!("status,iterations,final_gap");
            println!("{line}");
        }
    }
    Ok(())
}

fn parse_floats(s: &str, sep: char) -> Result<Vec<f64>, Error> {
    s.split(sep)
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number `{t}`")))
        })
        .collect()
}

fn parse_function(desc: &str) -> Result<Box<dyn Convex1D>, Error> {
    let (kind, params) = desc.split_once(':').unwrap_or((desc, ""));
    match kind {
        "quad" if params.is_empty() => Ok(Box::new(AsymmetricQuadratic::square())),
        "quad" => match parse_floats(params, ',')?[..] {
            [l, r] => Ok(Box::new(AsymmetricQuadratic::new(l, r)?)),
            _ => Err(Error::InvalidInput("quad takes two coefficients".into())),
        },
        "flat" => match parse_floats(params, ',')?[..] {
            [a, b] => Ok(Box::new(IntervalDistanceSq::new(a, b)?)),
            _ => Err(Error::InvalidInput("flat takes two interval ends".into())),
        },
        "adversarial" => {
            let (a, b) = params
                .split_once('/')
                .ok_or_else(|| Error::InvalidInput("adversarial takes `a…/b…`".into()))?;
            let f = build_adversarial(&parse_floats(a, ';')?, &parse_floats(b, ';')?)?;
            Ok(Box::new(f))
        }
        other => Err(Error::InvalidInput(format!("unknown function `{other}`"))),
    }
}

fn run_bracket(args: BracketArgs) -> Result<(), Error> {
    let f = parse_function(&args.function)?;
    let trace = bracket(f.as_ref(), args.a0, args.b0, args.tol)?;
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_bracket_csv(&mut w, &trace)?;
            w.flush()?;
        }
        None => write_bracket_csv(io::stdout().lock(), &trace)?,
    }
    eprintln!(
        "steps={} a={:.16e} b={:.16e} stop={:?}",
        trace.records.len(),
        trace.final_a,
        trace.final_b,
        trace.stop
    );
    Ok(())
}
