//! Seeded random instances and batch runs over solver variants.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::ConeProblem;
use crate::error::{Error, Result};
use crate::hull::{min_norm_point, QpConfig};
use crate::linalg::DenseMatrix;
use crate::solver::{solve, Aggregation, Algo, MaxSet, SolveConfig, SolveOutcome};

pub const CHECKPOINTS: [usize; 2] = [80, 400];
pub const THREADS_ENV: &str = "VNQP_THREADS";

/// `m × n` matrix of `U[0,1) − shift` entries with unit columns, drawn from
/// ChaCha8 seeded by `seed` in column-major order.
pub fn generate_instance(m: usize, n: usize, shift: f64, seed: u64) -> Result<DenseMatrix> {
    if !(shift > 0.0 && shift < 1.0) {
        return Err(Error::InvalidInput("shift must lie in (0, 1)".into()));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..n {
        let start = data.len();
        data.extend((0..m).map(|_| rng.gen::<f64>() - shift));
        let col = &mut data[start..];
        let nrm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nrm > 0.0 {
            col.iter_mut().for_each(|v| *v /= nrm);
        }
    }
    DenseMatrix::new(m, n, data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The origin is outside the hull of the columns: `Aᵀy > 0` is solvable.
    DualFeasible,
    PrimalFeasible,
}

/// Classifies an orthant instance by its exact minimum-norm point.
pub fn instance_regime(a: &DenseMatrix, tol: f64) -> Result<(Regime, f64)> {
    let points: Vec<Vec<f64>> = a.columns().map(<[f64]>::to_vec).collect();
    let (state, _) = min_norm_point(points, None, &QpConfig::default())?;
    let d = state.norm();
    let regime = if d > tol {
        Regime::DualFeasible
    } else {
        Regime::PrimalFeasible
    };
    Ok((regime, d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub algo: Algo,
    pub max_set: MaxSet,
    pub aggregation: Aggregation,
}

impl Variant {
    /// `vn`, `perceptron`, or `N[:rule]` with `N = 0` for no cap.
    pub fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        let (algo, max_set, aggregation) = match token {
            "vn" => (Algo::VonNeumann, MaxSet::Bounded(2), Aggregation::None),
            "perceptron" => (Algo::Perceptron, MaxSet::Unbounded, Aggregation::None),
            _ => {
                let (n, rule) = match token.split_once(':') {
                    Some((n, rule)) => (n, Aggregation::parse(rule)?),
                    None => (token, Aggregation::OldestIntoAccumulator),
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad variant `{token}`")))?;
                (Algo::Enhanced, MaxSet::from_count(n)?, rule)
            }
        };
        Ok(Self {
            label: token.to_string(),
            algo,
            max_set,
            aggregation,
        })
    }

    pub fn parse_list(list: &str) -> Result<Vec<Self>> {
        list.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(Self::parse)
            .collect()
    }

    pub fn is_classic(&self) -> bool {
        self.algo == Algo::VonNeumann
            || (self.algo == Algo::Enhanced && self.max_set == MaxSet::Bounded(2))
    }

    fn max_set_count(&self) -> usize {
        match self.max_set {
            MaxSet::Bounded(n) => n,
            MaxSet::Unbounded => 0,
        }
    }

    fn algo_name(&self) -> &'static str {
        match self.algo {
            Algo::Enhanced => "enhanced",
            Algo::VonNeumann => "vn",
            Algo::Perceptron => "perceptron",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub m: usize,
    pub n: usize,
    pub shift: f64,
    pub seeds: Vec<u64>,
    pub variants: Vec<Variant>,
    pub max_iters: usize,
    pub eps: f64,
    /// Worker count; `None` reads the environment, then uses all cores.
    pub threads: Option<usize>,
}

impl BenchConfig {
    pub fn desk_scale(runs: usize, variants: Vec<Variant>) -> Self {
        Self {
            m: 30,
            n: 8000,
            shift: 0.315,
            seeds: (0..runs as u64).collect(),
            variants,
            max_iters: 2000,
            eps: 1e-9,
            threads: None,
        }
    }

    pub fn full_scale(variants: Vec<Variant>) -> Self {
        Self {
            n: 80_000,
            ..Self::desk_scale(491, variants)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.n < 1 {
            return Err(Error::InvalidInput("need m ≥ 2 and n ≥ 1".into()));
        }
        if !(self.shift > 0.0 && self.shift < 1.0) {
            return Err(Error::InvalidInput("shift must lie in (0, 1)".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidInput("no variants given".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidInput("thread count must be positive".into()));
        }
        Ok(())
    }

    pub fn solve_config(&self, v: &Variant) -> SolveConfig {
        SolveConfig {
            algo: v.algo,
            max_set: v.max_set,
            aggregation: v.aggregation,
            eps: self.eps,
            max_iters: self.max_iters,
            ..SolveConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub variant: String,
    pub algo: &'static str,
    pub max_set: usize,
    pub aggregation: &'static str,
    pub status: &'static str,
    pub decided: bool,
    pub iterations: usize,
    pub final_norm_y: f64,
    /// `‖y‖` at each checkpoint, or the final value when the run stopped earlier.
    pub norm_y_at: [f64; 2],
}

impl BenchRow {
    fn from_outcome(seed: u64, v: &Variant, out: &SolveOutcome) -> Self {
        let last = out.trace.last().map_or(0.0, |t| t.norm_y);
        let at = |k: usize| out.trace.get(k).map_or(last, |t| t.norm_y);
        Self {
            seed,
            variant: v.label.clone(),
            algo: v.algo_name(),
            max_set: v.max_set_count(),
            aggregation: v.aggregation.name(),
            status: out.status.name(),
            decided: out.status.is_decided(),
            iterations: out.iterations,
            final_norm_y: last,
            norm_y_at: [at(CHECKPOINTS[0]), at(CHECKPOINTS[1])],
        }
    }
}

/// Per-variant comparison against the classic two-point variant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VersusClassic {
    pub variant: String,
    /// Classic variant needed more iterations.
    pub classic_more: usize,
    pub classic_fewer: usize,
    /// Same count, both decided.
    pub tie_decided: usize,
    pub both_undecided: usize,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    /// Ordered by seed, then by variant position.
    pub rows: Vec<BenchRow>,
    pub versus_classic: Vec<VersusClassic>,
}

impl BenchReport {
    pub fn rows_for(&self, variant: &str) -> impl Iterator<Item = &BenchRow> {
        let variant = variant.to_string();
        self.rows.iter().filter(move |r| r.variant == variant)
    }
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let threads = match config.threads {
        Some(t) => t,
        None => threads_from_env()?.unwrap_or(0),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let per_seed: Vec<Vec<BenchRow>> = pool.install(|| {
        config
            .seeds
            .par_iter()
            .map(|&seed| -> Result<Vec<BenchRow>> {
                let a = generate_instance(config.m, config.n, config.shift, seed)?;
                let problem = ConeProblem::orthant(a)?;
                config
                    .variants
                    .par_iter()
                    .map(|v| {
                        let out = solve(&problem, &config.solve_config(v))?;
                        Ok(BenchRow::from_outcome(seed, v, &out))
                    })
                    .collect()
            })
            .collect::<Result<_>>()
    })?;
    let rows: Vec<BenchRow> = per_seed.into_iter().flatten().collect();
    let versus_classic = compare_with_classic(config, &rows);
    Ok(BenchReport {
        rows,
        versus_classic,
    })
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Error::InvalidInput(format!(
                "{THREADS_ENV} must be a positive integer"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn compare_with_classic(config: &BenchConfig, rows: &[BenchRow]) -> Vec<VersusClassic> {
    let Some(base) = config.variants.iter().position(Variant::is_classic) else {
        return Vec::new();
    };
    let k = config.variants.len();
    let cost = |r: &BenchRow| if r.decided { r.iterations } else { usize::MAX };
    config
        .variants
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != base)
        .map(|(i, v)| {
            let mut s = VersusClassic {
                variant: v.label.clone(),
                ..VersusClassic::default()
            };
            for chunk in rows.chunks(k) {
                let (c, o) = (&chunk[base], &chunk[i]);
                match (c.decided, o.decided) {
                    (false, false) => s.both_undecided += 1,
                    _ if cost(c) > cost(o) => s.classic_more += 1,
                    _ if cost(c) < cost(o) => s.classic_fewer += 1,
                    _ => s.tie_decided += 1,
                }
            }
            s
        })
        .collect()
}

pub const REPORT_HEADER: &str =
    "seed,variant,algo,max_set,aggregation,status,iterations,final_norm_y,norm_y_at_80,norm_y_at_400";

pub fn write_report_csv<W: Write>(mut w: W, report: &BenchReport) -> Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.seed,
            r.variant,
            r.algo,
            r.max_set,
            r.aggregation,
            r.status,
            r.iterations,
            r.final_norm_y,
            r.norm_y_at[0],
            r.norm_y_at[1]
        )?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(mut w: W, report: &BenchReport) -> Result<()> {
    writeln!(
        w,
        "variant,classic_more,classic_fewer,tie_decided,both_undecided"
    )?;
    for s in &report.versus_classic {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.variant, s.classic_more, s.classic_fewer, s.tie_decided, s.both_undecided
        )?;
    }
    Ok(())
}
