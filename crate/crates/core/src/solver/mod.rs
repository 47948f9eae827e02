//! Enhanced von Neumann solver, its baselines and the planar boundary runner.

mod aggregate;
mod baseline;
mod enhanced;
mod planar;

pub use aggregate::{aggregate, ActiveSet, Aggregation, Coeff, Member};
pub use baseline::{solve_perceptron, solve_von_neumann};
pub use enhanced::solve_enhanced;
pub use planar::{run_planar, PlanarConfig, PlanarStep};

use std::io::Write;

use crate::cone::ConeProblem;
use crate::error::{Error, Result};
use crate::hull::QpConfig;
use crate::linalg::{check_len, QrState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Enhanced,
    VonNeumann,
    Perceptron,
}

/// Cap on the number of hull points kept between iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxSet {
    /// At most `N − 1` points survive each aggregation step.
    Bounded(usize),
    Unbounded,
}

impl MaxSet {
    /// `0` means unbounded.
    pub fn from_count(n: usize) -> Result<Self> {
        match n {
            0 => Ok(Self::Unbounded),
            1 => Err(Error::InvalidInput(
                "max set size must be at least 2".into(),
            )),
            n => Ok(Self::Bounded(n)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub algo: Algo,
    pub max_set: MaxSet,
    pub aggregation: Aggregation,
    pub eps: f64,
    pub cert_margin: f64,
    pub max_iters: usize,
    pub qp: QpConfig,
    /// Starting point `p₀`; defaults to the uniform vector scaled to `ūᵀp₀ = 1`.
    pub x0: Option<Vec<f64>>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            algo: Algo::Enhanced,
            max_set: MaxSet::Unbounded,
            aggregation: Aggregation::OldestIntoAccumulator,
            eps: 1e-9,
            cert_margin: 0.0,
            max_iters: 2000,
            qp: QpConfig::default(),
            x0: None,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        if let MaxSet::Bounded(n) = self.max_set {
            if n < 2 {
                return Err(Error::InvalidInput(
                    "max set size must be at least 2".into(),
                ));
            }
        }
        if !(self.cert_margin >= 0.0) {
            return Err(Error::InvalidInput(
                "certificate margin must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    /// `Aᵀy ∈ int K*`.
    DualCertificate {
        y: Vec<f64>,
    },
    /// `x ∈ K`, `ūᵀx = 1`, `‖Ax‖ ≤ eps`.
    PrimalEpsSolution {
        x: Vec<f64>,
    },
    /// `m + 1` affinely independent hull points with positive weights around the origin.
    InteriorCertificate {
        x: Vec<f64>,
        support: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    IterLimit,
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DualCertificate { .. } => "dual_certificate",
            Self::PrimalEpsSolution { .. } => "primal_eps",
            Self::InteriorCertificate { .. } => "interior_certificate",
            Self::IterLimit => "iter_limit",
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Self::IterLimit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterTrace {
    pub iter: usize,
    pub norm_y: f64,
    /// `max_j −a_jᵀy`
    pub q1: f64,
    pub active_size: usize,
    pub agg_event: bool,
    pub inner_qp_iters: usize,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub iterations: usize,
    /// Final iterate `y = Ax`.
    pub y: Vec<f64>,
    /// Final primal point; absent for the perceptron.
    pub x: Option<Vec<f64>>,
    pub trace: Vec<IterTrace>,
}

pub fn solve(problem: &ConeProblem, config: &SolveConfig) -> Result<SolveOutcome> {
    match config.algo {
        Algo::Enhanced => solve_enhanced(problem, config),
        Algo::VonNeumann => solve_von_neumann(problem, config),
        Algo::Perceptron => solve_perceptron(problem, config),
    }
}

/// Starting point: `config.x0` or the scaled uniform vector.
pub(crate) fn initial_point(problem: &ConeProblem, config: &SolveConfig) -> Result<Vec<f64>> {
    let u = problem.cone().u_bar();
    match &config.x0 {
        Some(x0) => {
            check_len(u.len(), x0.len())?;
            let s: f64 = x0.iter().zip(u).map(|(a, b)| a * b).sum();
            if !problem.cone().contains(x0, 0.0) || (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidInput("x0 must lie in K with ū·x0 = 1".into()));
            }
            Ok(x0.clone())
        }
        None => {
            let total: f64 = u.iter().sum();
            Ok(vec![1.0 / total; u.len()])
        }
    }
}

pub(crate) fn q1(aty: &[f64]) -> f64 {
    aty.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max)
}

/// True when exactly `m + 1` points carry positive weight, they span `R^m`
/// affinely, and the origin has strictly positive barycentric coordinates.
pub fn interior_certificate(points: &[Vec<f64>], lambda: &[f64], rank_tol: f64) -> bool {
    let support: Vec<&Vec<f64>> = points
        .iter()
        .zip(lambda)
        .filter(|(_, &l)| l > 0.0)
        .map(|(p, _)| p)
        .collect();
    let Some(first) = support.first() else {
        return false;
    };
    let m = first.len();
    if support.len() != m + 1 {
        return false;
    }
    let diffs: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let Ok(qr) = QrState::from_columns(m, &diffs, rank_tol) else {
        return false;
    };
    let Ok(mu) = qr.solve_r(&qr.qt_mul(first)) else {
        return false;
    };
    let anchor_weight = 1.0 + mu.iter().sum::<f64>();
    anchor_weight > 0.0 && mu.iter().all(|&v| -v > 0.0)
}

/// Writes the trace as CSV with 17 significant digits.
pub fn write_trace_csv<W: Write>(mut w: W, trace: &[IterTrace]) -> Result<()> {
    writeln!(w, "iter,norm_y,q1,active_size,agg_event,inner_qp_iters")?;
    for t in trace {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{},{},{}",
            t.iter, t.norm_y, t.q1, t.active_size, t.agg_event as u8, t.inner_qp_iters
        )?;
    }
    Ok(())
}
