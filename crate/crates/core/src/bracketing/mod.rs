//! One-dimensional bracketing through subdifferential-inverse queries.
//!
//! Starting from `[−a₀, b₀]` around a minimizer at 0, every step queries the
//! inverse subdifferential at the secant slope `(f(b) − f(−a))/(a + b)` and
//! moves the endpoint on the side of the answer.

mod adversarial;
mod functions;

pub use adversarial::build_adversarial;
pub use functions::{AsymmetricQuadratic, DiskBoundary, IntervalDistanceSq, PiecewiseLinear};

use std::io::Write;

use crate::error::{Error, Result};

pub trait Convex1D {
    /// Interval on which the oracle is defined.
    fn domain(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    /// `[lo, hi] = ∂f(x)`.
    fn subdiff(&self, x: f64) -> (f64, f64);
    /// Some `c` with `s ∈ ∂f(c)`.
    fn subdiff_inverse(&self, s: f64) -> f64;
    /// One-sided second derivatives `(f″₋(0), f″₊(0))`, when known.
    fn curvature(&self) -> Option<(f64, f64)> {
        None
    }
}

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketRecord {
    pub a: f64,
    pub b: f64,
    pub slope: f64,
    pub c: f64,
    pub f_left: f64,
    pub f_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketStop {
    /// The query returned `c = 0`.
    ZeroFound,
    Width,
    /// The query returned an endpoint, so the interval cannot shrink.
    NoProgress,
    Budget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketTrace {
    pub records: Vec<BracketRecord>,
    pub final_a: f64,
    pub final_b: f64,
    pub stop: BracketStop,
}

impl BracketTrace {
    /// `(a_i, b_i)` for every visited interval, the final one included.
    pub fn endpoints(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.records.iter().map(|r| (r.a, r.b)).collect();
        if out.last() != Some(&(self.final_a, self.final_b)) {
            out.push((self.final_a, self.final_b));
        }
        out
    }
}

pub fn bracket<F: Convex1D + ?Sized>(
    f: &F,
    a0: f64,
    b0: f64,
    width_tol: f64,
) -> Result<BracketTrace> {
    bracket_with_budget(f, a0, b0, width_tol, DEFAULT_MAX_STEPS)
}

pub fn bracket_with_budget<F: Convex1D + ?Sized>(
    f: &F,
    a0: f64,
    b0: f64,
    width_tol: f64,
    max_steps: usize,
) -> Result<BracketTrace> {
    if !(a0 > 0.0 && b0 > 0.0 && a0.is_finite() && b0.is_finite()) {
        return Err(Error::InvalidInput("a0 and b0 must be positive".into()));
    }
    let (lo, hi) = f.domain();
    if -a0 < lo || b0 > hi {
        return Err(Error::InvalidInput(
            "starting interval leaves the domain".into(),
        ));
    }
    let (mut a, mut b) = (a0, b0);
    let mut records = Vec::new();
    let stop = loop {
        if records.len() >= max_steps {
            break BracketStop::Budget;
        }
        let (f_left, f_right) = (f.value(-a), f.value(b));
        let slope = (f_right - f_left) / (a + b);
        let c = f.subdiff_inverse(slope);
        if !(c >= -a && c <= b) {
            return Err(Error::InverseOutOfRange { c, lo: -a, hi: b });
        }
        records.push(BracketRecord {
            a,
            b,
            slope,
            c,
            f_left,
            f_right,
        });
        if c == 0.0 {
            break BracketStop::ZeroFound;
        }
        if c == -a || c == b {
            break BracketStop::NoProgress;
        }
        if c < 0.0 {
            a = -c;
        } else {
            b = c;
        }
        if a + b <= width_tol {
            break BracketStop::Width;
        }
    };
    Ok(BracketTrace {
        records,
        final_a: a,
        final_b: b,
        stop,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// `(a_{i+1} + b_{i+1}) / (a_i + b_i)`
    pub width_ratios: Vec<f64>,
    /// Ratios of `min(‖(−a_i, f(−a_i))‖, ‖(b_i, f(b_i))‖)`.
    pub distance_ratios: Vec<f64>,
}

pub fn measure_rate<F: Convex1D + ?Sized>(f: &F, trace: &BracketTrace) -> Result<RateReport> {
    let ends = trace.endpoints();
    if ends.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: ends.len(),
        });
    }
    let dist = |(a, b): (f64, f64)| {
        let l = a.hypot(f.value(-a));
        let r = b.hypot(f.value(b));
        l.min(r)
    };
    let width_ratios = ends
        .windows(2)
        .map(|w| (w[1].0 + w[1].1) / (w[0].0 + w[0].1))
        .collect();
    let distance_ratios = ends.windows(2).map(|w| dist(w[1]) / dist(w[0])).collect();
    Ok(RateReport {
        width_ratios,
        distance_ratios,
    })
}

/// Writes `iter,a,b,slope,c`.
pub fn write_bracket_csv<W: Write>(mut w: W, trace: &BracketTrace) -> Result<()> {
    writeln!(w, "iter,a,b,slope,c")?;
    for (i, r) in trace.records.iter().enumerate() {
        writeln!(
            w,
            "{i},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.a, r.b, r.slope, r.c
        )?;
    }
    Ok(())
}
