//! Minimum-norm point of a convex hull by a primal active-set method.
//!
//! The state keeps an active index set `J` whose points carry strictly
//! positive convex weights, and a QR factorization of the differences
//! `c_j - c_anchor` (`j ∈ J`, anchor is the first active index). Each outer
//! step adds the most violated point and then walks towards the projection
//! onto the enlarged affine hull, dropping one point every time a weight
//! would turn negative.

use crate::error::{Error, Result};
use crate::linalg::{axpy, check_len, combine, dot, norm, sub, QrState, DEFAULT_RANK_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct QpConfig {
    /// Entering threshold, relative to `‖ỹ‖ · max_j ‖c_j‖`.
    pub enter_tol: f64,
    /// Outer steps allowed per call; `None` is unbounded.
    pub max_outer: Option<usize>,
    /// Inner passes allowed per call, checked between outer steps.
    pub max_inner: Option<usize>,
    pub rank_tol: f64,
}

impl Default for QpConfig {
    fn default() -> Self {
        Self {
            enter_tol: 1e-12,
            max_outer: None,
            max_inner: None,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Optimal,
    /// A budget ran out; the state is valid and strictly improved.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub entering: usize,
    /// Indices removed from the active set during the step, in order.
    pub dropped: Vec<usize>,
    pub inner_passes: usize,
    pub norm_before: f64,
    pub norm_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Progress(StepReport),
    AlreadyOptimal,
}

#[derive(Debug, Clone)]
pub struct MinNormState {
    points: Vec<Vec<f64>>,
    lambda: Vec<f64>,
    active: Vec<usize>,
    qr: QrState,
    y: Vec<f64>,
    max_point_norm: f64,
    outer_count: usize,
    inner_count: usize,
}

fn validate_points(points: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::TooFewPoints {
            needed: 1,
            found: 0,
        });
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidInput("points of dimension zero".into()));
    }
    for p in points {
        check_len(dim, p.len())?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(dim)
}

impl MinNormState {
    /// Starts at the vertex `start`, or at the point of smallest norm.
    pub fn new(points: Vec<Vec<f64>>, start: Option<usize>, rank_tol: f64) -> Result<Self> {
        let dim = validate_points(&points)?;
        let start = match start {
            Some(s) if s >= points.len() => {
                return Err(Error::IndexOutOfRange {
                    index: s,
                    len: points.len(),
                })
            }
            Some(s) => s,
            None => argmin_norm(&points),
        };
        let mut lambda = vec![0.0; points.len()];
        lambda[start] = 1.0;
        let y = points[start].clone();
        let max_point_norm = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
        Ok(Self {
            points,
            lambda,
            active: vec![start],
            qr: QrState::with_rank_tol(dim, rank_tol),
            y,
            max_point_norm,
            outer_count: 0,
            inner_count: 0,
        })
    }

    /// Resumes from convex weights whose support is affinely independent and
    /// whose combination is the projection of the origin onto the hull of the
    /// support (for instance the result of a previous solve, possibly after
    /// points were merged or discarded).
    pub fn from_weights(points: Vec<Vec<f64>>, lambda: Vec<f64>, rank_tol: f64) -> Result<Self> {
        let dim = validate_points(&points)?;
        check_len(points.len(), lambda.len())?;
        if lambda.iter().any(|&l| !(l >= 0.0)) {
            return Err(Error::InvalidInput("weights must be nonnegative".into()));
        }
        let total: f64 = lambda.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("weights sum to zero".into()));
        }
        let lambda: Vec<f64> = lambda.iter().map(|l| l / total).collect();
        let active: Vec<usize> = (0..points.len()).filter(|&j| lambda[j] > 0.0).collect();
        if active.len() > dim + 1 {
            return Err(Error::DegenerateColumn);
        }
        let anchor = &points[active[0]];
        let diffs: Vec<Vec<f64>> = active[1..]
            .iter()
            .map(|&j| sub(&points[j], anchor))
            .collect();
        let qr = QrState::from_columns(dim, &diffs, rank_tol)?;
        let y = combine(&points, &lambda);
        let max_point_norm = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
        Ok(Self {
            points,
            lambda,
            active,
            qr,
            y,
            max_point_norm,
            outer_count: 0,
            inner_count: 0,
        })
    }

    /// Adds a generator with zero weight and returns its index.
    pub fn push_point(&mut self, point: Vec<f64>) -> Result<usize> {
        check_len(self.dim(), point.len())?;
        if point.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.max_point_norm = self.max_point_norm.max(norm(&point));
        self.points.push(point);
        self.lambda.push(0.0);
        Ok(self.points.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.qr.dim()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Active indices; the first one anchors the difference factorization.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn norm(&self) -> f64 {
        norm(&self.y)
    }

    pub fn qr(&self) -> &QrState {
        &self.qr
    }

    pub fn outer_count(&self) -> usize {
        self.outer_count
    }

    pub fn inner_count(&self) -> usize {
        self.inner_count
    }

    pub fn into_parts(self) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
        (self.points, self.lambda, self.y)
    }

    /// Non-active indices `j` with `ỹᵀc_j < ‖ỹ‖² − tol`, most violated first.
    pub fn violators(&self, enter_tol: f64) -> Vec<(usize, f64)> {
        let yy = dot(&self.y, &self.y);
        let threshold = yy - enter_tol * norm(&self.y) * self.max_point_norm;
        let mut out: Vec<(usize, f64)> = self
            .points
            .iter()
            .enumerate()
            .filter(|&(j, _)| self.lambda[j] == 0.0)
            .map(|(j, c)| (j, dot(&self.y, c)))
            .filter(|&(_, v)| v < threshold)
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    /// One outer iteration: enter the most violated index that yields a
    /// strict decrease, trying the next one whenever a candidate is
    /// affinely dependent on the active set.
    pub fn step(&mut self, config: &QpConfig) -> Result<StepOutcome> {
        if self.active.len() == self.dim() + 1 || self.y.iter().all(|&v| v == 0.0) {
            return Ok(StepOutcome::AlreadyOptimal);
        }
        let norm_before = self.norm();
        for (entering, _) in self.violators(config.enter_tol) {
            let snapshot = (
                self.lambda.clone(),
                self.active.clone(),
                self.qr.clone(),
                self.y.clone(),
            );
            if let Some((dropped, inner_passes)) = self.try_enter(entering)? {
                let norm_after = self.norm();
                if norm_after < norm_before {
                    self.outer_count += 1;
                    self.inner_count += inner_passes;
                    return Ok(StepOutcome::Progress(StepReport {
                        entering,
                        dropped,
                        inner_passes,
                        norm_before,
                        norm_after,
                    }));
                }
            }
            (self.lambda, self.active, self.qr, self.y) = snapshot;
        }
        Ok(StepOutcome::AlreadyOptimal)
    }

    /// Runs outer steps until optimal or a budget runs out. At least one step
    /// is attempted.
    pub fn solve(&mut self, config: &QpConfig) -> Result<QpStatus> {
        let (outer0, inner0) = (self.outer_count, self.inner_count);
        loop {
            if let StepOutcome::AlreadyOptimal = self.step(config)? {
                return Ok(QpStatus::Optimal);
            }
            let outer_hit = config
                .max_outer
                .is_some_and(|b| self.outer_count - outer0 >= b);
            let inner_hit = config
                .max_inner
                .is_some_and(|b| self.inner_count - inner0 >= b);
            if outer_hit || inner_hit {
                return Ok(QpStatus::BudgetExhausted);
            }
        }
    }

    fn try_enter(&mut self, entering: usize) -> Result<Option<(Vec<usize>, usize)>> {
        let column = sub(&self.points[entering], &self.points[self.active[0]]);
        match self.qr.insert_column(&column) {
            Ok(()) => {}
            Err(Error::DegenerateColumn) => return Ok(None),
            Err(e) => return Err(e),
        }
        self.active.push(entering);

        let mut dropped = Vec::new();
        let mut passes = 0;
        loop {
            passes += 1;
            let (y_aff, weights) = affine_projection(&self.points[self.active[0]], &self.qr)?;
            if passes == 1 && !(weights[weights.len() - 1] > 0.0) {
                return Ok(None);
            }
            let current: Vec<f64> = self.active.iter().map(|&j| self.lambda[j]).collect();
            let (t_bar, leaving) = ratio_test_by_id(&current, &weights, &self.active);
            match leaving {
                None => {
                    for (&j, &w) in self.active.iter().zip(&weights) {
                        self.lambda[j] = w.max(0.0);
                    }
                    self.y = y_aff;
                    while let Some(pos) = self.active.iter().position(|&j| self.lambda[j] == 0.0) {
                        dropped.push(self.active[pos]);
                        self.remove_active(pos)?;
                    }
                    return Ok(Some((dropped, passes)));
                }
                Some(pos) => {
                    for (&j, &w) in self.active.iter().zip(&weights) {
                        let l = self.lambda[j] + t_bar * (w - self.lambda[j]);
                        self.lambda[j] = l.max(0.0);
                    }
                    let leaving_id = self.active[pos];
                    self.lambda[leaving_id] = 0.0;
                    let delta = sub(&y_aff, &self.y);
                    axpy(t_bar, &delta, &mut self.y);
                    dropped.push(leaving_id);
                    self.remove_active(pos)?;
                }
            }
        }
    }

    fn remove_active(&mut self, pos: usize) -> Result<()> {
        self.active.remove(pos);
        if pos > 0 {
            return self.qr.remove_column(pos - 1);
        }
        let anchor = &self.points[self.active[0]];
        let diffs: Vec<Vec<f64>> = self.active[1..]
            .iter()
            .map(|&j| sub(&self.points[j], anchor))
            .collect();
        self.qr = QrState::from_columns(self.dim(), &diffs, self.qr.rank_tol())?;
        Ok(())
    }
}

fn argmin_norm(points: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (j, p) in points.iter().enumerate() {
        let v = dot(p, p);
        if v < best_val {
            best_val = v;
            best = j;
        }
    }
    best
}

/// Projection of the origin onto `anchor + span(Q)`, returned with affine
/// weights ordered `[anchor, column 0, column 1, ...]`.
fn affine_projection(anchor: &[f64], qr: &QrState) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut weights = Vec::with_capacity(qr.len() + 1);
    if qr.is_empty() {
        weights.push(1.0);
        return Ok((anchor.to_vec(), weights));
    }
    let gamma: Vec<f64> = qr.solve_r(&qr.qt_mul(anchor))?.iter().map(|g| -g).collect();
    weights.push(1.0 - gamma.iter().sum::<f64>());
    weights.extend_from_slice(&gamma);
    Ok((qr.residual(anchor), weights))
}

/// Projection of the origin onto the affine hull of `points`, where `qr`
/// factors the columns `points[j] − points[last]` for `j < last`. Returns the
/// projection and its affine weights (summing to one, possibly negative).
pub fn project_affine_hull(points: &[Vec<f64>], qr: &QrState) -> Result<(Vec<f64>, Vec<f64>)> {
    let Some(last) = points.last() else {
        return Err(Error::TooFewPoints {
            needed: 1,
            found: 0,
        });
    };
    check_len(points.len() - 1, qr.len())?;
    check_len(qr.dim(), last.len())?;
    let (y, w) = affine_projection(last, qr)?;
    let mut lambda = w[1..].to_vec();
    lambda.push(w[0]);
    Ok((y, lambda))
}

/// Largest `t ∈ (0, 1]` keeping `current + t (target − current) ≥ 0`, and
/// the smallest index whose weight reaches zero when `t < 1`.
pub fn ratio_test(current: &[f64], target: &[f64]) -> (f64, Option<usize>) {
    let ids: Vec<usize> = (0..current.len()).collect();
    let (t, pos) = ratio_test_by_id(current, target, &ids);
    (t, pos)
}

fn ratio_test_by_id(current: &[f64], target: &[f64], ids: &[usize]) -> (f64, Option<usize>) {
    let mut t_bar = 1.0;
    let mut leaving: Option<usize> = None;
    for (pos, (&cur, &tgt)) in current.iter().zip(target).enumerate() {
        let d = tgt - cur;
        if d < 0.0 {
            let t = (cur / -d).max(0.0);
            let better = match leaving {
                _ if t < t_bar => true,
                Some(p) => t == t_bar && ids[pos] < ids[p],
                None => false,
            };
            if better && t < 1.0 {
                t_bar = t;
                leaving = Some(pos);
            }
        }
    }
    (t_bar, leaving)
}

/// Runs the active-set method from the given start (default: smallest-norm point).
pub fn min_norm_point(
    points: Vec<Vec<f64>>,
    start: Option<usize>,
    config: &QpConfig,
) -> Result<(MinNormState, QpStatus)> {
    let mut state = MinNormState::new(points, start, config.rank_tol)?;
    let status = state.solve(config)?;
    Ok((state, status))
}
