//! Closest points between two convex hulls, or a strictly separating
//! direction, by a primal active-set method over both hulls at once.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm, sub, DenseMatrix, QrState, DEFAULT_RANK_TOL};

#[derive(Debug, Clone)]
pub struct SeparationConfig {
    pub eps: f64,
    pub max_iters: usize,
    /// Entering threshold relative to `‖y‖ · max column norm`.
    pub enter_tol: f64,
    pub rank_tol: f64,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        Self {
            eps: 1e-9,
            max_iters: 1000,
            enter_tol: 1e-12,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparationStatus {
    /// `min_j a_jᵀy > max_k b_kᵀy`.
    Separated {
        y: Vec<f64>,
    },
    /// `‖Ax − Bz‖ ≤ eps` with `x`, `z` on their simplices.
    Intersecting {
        x: Vec<f64>,
        z: Vec<f64>,
    },
    IterLimit,
}

impl SeparationStatus {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Separated { .. } => "separated",
            Self::Intersecting { .. } => "intersecting",
            Self::IterLimit => "iter_limit",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeparationOutcome {
    pub status: SeparationStatus,
    pub iterations: usize,
    /// `‖Ax_i − Bz_i‖` at the start of every outer iteration.
    pub gaps: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

#[derive(Clone)]
struct PairState<'m> {
    a: &'m DenseMatrix,
    b: &'m DenseMatrix,
    ja: Vec<usize>,
    kb: Vec<usize>,
    x: Vec<f64>,
    z: Vec<f64>,
    y: Vec<f64>,
    qr: QrState,
    // side and point index of every stored QR column
    cols: Vec<(Side, usize)>,
}

impl<'m> PairState<'m> {
    fn column(&self, side: Side, idx: usize) -> Vec<f64> {
        match side {
            Side::A => sub(self.a.column(idx), self.a.column(self.ja[0])),
            Side::B => sub(self.b.column(self.kb[0]), self.b.column(idx)),
        }
    }

    fn rebuild_qr(&mut self) -> Result<()> {
        let mut qr = QrState::with_rank_tol(self.a.rows(), self.qr.rank_tol());
        let mut cols = Vec::new();
        for (side, rest) in [(Side::A, &self.ja[1..]), (Side::B, &self.kb[1..])] {
            for &idx in rest {
                qr.insert_column(&self.column(side, idx))?;
                cols.push((side, idx));
            }
        }
        self.qr = qr;
        self.cols = cols;
        Ok(())
    }

    /// Closest points of the two affine hulls: residual and weights per side.
    fn affine_pair(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let r0 = sub(self.a.column(self.ja[0]), self.b.column(self.kb[0]));
        let mut wa = vec![0.0; self.ja.len()];
        let mut wb = vec![0.0; self.kb.len()];
        if !self.qr.is_empty() {
            let g = self.qr.solve_r(&self.qr.qt_mul(&r0))?;
            for (&(side, idx), gi) in self.cols.iter().zip(g) {
                match side {
                    Side::A => wa[self.ja.iter().position(|&j| j == idx).unwrap()] = -gi,
                    Side::B => wb[self.kb.iter().position(|&k| k == idx).unwrap()] = -gi,
                }
            }
        }
        wa[0] = 1.0 - wa[1..].iter().sum::<f64>();
        wb[0] = 1.0 - wb[1..].iter().sum::<f64>();
        Ok((self.qr.residual(&r0), wa, wb))
    }

    fn remove(&mut self, side: Side, pos: usize) -> Result<()> {
        let list = match side {
            Side::A => &mut self.ja,
            Side::B => &mut self.kb,
        };
        let idx = list.remove(pos);
        if pos == 0 {
            return self.rebuild_qr();
        }
        let qpos = self.cols.iter().position(|&c| c == (side, idx)).unwrap();
        self.cols.remove(qpos);
        self.qr.remove_column(qpos)
    }

    fn try_enter(&mut self, side: Side, idx: usize) -> Result<bool> {
        match self.qr.insert_column(&self.column(side, idx)) {
            Ok(()) => {}
            Err(Error::DegenerateColumn) => return Ok(false),
            Err(e) => return Err(e),
        }
        self.cols.push((side, idx));
        match side {
            Side::A => self.ja.push(idx),
            Side::B => self.kb.push(idx),
        }
        let mut first = true;
        loop {
            let (res, wa, wb) = self.affine_pair()?;
            if first {
                let w = match side {
                    Side::A => wa[wa.len() - 1],
                    Side::B => wb[wb.len() - 1],
                };
                if !(w > 0.0) {
                    return Ok(false);
                }
                first = false;
            }
            let mut t_bar = 1.0;
            let mut leaving: Option<(Side, usize)> = None;
            for (side, list, cur, target) in [
                (Side::A, &self.ja, &self.x, &wa),
                (Side::B, &self.kb, &self.z, &wb),
            ] {
                let mut order: Vec<usize> = (0..list.len()).collect();
                order.sort_by_key(|&p| list[p]);
                for p in order {
                    let c = cur[list[p]];
                    let d = target[p] - c;
                    if d < 0.0 {
                        let t = (c / -d).max(0.0);
                        if t < t_bar {
                            t_bar = t;
                            leaving = Some((side, p));
                        }
                    }
                }
            }
            match leaving {
                None => {
                    for (&j, &w) in self.ja.iter().zip(&wa) {
                        self.x[j] = w.max(0.0);
                    }
                    for (&k, &w) in self.kb.iter().zip(&wb) {
                        self.z[k] = w.max(0.0);
                    }
                    self.y = res;
                    while let Some(p) = self.ja.iter().position(|&j| self.x[j] == 0.0) {
                        self.remove(Side::A, p)?;
                    }
                    while let Some(p) = self.kb.iter().position(|&k| self.z[k] == 0.0) {
                        self.remove(Side::B, p)?;
                    }
                    return Ok(true);
                }
                Some((lside, lpos)) => {
                    for (&j, &w) in self.ja.iter().zip(&wa) {
                        self.x[j] = (self.x[j] + t_bar * (w - self.x[j])).max(0.0);
                    }
                    for (&k, &w) in self.kb.iter().zip(&wb) {
                        self.z[k] = (self.z[k] + t_bar * (w - self.z[k])).max(0.0);
                    }
                    match lside {
                        Side::A => self.x[self.ja[lpos]] = 0.0,
                        Side::B => self.z[self.kb[lpos]] = 0.0,
                    }
                    let delta = sub(&res, &self.y);
                    axpy(t_bar, &delta, &mut self.y);
                    self.remove(lside, lpos)?;
                }
            }
        }
    }
}

/// Decides whether the hulls of the columns of `a` and `b` intersect.
pub fn separate_hulls(
    a: &DenseMatrix,
    b: &DenseMatrix,
    config: &SeparationConfig,
) -> Result<SeparationOutcome> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    if a.cols() == 0 || b.cols() == 0 || a.rows() == 0 {
        return Err(Error::InvalidInput(
            "both point sets must be nonempty".into(),
        ));
    }
    let scale = a.columns().chain(b.columns()).map(norm).fold(0.0, f64::max);
    let mut x = vec![0.0; a.cols()];
    let mut z = vec![0.0; b.cols()];
    x[0] = 1.0;
    z[0] = 1.0;
    let mut st = PairState {
        a,
        b,
        ja: vec![0],
        kb: vec![0],
        x,
        z,
        y: sub(a.column(0), b.column(0)),
        qr: QrState::with_rank_tol(a.rows(), config.rank_tol),
        cols: Vec::new(),
    };
    let mut gaps = Vec::new();

    for iter in 0.. {
        let gap = norm(&st.y);
        gaps.push(gap);
        let aty = a.tr_mul_vec(&st.y)?;
        let bty = b.tr_mul_vec(&st.y)?;
        let min_a = aty.iter().copied().fold(f64::INFINITY, f64::min);
        let max_b = bty.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let status = if gap <= config.eps {
            Some(SeparationStatus::Intersecting {
                x: st.x.clone(),
                z: st.z.clone(),
            })
        } else if min_a > max_b {
            Some(SeparationStatus::Separated { y: st.y.clone() })
        } else if iter >= config.max_iters {
            Some(SeparationStatus::IterLimit)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(SeparationOutcome {
                status,
                iterations: iter,
                gaps,
                x: st.x,
                z: st.z,
            });
        }

        let tol = config.enter_tol * gap * scale;
        let alpha = st.ja.iter().map(|&j| aty[j]).fold(f64::INFINITY, f64::min);
        let beta = st
            .kb
            .iter()
            .map(|&k| bty[k])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut a_cands: Vec<usize> = (0..a.cols())
            .filter(|&j| st.x[j] == 0.0 && aty[j] < alpha - tol)
            .collect();
        a_cands.sort_by(|&p, &q| aty[p].total_cmp(&aty[q]).then(p.cmp(&q)));
        let mut b_cands: Vec<usize> = (0..b.cols())
            .filter(|&k| st.z[k] == 0.0 && bty[k] > beta + tol)
            .collect();
        b_cands.sort_by(|&p, &q| bty[q].total_cmp(&bty[p]).then(p.cmp(&q)));

        let mut progressed = false;
        let candidates = a_cands
            .into_iter()
            .map(|j| (Side::A, j))
            .chain(b_cands.into_iter().map(|k| (Side::B, k)));
        for (side, idx) in candidates {
            let snapshot = st.clone();
            if st.try_enter(side, idx)? && norm(&st.y) < gap {
                progressed = true;
                break;
            }
            st = snapshot;
        }
        if !progressed {
            return Ok(SeparationOutcome {
                status: SeparationStatus::IterLimit,
                iterations: iter,
                gaps,
                x: st.x,
                z: st.z,
            });
        }
    }
    unreachable!()
}

/// Checks `min_j a_jᵀy > max_k b_kᵀy`.
pub fn separates(a: &DenseMatrix, b: &DenseMatrix, y: &[f64]) -> bool {
    let min_a = a.columns().map(|c| dot(c, y)).fold(f64::INFINITY, f64::min);
    let max_b = b
        .columns()
        .map(|c| dot(c, y))
        .fold(f64::NEG_INFINITY, f64::max);
    min_a > max_b
}
