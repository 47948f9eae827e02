//! Cones, problem instances and linear minimization oracles.

use crate::error::{Error, Result};
use crate::linalg::{check_len, norm, DenseMatrix};

/// A direct sum of nonnegative orthants together with the normalizing
/// functional `ū`, which must lie in the interior of the dual cone
/// (entrywise positive for orthants).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    blocks: Vec<usize>,
    u_bar: Vec<f64>,
}

impl ConeSpec {
    pub fn new(blocks: Vec<usize>, u_bar: Vec<f64>) -> Result<Self> {
        let n: usize = blocks.iter().sum();
        check_len(n, u_bar.len())?;
        if blocks.contains(&0) {
            return Err(Error::InvalidInput(
                "orthant block of dimension zero".into(),
            ));
        }
        if u_bar.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
            return Err(Error::InvalidInput(
                "u_bar must be strictly positive".into(),
            ));
        }
        Ok(Self { blocks, u_bar })
    }

    /// `R₊ⁿ` with `ū = 1`.
    pub fn orthant(n: usize) -> Self {
        Self {
            blocks: vec![n],
            u_bar: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.u_bar.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn u_bar(&self) -> &[f64] {
        &self.u_bar
    }

    /// Membership in the cone, allowing entries down to `-tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim() && x.iter().all(|&v| v >= -tol)
    }
}

/// The instance `(A, K, ū)`: find `y` with `Aᵀy ∈ int K*`, or `x ∈ K` with
/// `Ax = 0`, `ūᵀx = 1`.
#[derive(Debug, Clone)]
pub struct ConeProblem {
    a: DenseMatrix,
    cone: ConeSpec,
}

impl ConeProblem {
    pub fn new(a: DenseMatrix, cone: ConeSpec) -> Result<Self> {
        check_len(a.cols(), cone.dim())?;
        if a.cols() == 0 || a.rows() == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        Ok(Self { a, cone })
    }

    pub fn orthant(a: DenseMatrix) -> Result<Self> {
        let n = a.cols();
        Self::new(a, ConeSpec::orthant(n))
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// `m`
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// `n`
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// The image `A e_j / ū_j` of the oracle vertex `j`.
    pub fn vertex_image(&self, j: usize) -> Vec<f64> {
        let s = 1.0 / self.cone.u_bar[j];
        self.a.column(j).iter().map(|v| v * s).collect()
    }
}

/// Minimizer of `pᵀAᵀy` over `{ūᵀp = 1, p ∈ K}`: the vertex `e_index / ū_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmoResult {
    pub index: usize,
    /// The nonzero entry `1/ū_index` of `p`.
    pub weight: f64,
    pub value: f64,
}

impl LmoResult {
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut p = vec![0.0; n];
        p[self.index] = self.weight;
        p
    }
}

/// Linear minimization over the cone section, given the precomputed `Aᵀy`.
/// Ties go to the smallest index.
pub fn lmo_from_scores(cone: &ConeSpec, aty: &[f64]) -> LmoResult {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (j, (&s, &u)) in aty.iter().zip(cone.u_bar()).enumerate() {
        let v = s / u;
        if v < best_val {
            best_val = v;
            best = j;
        }
    }
    LmoResult {
        index: best,
        weight: 1.0 / cone.u_bar()[best],
        value: best_val,
    }
}

pub fn cone_lmo(problem: &ConeProblem, y: &[f64]) -> Result<LmoResult> {
    let aty = problem.a.tr_mul_vec(y)?;
    Ok(lmo_from_scores(&problem.cone, &aty))
}

/// Whether `y` certifies `Aᵀy ∈ int K*` with the given margin (strict).
pub fn dual_certificate(problem: &ConeProblem, y: &[f64], margin: f64) -> bool {
    cone_lmo(problem, y).is_ok_and(|r| r.value > margin)
}

/// A compact convex set in the plane having the origin on its boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanarSet {
    /// Vertices in convex position, either orientation.
    Polygon(Vec<[f64; 2]>),
    /// Disk of the given radius centred at `(0, r)`.
    TangentDisk { radius: f64 },
}

impl PlanarSet {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewPoints {
                needed: 3,
                found: vertices.len(),
            });
        }
        if !in_convex_position(&vertices) {
            return Err(Error::InvalidInput(
                "polygon vertices are not in convex position".into(),
            ));
        }
        Ok(Self::Polygon(vertices))
    }

    pub fn tangent_disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput("disk radius must be positive".into()));
        }
        Ok(Self::TangentDisk { radius })
    }
}

fn in_convex_position(v: &[[f64; 2]]) -> bool {
    let n = v.len();
    let mut sign = 0.0f64;
    for i in 0..n {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cross == 0.0 {
            return false;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    true
}

/// Minimizer of `yᵀs` over the planar set.
pub fn planar_lmo(set: &PlanarSet, y: [f64; 2]) -> Result<[f64; 2]> {
    let ny = norm(&y);
    if !(ny >= 1e-300) {
        return Err(Error::ZeroDirection);
    }
    match set {
        PlanarSet::Polygon(vertices) => {
            let mut best = vertices[0];
            let mut best_val = f64::INFINITY;
            for v in vertices {
                let val = y[0] * v[0] + y[1] * v[1];
                if val < best_val {
                    best_val = val;
                    best = *v;
                }
            }
            Ok(best)
        }
        PlanarSet::TangentDisk { radius } => {
            let (ux, uy) = (y[0] / ny, y[1] / ny);
            // r(1 - uy) rewritten as r ux²/(1 + uy) when uy > 0 to avoid cancellation.
            let t = if uy > 0.0 {
                radius * ux * ux / (1.0 + uy)
            } else {
                radius * (1.0 - uy)
            };
            Ok([-radius * ux, t])
        }
    }
}
