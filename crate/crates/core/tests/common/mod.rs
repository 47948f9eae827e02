#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Minimum-norm point of the affine hull of `pts`, if they are affinely
/// independent: `(y, λ)` with `Σλ = 1`.
pub fn affine_min_norm(pts: &[Vec<f64>]) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = pts.len();
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            kkt[(i, j)] = pts[i].iter().zip(&pts[j]).map(|(a, b)| a * b).sum();
        }
        kkt[(i, k)] = 1.0;
        kkt[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    if k > 1 {
        let m = pts[0].len();
        let diffs = DMatrix::from_fn(m, k - 1, |r, c| pts[c + 1][r] - pts[0][r]);
        let sv = diffs.singular_values();
        let top = sv.max();
        if top == 0.0 || sv.min() <= 1e-9 * top.max(1.0) {
            return None;
        }
    }
    let sol = kkt.lu().solve(&rhs)?;
    let lambda: Vec<f64> = (0..k).map(|i| sol[i]).collect();
    let m = pts[0].len();
    let y = (0..m)
        .map(|r| (0..k).map(|i| lambda[i] * pts[i][r]).sum())
        .collect();
    Some((y, lambda))
}

/// Exact distance from the origin to `conv(points)` by enumerating every
/// affinely independent subset whose affine projection has nonnegative weights.
pub fn brute_force_distance(points: &[Vec<f64>]) -> f64 {
    let m = points[0].len();
    let mut best = f64::INFINITY;
    let mut chosen = Vec::new();
    enumerate(points, 0, m + 1, &mut chosen, &mut best);
    best
}

fn enumerate(
    points: &[Vec<f64>],
    from: usize,
    left: usize,
    chosen: &mut Vec<usize>,
    best: &mut f64,
) {
    if !chosen.is_empty() {
        let subset: Vec<Vec<f64>> = chosen.iter().map(|&i| points[i].clone()).collect();
        match affine_min_norm(&subset) {
            Some((y, lambda)) => {
                if lambda.iter().all(|&l| l >= -1e-12) {
                    *best = best.min(norm(&y));
                }
            }
            // supersets of a dependent set are dependent too
            None => return,
        }
    }
    if left == 0 {
        return;
    }
    for i in from..points.len() {
        chosen.push(i);
        enumerate(points, i + 1, left - 1, chosen, best);
        chosen.pop();
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn random_points<R: Rng>(rng: &mut R, m: usize, k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

/// Convex hull in counter-clockwise order (monotone chain).
pub fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Convex polygon with the origin as a vertex whose interior angle lies in
/// `(0.3, π − 0.3)`, plus a starting point inside it.
pub fn random_wedge_polygon<R: Rng>(rng: &mut R) -> (Vec<[f64; 2]>, [f64; 2]) {
    use std::f64::consts::PI;
    loop {
        let width = rng.gen_range(0.3..PI - 0.3);
        let start = rng.gen_range(0.0..2.0 * PI);
        let mut pts = vec![[0.0, 0.0]];
        for t in [0.0, 1.0] {
            let ang = start + t * width;
            let r = rng.gen_range(0.5..2.0);
            pts.push([r * ang.cos(), r * ang.sin()]);
        }
        for _ in 0..rng.gen_range(1..8) {
            let ang = start + rng.gen_range(0.05..0.95) * width;
            let r = rng.gen_range(0.5..2.0);
            pts.push([r * ang.cos(), r * ang.sin()]);
        }
        let hull = convex_hull(pts);
        if hull.len() >= 3 && hull.contains(&[0.0, 0.0]) {
            let n = hull.len() as f64;
            let c = [
                hull.iter().map(|p| p[0]).sum::<f64>() / n,
                hull.iter().map(|p| p[1]).sum::<f64>() / n,
            ];
            return (hull, c);
        }
    }
}

/// `conv(A) − conv(B)` as the finite set of pairwise differences.
pub fn difference_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            out.push(p.iter().zip(q).map(|(x, y)| x - y).collect());
        }
    }
    out
}

/// Smallest `‖Ax − Bz‖` over simplex grid points with denominator `res`.
pub fn simplex_grid_gap(a: &[Vec<f64>], b: &[Vec<f64>], res: usize) -> f64 {
    let xs = simplex_grid(a.len(), res);
    let zs = simplex_grid(b.len(), res);
    let combine = |pts: &[Vec<f64>], w: &[f64]| -> Vec<f64> {
        (0..pts[0].len())
            .map(|r| pts.iter().zip(w).map(|(p, l)| l * p[r]).sum())
            .collect()
    };
    let ax: Vec<Vec<f64>> = xs.iter().map(|x| combine(a, x)).collect();
    let bz: Vec<Vec<f64>> = zs.iter().map(|z| combine(b, z)).collect();
    let mut best = f64::INFINITY;
    for p in &ax {
        for q in &bz {
            let d = p
                .iter()
                .zip(q)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            best = best.min(d);
        }
    }
    best
}

fn simplex_grid(k: usize, res: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, res: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k - 1 {
            cur.push(left as f64 / res as f64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for t in 0..=left {
            cur.push(t as f64 / res as f64);
            rec(k, left - t, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, res, res, &mut Vec::new(), &mut out);
    out
}
