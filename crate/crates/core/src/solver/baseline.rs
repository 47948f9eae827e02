use super::{initial_point, q1, IterTrace, SolveConfig, SolveOutcome, SolveStatus};
use crate::cone::{lmo_from_scores, ConeProblem};
use crate::error::Result;
use crate::linalg::{dot, norm};

/// Classic von Neumann: project onto the segment `[y_i, a_j/ū_j]`.
pub fn solve_von_neumann(problem: &ConeProblem, config: &SolveConfig) -> Result<SolveOutcome> {
    config.validate()?;
    let a = problem.matrix();
    let u = problem.cone().u_bar();
    let mut x = initial_point(problem, config)?;
    let mut y = a.mul_vec(&x)?;
    let mut trace = Vec::new();
    let mut moved = false;

    for i in 0.. {
        let aty = a.tr_mul_vec(&y)?;
        let lmo = lmo_from_scores(problem.cone(), &aty);
        let norm_y = norm(&y);
        trace.push(IterTrace {
            iter: i,
            norm_y,
            q1: q1(&aty),
            active_size: 1,
            agg_event: moved,
            inner_qp_iters: usize::from(moved),
        });

        let status = if norm_y <= config.eps {
            Some(SolveStatus::PrimalEpsSolution { x: x.clone() })
        } else if lmo.value > config.cert_margin {
            Some(SolveStatus::DualCertificate { y: y.clone() })
        } else if i >= config.max_iters {
            Some(SolveStatus::IterLimit)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(SolveOutcome {
                status,
                iterations: i,
                y,
                x: Some(x),
                trace,
            });
        }

        let p = problem.vertex_image(lmo.index);
        let d: Vec<f64> = y.iter().zip(&p).map(|(yi, pi)| yi - pi).collect();
        let dd = dot(&d, &d);
        let t = if dd > 0.0 {
            (dot(&y, &d) / dd).clamp(0.0, 1.0)
        } else {
            0.0
        };
        moved = t > 0.0;
        if t == 1.0 {
            y = p;
            x.iter_mut().for_each(|v| *v = 0.0);
            x[lmo.index] = 1.0 / u[lmo.index];
        } else if moved {
            for (yi, pi) in y.iter_mut().zip(&p) {
                *yi = (1.0 - t) * *yi + t * pi;
            }
            x.iter_mut().for_each(|v| *v *= 1.0 - t);
            x[lmo.index] += t / u[lmo.index];
        }
    }
    unreachable!()
}

/// Normalized perceptron: `y ← y + a_j/‖a_j‖` for the first violated column.
pub fn solve_perceptron(problem: &ConeProblem, config: &SolveConfig) -> Result<SolveOutcome> {
    config.validate()?;
    let a = problem.matrix();
    let u = problem.cone().u_bar();
    let mut y = vec![0.0; problem.rows()];
    let mut trace = Vec::new();

    for i in 0.. {
        let aty = a.tr_mul_vec(&y)?;
        trace.push(IterTrace {
            iter: i,
            norm_y: norm(&y),
            q1: q1(&aty),
            active_size: 0,
            agg_event: false,
            inner_qp_iters: 0,
        });
        let violated = aty
            .iter()
            .zip(u)
            .position(|(&s, &uj)| !(s / uj > config.cert_margin));
        let Some(j) = violated else {
            return Ok(SolveOutcome {
                status: SolveStatus::DualCertificate { y: y.clone() },
                iterations: i,
                y,
                x: None,
                trace,
            });
        };
        if i >= config.max_iters {
            return Ok(SolveOutcome {
                status: SolveStatus::IterLimit,
                iterations: i,
                y,
                x: None,
                trace,
            });
        }
        let col = a.column(j);
        let cn = norm(col);
        if cn > 0.0 {
            for (yi, ci) in y.iter_mut().zip(col) {
                *yi += ci / cn;
            }
        }
    }
    unreachable!()
}
