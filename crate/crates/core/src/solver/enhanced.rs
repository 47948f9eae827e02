use super::aggregate::{aggregate, ActiveSet, Aggregation, Coeff, Member};
use super::{
    initial_point, interior_certificate, q1, IterTrace, MaxSet, SolveConfig, SolveOutcome,
    SolveStatus,
};
use crate::cone::{lmo_from_scores, ConeProblem};
use crate::error::{Error, Result};
use crate::hull::{MinNormState, QpConfig};
use crate::linalg::norm;

/// Projects onto the hull of the members, warm-starting from their weights.
fn rebuild(set: &ActiveSet, rank_tol: f64) -> Result<MinNormState> {
    match MinNormState::from_weights(set.points(), set.lambda.clone(), rank_tol) {
        Err(Error::DegenerateColumn) => {
            let mut state = MinNormState::new(set.points(), None, rank_tol)?;
            state.solve(&QpConfig {
                rank_tol,
                ..QpConfig::default()
            })?;
            Ok(state)
        }
        other => other,
    }
}

pub fn solve_enhanced(problem: &ConeProblem, config: &SolveConfig) -> Result<SolveOutcome> {
    config.validate()?;
    let a = problem.matrix();
    let u = problem.cone().u_bar();
    let x0 = initial_point(problem, config)?;
    let y0 = a.mul_vec(&x0)?;

    let mut set = ActiveSet::new(
        vec![Member {
            point: y0,
            coeff: Coeff::start(),
            born: 0,
            aggregated: false,
        }],
        vec![1.0],
    )?;
    let mut state = rebuild(&set, config.qp.rank_tol)?;
    let mut trace = Vec::new();
    let mut interior = false;
    let mut agg_event = false;
    let mut inner = 0;

    for i in 0.. {
        let y = state.y().to_vec();
        let aty = a.tr_mul_vec(&y)?;
        let lmo = lmo_from_scores(problem.cone(), &aty);
        trace.push(IterTrace {
            iter: i,
            norm_y: norm(&y),
            q1: q1(&aty),
            active_size: set.len(),
            agg_event,
            inner_qp_iters: inner,
        });

        let status = if interior {
            let support: Vec<usize> = (0..set.len()).filter(|&k| set.lambda[k] > 0.0).collect();
            Some(SolveStatus::InteriorCertificate {
                x: set.x(&x0),
                support: support
                    .iter()
                    .map(|&k| set.members[k].point.clone())
                    .collect(),
                weights: support.iter().map(|&k| set.lambda[k]).collect(),
            })
        } else if norm(&y) <= config.eps {
            Some(SolveStatus::PrimalEpsSolution { x: set.x(&x0) })
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
                x: Some(set.x(&x0)),
                y,
                trace,
            });
        }

        let entering = Member {
            point: problem.vertex_image(lmo.index),
            coeff: Coeff::vertex(lmo.index, 1.0 / u[lmo.index]),
            born: i + 1,
            aggregated: false,
        };
        state.push_point(entering.point.clone())?;
        set.members.push(entering);
        let inner_before = state.inner_count();
        state.solve(&config.qp)?;
        inner = state.inner_count() - inner_before;
        set.lambda = state.lambda().to_vec();

        interior = interior_certificate(state.points(), &set.lambda, config.qp.rank_tol);
        if interior {
            continue;
        }
        set.discard_zero();
        agg_event = false;
        if let MaxSet::Bounded(cap) = config.max_set {
            while set.len() > cap - 1 {
                if config.aggregation == Aggregation::None {
                    set.collapse();
                } else {
                    aggregate(&mut set, config.aggregation)?;
                }
                agg_event = true;
            }
        }
        state = rebuild(&set, config.qp.rank_tol)?;
        set.lambda = state.lambda().to_vec();
    }
    unreachable!()
}
