use crate::cone::{planar_lmo, PlanarSet};
use crate::error::{Error, Result};
use crate::hull::{MinNormState, QpConfig};

#[derive(Debug, Clone)]
pub struct PlanarConfig {
    pub eps: f64,
    pub max_iters: usize,
    pub qp: QpConfig,
}

impl Default for PlanarConfig {
    fn default() -> Self {
        Self {
            eps: 1e-12,
            max_iters: 200,
            qp: QpConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarStep {
    pub iter: usize,
    pub y: [f64; 2],
    pub norm_y: f64,
    /// Oracle point added at this step; `None` for the starting point.
    pub s: Option<[f64; 2]>,
    /// Indices into `{y₀, s₁, s₂, …}` carrying positive weight.
    pub support: Vec<usize>,
}

/// Projects the origin onto the hull of `y₀` and every oracle answer so far.
pub fn run_planar(set: &PlanarSet, y0: [f64; 2], config: &PlanarConfig) -> Result<Vec<PlanarStep>> {
    if !(y0[0].is_finite() && y0[1].is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut state = MinNormState::new(vec![y0.to_vec()], Some(0), config.qp.rank_tol)?;
    let mut steps = vec![PlanarStep {
        iter: 0,
        y: y0,
        norm_y: state.norm(),
        s: None,
        support: vec![0],
    }];
    for i in 1..=config.max_iters {
        if state.norm() <= config.eps {
            break;
        }
        let y = state.y();
        let s = planar_lmo(set, [y[0], y[1]])?;
        state.push_point(s.to_vec())?;
        let before = state.outer_count();
        state.solve(&config.qp)?;
        let progressed = state.outer_count() > before;
        let y = state.y();
        steps.push(PlanarStep {
            iter: i,
            y: [y[0], y[1]],
            norm_y: state.norm(),
            s: Some(s),
            support: (0..state.lambda().len())
                .filter(|&k| state.lambda()[k] > 0.0)
                .collect(),
        });
        if !progressed {
            break;
        }
    }
    Ok(steps)
}
