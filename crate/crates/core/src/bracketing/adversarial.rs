use super::functions::PiecewiseLinear;
use crate::error::{Error, Result};

/// Piecewise-linear function on which bracketing from `[−a₀, b₀]` visits
/// exactly the intervals `[−a_i, b_i]`.
///
/// At every step exactly one of the sequences must strictly decrease while the
/// other stays put. The function is flat on `[−a_L, b_L]`.
pub fn build_adversarial(a_seq: &[f64], b_seq: &[f64]) -> Result<PiecewiseLinear> {
    if a_seq.len() != b_seq.len() {
        return Err(Error::InvalidSequence("sequences differ in length".into()));
    }
    if a_seq.len() < 2 {
        return Err(Error::InvalidSequence("need at least one step".into()));
    }
    if a_seq
        .iter()
        .chain(b_seq)
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::InvalidSequence(
            "entries must be positive and finite".into(),
        ));
    }

    let mut left: Vec<(f64, f64, f64)> = Vec::new();
    let mut right: Vec<(f64, f64, f64)> = Vec::new();
    let (mut alpha, mut beta) = (1.0, 1.0);
    for i in 0..a_seq.len() - 1 {
        let (a, a1, b, b1) = (a_seq[i], a_seq[i + 1], b_seq[i], b_seq[i + 1]);
        let gamma = if a1 < a && b1 == b {
            left.push((-a, -a1, -alpha));
            0.5 * alpha * (a - a1) / (a + a1 + 2.0 * b)
        } else if b1 < b && a1 == a {
            right.push((b1, b, beta));
            0.5 * beta * (b - b1) / (2.0 * a + b + b1)
        } else {
            return Err(Error::InvalidSequence(format!(
                "step {i} must shrink exactly one side"
            )));
        };
        alpha = gamma;
        beta = gamma;
    }

    let last = a_seq.len() - 1;
    let mut breaks = vec![-a_seq[0]];
    let mut slopes = Vec::new();
    for &(_, hi, s) in &left {
        breaks.push(hi);
        slopes.push(s);
    }
    breaks.push(b_seq[last]);
    slopes.push(0.0);
    for &(_, hi, s) in right.iter().rev() {
        breaks.push(hi);
        slopes.push(s);
    }
    PiecewiseLinear::new(breaks, slopes)
}
