use super::Convex1D;
use crate::error::{Error, Result};

/// `left·x²` for `x < 0` and `right·x²` for `x ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricQuadratic {
    pub left: f64,
    pub right: f64,
}

impl AsymmetricQuadratic {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left > 0.0 && right > 0.0 && left.is_finite() && right.is_finite()) {
            return Err(Error::InvalidInput(
                "quadratic coefficients must be positive".into(),
            ));
        }
        Ok(Self { left, right })
    }

    /// `x²`
    pub fn square() -> Self {
        Self {
            left: 1.0,
            right: 1.0,
        }
    }
}

impl Convex1D for AsymmetricQuadratic {
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left * x * x
        } else {
            self.right * x * x
        }
    }

    fn subdiff(&self, x: f64) -> (f64, f64) {
        let g = if x < 0.0 {
            2.0 * self.left * x
        } else {
            2.0 * self.right * x
        };
        (g, g)
    }

    fn subdiff_inverse(&self, s: f64) -> f64 {
        if s < 0.0 {
            s / (2.0 * self.left)
        } else {
            s / (2.0 * self.right)
        }
    }

    fn curvature(&self) -> Option<(f64, f64)> {
        Some((2.0 * self.left, 2.0 * self.right))
    }
}

/// Squared distance to `[−a', b']`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalDistanceSq {
    pub a: f64,
    pub b: f64,
}

impl IntervalDistanceSq {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidInput(
                "interval ends must be nonnegative".into(),
            ));
        }
        Ok(Self { a, b })
    }
}

impl Convex1D for IntervalDistanceSq {
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn value(&self, x: f64) -> f64 {
        if x > self.b {
            (x - self.b).powi(2)
        } else if x < -self.a {
            (x + self.a).powi(2)
        } else {
            0.0
        }
    }

    fn subdiff(&self, x: f64) -> (f64, f64) {
        let g = if x > self.b {
            2.0 * (x - self.b)
        } else if x < -self.a {
            2.0 * (x + self.a)
        } else {
            0.0
        };
        (g, g)
    }

    fn subdiff_inverse(&self, s: f64) -> f64 {
        if s > 0.0 {
            self.b + s / 2.0
        } else if s < 0.0 {
            -self.a + s / 2.0
        } else {
            (self.b - self.a) / 2.0
        }
    }
}

/// Lower boundary `r − √(r² − x²)` of the disk of radius `r` centred at `(0, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskBoundary {
    pub r: f64,
}

impl Convex1D for DiskBoundary {
    fn domain(&self) -> (f64, f64) {
        (-self.r, self.r)
    }

    fn value(&self, x: f64) -> f64 {
        // r − √(r² − x²) without cancellation near 0
        let x = x.clamp(-self.r, self.r);
        x * x / (self.r + (self.r * self.r - x * x).sqrt())
    }

    fn subdiff(&self, x: f64) -> (f64, f64) {
        let d = (self.r * self.r - x * x).max(0.0).sqrt();
        let g = if d > 0.0 {
            x / d
        } else {
            x.signum() * f64::INFINITY
        };
        (g, g)
    }

    fn subdiff_inverse(&self, s: f64) -> f64 {
        self.r * s / (1.0 + s * s).sqrt()
    }

    fn curvature(&self) -> Option<(f64, f64)> {
        Some((1.0 / self.r, 1.0 / self.r))
    }
}

/// Convex piecewise-linear function given by breakpoints and slopes, with
/// `f(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breaks: Vec<f64>,
    slopes: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    /// `slopes[k]` applies on `(breaks[k], breaks[k + 1])`.
    pub fn new(breaks: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if breaks.len() != slopes.len() + 1 || slopes.is_empty() {
            return Err(Error::InvalidInput(
                "need one more breakpoint than slopes".into(),
            ));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("breakpoints must increase".into()));
        }
        if slopes.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidInput("slopes must be nondecreasing".into()));
        }
        if !(breaks[0] <= 0.0 && 0.0 <= breaks[breaks.len() - 1]) {
            return Err(Error::InvalidInput("domain must contain 0".into()));
        }
        let zero = Self::piece_of(&breaks, &slopes, 0.0);
        let mut values = vec![0.0; breaks.len()];
        values[zero] = slopes[zero] * breaks[zero];
        values[zero + 1] = slopes[zero] * breaks[zero + 1];
        for k in (0..zero).rev() {
            values[k] = values[k + 1] + slopes[k] * (breaks[k] - breaks[k + 1]);
        }
        for k in zero + 2..breaks.len() {
            values[k] = values[k - 1] + slopes[k - 1] * (breaks[k] - breaks[k - 1]);
        }
        Ok(Self {
            breaks,
            slopes,
            values,
        })
    }

    fn piece_of(breaks: &[f64], slopes: &[f64], x: f64) -> usize {
        breaks
            .iter()
            .rposition(|&b| b < x)
            .unwrap_or(0)
            .min(slopes.len() - 1)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }
}

impl Convex1D for PiecewiseLinear {
    fn domain(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    fn value(&self, x: f64) -> f64 {
        if let Some(k) = self.breaks.iter().position(|&b| b == x) {
            return self.values[k];
        }
        let k = Self::piece_of(&self.breaks, &self.slopes, x);
        if self.breaks[k] <= 0.0 && 0.0 <= self.breaks[k + 1] {
            self.slopes[k] * x
        } else if x < 0.0 {
            self.values[k + 1] + self.slopes[k] * (x - self.breaks[k + 1])
        } else {
            self.values[k] + self.slopes[k] * (x - self.breaks[k])
        }
    }

    fn subdiff(&self, x: f64) -> (f64, f64) {
        let last = self.slopes.len() - 1;
        if let Some(k) = self.breaks.iter().position(|&b| b == x) {
            let lo = if k == 0 {
                f64::NEG_INFINITY
            } else {
                self.slopes[k - 1]
            };
            let hi = if k > last {
                f64::INFINITY
            } else {
                self.slopes[k]
            };
            return (lo, hi);
        }
        let k = self
            .breaks
            .iter()
            .rposition(|&b| b < x)
            .unwrap_or(0)
            .min(last);
        (self.slopes[k], self.slopes[k])
    }

    fn subdiff_inverse(&self, s: f64) -> f64 {
        if let Some(k) = self.slopes.iter().position(|&g| g == s) {
            let k_end = self.slopes.iter().rposition(|&g| g == s).unwrap();
            return 0.5 * (self.breaks[k] + self.breaks[k_end + 1]);
        }
        match self.slopes.iter().position(|&g| g > s) {
            Some(k) => self.breaks[k],
            None => self.breaks[self.breaks.len() - 1],
        }
    }
}
