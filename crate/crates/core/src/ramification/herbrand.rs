use crate::error::{Error, Result};

use super::{RamFiltration, Q};

/// A continuous piecewise-linear bijection of `[0, ∞)` with `f(0) = 0`,
/// stored by its breakpoints and the slope of each segment.
///
/// `slopes[k]` is the slope to the right of `breakpoints[k]`; the last entry
/// is the final slope. Negative arguments are mapped to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Herbrand {
    breakpoints: Vec<(Q, Q)>,
    slopes: Vec<Q>,
}

impl Herbrand {
    /// `φ(u) = ∫_0^u |G_w| / |G_0| dw`, slope `|G_i|/|G_0|` on `(i-1, i]`.
    ///
    /// Breakpoints are `0`, `1` and every lower jump `j >= 1`.
    pub fn phi(filt: &RamFiltration) -> Self {
        let g0 = filt.order(0) as i64;
        let mut us: Vec<i64> = vec![0, 1];
        us.extend(filt.lower_jumps().into_iter().filter(|&j| j > 1));
        us.dedup();
        let breakpoints = us
            .iter()
            .map(|&u| (Q::from_integer(u), integer_point_sum(filt, u)))
            .collect();
        let slopes = us
            .iter()
            .map(|&u| Q::new(filt.order(u + 1) as i64, g0))
            .collect();
        Herbrand {
            breakpoints,
            slopes,
        }
    }

    /// The identity function.
    pub fn identity() -> Self {
        Herbrand {
            breakpoints: vec![(Q::from_integer(0), Q::from_integer(0))],
            slopes: vec![Q::from_integer(1)],
        }
    }

    pub fn breakpoints(&self) -> &[(Q, Q)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Q] {
        &self.slopes
    }

    pub fn final_slope(&self) -> Q {
        *self.slopes.last().expect("at least one segment")
    }

    pub fn eval(&self, u: Q) -> Q {
        if u < Q::from_integer(0) {
            return u;
        }
        let k = self
            .breakpoints
            .iter()
            .rposition(|&(x, _)| x <= u)
            .expect("first breakpoint is 0");
        let (x, y) = self.breakpoints[k];
        y + self.slopes[k] * (u - x)
    }

    /// The inverse function; for `φ` this is `ψ`.
    pub fn inverse(&self) -> Self {
        Herbrand {
            breakpoints: self.breakpoints.iter().map(|&(x, y)| (y, x)).collect(),
            slopes: self.slopes.iter().map(|s| s.recip()).collect(),
        }
    }

    /// `f(0) = 0`, strictly increasing, concave, continuous at every
    /// breakpoint.
    pub fn check_shape(&self) -> Result<()> {
        let zero = Q::from_integer(0);
        if self.breakpoints[0] != (zero, zero) {
            return Err(Error::MismatchDetected("f(0) ≠ 0".into()));
        }
        if self.slopes.iter().any(|&s| s <= zero) {
            return Err(Error::MismatchDetected("non-positive slope".into()));
        }
        for k in 1..self.breakpoints.len() {
            let (x0, y0) = self.breakpoints[k - 1];
            let (x1, y1) = self.breakpoints[k];
            if x1 <= x0 {
                return Err(Error::MismatchDetected("breakpoints out of order".into()));
            }
            if y0 + self.slopes[k - 1] * (x1 - x0) != y1 {
                return Err(Error::MismatchDetected(format!("discontinuity at {x1}")));
            }
            if self.slopes[k] > self.slopes[k - 1] {
                return Err(Error::MismatchDetected(format!("not concave at {x1}")));
            }
        }
        Ok(())
    }
}

/// `(|G_1| + ... + |G_v|) / |G_0|` for `v >= 0`.
pub fn integer_point_sum(filt: &RamFiltration, v: i64) -> Q {
    let total: i64 = (1..=v).map(|i| filt.order(i) as i64).sum();
    Q::new(total, filt.order(0) as i64)
}
