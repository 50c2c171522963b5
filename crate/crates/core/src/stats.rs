//! Small fitting helpers for benchmark and simulation summaries.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{ReconfError, Result};

/// `ln y = slope * ln x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit<F> {
    pub slope: F,
    pub intercept: F,
    pub r_squared: F,
}

/// Ordinary least squares on logarithms. Needs two distinct positive `x`
/// values and positive `y` values.
pub fn loglog_fit<F: Float>(xs: &[F], ys: &[F]) -> Result<SlopeFit<F>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(ReconfError::InvalidInput("need at least two matching points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > F::zero())) {
        return Err(ReconfError::InvalidInput("log-log fit needs positive data".into()));
    }
    let lx: Vec<F> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<F> = ys.iter().map(|v| v.ln()).collect();
    let n = F::from(xs.len()).unwrap();
    let mx = lx.iter().fold(F::zero(), |a, &b| a + b) / n;
    let my = ly.iter().fold(F::zero(), |a, &b| a + b) / n;
    let (mut sxx, mut sxy, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in lx.iter().zip(&ly) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
        syy = syy + (y - my) * (y - my);
    }
    if sxx == F::zero() {
        return Err(ReconfError::InvalidInput("x values must not all be equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == F::zero() { F::one() } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// First `x` where the piecewise-linear curve through `(xs, ys)` reaches
/// `level` from below, or `None` if it never does. `xs` must be increasing.
pub fn level_crossing<F: Float>(xs: &[F], ys: &[F], level: F) -> Option<F> {
    if ys.first().is_some_and(|&y| y >= level) {
        return xs.first().copied();
    }
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        (y[0] < level && y[1] >= level).then(|| x[0] + (x[1] - x[0]) * (level - y[0]) / (y[1] - y[0]))
    })
}
