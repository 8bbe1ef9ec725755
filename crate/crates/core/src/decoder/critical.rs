//! Critical square size and critical anyon density from a localization length.
//!
//! The escape probability across a square boundary is approximated by
//! `f(λ) = (λ/2)^7 exp(-λ / 2l)`. It rises to a single maximum at `λ = 14l`
//! and decays afterwards; the critical side `λ_c` is the root of
//! `f(λ) = p_c` on the decaying branch.

use super::DecoderError;
use serde::{Deserialize, Serialize};

pub fn log_escape_bound(lambda: f64, length: f64) -> f64 {
    7.0 * (0.5 * lambda).ln() - lambda / (2.0 * length)
}

pub fn escape_bound(lambda: f64, length: f64) -> f64 {
    log_escape_bound(lambda, length).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalSide {
    Root(f64),
    /// `p_c` exceeds the largest value of the escape bound: squares of any
    /// size stay correctable.
    AlwaysCorrectable,
}

pub fn solve_lambda_c(length: f64, p_c: f64) -> Result<CriticalSide, DecoderError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(DecoderError::InvalidLength(length));
    }
    if !(p_c > 0.0 && p_c < 1.0) {
        return Err(DecoderError::InvalidThreshold(p_c));
    }
    let target = p_c.ln();
    let g = |lambda: f64| log_escape_bound(lambda, length) - target;
    let mut lo = 14.0 * length;
    if g(lo) < 0.0 {
        return Ok(CriticalSide::AlwaysCorrectable);
    }
    let mut hi = 2.0 * lo;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // bisect until the bracket cannot shrink any further
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalSide::Root(if g(lo).abs() <= g(hi).abs() { lo } else { hi }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub length: f64,
    pub lambda_c: f64,
    pub rho_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDensityCurve {
    pub p_c: f64,
    pub points: Vec<CriticalPoint>,
}

pub fn critical_density_curve(lengths: &[f64], p_c: f64) -> Result<CriticalDensityCurve, DecoderError> {
    let points = lengths
        .iter()
        .map(|&length| match solve_lambda_c(length, p_c)? {
            CriticalSide::Root(lambda_c) => Ok(CriticalPoint { length, lambda_c, rho_c: lambda_c.powi(-2) }),
            CriticalSide::AlwaysCorrectable => Err(DecoderError::AlwaysCorrectable { length, p_c }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CriticalDensityCurve { p_c, points })
}
