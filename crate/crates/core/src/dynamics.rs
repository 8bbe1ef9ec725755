//! Unitary evolution of walker states through the spectral decomposition,
//! displacement distributions, and the empirical check of the displacement
//! bound `P(d) <= C d^7 exp(-d / l)`.
//!
//! Times are in units of `1/h` whenever the Hamiltonian uses `h = 1`.

use crate::lattice::WalkerBasis;
use crate::spectra::{EigenSystem, AMPLITUDE_FLOOR};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Profile bins below this carry no information (square of the amplitude floor).
pub const PROBABILITY_FLOOR: f64 = AMPLITUDE_FLOOR * AMPLITUDE_FLOOR;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("initial state {index} out of range for dimension {dimension}")]
    InitialOutOfRange { index: usize, dimension: usize },
    #[error("eigensystem dimension {eigen} does not match basis dimension {basis}")]
    DimensionMismatch { eigen: usize, basis: usize },
    #[error("square side must be positive, got {0}")]
    InvalidSide(f64),
    #[error("localization length must be positive, got {0}")]
    InvalidLength(f64),
    #[error("time must be finite, got {0}")]
    InvalidTime(f64),
}

/// `|<f| exp(-iHt) |initial>|²` for every basis state `f`.
pub fn evolve_probability(eig: &EigenSystem, initial: usize, t: f64) -> Result<Vec<f64>, DynamicsError> {
    let d = eig.dimension();
    if initial >= d {
        return Err(DynamicsError::InitialOutOfRange { index: initial, dimension: d });
    }
    if !t.is_finite() {
        return Err(DynamicsError::InvalidTime(t));
    }
    if t == 0.0 {
        let mut p = vec![0.0; d];
        p[initial] = 1.0;
        return Ok(p);
    }
    let mut re = vec![0.0; d];
    let mut im = vec![0.0; d];
    for (k, &energy) in eig.values().iter().enumerate() {
        let v = eig.vector(k);
        let c = v[initial];
        if c == 0.0 {
            continue;
        }
        let (s, cos) = (energy * t).sin_cos();
        let (cr, ci) = (cos * c, -s * c);
        for ((r, i), &vf) in re.iter_mut().zip(im.iter_mut()).zip(v) {
            *r += vf * cr;
            *i += vf * ci;
        }
    }
    Ok(re.into_iter().zip(im).map(|(r, i)| r * r + i * i).collect())
}

/// Probability mass binned by `floor(distance from the initial state)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementProfile {
    pub initial: usize,
    pub time: f64,
    pub mass: Vec<f64>,
    pub total: f64,
}

pub fn bin_by_distance<B: WalkerBasis>(probabilities: &[f64], basis: &B, initial: usize, time: f64) -> DisplacementProfile {
    let bins = basis.max_distance().floor() as usize + 1;
    let mut mass = vec![0.0; bins];
    for (f, p) in probabilities.iter().enumerate() {
        let k = (basis.distance(f, initial).floor() as usize).min(bins - 1);
        mass[k] += p;
    }
    let total = mass.iter().sum();
    DisplacementProfile { initial, time, mass, total }
}

pub fn displacement_profile<B: WalkerBasis>(
    eig: &EigenSystem,
    basis: &B,
    initial: usize,
    t: f64,
) -> Result<DisplacementProfile, DynamicsError> {
    if eig.dimension() != basis.dimension() {
        return Err(DynamicsError::DimensionMismatch { eigen: eig.dimension(), basis: basis.dimension() });
    }
    let p = evolve_probability(eig, initial, t)?;
    Ok(bin_by_distance(&p, basis, initial, t))
}

/// `Σ_f P_f d(f, initial)²`.
pub fn mean_square_distance<B: WalkerBasis>(probabilities: &[f64], basis: &B, initial: usize) -> f64 {
    probabilities
        .iter()
        .enumerate()
        .map(|(f, p)| p * basis.distance(f, initial).powi(2))
        .sum()
}

/// Mass in bins whose lower edge exceeds `lambda / 2`: the probability that
/// the pair has left a square of side `lambda`.
pub fn escape_probability(profile: &DisplacementProfile, lambda: f64) -> Result<f64, DynamicsError> {
    if !(lambda > 0.0) {
        return Err(DynamicsError::InvalidSide(lambda));
    }
    Ok(profile
        .mass
        .iter()
        .enumerate()
        .filter(|&(k, _)| k as f64 > 0.5 * lambda)
        .map(|(_, m)| m)
        .sum())
}

/// Relative growth of the running maximum of `values` between the last time
/// at or before `from` and the end of the series. `times` must be ascending.
/// `None` when the series never rises above zero or `from` precedes it.
pub fn running_max_change(times: &[f64], values: &[f64], from: f64) -> Option<f64> {
    let mut running = 0.0f64;
    let mut at_start = None;
    for (&t, &v) in times.iter().zip(values) {
        running = running.max(v);
        if t <= from {
            at_start = Some(running);
        }
    }
    let start = at_start?;
    (running > 0.0).then(|| (running - start) / running)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeMargin {
    pub time: f64,
    /// Smallest constant that bounds this profile.
    pub constant: f64,
    pub worst_distance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub length: f64,
    /// Smallest `C` with `P(d) <= C d^7 exp(-d / l)` for all `d >= 1` and all
    /// sampled times.
    pub constant: f64,
    pub worst_distance: Option<usize>,
    pub ceiling: f64,
    pub violated: bool,
    pub per_time: Vec<TimeMargin>,
}

impl BoundReport {
    /// Largest constant over the later half of the time samples divided by the
    /// largest over the earlier half. Near 1 when the bound has saturated.
    pub fn late_to_early_ratio(&self) -> Option<f64> {
        let half = self.per_time.len() / 2;
        if half == 0 {
            return None;
        }
        let max = |s: &[TimeMargin]| s.iter().map(|m| m.constant).fold(0.0f64, f64::max);
        let early = max(&self.per_time[..half]);
        let late = max(&self.per_time[half..]);
        (early > 0.0).then(|| late / early)
    }
}

/// Largest constant the displacement bound can need when every eigenstate
/// obeys `|<s|E>| <= exp(-d(s, peak) / 2l)`.
///
/// Under that assumption, with one eigenstate peaked on each basis state `k`,
/// `P(f <- i) <= (Σ_k exp(-(d(i,k) + d(f,k)) / 2l))²`. Summing over each
/// distance bin and dividing by `d^7 exp(-d / l)` gives the ceiling; an
/// empirical constant above it is incompatible with localization at `l`.
pub fn bound_ceiling<B: WalkerBasis>(basis: &B, initial: usize, length: f64) -> Result<f64, DynamicsError> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(DynamicsError::InvalidLength(length));
    }
    let dim = basis.dimension();
    if initial >= dim {
        return Err(DynamicsError::InitialOutOfRange { index: initial, dimension: dim });
    }
    let scale = 0.5 / length;
    let from_initial: Vec<f64> = (0..dim).map(|k| (-basis.distance(initial, k) * scale).exp()).collect();
    let bins = basis.max_distance().floor() as usize + 1;
    let mut per_bin = vec![0.0; bins];
    for f in 0..dim {
        let overlap: f64 = (0..dim)
            .map(|k| from_initial[k] * (-basis.distance(f, k) * scale).exp())
            .sum();
        let k = (basis.distance(f, initial).floor() as usize).min(bins - 1);
        per_bin[k] += overlap * overlap;
    }
    Ok(per_bin
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &b)| {
            let d = k as f64;
            (b.ln() - 7.0 * d.ln() + d / length).exp()
        })
        .fold(0.0, f64::max))
}

/// Empirical constant for the displacement bound at localization length
/// `length`. Bins with mass below [`PROBABILITY_FLOOR`] are skipped. The
/// report is flagged violated when the constant exceeds `ceiling`.
pub fn check_bound(profiles: &[DisplacementProfile], length: f64, ceiling: f64) -> Result<BoundReport, DynamicsError> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(DynamicsError::InvalidLength(length));
    }
    let per_time: Vec<TimeMargin> = profiles
        .iter()
        .map(|p| {
            let mut worst: Option<(usize, f64)> = None;
            for (k, &m) in p.mass.iter().enumerate().skip(1) {
                if m < PROBABILITY_FLOOR {
                    continue;
                }
                let d = k as f64;
                let log_c = m.ln() - 7.0 * d.ln() + d / length;
                if worst.is_none_or(|(_, w)| log_c > w) {
                    worst = Some((k, log_c));
                }
            }
            TimeMargin {
                time: p.time,
                constant: worst.map_or(0.0, |(_, c)| c.exp()),
                worst_distance: worst.map(|(k, _)| k),
            }
        })
        .collect();
    let top = per_time
        .iter()
        .filter(|m| m.worst_distance.is_some())
        .max_by(|a, b| a.constant.total_cmp(&b.constant));
    let constant = top.map_or(0.0, |m| m.constant);
    Ok(BoundReport {
        length,
        constant,
        worst_distance: top.and_then(|m| m.worst_distance),
        ceiling,
        violated: !(constant <= ceiling),
        per_time,
    })
}
