//! Monte Carlo logical failure rates and the threshold crossing estimate.

use super::coarse::{logical_failure, sample_edge_flips, syndrome_from_flips};
use super::matching::match_syndrome;
use super::DecoderError;
use crate::seeding::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const MIN_TRIALS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub m: usize,
    pub p: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub stderr: f64,
}

/// One decoding trial: sample flips, decode, and report a logical failure.
pub fn decode_trial(m: usize, p: f64, seed: u64) -> Result<bool, DecoderError> {
    let flips = sample_edge_flips(m, p, seed)?;
    let correction = match_syndrome(&syndrome_from_flips(&flips))?;
    logical_failure(&flips, &correction)
}

/// Trial `i` uses seed `derive_seed(seed, i)`.
pub fn estimate_logical_rate(m: usize, p: f64, n_trials: usize, seed: u64) -> Result<RatePoint, DecoderError> {
    if n_trials < MIN_TRIALS {
        return Err(DecoderError::TooFewTrials(n_trials));
    }
    let outcomes = (0..n_trials)
        .into_par_iter()
        .map(|i| decode_trial(m, p, derive_seed(seed, i as u64)))
        .collect::<Result<Vec<bool>, _>>()?;
    let failures = outcomes.iter().filter(|&&f| f).count();
    let rate = failures as f64 / n_trials as f64;
    let stderr = (rate * (1.0 - rate) / n_trials as f64).sqrt();
    Ok(RatePoint { m, p, trials: n_trials, failures, rate, stderr })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub m_small: usize,
    pub m_large: usize,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub points: Vec<RatePoint>,
    pub crossings: Vec<Crossing>,
    /// Mean of the pairwise crossings.
    pub estimate: f64,
    /// Largest minus smallest pairwise crossing.
    pub spread: f64,
}

/// Crossing of the failure-rate curves of successive sizes.
///
/// `rates[s][i]` is the rate for size `sizes[s]` at `p_grid[i]`. For each
/// successive pair the first grid interval where the larger size goes from
/// not-worse to worse is located and interpolated linearly.
pub fn locate_crossings(sizes: &[usize], p_grid: &[f64], rates: &[Vec<f64>]) -> Result<Vec<Crossing>, DecoderError> {
    if sizes.len() < 2 {
        return Err(DecoderError::TooFewSizes(sizes.len()));
    }
    let mut crossings = Vec::new();
    for s in 0..sizes.len() - 1 {
        let diff: Vec<f64> = (0..p_grid.len()).map(|i| rates[s + 1][i] - rates[s][i]).collect();
        let found = (0..p_grid.len().saturating_sub(1)).find(|&i| diff[i] <= 0.0 && diff[i + 1] > 0.0);
        if let Some(i) = found {
            let p = if diff[i] == 0.0 {
                p_grid[i]
            } else {
                p_grid[i] + (p_grid[i + 1] - p_grid[i]) * (-diff[i]) / (diff[i + 1] - diff[i])
            };
            crossings.push(Crossing { m_small: sizes[s], m_large: sizes[s + 1], p });
        }
    }
    if crossings.is_empty() {
        return Err(DecoderError::NoCrossing);
    }
    Ok(crossings)
}

pub fn summarize_crossings(crossings: &[Crossing]) -> (f64, f64) {
    let ps: Vec<f64> = crossings.iter().map(|c| c.p).collect();
    let mean = ps.iter().sum::<f64>() / ps.len() as f64;
    let lo = ps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, hi - lo)
}

/// Failure rates over `sizes x p_grid` and their crossings. The point for
/// size `m` at grid index `i` uses seed `derive_seed(derive_seed(seed, m), i)`.
pub fn estimate_threshold(
    sizes: &[usize],
    p_grid: &[f64],
    n_trials: usize,
    seed: u64,
) -> Result<ThresholdEstimate, DecoderError> {
    if sizes.len() < 2 {
        return Err(DecoderError::TooFewSizes(sizes.len()));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(DecoderError::TooFewSizes(sorted.len()));
    }
    let mut points = Vec::with_capacity(sorted.len() * p_grid.len());
    let mut rates = Vec::with_capacity(sorted.len());
    for &m in &sorted {
        let size_seed = derive_seed(seed, m as u64);
        let row = p_grid
            .iter()
            .enumerate()
            .map(|(i, &p)| estimate_logical_rate(m, p, n_trials, derive_seed(size_seed, i as u64)))
            .collect::<Result<Vec<_>, _>>()?;
        rates.push(row.iter().map(|r| r.rate).collect());
        points.extend(row);
    }
    let crossings = locate_crossings(&sorted, p_grid, &rates)?;
    let (estimate, spread) = summarize_crossings(&crossings);
    Ok(ThresholdEstimate { points, crossings, estimate, spread })
}
