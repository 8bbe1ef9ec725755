//! Exact diagonalization and localization-length extraction.
//!
//! Each eigenvector is assigned to the basis state where its amplitude peaks.
//! Amplitudes are then binned by distance from the peak (unit-width bins),
//! the largest amplitude in each bin is kept as the envelope, and
//! `ln(envelope)` is fitted linearly against distance. An envelope decaying as
//! `exp(-d / 2l)` has slope `-1 / 2l`.
//!
//! The length of a whole Hamiltonian is the largest per-state length. If any
//! state cannot be fitted as localized the Hamiltonian is reported
//! delocalized.

use crate::hamiltonian::{build_two_walker, sample_disorder, HamiltonianError, WalkerHamiltonian};
use crate::lattice::{PairBasis, WalkerBasis};
use crate::seeding::derive_seed;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd;
use faer::diag::Diag;
use faer::prelude::default;
use faer::{Mat, Par};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Amplitudes below this are treated as eigensolver noise.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;
/// Slopes at or above this count as a flat envelope.
pub const FLAT_SLOPE: f64 = -1e-3;
/// Minimum number of envelope bins (at `d >= 1`) a fit needs.
pub const MIN_FIT_BINS: usize = 3;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver failed to converge")]
    NoConvergence,
    #[error("eigenvector has no nonzero amplitude")]
    ZeroVector,
    #[error("vector length {got} does not match basis dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("localization report has no states")]
    EmptyReport,
    #[error("need at least one disorder sample")]
    NoSamples,
    #[error("all {samples} disorder samples are delocalized")]
    AllDelocalized { samples: usize },
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

/// Full spectrum with eigenvalues ascending and orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    // column-major: vector k occupies [k * dim, (k + 1) * dim)
    vectors: Vec<f64>,
}

impl EigenSystem {
    pub fn from_symmetric(matrix: &Mat<f64>) -> Result<Self, SpectraError> {
        let (rows, cols) = (matrix.nrows(), matrix.ncols());
        if rows != cols {
            return Err(SpectraError::NotSquare { rows, cols });
        }
        for i in 0..rows {
            for j in 0..i {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(SpectraError::NotSymmetric { row: i, col: j });
                }
            }
        }
        // sequential so results do not depend on the surrounding thread pool
        let par = Par::Seq;
        let mut u = Mat::<f64>::zeros(rows, rows);
        let mut diag = Diag::<f64>::zeros(rows);
        let scratch = evd::self_adjoint_evd_scratch::<f64>(rows, evd::ComputeEigenvectors::Yes, par, default());
        evd::self_adjoint_evd(
            matrix.as_ref(),
            diag.as_mut(),
            Some(u.as_mut()),
            par,
            MemStack::new(&mut MemBuffer::new(scratch)),
            default(),
        )
        .map_err(|_| SpectraError::NoConvergence)?;
        let s = diag.column_vector();
        let mut order: Vec<usize> = (0..rows).collect();
        order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        let values: Vec<f64> = order.iter().map(|&k| s[k]).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectraError::NoConvergence);
        }
        let mut vectors = Vec::with_capacity(rows * rows);
        for &k in &order {
            vectors.extend((0..rows).map(|i| u[(i, k)]));
        }
        Ok(Self { values, vectors })
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let d = self.dimension();
        &self.vectors[k * d..(k + 1) * d]
    }

    /// Component of eigenvector `k` on basis state `i`.
    pub fn component(&self, i: usize, k: usize) -> f64 {
        self.vectors[k * self.dimension() + i]
    }

    /// Largest entry of `|VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let d = self.dimension();
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in a..d {
                let dot: f64 = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Largest entry of `|HV - VΛ|`.
    pub fn reconstruction_error(&self, matrix: &Mat<f64>) -> f64 {
        let d = self.dimension();
        let mut worst = 0.0f64;
        for k in 0..d {
            let v = self.vector(k);
            for i in 0..d {
                let hv: f64 = (0..d).map(|j| matrix[(i, j)] * v[j]).sum();
                worst = worst.max((hv - self.values[k] * v[i]).abs());
            }
        }
        worst
    }
}

pub fn diagonalize(h: &WalkerHamiltonian) -> Result<EigenSystem, SpectraError> {
    EigenSystem::from_symmetric(h.matrix())
}

/// Index of the largest `|amplitude|`; ties go to the lowest index.
pub fn locate_peak(vector: &[f64]) -> Result<usize, SpectraError> {
    let mut best = 0;
    let mut best_abs = 0.0;
    for (i, a) in vector.iter().enumerate() {
        if a.abs() > best_abs {
            best = i;
            best_abs = a.abs();
        }
    }
    if best_abs == 0.0 {
        return Err(SpectraError::ZeroVector);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delocalization {
    /// Envelope slope at or above [`FLAT_SLOPE`].
    FlatEnvelope,
    /// Fewer than [`MIN_FIT_BINS`] usable bins.
    InsufficientBins,
    /// Fitted length exceeds half the largest distance on the lattice.
    ExceedsLattice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFit {
    pub peak: usize,
    /// `-1 / (2 * slope)`, present whenever the slope is negative.
    pub length: Option<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: Option<f64>,
    pub bins_used: usize,
    pub delocalized: Option<Delocalization>,
}

impl StateFit {
    pub fn is_localized(&self) -> bool {
        self.delocalized.is_none()
    }
}

/// Distance-binned envelope of `|vector|` around `peak`.
///
/// Entry `k` holds the largest amplitude among states with
/// `k <= d < k + 1`, together with the distance at which it occurs.
pub fn envelope<B: WalkerBasis>(vector: &[f64], peak: usize, basis: &B) -> Vec<Option<(f64, f64)>> {
    let bins = basis.max_distance().floor() as usize + 1;
    let mut env: Vec<Option<(f64, f64)>> = vec![None; bins];
    for (i, a) in vector.iter().enumerate() {
        let d = basis.distance(i, peak);
        let k = (d.floor() as usize).min(bins - 1);
        let a = a.abs();
        match env[k] {
            Some((best, best_d)) if best > a || (best == a && best_d <= d) => {}
            _ => env[k] = Some((a, d)),
        }
    }
    env
}

pub fn fit_localization_length<B: WalkerBasis>(
    vector: &[f64],
    peak: usize,
    basis: &B,
) -> Result<StateFit, SpectraError> {
    if vector.len() != basis.dimension() {
        return Err(SpectraError::DimensionMismatch { got: vector.len(), expected: basis.dimension() });
    }
    let points: Vec<(f64, f64)> = envelope(vector, peak, basis)
        .into_iter()
        .skip(1)
        .flatten()
        .filter(|&(a, _)| a >= AMPLITUDE_FLOOR)
        .map(|(a, d)| (d, a.ln()))
        .collect();
    let n = points.len();
    if n < MIN_FIT_BINS {
        return Ok(StateFit {
            peak,
            length: None,
            slope: f64::NAN,
            intercept: f64::NAN,
            slope_stderr: None,
            bins_used: n,
            delocalized: Some(Delocalization::InsufficientBins),
        });
    }
    let (slope, intercept, slope_stderr) = least_squares(&points);
    let length = (slope < 0.0).then(|| -0.5 / slope);
    let delocalized = if slope >= FLAT_SLOPE {
        Some(Delocalization::FlatEnvelope)
    } else if length.is_some_and(|l| l > 0.5 * basis.max_distance()) {
        Some(Delocalization::ExceedsLattice)
    } else {
        None
    };
    Ok(StateFit { peak, length, slope, intercept, slope_stderr: Some(slope_stderr), bins_used: n, delocalized })
}

/// Ordinary least squares `y = slope * x + intercept`; returns the slope's
/// standard error as the third element.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = if points.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, intercept, stderr)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub states: Vec<StateFit>,
    pub delocalized_fraction: f64,
}

impl LocalizationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Fit every eigenstate of `eig`.
pub fn analyze<B: WalkerBasis>(eig: &EigenSystem, basis: &B) -> Result<LocalizationReport, SpectraError> {
    if eig.dimension() != basis.dimension() {
        return Err(SpectraError::DimensionMismatch { got: eig.dimension(), expected: basis.dimension() });
    }
    let states = (0..eig.dimension())
        .into_par_iter()
        .map(|k| {
            let v = eig.vector(k);
            fit_localization_length(v, locate_peak(v)?, basis)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let delocalized = states.iter().filter(|s| !s.is_localized()).count();
    let delocalized_fraction = if states.is_empty() { 0.0 } else { delocalized as f64 / states.len() as f64 };
    Ok(LocalizationReport { states, delocalized_fraction })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianLength {
    Localized(f64),
    Delocalized { fraction: f64 },
}

impl HamiltonianLength {
    pub fn length(self) -> Option<f64> {
        match self {
            Self::Localized(l) => Some(l),
            Self::Delocalized { .. } => None,
        }
    }
}

pub fn hamiltonian_localization_length(report: &LocalizationReport) -> Result<HamiltonianLength, SpectraError> {
    if report.states.is_empty() {
        return Err(SpectraError::EmptyReport);
    }
    if report.states.iter().any(|s| !s.is_localized()) {
        return Ok(HamiltonianLength::Delocalized { fraction: report.delocalized_fraction });
    }
    let l = report
        .states
        .iter()
        .filter_map(|s| s.length)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HamiltonianLength::Localized(l))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleLength {
    pub sample: usize,
    pub seed: u64,
    pub length: HamiltonianLength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderAverage {
    pub mean: f64,
    /// Standard error of the mean; absent with fewer than two localized samples.
    pub stderr: Option<f64>,
    pub delocalized_fraction: f64,
    pub samples: Vec<SampleLength>,
}

/// Hamiltonian-level length of one two-walker disorder sample. Energies are
/// in units of `h` with the mean coupling at zero.
pub fn sample_length(basis: &PairBasis, gamma_over_h: f64, seed: u64) -> Result<HamiltonianLength, SpectraError> {
    let d = sample_disorder(basis.lattice(), 0.0, gamma_over_h, 1.0, seed)?;
    let h = build_two_walker(basis, &d)?;
    let eig = diagonalize(&h)?;
    hamiltonian_localization_length(&analyze(&eig, basis)?)
}

/// Per-sample lengths in sample order; sample `i` uses seed
/// `derive_seed(master_seed, i)`.
pub fn sample_lengths(
    basis: &PairBasis,
    gamma_over_h: f64,
    n_samples: usize,
    master_seed: u64,
) -> Result<Vec<SampleLength>, SpectraError> {
    (0..n_samples)
        .into_par_iter()
        .map(|sample| {
            let seed = derive_seed(master_seed, sample as u64);
            Ok(SampleLength { sample, seed, length: sample_length(basis, gamma_over_h, seed)? })
        })
        .collect()
}

/// Summary over samples; delocalized samples are excluded from the mean and
/// counted in the fraction.
pub fn average_samples(samples: Vec<SampleLength>) -> Result<DisorderAverage, SpectraError> {
    if samples.is_empty() {
        return Err(SpectraError::NoSamples);
    }
    let lengths: Vec<f64> = samples.iter().filter_map(|s| s.length.length()).collect();
    if lengths.is_empty() {
        return Err(SpectraError::AllDelocalized { samples: samples.len() });
    }
    let n = lengths.len() as f64;
    let mean = lengths.iter().sum::<f64>() / n;
    let stderr = (lengths.len() > 1).then(|| {
        let var = lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    });
    let delocalized_fraction = 1.0 - n / samples.len() as f64;
    Ok(DisorderAverage { mean, stderr, delocalized_fraction, samples })
}

pub fn disorder_averaged_length(
    basis: &PairBasis,
    gamma_over_h: f64,
    n_samples: usize,
    master_seed: u64,
) -> Result<DisorderAverage, SpectraError> {
    if n_samples == 0 {
        return Err(SpectraError::NoSamples);
    }
    average_samples(sample_lengths(basis, gamma_over_h, n_samples, master_seed)?)
}
