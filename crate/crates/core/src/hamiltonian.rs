//! Disorder sampling and the walker Hamiltonians.
//!
//! A walker on vertex `v` has on-site energy `J_v`; it hops to each of the
//! four neighbouring vertices with amplitude `h`. In the two-walker sector the
//! diagonal is `J_v + J_v'` and a hop onto the partner's vertex is absent.

use crate::lattice::{LatticeError, Pair, PairBasis, TorusLattice, WalkerBasis};
use crate::seeding::{self, GENERATOR};
use faer::Mat;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("disorder strength must be finite and non-negative, got {0}")]
    InvalidGamma(f64),
    #[error("field strength must be finite and positive, got {0}")]
    InvalidField(f64),
    #[error("mean coupling must be finite, got {0}")]
    InvalidCoupling(f64),
    #[error("the two-walker sector needs L >= 3, got L = {0}")]
    LatticeTooSmall(usize),
    #[error("realization has L = {realization} but the basis has L = {basis}")]
    SizeMismatch { realization: usize, basis: usize },
    #[error("realization lists {got} couplings, expected {expected}")]
    CouplingCount { got: usize, expected: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("malformed realization: {0}")]
    Json(#[from] serde_json::Error),
}

/// One sampled set of vertex couplings together with the field strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    #[serde(rename = "L")]
    pub size: usize,
    #[serde(rename = "J")]
    pub j_mean: f64,
    pub gamma: f64,
    pub h: f64,
    pub seed: u64,
    pub generator: String,
    #[serde(rename = "J_v")]
    couplings: Vec<f64>,
}

/// Draw `L²` couplings uniformly from `[J - gamma/2, J + gamma/2]`.
pub fn sample_disorder(
    lattice: &TorusLattice,
    j_mean: f64,
    gamma: f64,
    h: f64,
    seed: u64,
) -> Result<DisorderRealization, HamiltonianError> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(HamiltonianError::InvalidGamma(gamma));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(HamiltonianError::InvalidField(h));
    }
    if !j_mean.is_finite() {
        return Err(HamiltonianError::InvalidCoupling(j_mean));
    }
    let mut rng = seeding::rng(seed);
    let low = j_mean - 0.5 * gamma;
    let couplings = (0..lattice.num_vertices())
        .map(|_| {
            let u: f64 = rng.random();
            if gamma == 0.0 {
                j_mean
            } else {
                (low + gamma * u).min(j_mean + 0.5 * gamma)
            }
        })
        .collect();
    Ok(DisorderRealization {
        size: lattice.size(),
        j_mean,
        gamma,
        h,
        seed,
        generator: GENERATOR.to_string(),
        couplings,
    })
}

impl DisorderRealization {
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// The same disorder with every coupling (and the mean) shifted by `c`.
    pub fn with_offset(&self, c: f64) -> Self {
        Self {
            j_mean: self.j_mean + c,
            couplings: self.couplings.iter().map(|j| j + c).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("realization serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, HamiltonianError> {
        let r: Self = serde_json::from_str(s)?;
        let expected = r.size * r.size;
        if r.couplings.len() != expected {
            return Err(HamiltonianError::CouplingCount { got: r.couplings.len(), expected });
        }
        Ok(r)
    }

    /// Redraw from the stored seed and parameters; equal to `self` bit for bit
    /// when the realization was produced by [`sample_disorder`].
    pub fn resample(&self) -> Result<Self, HamiltonianError> {
        let lattice = TorusLattice::new(self.size)?;
        sample_disorder(&lattice, self.j_mean, self.gamma, self.h, self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Single,
    Pair,
}

/// Real symmetric walker Hamiltonian in the vertex or pair basis.
#[derive(Debug, Clone)]
pub struct WalkerHamiltonian {
    sector: Sector,
    matrix: Mat<f64>,
}

impl WalkerHamiltonian {
    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }
}

fn check_size(d: &DisorderRealization, lattice: &TorusLattice) -> Result<(), HamiltonianError> {
    if d.size != lattice.size() {
        return Err(HamiltonianError::SizeMismatch { realization: d.size, basis: lattice.size() });
    }
    if d.couplings.len() != lattice.num_vertices() {
        return Err(HamiltonianError::CouplingCount {
            got: d.couplings.len(),
            expected: lattice.num_vertices(),
        });
    }
    Ok(())
}

pub fn build_single(d: &DisorderRealization) -> Result<WalkerHamiltonian, HamiltonianError> {
    let lattice = TorusLattice::new(d.size)?;
    check_size(d, &lattice)?;
    let n = lattice.num_vertices();
    let mut matrix = Mat::<f64>::zeros(n, n);
    for v in 0..n {
        matrix[(v, v)] = d.couplings[v];
        for u in lattice.neighbors(v) {
            matrix[(v, u)] = d.h;
        }
    }
    Ok(WalkerHamiltonian { sector: Sector::Single, matrix })
}

pub fn build_two_walker(
    basis: &PairBasis,
    d: &DisorderRealization,
) -> Result<WalkerHamiltonian, HamiltonianError> {
    let lattice = basis.lattice();
    if lattice.size() < 3 {
        return Err(HamiltonianError::LatticeTooSmall(lattice.size()));
    }
    check_size(d, lattice)?;
    let dim = basis.dimension();
    let mut matrix = Mat::<f64>::zeros(dim, dim);
    for (i, &pair) in basis.pairs().iter().enumerate() {
        let (a, b) = (pair.first(), pair.second());
        matrix[(i, i)] = d.couplings[a] + d.couplings[b];
        for (mover, partner) in [(a, b), (b, a)] {
            for target in lattice.neighbors(mover) {
                if target == partner {
                    continue;
                }
                let j = basis.index(Pair::new(target, partner)?)?;
                matrix[(i, j)] = d.h;
            }
        }
    }
    Ok(WalkerHamiltonian { sector: Sector::Pair, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lat(l: usize) -> TorusLattice {
        TorusLattice::new(l).unwrap()
    }

    #[test]
    fn clean_disorder_is_uniform() {
        let d = sample_disorder(&lat(4), 2.5, 0.0, 1.0, 9).unwrap();
        assert!(d.couplings().iter().all(|&j| j == 2.5));
    }

    #[test]
    fn couplings_stay_in_support() {
        for seed in 0..20 {
            let d = sample_disorder(&lat(6), 1.0, 3.0, 1.0, seed).unwrap();
            for &j in d.couplings() {
                assert!((-0.5..=2.5).contains(&j));
            }
        }
    }

    #[test]
    fn empirical_mean_within_three_sigma() {
        // 10^4 draws (L = 100); std of the mean is gamma / sqrt(12 * 10^4)
        let gamma = 4.0;
        let d = sample_disorder(&lat(100), 1.0, gamma, 1.0, 2024).unwrap();
        let mean = d.couplings().iter().sum::<f64>() / 1e4;
        assert!((mean - 1.0).abs() < 3.0 * gamma / (2.0 * 1e2));
        assert!((mean - 1.0).abs() < 3.0 * gamma / (12f64.sqrt() * 1e2));
    }

    #[test]
    fn rejects_bad_parameters() {
        let l = lat(3);
        assert!(matches!(sample_disorder(&l, 0.0, -1.0, 1.0, 0), Err(HamiltonianError::InvalidGamma(_))));
        assert!(matches!(sample_disorder(&l, 0.0, 1.0, 0.0, 0), Err(HamiltonianError::InvalidField(_))));
        assert!(matches!(sample_disorder(&l, 0.0, 1.0, -2.0, 0), Err(HamiltonianError::InvalidField(_))));
    }

    #[test]
    fn realization_json_round_trip_and_resample() {
        let d = sample_disorder(&lat(5), 0.3, 7.0, 0.5, 77).unwrap();
        let json = d.to_json();
        for key in ["\"L\"", "\"J\"", "\"gamma\"", "\"h\"", "\"seed\"", "\"J_v\""] {
            assert!(json.contains(key), "missing {key}");
        }
        let back = DisorderRealization::from_json(&json).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.resample().unwrap(), d);
        let bad = json.replace("\"L\": 5", "\"L\": 6");
        assert!(DisorderRealization::from_json(&bad).is_err());
    }

    #[test]
    fn single_walker_structure() {
        let d = sample_disorder(&lat(4), 0.0, 5.0, 0.7, 3).unwrap();
        let h = build_single(&d).unwrap();
        let l = lat(4);
        for i in 0..16 {
            assert_eq!(h.get(i, i), d.couplings()[i]);
            let mut off = 0.0;
            for j in 0..16 {
                assert_eq!(h.get(i, j), h.get(j, i));
                if i != j {
                    let expect = if l.are_neighbors(i, j) { 0.7 } else { 0.0 };
                    assert_eq!(h.get(i, j), expect);
                    off += h.get(i, j).abs();
                }
            }
            assert!((off - 4.0 * 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn clean_single_walker_is_cosine_band() {
        let d = sample_disorder(&lat(3), 1.3, 0.0, 0.4, 0).unwrap();
        let h = build_single(&d).unwrap();
        let mut got: Vec<f64> = h.matrix().self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        got.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = (0..3)
            .flat_map(|kx| (0..3).map(move |ky| (kx, ky)))
            .map(|(kx, ky)| {
                1.3 + 2.0 * 0.4 * ((2.0 * PI * kx as f64 / 3.0).cos() + (2.0 * PI * ky as f64 / 3.0).cos())
            })
            .collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10 * w.abs().max(1.0));
        }
    }

    #[test]
    fn two_walker_structure_matches_hop_scan() {
        let basis = PairBasis::new(lat(3));
        let l = basis.lattice();
        let d = sample_disorder(l, 0.0, 2.0, 1.0, 11).unwrap();
        let h = build_two_walker(&basis, &d).unwrap();
        assert_eq!(h.dimension(), 36);
        // independent oracle: two pairs are connected iff they share exactly
        // one vertex and the other two vertices are neighbours
        let mut expected_nonzero = 0;
        let mut nonzero = 0;
        for (i, &a) in basis.pairs().iter().enumerate() {
            assert_eq!(h.get(i, i), d.couplings()[a.first()] + d.couplings()[a.second()]);
            for (j, &b) in basis.pairs().iter().enumerate() {
                assert_eq!(h.get(i, j), h.get(j, i));
                if i == j {
                    continue;
                }
                let shared: Vec<_> = [a.first(), a.second()].into_iter().filter(|&v| b.contains(v)).collect();
                let hop = shared.len() == 1 && {
                    let s = shared[0];
                    let from = if a.first() == s { a.second() } else { a.first() };
                    let to = if b.first() == s { b.second() } else { b.first() };
                    l.are_neighbors(from, to)
                };
                if hop {
                    expected_nonzero += 1;
                    assert_eq!(h.get(i, j), 1.0);
                }
                if h.get(i, j) != 0.0 {
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, expected_nonzero);
    }

    #[test]
    fn adjacent_pair_has_six_hops() {
        let basis = PairBasis::new(lat(4));
        let l = basis.lattice();
        let d = sample_disorder(l, 0.0, 1.0, 1.0, 5).unwrap();
        let h = build_two_walker(&basis, &d).unwrap();
        let adjacent = Pair::new(l.vertex_index(0, 0).unwrap(), l.vertex_index(1, 0).unwrap()).unwrap();
        let apart = Pair::new(l.vertex_index(0, 0).unwrap(), l.vertex_index(2, 2).unwrap()).unwrap();
        let count = |p| {
            let i = basis.index(p).unwrap();
            (0..basis.dimension()).filter(|&j| j != i && h.get(i, j) != 0.0).count()
        };
        assert_eq!(count(adjacent), 6);
        assert_eq!(count(apart), 8);
    }

    #[test]
    fn two_walker_rejects_small_lattice() {
        let basis = PairBasis::new(lat(2));
        let d = sample_disorder(basis.lattice(), 0.0, 1.0, 1.0, 0).unwrap();
        assert!(matches!(build_two_walker(&basis, &d), Err(HamiltonianError::LatticeTooSmall(2))));
        let other = sample_disorder(&lat(4), 0.0, 1.0, 1.0, 0).unwrap();
        let basis3 = PairBasis::new(lat(3));
        assert!(matches!(build_two_walker(&basis3, &other), Err(HamiltonianError::SizeMismatch { .. })));
    }
}
