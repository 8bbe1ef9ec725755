use num_complex::Complex64;
use toric_localization::dynamics::{evolve_probability, mean_square_distance};
use toric_localization::spectra::diagonalize;
use toric_localization::*;

type CMat = Vec<Vec<Complex64>>;

fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// `exp(-i H t)` by scaling and squaring with a Taylor series.
fn expm_propagator(h: &WalkerHamiltonian, t: f64) -> CMat {
    let n = h.dimension();
    let norm = (0..n).map(|i| (0..n).map(|j| h.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max) * t.abs();
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let scale = t / 2f64.powi(squarings as i32);
    let a: CMat = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(0.0, -h.get(i, j) * scale)).collect())
        .collect();
    let mut result: CMat = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut term = result.clone();
    for k in 1..=30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

#[test]
fn spectral_evolution_matches_matrix_exponential() {
    let basis = PairBasis::new(TorusLattice::new(3).unwrap());
    let n = basis.dimension();
    for seed in 0..5u64 {
        let d = sample_disorder(basis.lattice(), 0.3, 4.0, 1.0, seed).unwrap();
        let h = build_two_walker(&basis, &d).unwrap();
        let eig = diagonalize(&h).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let u = expm_propagator(&h, t);
            for initial in [0, 7, n - 1] {
                let spectral: Vec<Complex64> = (0..n)
                    .map(|f| {
                        (0..n)
                            .map(|k| {
                                Complex64::from_polar(1.0, -eig.values()[k] * t)
                                    * (eig.component(f, k) * eig.component(initial, k))
                            })
                            .sum()
                    })
                    .collect();
                let probs = evolve_probability(&eig, initial, t).unwrap();
                for f in 0..n {
                    let direct = u[f][initial];
                    assert!((spectral[f] - direct).norm() < 1e-8, "seed {seed} t {t} f {f}");
                    assert!((probs[f] - direct.norm_sqr()).abs() < 1e-8);
                }
                assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                let column: f64 = (0..n).map(|f| u[f][initial].norm_sqr()).sum();
                assert!((column - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn clean_single_walker_spreads_ballistically() {
    let lattice = TorusLattice::new(15).unwrap();
    let d = sample_disorder(&lattice, 0.0, 0.0, 1.0, 0).unwrap();
    let eig = diagonalize(&build_single(&d).unwrap()).unwrap();
    let basis = VertexBasis::new(lattice);
    let start = 7 + 15 * 7;
    let times: Vec<f64> = (1..=12).map(|k| 0.25 * k as f64).collect();
    let rms: Vec<f64> = times
        .iter()
        .map(|&t| mean_square_distance(&evolve_probability(&eig, start, t).unwrap(), &basis, start).sqrt())
        .collect();

    let n = times.len() as f64;
    let (mt, mr) = (times.iter().sum::<f64>() / n, rms.iter().sum::<f64>() / n);
    let sxy: f64 = times.iter().zip(&rms).map(|(t, r)| (t - mt) * (r - mr)).sum();
    let sxx: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    let syy: f64 = rms.iter().map(|r| (r - mr).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    assert!(r2 > 0.99, "R² = {r2}");
    // on the infinite lattice <r²> = 4 h² t², so the slope is 2h
    let slope = sxy / sxx;
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}
