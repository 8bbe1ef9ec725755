use proptest::prelude::*;
use toric_localization::dynamics::{displacement_profile, escape_probability, evolve_probability};
use toric_localization::spectra::{analyze, diagonalize, fit_localization_length, locate_peak};
use toric_localization::*;

fn spectrum(h: &WalkerHamiltonian) -> Vec<f64> {
    diagonalize(h).unwrap().values().to_vec()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Realization with couplings replaced, via the JSON form.
fn with_couplings(d: &DisorderRealization, couplings: &[f64], h: f64) -> DisorderRealization {
    let mut v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
    v["J_v"] = serde_json::json!(couplings);
    v["h"] = serde_json::json!(h);
    DisorderRealization::from_json(&v.to_string()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pair_distance_is_symmetric_and_vanishes_only_on_equal_pairs(
        size in 3usize..8, a in any::<u64>(), b in any::<u64>(),
    ) {
        let basis = PairBasis::new(TorusLattice::new(size).unwrap());
        let (i, j) = ((a % basis.dimension() as u64) as usize, (b % basis.dimension() as u64) as usize);
        let (p, q) = (basis.pair(i).unwrap(), basis.pair(j).unwrap());
        let lattice = basis.lattice();
        prop_assert_eq!(lattice.pair_distance(p, q), lattice.pair_distance(q, p));
        prop_assert_eq!(lattice.pair_distance(p, q) == 0.0, i == j);
        prop_assert!(lattice.pair_distance(p, q) <= basis.max_distance());
    }

    #[test]
    fn pair_indexing_round_trips(size in 2usize..9, k in any::<u64>()) {
        let basis = PairBasis::new(TorusLattice::new(size).unwrap());
        prop_assert_eq!(basis.dimension(), PairBasis::dimension_for(size));
        let i = (k % basis.dimension() as u64) as usize;
        let pair = basis.pair(i).unwrap();
        prop_assert!(pair.first() < pair.second());
        prop_assert_eq!(basis.index(pair).unwrap(), i);
    }

    #[test]
    fn offset_shifts_spectrum_and_keeps_lengths(seed in any::<u64>(), offset in -5.0f64..5.0) {
        let basis = PairBasis::new(TorusLattice::new(3).unwrap());
        let d = sample_disorder(basis.lattice(), 0.0, 20.0, 1.0, seed).unwrap();
        let shifted = d.with_offset(offset);
        let e0 = diagonalize(&build_two_walker(&basis, &d).unwrap()).unwrap();
        let e1 = diagonalize(&build_two_walker(&basis, &shifted).unwrap()).unwrap();
        let moved: Vec<f64> = e0.values().iter().map(|e| e + 2.0 * offset).collect();
        prop_assert!(close(&moved, e1.values(), 1e-9));
        let (r0, r1) = (analyze(&e0, &basis).unwrap(), analyze(&e1, &basis).unwrap());
        for (a, b) in r0.states.iter().zip(&r1.states) {
            match (a.length, b.length) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0)),
                (x, y) => prop_assert_eq!(x.is_some(), y.is_some()),
            }
        }
    }

    #[test]
    fn translating_the_disorder_keeps_the_spectrum(seed in any::<u64>(), dx in 0usize..4, dy in 0usize..4) {
        let lattice = TorusLattice::new(4).unwrap();
        let basis = PairBasis::new(lattice.clone());
        let d = sample_disorder(&lattice, 0.0, 6.0, 1.0, seed).unwrap();
        let moved: Vec<f64> = (0..16)
            .map(|v| {
                let (x, y) = lattice.coords(v);
                d.couplings()[lattice.vertex_index((x + dx) % 4, (y + dy) % 4).unwrap()]
            })
            .collect();
        let t = with_couplings(&d, &moved, d.h);
        prop_assert!(close(&spectrum(&build_single(&d).unwrap()), &spectrum(&build_single(&t).unwrap()), 1e-10));
        prop_assert!(close(
            &spectrum(&build_two_walker(&basis, &d).unwrap()),
            &spectrum(&build_two_walker(&basis, &t).unwrap()),
            1e-9
        ));
    }

    #[test]
    fn field_sign_is_a_gauge_choice_on_even_lattices(seed in any::<u64>()) {
        // (-1)^(x+y) per walker maps h to -h on a bipartite torus
        let lattice = TorusLattice::new(4).unwrap();
        let basis = PairBasis::new(lattice.clone());
        let d = sample_disorder(&lattice, 0.0, 3.0, 1.0, seed).unwrap();
        let flipped = with_couplings(&d, d.couplings(), -d.h);
        prop_assert!(close(&spectrum(&build_single(&d).unwrap()), &spectrum(&build_single(&flipped).unwrap()), 1e-10));
        prop_assert!(close(
            &spectrum(&build_two_walker(&basis, &d).unwrap()),
            &spectrum(&build_two_walker(&basis, &flipped).unwrap()),
            1e-9
        ));
    }

    #[test]
    fn global_sign_leaves_the_fit_unchanged(seed in any::<u64>(), k in 0usize..36) {
        let basis = PairBasis::new(TorusLattice::new(3).unwrap());
        let d = sample_disorder(basis.lattice(), 0.0, 30.0, 1.0, seed).unwrap();
        let eig = diagonalize(&build_two_walker(&basis, &d).unwrap()).unwrap();
        let v = eig.vector(k).to_vec();
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let (p, q) = (locate_peak(&v).unwrap(), locate_peak(&neg).unwrap());
        prop_assert_eq!(p, q);
        let (a, b) = (fit_localization_length(&v, p, &basis).unwrap(), fit_localization_length(&neg, q, &basis).unwrap());
        // NaN fields on unfitted states rule out PartialEq
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn profiles_conserve_mass(seed in any::<u64>(), t in 0.0f64..50.0, start in 0usize..36) {
        let basis = PairBasis::new(TorusLattice::new(3).unwrap());
        let d = sample_disorder(basis.lattice(), 0.0, 5.0, 1.0, seed).unwrap();
        let eig = diagonalize(&build_two_walker(&basis, &d).unwrap()).unwrap();
        let p = evolve_probability(&eig, start, t).unwrap();
        prop_assert!(p.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        let prof = displacement_profile(&eig, &basis, start, t).unwrap();
        prop_assert!((prof.total - 1.0).abs() < 1e-10);
        let mut last = 1.0 + 1e-12;
        for k in 1..12 {
            let e = escape_probability(&prof, 0.5 * k as f64).unwrap();
            prop_assert!(e <= last);
            last = e;
        }
    }
}

/// Every basis state of a fitted eigenstate within 3x of its own fitted line.
/// Fails on most states at L = 6, γ/h = 100: the far bins, where hop count
/// outruns Euclidean distance, steepen the least-squares slope and leave
/// mid-range amplitudes one to two orders above the line.
#[test]
#[ignore = "envelope fit is not an upper bound; most states exceed 3x"]
fn fitted_envelopes_bound_eigenstates_with_slack_three() {
    let basis = PairBasis::new(TorusLattice::new(6).unwrap());
    let (mut checked, mut violating, mut worst) = (0, 0, 0.0f64);
    for seed in 0..2u64 {
        let d = sample_disorder(basis.lattice(), 0.0, 100.0, 1.0, seed).unwrap();
        let eig = diagonalize(&build_two_walker(&basis, &d).unwrap()).unwrap();
        let report = analyze(&eig, &basis).unwrap();
        for (k, fit) in report.states.iter().enumerate() {
            let Some(l) = fit.length.filter(|_| fit.is_localized()) else { continue };
            let a = fit.intercept.exp();
            let ratio = eig
                .vector(k)
                .iter()
                .enumerate()
                .filter(|&(s, _)| basis.distance(s, fit.peak) >= 1.0)
                .map(|(s, amp)| amp.abs() / (a * (-basis.distance(s, fit.peak) / (2.0 * l)).exp()))
                .fold(0.0, f64::max);
            checked += 1;
            if ratio > 3.0 {
                violating += 1;
            }
            worst = worst.max(ratio);
        }
    }
    assert!(violating == 0, "{violating} of {checked} states exceed 3x their fitted envelope (worst {worst:.1}x)");
}
