mod common;

use common::*;
use gaussclone::cloner::{run_averaged, ClonerConfig};
use gaussclone::fidelity::{
    ancilla_cov, ancilla_fidelities, enhancement, gaussian_fidelity, maximize_fidelity_numeric,
    optimal_ancilla_squeezing, symmetric_cloning_fidelity,
};
use gaussclone::gaussian::{GaussianMeasurement, GaussianState};
use gaussclone::Error;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use proptest::prelude::*;

fn half() -> Matrix2<f64> {
    Matrix2::identity() * 0.5
}

fn het(eta: f64) -> Matrix2<f64> {
    *GaussianMeasurement::heterodyne(eta).unwrap().cov()
}

fn r_grid(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) / 0.05).round() as usize;
    (0..=n).map(|k| lo + k as f64 * 0.05).collect()
}

#[test]
fn fidelity_examples() {
    let a = GaussianState::coherent(Complex64::new(0.4, 1.2));
    assert!((gaussian_fidelity(&a, &a).unwrap().fidelity - 1.0).abs() < 1e-12);
    let alpha = Complex64::new(-0.7, 0.9);
    let f = gaussian_fidelity(&GaussianState::vacuum(), &GaussianState::coherent(alpha)).unwrap();
    assert!((f.fidelity - (-alpha.norm_sqr()).exp()).abs() < 1e-14);
    let sq = GaussianState::squeezed_coherent(alpha, 0.6).unwrap();
    let thermal = GaussianState::squeezed_thermal(0.8, 0.1).unwrap();
    assert_eq!(gaussian_fidelity(&sq, &thermal).unwrap().delta, 0.0);
    let two = GaussianState::vacuum().tensor(&GaussianState::vacuum());
    assert!(matches!(
        gaussian_fidelity(&two, &a),
        Err(Error::Dimension { .. })
    ));
}

#[test]
fn cloning_fidelity_examples() {
    assert!(
        (symmetric_cloning_fidelity(&half(), &half(), &half()).unwrap() - 2.0 / 3.0).abs() < 1e-15
    );
    for r in [0.0, 0.3, 0.6, 1.0] {
        let f = symmetric_cloning_fidelity(&ancilla_cov(0.0, r), &half(), &half()).unwrap();
        assert!((f - 1.0 / (1.25 + (2.0 * r).cosh()).sqrt()).abs() < 1e-12);
    }
    let bad = Matrix2::identity() * 0.1;
    assert!(symmetric_cloning_fidelity(&bad, &half(), &half()).is_err());
}

#[test]
fn optimal_squeezing_examples() {
    for eta in [0.2, 0.5, 1.0] {
        assert_eq!(optimal_ancilla_squeezing(&half(), &het(eta)).unwrap(), 0.0);
    }
    for r in [-0.8f64, 0.3, 1.2] {
        let e = (2.0 * r).exp();
        let expected = 0.25 * ((2.0 * e + 0.5) / (2.0 / e + 0.5)).ln();
        assert!(
            (optimal_ancilla_squeezing(&ancilla_cov(0.0, r), &half()).unwrap() - expected).abs()
                < 1e-14
        );
    }
    let rotated = rotated_cov(0.0, 0.5, 0.3);
    assert!(matches!(
        optimal_ancilla_squeezing(&rotated, &half()),
        Err(Error::Shape(_))
    ));
}

#[test]
fn numeric_maximizer_agrees_for_pure_inputs() {
    for r in [-1.0, -0.4, 0.0, 0.2, 0.9, 1.5] {
        for eta in [0.5, 0.75, 1.0] {
            let sk = ancilla_cov(0.0, r);
            let sm = het(eta);
            let opt = maximize_fidelity_numeric(&sk, &sm).unwrap();
            let s_bar = optimal_ancilla_squeezing(&sk, &sm).unwrap();
            assert!((opt.s_star - s_bar).abs() < 1e-4, "r={r} eta={eta}");
            assert!(opt.f_star >= symmetric_cloning_fidelity(&sk, &half(), &sm).unwrap() - 1e-12);
            assert_eq!(opt.best_thermal_photons, 0.0);
            assert!(opt.thermal_scan.windows(2).all(|w| w[1].1 < w[0].1));
        }
    }
}

#[test]
fn closed_form_squeezing_is_off_for_mixed_anisotropic_inputs() {
    // the mixedness term moves the optimum once the input is neither pure nor isotropic
    let sk = ancilla_cov(1.0, 0.8);
    let sm = het(1.0);
    let opt = maximize_fidelity_numeric(&sk, &sm).unwrap();
    assert!((opt.s_star - optimal_ancilla_squeezing(&sk, &sm).unwrap()).abs() > 1e-3);
}

#[test]
fn optimal_ancilla_dominates_vacuum() {
    for r in r_grid(-1.5, 1.5) {
        for eta in [0.5, 0.75, 1.0] {
            let pair = ancilla_fidelities(&ancilla_cov(0.0, r), &het(eta)).unwrap();
            if r.abs() < 1e-12 {
                assert!((pair.optimal - pair.vacuum).abs() < 1e-15);
            } else {
                assert!(pair.optimal > pair.vacuum, "r={r} eta={eta}");
            }
        }
    }
}

#[test]
fn fidelities_drop_with_efficiency() {
    for r in r_grid(0.05, 1.5) {
        for sign in [-1.0, 1.0] {
            let sk = ancilla_cov(0.0, sign * r);
            let f: Vec<_> = [1.0, 0.75, 0.5]
                .iter()
                .map(|&e| ancilla_fidelities(&sk, &het(e)).unwrap())
                .collect();
            for w in f.windows(2) {
                assert!(w[1].optimal < w[0].optimal);
                assert!(w[1].vacuum < w[0].vacuum);
            }
        }
    }
}

#[test]
fn enhancement_properties() {
    for eta in [0.5, 0.75, 1.0] {
        assert_eq!(enhancement(0.0, eta).unwrap(), 0.0);
    }
    for r in r_grid(0.05, 1.5) {
        let g: Vec<f64> = [1.0, 0.75, 0.5]
            .iter()
            .map(|&e| enhancement(r, e).unwrap())
            .collect();
        assert!(g.iter().all(|&v| v > 0.0), "r={r}");
        assert!(g[0] >= g[1] && g[1] >= g[2], "r={r}: {g:?}");
    }
    assert!(matches!(enhancement(3.5, 1.0), Err(Error::Range { .. })));
    assert!(matches!(enhancement(0.5, 0.0), Err(Error::Range { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in state_strategy(), b in state_strategy()) {
        let ab = gaussian_fidelity(&a, &b).unwrap();
        let ba = gaussian_fidelity(&b, &a).unwrap();
        prop_assert!((ab.fidelity - ba.fidelity).abs() < 1e-12);
        prop_assert!(ab.fidelity >= 0.0 && ab.fidelity <= 1.0 + 1e-12);
        prop_assert!(ab.delta >= 0.0);
    }

    #[test]
    fn cloning_fidelity_ignores_displacement(cov in cov_strategy(), cov3 in cov_strategy(), eta in 0.1..=1.0f64, x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let rho = state(Vector2::new(x, y), cov);
        let cfg = ClonerConfig::symmetric(1.0, eta).unwrap().with_ancilla(state(Vector2::zeros(), cov3)).unwrap();
        let out = run_averaged(&rho, &GaussianState::vacuum(), &cfg).unwrap();
        prop_assert!((out.clone1.mode_mean(0) - rho.mode_mean(0)).amax() < 1e-12);
        let direct = gaussian_fidelity(&rho, &out.clone1).unwrap().fidelity;
        let formula = symmetric_cloning_fidelity(&cov, &cov3, &het(eta)).unwrap();
        prop_assert!((direct - formula).abs() < 1e-12);
    }
}
