use std::f64::consts::SQRT_2;

use gaussclone::comm::{
    average_error_probability, error_curve, error_prob_given_z, homodyne_x_marginal,
    HomodyneDetector, Method, Protocol,
};
use gaussclone::gaussian::GaussianState;
use gaussclone::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;

const EFFICIENCIES: [f64; 3] = [1.0, 0.75, 0.5];
const AMPLITUDES: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// `erf` from the positive-term series `2/√π e^{−x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!`,
/// kept separate from the library's normal CDF.
fn erf(x: f64) -> f64 {
    let (mut term, mut sum, mut n) = (x, x, 0.0);
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

fn erfc(x: f64) -> f64 {
    1.0 - erf(x)
}

fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Independent reduction: the x record of each clone is `±Re z` plus noise of
/// variance `½ + (1−ε)/(4ε)`, and `Re z ~ N(√2 α, 1/(2η))`.
fn closed_form(alpha: f64, eta: f64, eps: f64) -> f64 {
    let s2 = 0.5 + (1.0 - eps) / (4.0 * eps);
    phi(-SQRT_2 * alpha / (s2 + 0.5 / eta).sqrt())
}

fn quad(alpha: f64, eta: f64, eps: f64) -> f64 {
    average_error_probability(alpha, eta, eps, Method::Quadrature, 40, None)
        .unwrap()
        .value
}

#[test]
fn reduction_matches_erfc_at_unit_efficiency() {
    for alpha in [0.0, 0.3, 1.0, 2.5] {
        assert!((closed_form(alpha, 1.0, 1.0) - 0.5 * erfc(alpha)).abs() < 1e-15);
    }
    assert!((0.5 * erfc(1.0) - 0.078_649_603_525_142_57).abs() < 1e-16);
}

#[test]
fn quadrature_matches_reduction() {
    for &alpha in &AMPLITUDES {
        for &eta in &EFFICIENCIES {
            for &eps in &EFFICIENCIES {
                let est = average_error_probability(alpha, eta, eps, Method::Quadrature, 40, None)
                    .unwrap();
                let exact = closed_form(alpha, eta, eps);
                assert!(
                    (est.value - exact).abs() < 1e-8,
                    "α={alpha} η={eta} ε={eps}"
                );
                assert!(est.abs_error <= 1e-6);
                assert_eq!(est.method, Method::Quadrature);
            }
        }
    }
}

#[test]
fn zero_amplitude_is_a_coin_flip() {
    for &eta in &EFFICIENCIES {
        for &eps in &EFFICIENCIES {
            assert!((quad(0.0, eta, eps) - 0.5).abs() < 1e-12);
            let mc = average_error_probability(0.0, eta, eps, Method::MonteCarlo, 2000, Some(3))
                .unwrap();
            assert!((mc.value - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn quadrature_and_monte_carlo_agree() {
    for &alpha in &AMPLITUDES {
        for &eta in &EFFICIENCIES {
            for &eps in &EFFICIENCIES {
                let q = average_error_probability(alpha, eta, eps, Method::Quadrature, 40, None)
                    .unwrap();
                let mc = average_error_probability(
                    alpha,
                    eta,
                    eps,
                    Method::MonteCarlo,
                    20_000,
                    Some(17),
                )
                .unwrap();
                let tol = 3.0 * (q.abs_error + mc.abs_error) + 1e-12;
                assert!(
                    (q.value - mc.value).abs() <= tol,
                    "α={alpha} η={eta} ε={eps}: {} vs {}",
                    q.value,
                    mc.value
                );
            }
        }
    }
}

#[test]
fn curves_fall_with_amplitude() {
    let alphas: Vec<f64> = (0..=30).map(|k| k as f64 * 0.1).collect();
    for &eta in &EFFICIENCIES {
        for &eps in &EFFICIENCIES {
            let curve = error_curve(&alphas, eta, eps, Method::Quadrature, 40, None).unwrap();
            assert!(curve.iter().all(|p| (0.0..=0.5 + 1e-12).contains(&p.h_e)));
            for w in curve.windows(2) {
                assert!(
                    w[1].h_e < w[0].h_e + 3.0 * (w[0].abs_error + w[1].abs_error),
                    "η={eta} ε={eps}"
                );
            }
        }
    }
}

#[test]
fn perfect_detectors_give_the_lowest_curves() {
    for alpha in [0.5, 1.0, 2.0] {
        let heterodyne: Vec<f64> = EFFICIENCIES
            .iter()
            .map(|&eta| quad(alpha, eta, 1.0))
            .collect();
        assert!(heterodyne[0] < heterodyne[1] && heterodyne[0] < heterodyne[2]);
        let homodyne: Vec<f64> = EFFICIENCIES
            .iter()
            .map(|&eps| quad(alpha, 0.75, eps))
            .collect();
        assert!(homodyne[0] < homodyne[1] && homodyne[0] < homodyne[2]);
    }
}

#[test]
fn zero_threshold_is_optimal() {
    for (alpha, eta, eps) in [(0.5, 1.0, 1.0), (1.0, 0.75, 0.5), (1.5, 0.5, 0.75)] {
        let at = |x: f64| {
            Protocol::new(alpha, eta, HomodyneDetector::new(eps, x).unwrap())
                .unwrap()
                .average_error(Method::Quadrature, 40, 0)
                .unwrap()
                .value
        };
        let centre = at(0.0);
        assert!(at(0.1) >= centre - 1e-12);
        assert!(at(-0.1) >= centre - 1e-12);
    }
}

#[test]
fn single_shot_error_depends_on_outcome() {
    let protocol = Protocol::new(1.0, 0.75, HomodyneDetector::new(0.75, 0.0).unwrap()).unwrap();
    let values: Vec<f64> = [-1.0, 0.0, 0.5, 1.0, 2.0]
        .iter()
        .map(|&x| protocol.error_at(Complex64::new(x, 0.3)).unwrap())
        .collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread > 0.1, "{values:?}");
    assert!((values[1] - 0.5).abs() < 1e-15);
}

#[test]
fn per_outcome_error_examples() {
    let plus = GaussianState::from_moments(&[0.8, 0.0], DMatrix::identity(2, 2) * 0.6).unwrap();
    let minus = GaussianState::from_moments(&[-0.8, 0.0], DMatrix::identity(2, 2) * 0.6).unwrap();
    let det = HomodyneDetector::new(0.5, 0.0).unwrap();
    let s = (0.6f64 + 0.25).sqrt();
    assert!((error_prob_given_z(&plus, &minus, &det).unwrap() - phi(-0.8 / s)).abs() < 1e-15);
    for x in [-0.2, 0.2] {
        let shifted = HomodyneDetector::new(0.5, x).unwrap();
        assert!(error_prob_given_z(&plus, &minus, &shifted).unwrap() > phi(-0.8 / s));
    }
    let (mu, var) = homodyne_x_marginal(&GaussianState::vacuum(), 0.5).unwrap();
    assert_eq!((mu, var), (0.0, 0.75));
}

#[test]
fn budgets_and_ranges() {
    let low_order = average_error_probability(1.0, 1.0, 1.0, Method::Quadrature, 10, None);
    assert!(matches!(low_order, Err(Error::Budget(_))));
    let few_samples = average_error_probability(1.0, 1.0, 1.0, Method::MonteCarlo, 100, None);
    assert!(matches!(few_samples, Err(Error::Budget(_))));
    assert!(matches!(
        average_error_probability(-1.0, 1.0, 1.0, Method::Quadrature, 40, None),
        Err(Error::Range { .. })
    ));
    assert!(matches!(
        average_error_probability(1.0, 1.0, 0.0, Method::Quadrature, 40, None),
        Err(Error::Range { .. })
    ));
    assert!(matches!(
        error_curve(&[0.5, 0.1], 1.0, 1.0, Method::Quadrature, 40, None),
        Err(Error::Shape(_))
    ));
}

#[test]
fn monte_carlo_is_reproducible() {
    let run = |seed| {
        average_error_probability(0.7, 0.75, 0.5, Method::MonteCarlo, 5000, Some(seed)).unwrap()
    };
    assert_eq!(run(9), run(9));
    assert_ne!(run(9).value, run(10).value);
    let curve = |seed| {
        error_curve(
            &[0.2, 0.4, 0.6],
            0.8,
            0.9,
            Method::MonteCarlo,
            4000,
            Some(seed),
        )
        .unwrap()
    };
    assert_eq!(curve(1), curve(1));
}
