mod common;

use common::*;
use qcorr::baselines::{concurrence, ppt_min_eigenvalue};
use qcorr::random::{random_product_state, random_pure_state};
use qcorr::state::catalog;
use qcorr::{measure_b, QuditRegister};
use rand::Rng;

fn pure_formula(c: f64) -> f64 {
    (2.0 * c * c + c.powi(4)) / 3.0
}

/// Schmidt state with concurrence `c`: `a|00> + b|11>`, `2ab = c`.
fn schmidt_with_concurrence(c: f64) -> qcorr::PureState {
    let a2 = (1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0;
    catalog::schmidt(a2.sqrt()).unwrap()
}

#[test]
fn pure_two_qubit_measure_is_function_of_concurrence() {
    let reg = QuditRegister::qubits(2).unwrap();
    let mut r = rng(2024);
    for _ in 0..200 {
        let psi = random_pure_state(&mut r, &reg).unwrap();
        let c = concurrence(&psi.to_density()).unwrap().value;
        // pure-state concurrence |<ψ|σy⊗σy|ψ*>| as an independent check
        let a = psi.amplitudes();
        let direct = (2.0 * (a[0] * a[3] - a[1] * a[2])).norm();
        assert!((c - direct).abs() < 1e-9);
        let b = measure_b(&psi, &[1, 2], None).unwrap().value;
        assert!((b - pure_formula(c)).abs() < 1e-9, "C = {c}: B = {b}");
    }
}

#[test]
fn measure_increases_with_concurrence() {
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&c| {
            measure_b(&schmidt_with_concurrence(c), &[1, 2], None)
                .unwrap()
                .value
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    // B equals C² only at the endpoints
    for (&c, &b) in grid.iter().zip(&values) {
        if c == 0.0 || c == 1.0 {
            assert!((b - c * c).abs() < 1e-12);
        } else {
            assert!((b - c * c).abs() > 1e-4, "C = {c}");
        }
    }
}

#[test]
fn concurrence_examples() {
    let c = concurrence(&catalog::bell().to_density()).unwrap();
    assert!((c.value - 1.0).abs() < 1e-12);
    assert!(c.roots.windows(2).all(|w| w[0] >= w[1]));

    let s = catalog::schmidt(0.9f64.sqrt()).unwrap();
    assert!((concurrence(&s.to_density()).unwrap().value - 0.6).abs() < 1e-12);

    // the eigenvalue route decides; it gives 2F - 1 above F = 1/2
    for k in 0..=20 {
        let f = k as f64 / 20.0;
        let c = concurrence(&catalog::werner(f).unwrap()).unwrap().value;
        assert!((c - (2.0 * f - 1.0).max(0.0)).abs() < 1e-10, "F = {f}: {c}");
        assert!((-1e-12..=1.0 + 1e-12).contains(&c));
    }
}

#[test]
fn concurrence_needs_two_qubits() {
    let rho = catalog::ghz(3).unwrap().to_density();
    assert!(concurrence(&rho).is_err());
    let qutrits = catalog::ghz_qudit(2, 3).unwrap().to_density();
    assert!(concurrence(&qutrits).is_err());
}

#[test]
fn ppt_examples() {
    let singlet = catalog::bell().to_density();
    assert!((ppt_min_eigenvalue(&singlet, &[2]).unwrap() + 0.5).abs() < 1e-12);
    assert!((ppt_min_eigenvalue(&singlet, &[1]).unwrap() + 0.5).abs() < 1e-12);

    let reg = QuditRegister::new(vec![2, 3]).unwrap();
    let p = random_product_state(&mut rng(1), &reg)
        .unwrap()
        .to_density();
    assert!(ppt_min_eigenvalue(&p, &[2]).unwrap() >= -1e-10);

    let w = catalog::werner(0.5).unwrap();
    assert!(ppt_min_eigenvalue(&w, &[2]).unwrap().abs() < 1e-10);
    assert!(ppt_min_eigenvalue(&catalog::werner(0.6).unwrap(), &[2]).unwrap() < -1e-3);

    assert!(ppt_min_eigenvalue(&singlet, &[]).is_err());
    assert!(ppt_min_eigenvalue(&singlet, &[1, 2]).is_err());
    assert!(ppt_min_eigenvalue(&singlet, &[3]).is_err());
}

#[test]
fn ppt_and_measure_agree_on_pure_states() {
    let reg = QuditRegister::qubits(2).unwrap();
    let mut r = rng(99);
    for _ in 0..100 {
        let psi = if r.random_bool(0.5) {
            random_pure_state(&mut r, &reg).unwrap()
        } else {
            random_product_state(&mut r, &reg).unwrap()
        };
        let b = measure_b(&psi, &[1, 2], None).unwrap().value;
        let neg = ppt_min_eigenvalue(&psi.to_density(), &[2]).unwrap();
        assert_eq!(b > 1e-8, neg < -1e-8, "B = {b}, min eig = {neg}");
    }
}
