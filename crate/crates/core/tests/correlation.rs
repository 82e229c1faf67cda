mod common;

use common::*;
use qcorr::measure::correlation_tensor_inclusion_exclusion;
use qcorr::random::{random_product_state, random_pure_state};
use qcorr::state::catalog;
use qcorr::{
    connected_tensor, correlation_tensor, expectation, local_mean, raw_sum, DensityMatrix,
    QuditRegister, SiteOperator, State,
};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

fn random_mixed(seed: u64, reg: &QuditRegister) -> DensityMatrix {
    let mut r = rng(seed);
    let a = random_pure_state(&mut r, reg).unwrap().to_density();
    let b = random_pure_state(&mut r, reg).unwrap().to_density();
    DensityMatrix::mixture(&[(0.3, &a), (0.7, &b)]).unwrap()
}

#[test]
fn expectation_matches_full_matrix_oracle() {
    let reg = QuditRegister::qubits(4).unwrap();
    for seed in 0..6 {
        let psi = random_pure_state(&mut rng(seed), &reg).unwrap();
        let rho = psi.to_density();
        for sub in nonempty_subsets(4) {
            for g in 0..3 {
                let ops: Vec<(usize, usize)> = sub
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| (s, (g + k) % 3))
                    .collect();
                let site_ops: Vec<SiteOperator> =
                    ops.iter().map(|&(s, i)| SiteOperator::new(s, i)).collect();
                let want = naive_expectation(rho.matrix(), reg.dims(), &ops);
                assert!((expectation(&psi, &site_ops).unwrap() - want).abs() < 1e-10);
                assert!((expectation(&rho, &site_ops).unwrap() - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn correlation_tensor_matches_oracle_on_four_qubits() {
    let reg = QuditRegister::qubits(4).unwrap();
    for seed in 10..14 {
        let psi = random_pure_state(&mut rng(seed), &reg).unwrap();
        let mixed = random_mixed(seed + 100, &reg);
        let states = [State::from(psi.clone()), State::from(mixed)];
        for s in &states {
            let rho = s.to_density();
            for sub in nonempty_subsets(4) {
                let want = naive_correlation_tensor(rho.matrix(), reg.dims(), &sub);
                let got = correlation_tensor(s, &sub).unwrap();
                let dev = got
                    .data()
                    .iter()
                    .zip(&want)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-10, "subset {sub:?}: {dev}");
            }
        }
    }
}

#[test]
fn qutrit_qubit_register_matches_oracle() {
    let reg = QuditRegister::new(vec![3, 2, 3]).unwrap();
    let psi = random_pure_state(&mut rng(5), &reg).unwrap();
    let rho = psi.to_density();
    for sub in [vec![1, 2], vec![3, 1], vec![1, 2, 3]] {
        let want = naive_correlation_tensor(rho.matrix(), reg.dims(), &sub);
        let got = correlation_tensor(&psi, &sub).unwrap();
        assert_eq!(
            got.shape(),
            sub.iter()
                .map(|&s| reg.dim(s).pow(2) - 1)
                .collect::<Vec<_>>()
        );
        let dev = got
            .data()
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }
}

#[test]
fn both_tensor_routes_agree() {
    let reg = QuditRegister::new(vec![2, 2, 3, 2]).unwrap();
    for seed in 0..4 {
        let psi = random_pure_state(&mut rng(seed), &reg).unwrap();
        for sub in nonempty_subsets(4) {
            let a = correlation_tensor(&psi, &sub).unwrap();
            let b = correlation_tensor_inclusion_exclusion(&psi, &sub).unwrap();
            let dev = a
                .data()
                .iter()
                .zip(b.data())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12, "{sub:?}: {dev}");
        }
    }
}

#[test]
fn single_site_tensor_is_zero() {
    let reg = QuditRegister::new(vec![2, 3, 2]).unwrap();
    let psi = random_pure_state(&mut rng(3), &reg).unwrap();
    for site in 1..=3 {
        assert!(correlation_tensor(&psi, &[site]).unwrap().max_abs() < 1e-12);
    }
    let w = catalog::w(3).unwrap();
    assert!(correlation_tensor(&w, &[2]).unwrap().max_abs() < 1e-12);
}

#[test]
fn product_expectations_factorize() {
    let mut r = rng(21);
    let a = random_pure_state(&mut r, &QuditRegister::qubits(2).unwrap()).unwrap();
    let b = random_pure_state(&mut r, &QuditRegister::qubits(2).unwrap()).unwrap();
    let ab = a.tensor_product(&b).unwrap();
    for (i, j, k) in [(X, Y, Z), (Z, Z, X), (Y, X, Y)] {
        let joint = expectation(
            &ab,
            &[
                SiteOperator::new(1, i),
                SiteOperator::new(2, j),
                SiteOperator::new(4, k),
            ],
        )
        .unwrap();
        let left = expectation(&a, &[SiteOperator::new(1, i), SiteOperator::new(2, j)]).unwrap();
        let right = expectation(&b, &[SiteOperator::new(2, k)]).unwrap();
        assert!((joint - left * right).abs() < 1e-10);
    }
}

#[test]
fn small_expectation_examples() {
    let singlet = catalog::bell();
    let xx = expectation(
        &singlet,
        &[SiteOperator::new(1, X), SiteOperator::new(2, X)],
    )
    .unwrap();
    assert!((xx + 1.0).abs() < 1e-12);

    let w3 = catalog::w(3).unwrap();
    let rho_w = w3.to_density();
    let want = naive_expectation(rho_w.matrix(), &[2, 2, 2], &[(1, Z)]);
    assert!((want - 1.0 / 3.0).abs() < 1e-12);
    assert!((expectation(&w3, &[SiteOperator::new(1, Z)]).unwrap() - want).abs() < 1e-12);
    assert!((local_mean(&w3, 2, Z).unwrap() - 1.0 / 3.0).abs() < 1e-12);

    let ghz = catalog::ghz(3).unwrap();
    let zzz = [
        SiteOperator::new(1, Z),
        SiteOperator::new(2, Z),
        SiteOperator::new(3, Z),
    ];
    let want = naive_expectation(
        ghz.to_density().matrix(),
        &[2, 2, 2],
        &[(1, Z), (2, Z), (3, Z)],
    );
    assert!(want.abs() < 1e-12);
    assert!(expectation(&ghz, &zzz).unwrap().abs() < 1e-12);
    assert!(local_mean(&ghz, 1, Z).unwrap().abs() < 1e-12);

    let zero = qcorr::PureState::basis(QuditRegister::qubits(1).unwrap(), &[0]).unwrap();
    assert!((local_mean(&zero, 1, Z).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn expectation_rejects_bad_operators() {
    let ghz = catalog::ghz(3).unwrap();
    assert!(expectation(&ghz, &[SiteOperator::new(1, X), SiteOperator::new(1, Y)]).is_err());
    assert!(expectation(&ghz, &[SiteOperator::new(1, 3)]).is_err());
    assert!(expectation(&ghz, &[SiteOperator::new(4, 0)]).is_err());
}

#[test]
fn w3_marginal_matches_index_contraction() {
    let rho = catalog::w(3).unwrap().to_density();
    let got = rho.partial_trace(&[1, 2]).unwrap();
    let want = naive_partial_trace(rho.matrix(), &[2, 2, 2], &[1, 2]);
    assert!(max_abs_diff(got.matrix(), &want) < 1e-12);
    // (1/3)|00><00| + (2/3)|ψ+><ψ+|
    let third = 1.0 / 3.0;
    assert!((want[(0, 0)].re - third).abs() < 1e-12);
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        assert!((want[(a, b)].re - third).abs() < 1e-12);
    }
    assert!(want[(3, 3)].norm() < 1e-12);
}

#[test]
fn partial_trace_keeps_relative_order() {
    let reg = QuditRegister::new(vec![2, 3, 2]).unwrap();
    let rho = random_pure_state(&mut rng(8), &reg).unwrap().to_density();
    for keep in [vec![1, 3], vec![3, 1], vec![2], vec![1, 2, 3]] {
        let got = rho.partial_trace(&keep).unwrap();
        let want = naive_partial_trace(rho.matrix(), reg.dims(), &keep);
        assert!(max_abs_diff(got.matrix(), &want) < 1e-12, "{keep:?}");
    }
    let ghz = catalog::ghz(3)
        .unwrap()
        .to_density()
        .partial_trace(&[1, 2])
        .unwrap();
    assert!((ghz.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
    assert!((ghz.matrix()[(3, 3)].re - 0.5).abs() < 1e-12);
    assert!(ghz.matrix()[(0, 3)].norm() < 1e-12);
}

#[test]
fn w3_pair_correlations_from_marginal() {
    // Oracle: two-site correlations computed on the reduced matrix only.
    let w3 = catalog::w(3).unwrap();
    let rho = w3.to_density();
    let marginal = naive_partial_trace(rho.matrix(), &[2, 2, 2], &[1, 2]);
    let want = naive_correlation_tensor(&marginal, &[2, 2], &[1, 2]);
    let got = correlation_tensor(&w3, &[1, 2]).unwrap();
    for (a, b) in got.data().iter().zip(&want) {
        assert!((a - b).abs() < 1e-12);
    }
    let m = |i, j| got.get(&[i, j]).unwrap();
    assert!((m(X, X) - 2.0 / 3.0).abs() < 1e-12);
    assert!((m(Y, Y) - 2.0 / 3.0).abs() < 1e-12);
    assert!((m(Z, Z) + 4.0 / 9.0).abs() < 1e-12);
    for (i, j) in [(X, Y), (X, Z), (Y, X), (Y, Z), (Z, X), (Z, Y)] {
        assert!(m(i, j).abs() < 1e-12);
    }
    assert!((raw_sum(&w3, &[1, 2]).unwrap() - 88.0 / 81.0).abs() < 1e-12);
}

#[test]
fn singlet_correlations() {
    let t = correlation_tensor(&catalog::bell(), &[1, 2]).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { -1.0 } else { 0.0 };
            assert!((t.get(&[i, j]).unwrap() - want).abs() < 1e-12);
        }
    }
    assert!((raw_sum(&catalog::bell(), &[1, 2]).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn ghz_connected_entries() {
    let ghz3 = catalog::ghz(3).unwrap();
    let t = connected_tensor(&ghz3, &[1, 2, 3]).unwrap();
    assert!((t.get(&[X, X, X]).unwrap() - 1.0).abs() < 1e-12);
    for idx in [[X, Y, Y], [Y, X, Y], [Y, Y, X]] {
        assert!((t.get(&idx).unwrap() + 1.0).abs() < 1e-12);
    }
    assert!((t.squared_norm() - 4.0).abs() < 1e-12);

    // raw <ZZZZ> = 1 minus three pair-pair products of <ZZ> = 1
    let ghz4 = catalog::ghz(4).unwrap();
    let raw = correlation_tensor(&ghz4, &[1, 2, 3, 4]).unwrap();
    assert!((raw.get(&[Z, Z, Z, Z]).unwrap() - 1.0).abs() < 1e-12);
    let conn = connected_tensor(&ghz4, &[1, 2, 3, 4]).unwrap();
    assert!((conn.get(&[Z, Z, Z, Z]).unwrap() + 2.0).abs() < 1e-12);
}

#[test]
fn four_site_connected_tensor_by_hand() {
    // M' = M - M(12)M(34) - M(13)M(24) - M(14)M(23) for four sites.
    let reg = QuditRegister::qubits(4).unwrap();
    let psi = random_pure_state(&mut rng(44), &reg).unwrap();
    let full = correlation_tensor(&psi, &[1, 2, 3, 4]).unwrap();
    let pair = |a, b| correlation_tensor(&psi, &[a, b]).unwrap();
    let (m12, m34, m13, m24, m14, m23) = (
        pair(1, 2),
        pair(3, 4),
        pair(1, 3),
        pair(2, 4),
        pair(1, 4),
        pair(2, 3),
    );
    let conn = connected_tensor(&psi, &[1, 2, 3, 4]).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let g = |t: &qcorr::CorrelationTensor, a, b| t.get(&[a, b]).unwrap();
                    let want = full.get(&[i, j, k, l]).unwrap()
                        - g(&m12, i, j) * g(&m34, k, l)
                        - g(&m13, i, k) * g(&m24, j, l)
                        - g(&m14, i, l) * g(&m23, j, k);
                    assert!((conn.get(&[i, j, k, l]).unwrap() - want).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn product_cut_vanishes() {
    let bb = catalog::bell().tensor_product(&catalog::bell()).unwrap();
    assert!(connected_tensor(&bb, &[1, 2, 3, 4]).unwrap().max_abs() < 1e-12);

    let mut r = rng(77);
    let a = random_pure_state(&mut r, &QuditRegister::new(vec![2, 3]).unwrap()).unwrap();
    let b = random_pure_state(&mut r, &QuditRegister::qubits(2).unwrap()).unwrap();
    let ab = a.tensor_product(&b).unwrap();
    for sub in [
        vec![1, 3],
        vec![2, 4],
        vec![1, 2, 3],
        vec![2, 3, 4],
        vec![1, 2, 3, 4],
    ] {
        assert!(
            connected_tensor(&ab, &sub).unwrap().max_abs() < 1e-10,
            "{sub:?}"
        );
    }
}

#[test]
fn product_state_tensors_vanish() {
    let reg = QuditRegister::qubits(4).unwrap();
    let p = random_product_state(&mut rng(9), &reg).unwrap();
    for sub in nonempty_subsets(4) {
        assert!(correlation_tensor(&p, &sub).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn subset_errors() {
    let ghz = catalog::ghz(3).unwrap();
    assert!(correlation_tensor(&ghz, &[]).is_err());
    assert!(correlation_tensor(&ghz, &[1, 1]).is_err());
    assert!(correlation_tensor(&ghz, &[0, 1]).is_err());
    assert!(connected_tensor(&ghz, &[2, 5]).is_err());
    assert!(raw_sum(&ghz, &[1]).is_err());
}

#[test]
fn phi4_three_site_value() {
    // ⟨X₁X₂Z₃⟩ = 1 and all local means vanish, so the triple tensors are not
    // zero; the oracle pins the raw sum at 2 and B⁽³⁾ = 2/4.
    let phi4 = catalog::phi4();
    let rho = phi4.to_density();
    assert!(
        (naive_expectation(rho.matrix(), &[2; 4], &[(1, X), (2, X), (3, Z)]) - 1.0).abs() < 1e-12
    );
    for site in 1..=4 {
        for g in [X, Y, Z] {
            assert!(naive_expectation(rho.matrix(), &[2; 4], &[(site, g)]).abs() < 1e-12);
        }
    }
    for sub in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        let want: f64 = naive_correlation_tensor(rho.matrix(), &[2; 4], &sub)
            .iter()
            .map(|x| x * x)
            .sum();
        assert!((want - 2.0).abs() < 1e-12);
        let r = qcorr::measure_b(&phi4, &sub, None).unwrap();
        assert!((r.raw_sum - want).abs() < 1e-12);
        assert!((r.value - 0.5).abs() < 1e-12);
    }
}
