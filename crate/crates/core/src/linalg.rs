//! Small dense helpers shared by the state and measure code.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::register::QuditRegister;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Apply a `d x d` operator on `site` to every length-`total_dim` column
/// stored contiguously in `input`, writing into `out`.
pub(crate) fn apply_local_into(
    register: &QuditRegister,
    site: usize,
    op: &CMatrix,
    input: &[Complex64],
    out: &mut [Complex64],
) {
    let d = register.dim(site);
    let stride = register.stride(site);
    let block = d * stride;
    debug_assert_eq!(input.len(), out.len());
    debug_assert_eq!(input.len() % block, 0);
    for (src, dst) in input.chunks_exact(block).zip(out.chunks_exact_mut(block)) {
        for inner in 0..stride {
            for a in 0..d {
                let mut acc = ZERO;
                for b in 0..d {
                    let m = op[(a, b)];
                    if m != ZERO {
                        acc += m * src[b * stride + inner];
                    }
                }
                dst[a * stride + inner] = acc;
            }
        }
    }
}

pub(crate) fn apply_local(
    register: &QuditRegister,
    site: usize,
    op: &CMatrix,
    input: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![ZERO; input.len()];
    apply_local_into(register, site, op, input, &mut out);
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// descending. Columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(*values.last().expect("nonempty matrix"))
}

pub fn max_hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_application_matches_kron() {
        let reg = QuditRegister::new(vec![2, 3]).unwrap();
        let op = CMatrix::from_fn(3, 3, |r, c| {
            Complex64::new((r * 3 + c) as f64, r as f64 - c as f64)
        });
        let v: Vec<Complex64> = (0..6).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let full = kron(&CMatrix::identity(2, 2), &op);
        let expect = &full * nalgebra::DVector::from_vec(v.clone());
        let got = apply_local(&reg, 2, &op, &v);
        for k in 0..6 {
            assert!((got[k] - expect[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_sorted_descending() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.2, 0.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.1, 0.0),
        ]));
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!((vals[0] - 0.7).abs() < 1e-14 && (vals[2] - 0.1).abs() < 1e-14);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }
}
