//! Naive full-matrix oracles. Everything here materializes operators on the
//! whole register, which is slow but hard to get wrong.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcorr::generator_basis;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn generator(d: usize, i: usize) -> CMat {
    generator_basis(d).unwrap().generators()[i].clone()
}

/// `⊗_k ops[k]`, site 1 leftmost.
pub fn full_operator(ops: &[CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for op in ops {
        let (r1, c1) = out.shape();
        let (r2, c2) = op.shape();
        let mut next = CMat::zeros(r1 * r2, c1 * c2);
        for a in 0..r1 {
            for b in 0..c1 {
                for c in 0..r2 {
                    for d in 0..c2 {
                        next[(a * r2 + c, b * c2 + d)] = out[(a, b)] * op[(c, d)];
                    }
                }
            }
        }
        out = next;
    }
    out
}

pub fn trace_against(rho: &CMat, op: &CMat) -> Complex64 {
    let n = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            acc += rho[(a, b)] * op[(b, a)];
        }
    }
    acc
}

/// `tr(ρ ⊗_α σ_{i_α})` with identities on unlisted sites.
pub fn naive_expectation(rho: &CMat, dims: &[usize], ops: &[(usize, usize)]) -> f64 {
    let factors: Vec<CMat> = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| match ops.iter().find(|(s, _)| *s == k + 1) {
            Some(&(_, g)) => generator(d, g),
            None => identity(d),
        })
        .collect();
    trace_against(rho, &full_operator(&factors)).re
}

/// Every entry of the mean-shifted correlation tensor, in row-major index
/// order over `subset`.
pub fn naive_correlation_tensor(rho: &CMat, dims: &[usize], subset: &[usize]) -> Vec<f64> {
    let sizes: Vec<usize> = subset
        .iter()
        .map(|&s| dims[s - 1] * dims[s - 1] - 1)
        .collect();
    let total: usize = sizes.iter().product();
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = vec![0; subset.len()];
        let mut rem = flat;
        for k in (0..subset.len()).rev() {
            idx[k] = rem % sizes[k];
            rem /= sizes[k];
        }
        let factors: Vec<CMat> = dims
            .iter()
            .enumerate()
            .map(|(k, &d)| match subset.iter().position(|&s| s == k + 1) {
                Some(p) => {
                    let g = generator(d, idx[p]);
                    let lambda = naive_expectation(rho, dims, &[(k + 1, idx[p])]);
                    g - identity(d) * Complex64::new(lambda, 0.0)
                }
                None => identity(d),
            })
            .collect();
        out.push(trace_against(rho, &full_operator(&factors)).re);
    }
    out
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Reduced matrix on `keep` (kept in their original order) by summing over
/// matching traced-out digits.
pub fn naive_partial_trace(rho: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let kept_dims: Vec<usize> = keep.iter().map(|&s| dims[s - 1]).collect();
    let side: usize = kept_dims.iter().product();
    let mut out = CMat::zeros(side, side);
    let n = rho.nrows();
    let reduce = |dg: &[usize]| keep.iter().fold(0, |acc, &s| acc * dims[s - 1] + dg[s - 1]);
    for a in 0..n {
        let da = digits(a, dims);
        for b in 0..n {
            let db = digits(b, dims);
            let traced_equal = (1..=dims.len())
                .filter(|s| !keep.contains(s))
                .all(|s| da[s - 1] == db[s - 1]);
            if traced_equal {
                out[(reduce(&da), reduce(&db))] += rho[(a, b)];
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// All subsets of `1..=n` of size at least one.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|m| (1..=n).filter(|s| m & (1 << (s - 1)) != 0).collect())
        .collect()
}
