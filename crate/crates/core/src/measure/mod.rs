//! Correlation tensors of mean-shifted generators, their connected
//! (cumulant) parts, and the normalized measure built from them.
//!
//! For a site subset `S`, the correlation tensor is
//! `M_{i…}(S) = ⟨⊗_{α∈S} (g_{i_α}(α) − λ_{i_α}(α))⟩` with `λ` the local
//! means. The connected tensor subtracts, for every partition of `S` into
//! at least two blocks of size at least two, the product of the connected
//! tensors of the blocks. The measure is `Σ M'² / 𝒩(|S|)`.

mod normalization;
mod partition;
mod tensor;

pub use normalization::{calibrate_normalization, calibration, Calibration};
pub use partition::{enumerate_partitions_min2, Partition};
pub use tensor::CorrelationTensor;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{self, generator_basis, QuantumState, SiteOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use tensor::{flat_index, unflatten};

/// Default cap on the subset size `m`; dense tensors have `(d²−1)^m` entries.
pub const DEFAULT_MAX_ORDER: usize = 8;

/// Knobs for [`measure_b_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    /// Explicit `𝒩`; `None` uses GHZ calibration.
    pub normalization: Option<f64>,
    pub max_order: usize,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            normalization: None,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

/// Value of the measure on one subset together with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub subset: Vec<usize>,
    pub raw_sum: f64,
    pub normalization: f64,
    pub value: f64,
}

fn check_order(subset: &[usize], max_order: usize) -> Result<()> {
    if subset.len() > max_order {
        return Err(Error::InvalidSubset(format!(
            "subset of {} sites exceeds the order cap {max_order}",
            subset.len()
        )));
    }
    Ok(())
}

/// `g_i − λ_i I` for every generator of `site`.
fn shifted_generators<S: QuantumState + ?Sized>(
    state: &S,
    site: usize,
    scratch: &mut [Complex64],
) -> Result<Vec<CMatrix>> {
    let d = state.register().dim(site);
    let basis = generator_basis(d)?;
    let mut out = Vec::with_capacity(basis.len());
    for g in basis.generators() {
        linalg::apply_local_into(state.register(), site, g, state.columns(), scratch);
        let lam = basis::real_part(state.close(scratch), "local mean")?;
        let mut shifted = g.clone();
        for k in 0..d {
            shifted[(k, k)] -= lam;
        }
        out.push(shifted);
    }
    Ok(out)
}

/// Raw correlation tensor `M(S)` by direct contraction of the shifted
/// operators, sharing partial contractions across index prefixes.
pub fn correlation_tensor<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
) -> Result<CorrelationTensor> {
    state.register().check_subset(subset)?;
    let mut scratch = vec![vec![ZERO; state.columns().len()]; subset.len()];
    let ops = subset
        .iter()
        .map(|&s| shifted_generators(state, s, &mut scratch[0]))
        .collect::<Result<Vec<_>>>()?;
    let shape: Vec<usize> = ops.iter().map(Vec::len).collect();
    let mut data = Vec::with_capacity(shape.iter().product());
    descend(
        state,
        subset,
        &ops,
        state.columns(),
        &mut scratch,
        &mut data,
    )?;
    CorrelationTensor::from_parts(subset.to_vec(), shape, data)
}

fn descend<S: QuantumState + ?Sized>(
    state: &S,
    sites: &[usize],
    ops: &[Vec<CMatrix>],
    input: &[Complex64],
    scratch: &mut [Vec<Complex64>],
    out: &mut Vec<f64>,
) -> Result<()> {
    let Some(((&site, rest_sites), (site_ops, rest_ops))) =
        sites.split_first().zip(ops.split_first())
    else {
        out.push(basis::real_part(state.close(input), "correlation")?);
        return Ok(());
    };
    let (buf, rest_scratch) = scratch.split_first_mut().expect("one buffer per site");
    for op in site_ops {
        linalg::apply_local_into(state.register(), site, op, input, buf);
        descend(state, rest_sites, rest_ops, buf, rest_scratch, out)?;
    }
    Ok(())
}

/// Second route to `M(S)`: expand the shifted product over subsets `T ⊆ S`,
/// `Σ_T ⟨∏_{α∈T} g(α)⟩ ∏_{α∉T} (−λ(α))`, using plain expectations.
pub fn correlation_tensor_inclusion_exclusion<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
) -> Result<CorrelationTensor> {
    let reg = state.register();
    reg.check_subset(subset)?;
    let means = subset
        .iter()
        .map(|&s| basis::local_means(state, s))
        .collect::<Result<Vec<_>>>()?;
    let shape: Vec<usize> = means.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    let m = subset.len();
    let mut data = Vec::with_capacity(total);
    for k in 0..total {
        let idx = unflatten(&shape, k);
        let mut acc = 0.0;
        for mask in 0u32..(1 << m) {
            let mut ops = Vec::new();
            let mut weight = 1.0;
            for p in 0..m {
                if mask & (1 << p) != 0 {
                    ops.push(SiteOperator::new(subset[p], idx[p]));
                } else {
                    weight *= -means[p][idx[p]];
                }
            }
            if weight != 0.0 {
                acc += weight * basis::expectation(state, &ops)?;
            }
        }
        data.push(acc);
    }
    CorrelationTensor::from_parts(subset.to_vec(), shape, data)
}

/// Connected tensor `M'(S)` with recursively connected block factors.
pub fn connected_tensor<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
) -> Result<CorrelationTensor> {
    connected_tensor_capped(state, subset, DEFAULT_MAX_ORDER)
}

pub fn connected_tensor_capped<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
    max_order: usize,
) -> Result<CorrelationTensor> {
    if subset.len() < 2 {
        return Err(Error::InvalidSubset(format!(
            "connected tensor needs at least two sites, got {}",
            subset.len()
        )));
    }
    state.register().check_subset(subset)?;
    check_order(subset, max_order)?;
    let mut memo = HashMap::new();
    let positions: Vec<usize> = (0..subset.len()).collect();
    let data = connected_positions(state, subset, &positions, &mut memo)?;
    let shape = subset
        .iter()
        .map(|&s| {
            let d = state.register().dim(s);
            d * d - 1
        })
        .collect();
    CorrelationTensor::from_parts(subset.to_vec(), shape, data)
}

/// Connected tensor over `subset[p]` for `p` in `positions` (ascending),
/// memoized by position bitmask for the duration of one evaluation.
fn connected_positions<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
    positions: &[usize],
    memo: &mut HashMap<u64, Vec<f64>>,
) -> Result<Vec<f64>> {
    let key = positions.iter().fold(0u64, |acc, &p| acc | (1 << p));
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let sites: Vec<usize> = positions.iter().map(|&p| subset[p]).collect();
    let raw = correlation_tensor(state, &sites)?;
    let shape = raw.shape().to_vec();
    let mut data = raw.data().to_vec();

    for blocks in partition::blocks_min2(positions) {
        let factors = blocks
            .iter()
            .map(|b| connected_positions(state, subset, b, memo))
            .collect::<Result<Vec<_>>>()?;
        // where each block's axes sit inside `positions`
        let layout: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|p| {
                        positions
                            .iter()
                            .position(|q| q == p)
                            .expect("block ⊆ positions")
                    })
                    .collect()
            })
            .collect();
        let block_shapes: Vec<Vec<usize>> = layout
            .iter()
            .map(|axes| axes.iter().map(|&a| shape[a]).collect())
            .collect();
        let mut sub = Vec::new();
        for (k, entry) in data.iter_mut().enumerate() {
            let idx = unflatten(&shape, k);
            let mut prod = 1.0;
            for ((axes, bshape), factor) in layout.iter().zip(&block_shapes).zip(&factors) {
                sub.clear();
                sub.extend(axes.iter().map(|&a| idx[a]));
                prod *= factor[flat_index(bshape, &sub)];
                if prod == 0.0 {
                    break;
                }
            }
            *entry -= prod;
        }
    }
    memo.insert(key, data.clone());
    Ok(data)
}

/// `Σ M'²` over all index tuples.
pub fn raw_sum<S: QuantumState + ?Sized>(state: &S, subset: &[usize]) -> Result<f64> {
    Ok(connected_tensor(state, subset)?.squared_norm())
}

/// The measure with default configuration and an optional explicit `𝒩`.
pub fn measure_b<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
    normalization: Option<f64>,
) -> Result<MeasureResult> {
    measure_b_with(
        state,
        subset,
        &MeasureConfig {
            normalization,
            ..MeasureConfig::default()
        },
    )
}

pub fn measure_b_with<S: QuantumState + ?Sized>(
    state: &S,
    subset: &[usize],
    config: &MeasureConfig,
) -> Result<MeasureResult> {
    let tensor = connected_tensor_capped(state, subset, config.max_order)?;
    let raw = tensor.squared_norm();
    let normalization = match config.normalization {
        Some(n) if n.is_finite() && n > 0.0 => n,
        Some(n) => {
            return Err(Error::InvalidParameter(format!(
                "normalization must be positive and finite, got {n}"
            )))
        }
        None => default_normalization(state.register(), subset)?,
    };
    Ok(MeasureResult {
        subset: subset.to_vec(),
        raw_sum: raw,
        normalization,
        value: raw / normalization,
    })
}

/// GHZ-calibrated `𝒩` for a subset whose sites share one dimension.
pub fn default_normalization(
    register: &crate::register::QuditRegister,
    subset: &[usize],
) -> Result<f64> {
    register.check_subset(subset)?;
    let d = register.dim(subset[0]);
    if subset.iter().any(|&s| register.dim(s) != d) {
        return Err(Error::Shape(
            "sites of different dimension need an explicit normalization".into(),
        ));
    }
    calibrate_normalization(subset.len(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::catalog;

    #[test]
    fn singlet_tensor_is_minus_identity() {
        let t = correlation_tensor(&catalog::bell(), &[1, 2]).unwrap();
        for (idx, v) in t.indexed() {
            let expect = if idx[0] == idx[1] { -1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15, "{idx:?}");
        }
        assert!((raw_sum(&catalog::bell(), &[1, 2]).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn single_site_tensor_vanishes() {
        let w = catalog::w(3).unwrap();
        let t = correlation_tensor(&w, &[2]).unwrap();
        assert_eq!(t.shape(), &[3]);
        assert!(t.max_abs() < 1e-12);
    }

    #[test]
    fn connected_needs_two_sites() {
        let g = catalog::ghz(3).unwrap();
        assert!(connected_tensor(&g, &[1]).is_err());
        assert!(connected_tensor(&g, &[1, 1]).is_err());
        assert!(connected_tensor(&g, &[1, 5]).is_err());
        assert!(connected_tensor_capped(&g, &[1, 2, 3], 2).is_err());
    }

    #[test]
    fn ghz4_zzzz_entry() {
        // ⟨ZZZZ⟩ = 1 and every pair has M_zz = 1, so 1 − 3 = −2
        let g = catalog::ghz(4).unwrap();
        let t = connected_tensor(&g, &[1, 2, 3, 4]).unwrap();
        assert!((t.get(&[2, 2, 2, 2]).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn explicit_normalization_is_used() {
        let r = measure_b(&catalog::bell(), &[1, 2], Some(6.0)).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        assert_eq!(r.normalization, 6.0);
        assert!(measure_b(&catalog::bell(), &[1, 2], Some(0.0)).is_err());
    }
}
