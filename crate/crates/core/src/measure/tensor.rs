use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real tensor over generator indices of a site subset. Axis `k`
/// belongs to `subset[k]`; storage is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    subset: Vec<usize>,
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl CorrelationTensor {
    pub(crate) fn from_parts(
        subset: Vec<usize>,
        shape: Vec<usize>,
        data: Vec<f64>,
    ) -> Result<Self> {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len());
        if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!("non-finite tensor entry {bad}")));
        }
        Ok(Self {
            subset,
            shape,
            data,
        })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn get(&self, index: &[usize]) -> Option<f64> {
        if index.len() != self.shape.len() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        Some(self.data[flat_index(&self.shape, index)])
    }

    pub fn squared_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Entries paired with their multi-indices, row-major.
    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(|(k, &v)| (unflatten(&self.shape, k), v))
    }
}

pub(crate) fn flat_index(shape: &[usize], index: &[usize]) -> usize {
    index.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

pub(crate) fn unflatten(shape: &[usize], mut k: usize) -> Vec<usize> {
    let mut out = vec![0; shape.len()];
    for (slot, &n) in out.iter_mut().zip(shape).rev() {
        *slot = k % n;
        k /= n;
    }
    out
}
