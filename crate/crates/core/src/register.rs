use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of per-site local dimensions.
///
/// Sites are labelled from 1; site 1 is the most significant digit of a
/// basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct QuditRegister {
    dims: Vec<usize>,
    total: usize,
}

impl QuditRegister {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidRegister("register has no sites".into()));
        }
        if let Some((k, d)) = dims.iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(Error::InvalidRegister(format!(
                "site {} has dimension {d}, need at least 2",
                k + 1
            )));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::DimensionOverflow)?;
        Ok(Self { dims, total })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Dimension of a 1-based site.
    pub fn dim(&self, site: usize) -> usize {
        self.dims[site - 1]
    }

    /// Product of the dimensions of all sites to the right of `site`.
    pub(crate) fn stride(&self, site: usize) -> usize {
        self.dims[site..].iter().product()
    }

    pub fn concat(&self, other: &QuditRegister) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// Digits of a flat basis index, site 1 first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Validate a list of 1-based sites: nonempty, in range, no repeats.
    pub fn check_subset(&self, sites: &[usize]) -> Result<()> {
        if sites.is_empty() {
            return Err(Error::InvalidSubset("empty site list".into()));
        }
        let n = self.num_sites();
        let mut seen = vec![false; n];
        for &s in sites {
            if s == 0 || s > n {
                return Err(Error::InvalidSubset(format!("site {s} outside 1..={n}")));
            }
            if seen[s - 1] {
                return Err(Error::InvalidSubset(format!("site {s} repeated")));
            }
            seen[s - 1] = true;
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for QuditRegister {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<QuditRegister> for Vec<usize> {
    fn from(r: QuditRegister) -> Self {
        r.dims
    }
}
