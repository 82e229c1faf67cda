use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::register::QuditRegister;
use crate::state::DensityMatrix;

/// Normalized state vector on a qudit register.
///
/// Serialized as `{"dims": [...], "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateFile", into = "PureStateFile")]
pub struct PureState {
    register: QuditRegister,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Build a state from (possibly unnormalized) amplitudes; the vector is
    /// rescaled to unit norm.
    pub fn new(register: QuditRegister, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != register.total_dim() {
            return Err(Error::Shape(format!(
                "{} amplitudes for a register of dimension {}",
                amplitudes.len(),
                register.total_dim()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::Numeric("non-finite amplitudes".into()));
        }
        if norm_sqr < 1e-200 {
            return Err(Error::Numeric("zero vector cannot be normalized".into()));
        }
        let scale = norm_sqr.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|a| a * scale).collect();
        Ok(Self {
            register,
            amplitudes,
        })
    }

    pub fn basis(register: QuditRegister, digits: &[usize]) -> Result<Self> {
        if digits.len() != register.num_sites() {
            return Err(Error::Shape(format!(
                "{} digits for {} sites",
                digits.len(),
                register.num_sites()
            )));
        }
        for (k, (&x, &d)) in digits.iter().zip(register.dims()).enumerate() {
            if x >= d {
                return Err(Error::Shape(format!(
                    "digit {x} out of range for site {} of dimension {d}",
                    k + 1
                )));
            }
        }
        let mut amps = vec![ZERO; register.total_dim()];
        amps[register.index_of(digits)] = linalg::ONE;
        Self::new(register, amps)
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor_product(&self, other: &PureState) -> Result<PureState> {
        let register = self.register.concat(&other.register)?;
        let mut amps = Vec::with_capacity(register.total_dim());
        for a in &self.amplitudes {
            amps.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Self::new(register, amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let m = CMatrix::from_fn(n, n, |r, c| self.amplitudes[r] * self.amplitudes[c].conj());
        DensityMatrix::from_parts_unchecked(self.register.clone(), m)
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a single-site operator (typically a unitary) and renormalize.
    pub fn apply_local(&self, site: usize, op: &CMatrix) -> Result<PureState> {
        self.register.check_subset(&[site])?;
        let d = self.register.dim(site);
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Shape(format!(
                "operator is {}x{}, site {site} has dimension {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let amps = linalg::apply_local(&self.register, site, op, &self.amplitudes);
        Self::new(self.register.clone(), amps)
    }

    /// Reorder sites: new site `k` (1-based) is old site `perm[k-1]`.
    pub fn permute_sites(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.register.num_sites();
        if perm.len() != n {
            return Err(Error::InvalidSubset(
                "permutation length differs from site count".into(),
            ));
        }
        self.register.check_subset(perm)?;
        let dims: Vec<usize> = perm.iter().map(|&p| self.register.dim(p)).collect();
        let register = QuditRegister::new(dims)?;
        let mut amps = vec![ZERO; register.total_dim()];
        for (old_index, &a) in self.amplitudes.iter().enumerate() {
            let old = self.register.digits(old_index);
            let new: Vec<usize> = perm.iter().map(|&p| old[p - 1]).collect();
            amps[register.index_of(&new)] = a;
        }
        Ok(Self {
            register,
            amplitudes: amps,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PureStateFile {
    dims: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<PureStateFile> for PureState {
    type Error = Error;

    fn try_from(f: PureStateFile) -> Result<Self> {
        let amps = f
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        PureState::new(QuditRegister::new(f.dims)?, amps)
    }
}

impl From<PureState> for PureStateFile {
    fn from(s: PureState) -> Self {
        PureStateFile {
            dims: s.register.dims().to_vec(),
            amplitudes: s.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}
