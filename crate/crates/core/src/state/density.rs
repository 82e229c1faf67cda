use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::register::QuditRegister;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite operator on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: QuditRegister,
    matrix: CMatrix,
}

/// On-disk form: `{"dims": [...], "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixFile {
    pub dims: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl DensityMatrix {
    /// Validate and wrap a matrix.
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        let n = register.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, register dimension is {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = linalg::max_hermitian_defect(&matrix);
        if herm.is_nan() || herm > HERMITIAN_TOL {
            return Err(Error::Numeric(format!(
                "matrix is not Hermitian (defect {herm:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Numeric(format!("trace is {trace}, expected 1")));
        }
        let min = linalg::min_eigenvalue(&matrix)?;
        if min < -POSITIVITY_TOL {
            return Err(Error::Numeric(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { register, matrix })
    }

    pub(crate) fn from_parts_unchecked(register: QuditRegister, matrix: CMatrix) -> Self {
        Self { register, matrix }
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Mixture `Σ p_i ρ_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let n = first.1.register.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (p, rho) in parts {
            if rho.register != first.1.register {
                return Err(Error::Shape(
                    "mixture members live on different registers".into(),
                ));
            }
            if *p < 0.0 {
                return Err(Error::InvalidParameter(format!("negative weight {p}")));
            }
            m += &rho.matrix * Complex64::new(*p, 0.0);
        }
        Self::new(first.1.register.clone(), m)
    }

    pub fn tensor_product(&self, other: &DensityMatrix) -> Result<Self> {
        let register = self.register.concat(&other.register)?;
        Ok(Self {
            register,
            matrix: linalg::kron(&self.matrix, &other.matrix),
        })
    }

    /// Reduced state on `keep`, in the sites' original relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        self.register.check_subset(keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (1..=self.register.num_sites())
            .filter(|s| !kept.contains(s))
            .collect();
        let sub = QuditRegister::new(kept.iter().map(|&s| self.register.dim(s)).collect())?;
        let env_dims: Vec<usize> = traced.iter().map(|&s| self.register.dim(s)).collect();
        let env_dim: usize = env_dims.iter().product();

        let full_index = |k: &[usize], mut e: usize| {
            let mut digits = vec![0; self.register.num_sites()];
            for (&s, &x) in kept.iter().zip(k) {
                digits[s - 1] = x;
            }
            for (&s, &d) in traced.iter().zip(&env_dims).rev() {
                digits[s - 1] = e % d;
                e /= d;
            }
            self.register.index_of(&digits)
        };

        let n = sub.total_dim();
        let mut out = CMatrix::from_element(n, n, ZERO);
        for r in 0..n {
            let rd = sub.digits(r);
            for c in 0..n {
                let cd = sub.digits(c);
                out[(r, c)] = (0..env_dim)
                    .map(|e| self.matrix[(full_index(&rd, e), full_index(&cd, e))])
                    .sum();
            }
        }
        Ok(Self {
            register: sub,
            matrix: out,
        })
    }

    /// Partial transpose over the listed sites.
    pub fn partial_transpose(&self, sites: &[usize]) -> Result<CMatrix> {
        self.register.check_subset(sites)?;
        let n = self.register.total_dim();
        let mut out = CMatrix::from_element(n, n, ZERO);
        for r in 0..n {
            let rd = self.register.digits(r);
            for c in 0..n {
                let cd = self.register.digits(c);
                let (mut nr, mut nc) = (rd.clone(), cd.clone());
                for &s in sites {
                    std::mem::swap(&mut nr[s - 1], &mut nc[s - 1]);
                }
                out[(self.register.index_of(&nr), self.register.index_of(&nc))] =
                    self.matrix[(r, c)];
            }
        }
        Ok(out)
    }

    /// Conjugate by a single-site operator: `U ρ U†` with `U` on `site`.
    pub fn apply_local_unitary(&self, site: usize, u: &CMatrix) -> Result<Self> {
        self.register.check_subset(&[site])?;
        let d = self.register.dim(site);
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::Shape(format!("operator is not {d}x{d}")));
        }
        // U ρ: act on columns; (U ρ) U† = (U (U ρ)†)†
        let left = linalg::apply_local(&self.register, site, u, self.matrix.as_slice());
        let n = self.register.total_dim();
        let left = CMatrix::from_column_slice(n, n, &left).adjoint();
        let both = linalg::apply_local(&self.register, site, u, left.as_slice());
        let matrix = CMatrix::from_column_slice(n, n, &both).adjoint();
        Ok(Self {
            register: self.register.clone(),
            matrix,
        })
    }

    pub fn to_file(&self) -> DensityMatrixFile {
        let n = self.register.total_dim();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let z = self.matrix[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        DensityMatrixFile {
            dims: self.register.dims().to_vec(),
            entries,
        }
    }

    pub fn from_file(file: &DensityMatrixFile) -> Result<Self> {
        let register = QuditRegister::new(file.dims.clone())?;
        let n = register.total_dim();
        if file.entries.len() != n.checked_mul(n).ok_or(Error::DimensionOverflow)? {
            return Err(Error::Shape(format!(
                "{} entries, expected {}",
                file.entries.len(),
                n * n
            )));
        }
        let matrix = CMatrix::from_fn(n, n, |r, c| {
            let [re, im] = file.entries[r * n + c];
            Complex64::new(re, im)
        });
        Self::new(register, matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DensityMatrixFile = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                e.column(),
                format!("density-matrix JSON (line {}): {e}", e.line()),
            )
        })?;
        Self::from_file(&file)
    }
}
