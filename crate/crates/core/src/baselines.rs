//! Standard two-qubit entanglement indicators used to cross-check the
//! correlation measure: Wootters concurrence and the partial-transpose test.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending.
    pub roots: [f64; 4],
}

fn sigma_y_sigma_y() -> CMatrix {
    let y = CMatrix::from_row_slice(
        2,
        2,
        &[
            ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            ZERO,
        ],
    );
    linalg::kron(&y, &y)
}

/// Wootters concurrence of a two-qubit state.
///
/// The spin-flipped state is `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)` with complex
/// conjugation in the computational basis. Writing `ρ = W W†`, the roots
/// (square roots of the eigenvalues of `ρ ρ̃`) are the singular values of
/// the symmetric matrix `τ = Wᵀ (σ_y⊗σ_y) W`. Taking singular values keeps
/// near-zero roots accurate to machine precision instead of `√ε`.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    if rho.register().dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "concurrence needs a two-qubit register, got {:?}",
            rho.register().dims()
        )));
    }
    let (vals, vecs) = linalg::hermitian_eigen(rho.matrix())?;
    let w = CMatrix::from_fn(4, 4, |r, c| vecs[(r, c)] * vals[c].max(0.0).sqrt());
    let tau = w.transpose() * sigma_y_sigma_y() * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    if sv.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("singular values did not converge".into()));
    }
    sv.sort_by(|a, b| b.total_cmp(a));
    let mut roots = [0.0; 4];
    roots.copy_from_slice(&sv[..4]);
    let value = (roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { value, roots })
}

/// Smallest eigenvalue of the partial transpose over `sites`.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix, sites: &[usize]) -> Result<f64> {
    if sites.len() >= rho.register().num_sites() {
        return Err(Error::InvalidSubset(
            "partial transpose needs a proper subset of the sites".into(),
        ));
    }
    let pt = rho.partial_transpose(sites)?;
    linalg::min_eigenvalue(&pt)
}
