//! Traceless Hermitian generators per site and expectation values of
//! multi-site products, contracted locally against the state.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::register::QuditRegister;
use crate::state::{DensityMatrix, PureState, State};

/// Largest imaginary part tolerated in an expectation of a Hermitian product.
pub const IMAG_TOL: f64 = 1e-10;

/// The `d² - 1` generalized Gell-Mann matrices for dimension `d`, normalized
/// so that `tr(g_a g_b) = 2 δ_ab`.
///
/// Order: symmetric off-diagonal pairs `(j, k)` with `j < k` in
/// lexicographic order, then the antisymmetric pairs in the same order, then
/// the `d - 1` diagonal generators. For `d = 2` this is exactly
/// `(σ_x, σ_y, σ_z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    fn build(d: usize) -> Self {
        let unit = |r: usize, c: usize, z: Complex64| {
            let mut m = CMatrix::from_element(d, d, ZERO);
            m[(r, c)] = z;
            m
        };
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
            .collect();
        let mut generators = Vec::with_capacity(d * d - 1);
        for &(j, k) in &pairs {
            generators.push(unit(j, k, linalg::ONE) + unit(k, j, linalg::ONE));
        }
        for &(j, k) in &pairs {
            generators
                .push(unit(j, k, Complex64::new(0.0, -1.0)) + unit(k, j, Complex64::new(0.0, 1.0)));
        }
        for l in 1..d {
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut m = CMatrix::from_element(d, d, ZERO);
            for j in 0..l {
                m[(j, j)] = Complex64::new(scale, 0.0);
            }
            m[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
            generators.push(m);
        }
        Self { dim: d, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn get(&self, index: usize) -> Option<&CMatrix> {
        self.generators.get(index)
    }

    /// Short label for a generator: `x`, `y`, `z` for qubits, `g1`.. otherwise.
    pub fn label(&self, index: usize) -> String {
        if self.dim == 2 {
            ["x", "y", "z"][index].to_string()
        } else {
            format!("g{}", index + 1)
        }
    }
}

/// Generator basis for local dimension `d`; instances are shared.
pub fn generator_basis(d: usize) -> Result<Arc<GeneratorBasis>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("basis dimension {d} < 2")));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|p| p.into_inner());
    Ok(guard
        .entry(d)
        .or_insert_with(|| Arc::new(GeneratorBasis::build(d)))
        .clone())
}

/// One factor `σ_i(α)` of a product observable. `site` is 1-based,
/// `generator` indexes into [`GeneratorBasis::generators`] from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteOperator {
    pub site: usize,
    pub generator: usize,
}

impl SiteOperator {
    pub fn new(site: usize, generator: usize) -> Self {
        Self { site, generator }
    }
}

/// States against which local operators can be contracted.
///
/// The state is exposed as a set of contiguous columns (one for a pure
/// state, `D` for a density matrix); operators act on every column and
/// [`QuantumState::close`] turns the result into `⟨O⟩`.
pub trait QuantumState {
    fn register(&self) -> &QuditRegister;

    #[doc(hidden)]
    fn columns(&self) -> &[Complex64];

    #[doc(hidden)]
    fn close(&self, applied: &[Complex64]) -> Complex64;
}

impl QuantumState for PureState {
    fn register(&self) -> &QuditRegister {
        PureState::register(self)
    }

    fn columns(&self) -> &[Complex64] {
        self.amplitudes()
    }

    fn close(&self, applied: &[Complex64]) -> Complex64 {
        self.amplitudes()
            .iter()
            .zip(applied)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl QuantumState for DensityMatrix {
    fn register(&self) -> &QuditRegister {
        DensityMatrix::register(self)
    }

    fn columns(&self) -> &[Complex64] {
        self.matrix().as_slice()
    }

    fn close(&self, applied: &[Complex64]) -> Complex64 {
        // tr(O ρ) with O ρ stored column-major
        let n = self.register().total_dim();
        (0..n).map(|c| applied[c * n + c]).sum()
    }
}

impl QuantumState for State {
    fn register(&self) -> &QuditRegister {
        State::register(self)
    }

    fn columns(&self) -> &[Complex64] {
        match self {
            State::Pure(s) => s.columns(),
            State::Mixed(r) => r.columns(),
        }
    }

    fn close(&self, applied: &[Complex64]) -> Complex64 {
        match self {
            State::Pure(s) => s.close(applied),
            State::Mixed(r) => r.close(applied),
        }
    }
}

/// `⟨⊗ O_α⟩` for arbitrary local matrices, identity elsewhere.
pub(crate) fn contract<S: QuantumState + ?Sized>(
    state: &S,
    ops: &[(usize, &CMatrix)],
) -> Complex64 {
    let reg = state.register();
    let Some(((first_site, first_op), rest)) = ops.split_first() else {
        return state.close(state.columns());
    };
    let mut cur = linalg::apply_local(reg, *first_site, first_op, state.columns());
    let mut next = vec![ZERO; cur.len()];
    for (site, op) in rest {
        linalg::apply_local_into(reg, *site, op, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    state.close(&cur)
}

pub(crate) fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Numeric(format!("non-finite {what}")));
    }
    if z.im.abs() > IMAG_TOL {
        return Err(Error::Numeric(format!(
            "{what} has imaginary part {:.3e}; input is not Hermitian",
            z.im
        )));
    }
    Ok(z.re)
}

/// `⟨⊗_α σ_{i_α}(α)⟩` with the identity on unlisted sites.
pub fn expectation<S: QuantumState + ?Sized>(state: &S, ops: &[SiteOperator]) -> Result<f64> {
    let reg = state.register();
    let sites: Vec<usize> = ops.iter().map(|o| o.site).collect();
    if !sites.is_empty() {
        reg.check_subset(&sites)?;
    }
    let bases = ops
        .iter()
        .map(|o| generator_basis(reg.dim(o.site)))
        .collect::<Result<Vec<_>>>()?;
    let mut mats = Vec::with_capacity(ops.len());
    for (o, b) in ops.iter().zip(&bases) {
        let g = b.get(o.generator).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "generator index {} out of range for site {} (dimension {})",
                o.generator,
                o.site,
                b.dim()
            ))
        })?;
        mats.push((o.site, g));
    }
    real_part(contract(state, &mats), "expectation")
}

/// `λ_i(α) = ⟨I ⊗ … ⊗ σ_i(α) ⊗ … ⊗ I⟩`.
pub fn local_mean<S: QuantumState + ?Sized>(
    state: &S,
    site: usize,
    generator: usize,
) -> Result<f64> {
    expectation(state, &[SiteOperator::new(site, generator)])
}

/// All local means of one site, in generator order.
pub fn local_means<S: QuantumState + ?Sized>(state: &S, site: usize) -> Result<Vec<f64>> {
    state.register().check_subset(&[site])?;
    let basis = generator_basis(state.register().dim(site))?;
    (0..basis.len())
        .map(|i| local_mean(state, site, i))
        .collect()
}
