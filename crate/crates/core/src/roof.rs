//! Convex-roof extension of the measure to mixed states.
//!
//! Every pure-state decomposition of `ρ = Σ_j λ_j |e_j><e_j|` (rank `r`) into
//! `k ≥ r` members has the form `|Ψ̃_i> = Σ_j V_ij √λ_j |e_j>` for an
//! isometry `V` (`k x r`, `V†V = I`), with weights `p_i = <Ψ̃_i|Ψ̃_i>`.
//!
//! The search moves on the isometry manifold with Givens rotations: for a
//! row pair `(i, j)` it rotates `V` by a real or an imaginary planar
//! rotation of angle `±step`. Those two rotation families generate `SU(k)`,
//! and each move changes only members `i` and `j`, so a trial costs two
//! pure-state evaluations. Improving moves are kept, the step halves after
//! a sweep with no improvement, and the search runs from several starting
//! isometries. Restart 0 starts from the eigendecomposition, so the result
//! never exceeds the eigen-ensemble value. All values are upper bounds on
//! the true roof.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::measure::{self, MeasureConfig};
use crate::random::gaussian_complex;
use crate::state::{catalog, DensityMatrix, PureState};

/// Eigenvalues below this (relative to the largest) count as zero rank.
const RANK_TOL: f64 = 1e-12;
/// Members lighter than this are dropped from an ensemble.
const MIN_WEIGHT: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-10;
/// Sweep improvement below which a restart is considered converged.
const SWEEP_TOL: f64 = 1e-10;
const INITIAL_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-9;
/// Values this small cannot improve meaningfully (the measure is ≥ 0).
const FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleDecomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl EnsembleDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_i |Ψ_i><Ψ_i|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.states.first().map_or(0, |s| s.amplitudes().len());
        let mut m = CMatrix::from_element(n, n, ZERO);
        for (p, s) in self.weights.iter().zip(&self.states) {
            let a = s.amplitudes();
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] += a[r] * a[c].conj() * *p;
                }
            }
        }
        m
    }

    /// Largest elementwise deviation of the reconstruction from `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        (self.reconstruct() - rho.matrix())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `Σ p_i B(Ψ_i)` with a fixed normalization.
    pub fn average_measure(&self, subset: &[usize], config: &MeasureConfig) -> Result<f64> {
        let mut acc = 0.0;
        for (p, s) in self.weights.iter().zip(&self.states) {
            acc += p * measure::measure_b_with(s, subset, config)?.value;
        }
        Ok(acc)
    }
}

/// Eigen-data of `ρ` restricted to its support.
#[derive(Debug, Clone)]
struct Spectrum {
    register: crate::register::QuditRegister,
    /// `√λ_j e_j` as columns, `D x r`.
    scaled: CMatrix,
}

impl Spectrum {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let (vals, vecs) = linalg::hermitian_eigen(rho.matrix())?;
        let top = vals.first().copied().unwrap_or(0.0);
        let rank = vals
            .iter()
            .take_while(|&&v| v > RANK_TOL * top.max(1.0))
            .count();
        if rank == 0 {
            return Err(Error::Numeric("density matrix has no support".into()));
        }
        let n = vecs.nrows();
        let scaled = CMatrix::from_fn(n, rank, |row, j| vecs[(row, j)] * vals[j].sqrt());
        Ok(Self {
            register: rho.register().clone(),
            scaled,
        })
    }

    fn rank(&self) -> usize {
        self.scaled.ncols()
    }

    fn ensemble(&self, v: &CMatrix) -> Result<EnsembleDecomposition> {
        // Ψ̃ = W Vᵀ : column i is Σ_j V_ij √λ_j e_j
        let tilde = &self.scaled * v.transpose();
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for col in tilde.column_iter() {
            let p: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            if p < MIN_WEIGHT {
                continue;
            }
            weights.push(p);
            states.push(PureState::new(
                self.register.clone(),
                col.iter().copied().collect(),
            )?);
        }
        // the dropped weight is below MIN_WEIGHT each; renormalize to sum 1
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(EnsembleDecomposition { weights, states })
    }
}

/// Decomposition of `rho` induced by the isometry `mixing` (`k x r`).
pub fn ensemble_from_parameters(
    rho: &DensityMatrix,
    mixing: &CMatrix,
) -> Result<EnsembleDecomposition> {
    let spectrum = Spectrum::new(rho)?;
    let r = spectrum.rank();
    if mixing.ncols() != r {
        return Err(Error::Shape(format!(
            "mixing matrix has {} columns, rank of rho is {r}",
            mixing.ncols()
        )));
    }
    if mixing.nrows() < r {
        return Err(Error::Shape(format!(
            "mixing matrix has {} rows, need at least the rank {r}",
            mixing.nrows()
        )));
    }
    let gram = mixing.adjoint() * mixing;
    let defect = (gram - CMatrix::identity(r, r))
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if defect > ISOMETRY_TOL {
        return Err(Error::Numeric(format!(
            "mixing matrix is not an isometry (V†V deviates by {defect:.3e})"
        )));
    }
    spectrum.ensemble(mixing)
}

/// Orthonormalize the columns of `z` (modified Gram-Schmidt). `None` if the
/// columns are numerically dependent.
fn orthonormalize(z: &CMatrix) -> Option<CMatrix> {
    let mut q = z.clone();
    for c in 0..q.ncols() {
        for prev in 0..c {
            let proj: Complex64 = q.column(prev).dotc(&q.column(c));
            let pc = q.column(prev).clone_owned();
            let mut col = q.column_mut(c);
            col -= pc * proj;
        }
        let norm = q.column(c).norm();
        if norm.is_nan() || norm <= 1e-10 {
            return None;
        }
        q.column_mut(c).unscale_mut(norm);
    }
    Some(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoofBudget {
    pub restarts: usize,
    /// Maximum number of coordinate sweeps per restart.
    pub max_iterations: usize,
    /// Ensemble size; `None` means `r²` for a rank-`r` state.
    pub k_max: Option<usize>,
    pub seed: u64,
}

impl Default for RoofBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 400,
            k_max: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// A full sweep improved the value by less than the tolerance.
    SweepTolerance,
    /// The step size shrank below its floor.
    StepTolerance,
    /// The value reached the floor of the measure.
    Floor,
    IterationBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub value: f64,
    pub iterations: usize,
    pub stop: StopReason,
}

/// Best decomposition found and how the search went.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofResult {
    /// Upper bound on the roof value.
    pub value: f64,
    pub ensemble: EnsembleDecomposition,
    pub subset: Vec<usize>,
    pub normalization: f64,
    /// Value of the eigendecomposition ensemble.
    pub eigen_value: f64,
    pub restarts: usize,
    pub best_restart: usize,
    /// Sweeps used by the best restart.
    pub iterations: usize,
    pub total_iterations: usize,
    pub converged: bool,
    /// Max minus min of the per-restart optima.
    pub spread: f64,
    pub outcomes: Vec<RestartOutcome>,
}

/// Planar rotation acting on rows `i`, `j` of the isometry.
#[derive(Debug, Clone, Copy)]
struct Givens {
    i: usize,
    j: usize,
    imaginary: bool,
}

impl Givens {
    /// Coefficients `(a, b, c, d)` of `[row_i; row_j] ← [[a, b], [c, d]] [row_i; row_j]`.
    fn coefficients(self, angle: f64) -> [Complex64; 4] {
        let (s, c) = angle.sin_cos();
        let c = Complex64::new(c, 0.0);
        if self.imaginary {
            let is = Complex64::new(0.0, s);
            [c, is, is, c]
        } else {
            [c, Complex64::new(-s, 0.0), Complex64::new(s, 0.0), c]
        }
    }
}

fn rotate_pair(
    x: &[Complex64],
    y: &[Complex64],
    k: [Complex64; 4],
    out_x: &mut Vec<Complex64>,
    out_y: &mut Vec<Complex64>,
) {
    out_x.clear();
    out_y.clear();
    for (a, b) in x.iter().zip(y) {
        out_x.push(k[0] * a + k[1] * b);
        out_y.push(k[2] * a + k[3] * b);
    }
}

/// Search state of one restart: the isometry, the unnormalized members
/// `Ψ̃_i`, and each member's contribution `p_i B(Ψ_i)`.
struct Walker<'a> {
    subset: &'a [usize],
    config: MeasureConfig,
    register: &'a crate::register::QuditRegister,
    v: CMatrix,
    members: Vec<Vec<Complex64>>,
    contrib: Vec<f64>,
    scratch: Vec<Complex64>,
}

impl<'a> Walker<'a> {
    fn new(
        spectrum: &'a Spectrum,
        subset: &'a [usize],
        config: MeasureConfig,
        v: CMatrix,
    ) -> Result<Self> {
        let tilde = &spectrum.scaled * v.transpose();
        let members: Vec<Vec<Complex64>> = tilde
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        let mut w = Self {
            subset,
            config,
            register: &spectrum.register,
            v,
            members: Vec::new(),
            contrib: Vec::new(),
            scratch: Vec::new(),
        };
        let contrib = members
            .iter()
            .map(|m| w.contribution(m))
            .collect::<Result<Vec<_>>>()?;
        w.members = members;
        w.contrib = contrib;
        Ok(w)
    }

    fn total(&self) -> f64 {
        self.contrib.iter().sum()
    }

    /// `p B(Ψ̃/√p)` for an unnormalized member.
    fn contribution(&mut self, member: &[Complex64]) -> Result<f64> {
        let p: f64 = member.iter().map(|z| z.norm_sqr()).sum();
        if p < MIN_WEIGHT {
            return Ok(0.0);
        }
        let scale = p.sqrt().recip();
        self.scratch.clear();
        self.scratch.extend(member.iter().map(|z| z * scale));
        let view = AmplitudeView {
            register: self.register,
            amplitudes: &self.scratch,
        };
        Ok(p * measure::measure_b_with(&view, self.subset, &self.config)?.value)
    }

    /// Try a rotation; keep it and return the new total if it improves on
    /// `current`.
    fn try_move(
        &mut self,
        g: Givens,
        angle: f64,
        current: f64,
        bufs: &mut (Vec<Complex64>, Vec<Complex64>),
    ) -> Result<Option<f64>> {
        let k = g.coefficients(angle);
        rotate_pair(
            &self.members[g.i],
            &self.members[g.j],
            k,
            &mut bufs.0,
            &mut bufs.1,
        );
        let ci = self.contribution(&bufs.0)?;
        let cj = self.contribution(&bufs.1)?;
        let trial = current - self.contrib[g.i] - self.contrib[g.j] + ci + cj;
        if trial >= current {
            return Ok(None);
        }
        std::mem::swap(&mut self.members[g.i], &mut bufs.0);
        std::mem::swap(&mut self.members[g.j], &mut bufs.1);
        self.contrib[g.i] = ci;
        self.contrib[g.j] = cj;
        for c in 0..self.v.ncols() {
            let (a, b) = (self.v[(g.i, c)], self.v[(g.j, c)]);
            self.v[(g.i, c)] = k[0] * a + k[1] * b;
            self.v[(g.j, c)] = k[2] * a + k[3] * b;
        }
        Ok(Some(self.total()))
    }
}

/// Borrowed amplitudes treated as a normalized pure state.
struct AmplitudeView<'a> {
    register: &'a crate::register::QuditRegister,
    amplitudes: &'a [Complex64],
}

impl crate::basis::QuantumState for AmplitudeView<'_> {
    fn register(&self) -> &crate::register::QuditRegister {
        self.register
    }

    fn columns(&self) -> &[Complex64] {
        self.amplitudes
    }

    fn close(&self, applied: &[Complex64]) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(applied)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn search<R: Rng>(
    walker: &mut Walker,
    max_iterations: usize,
    rng: &mut R,
) -> Result<RestartOutcome> {
    let k = walker.members.len();
    let mut moves: Vec<Givens> = (0..k)
        .flat_map(|i| {
            (i + 1..k).flat_map(move |j| [false, true].map(|imaginary| Givens { i, j, imaginary }))
        })
        .collect();
    let mut best = walker.total();
    let mut step = INITIAL_STEP;
    let mut bufs = (Vec::new(), Vec::new());
    for iteration in 1..=max_iterations {
        if best < FLOOR {
            return Ok(RestartOutcome {
                value: best,
                iterations: iteration - 1,
                stop: StopReason::Floor,
            });
        }
        let sweep_start = best;
        let mut moved = false;
        // Fisher-Yates with the restart's own stream keeps runs reproducible
        for i in (1..moves.len()).rev() {
            moves.swap(i, rng.random_range(0..=i));
        }
        for &g in &moves {
            for angle in [step, -step] {
                if let Some(v) = walker.try_move(g, angle, best, &mut bufs)? {
                    best = v;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step *= 0.5;
            if step < MIN_STEP {
                return Ok(RestartOutcome {
                    value: best,
                    iterations: iteration,
                    stop: StopReason::StepTolerance,
                });
            }
        } else if sweep_start - best < SWEEP_TOL {
            return Ok(RestartOutcome {
                value: best,
                iterations: iteration,
                stop: StopReason::SweepTolerance,
            });
        }
    }
    Ok(RestartOutcome {
        value: best,
        iterations: max_iterations,
        stop: StopReason::IterationBudget,
    })
}

/// Per-restart random stream derived from the base seed.
fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn random_isometry<R: Rng>(rng: &mut R, k: usize, r: usize) -> Result<CMatrix> {
    let z = CMatrix::from_fn(k, r, |_, _| gaussian_complex(rng));
    orthonormalize(&z).ok_or_else(|| Error::Numeric("degenerate random isometry".into()))
}

/// Roof value with GHZ-calibrated normalization.
pub fn roof_b(rho: &DensityMatrix, subset: &[usize], budget: &RoofBudget) -> Result<RoofResult> {
    roof_b_with(rho, subset, budget, &MeasureConfig::default())
}

pub fn roof_b_with(
    rho: &DensityMatrix,
    subset: &[usize],
    budget: &RoofBudget,
    config: &MeasureConfig,
) -> Result<RoofResult> {
    if budget.restarts == 0 || budget.max_iterations == 0 {
        return Err(Error::InvalidParameter(
            "roof budget must be positive".into(),
        ));
    }
    rho.register().check_subset(subset)?;
    if subset.len() < 2 {
        return Err(Error::InvalidSubset(
            "the measure needs at least two sites".into(),
        ));
    }
    let normalization = match config.normalization {
        Some(n) => n,
        None => measure::default_normalization(rho.register(), subset)?,
    };
    let config = MeasureConfig {
        normalization: Some(normalization),
        max_order: config.max_order,
    };
    let spectrum = Spectrum::new(rho)?;
    let r = spectrum.rank();
    let k = budget.k_max.unwrap_or(r * r).max(r);
    let evaluate = |v: &CMatrix| -> Result<(f64, EnsembleDecomposition)> {
        let e = spectrum.ensemble(v)?;
        Ok((e.average_measure(subset, &config)?, e))
    };

    let eigen_start = CMatrix::identity(k, r);
    let (eigen_value, _) = evaluate(&eigen_start)?;
    let mut outcomes = Vec::with_capacity(budget.restarts);
    let mut best: Option<(f64, EnsembleDecomposition, usize)> = None;
    for restart in 0..budget.restarts {
        let mut rng = restart_rng(budget.seed, restart);
        let start = if restart == 0 {
            eigen_start.clone()
        } else {
            random_isometry(&mut rng, k, r)?
        };
        let mut walker = Walker::new(&spectrum, subset, config, start)?;
        let mut outcome = search(&mut walker, budget.max_iterations, &mut rng)?;
        // re-derive from the isometry so the reported ensemble and value agree
        let (value, ensemble) = evaluate(&walker.v)?;
        outcome.value = value;
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, ensemble, restart));
        }
        outcomes.push(outcome);
    }
    let (value, ensemble, best_restart) = best.expect("at least one restart");
    let (lo, hi) = outcomes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
            (lo.min(o.value), hi.max(o.value))
        });
    let best_outcome = &outcomes[best_restart];
    Ok(RoofResult {
        value,
        ensemble,
        subset: subset.to_vec(),
        normalization,
        eigen_value,
        restarts: budget.restarts,
        best_restart,
        iterations: best_outcome.iterations,
        total_iterations: outcomes.iter().map(|o| o.iterations).sum(),
        converged: best_outcome.stop != StopReason::IterationBudget,
        spread: hi - lo,
        outcomes,
    })
}

/// Closed form of the direct (non-roof) measure on the Werner state with
/// singlet fidelity `F`: `(4F − 1)² / 9`.
pub fn werner_direct_b(fidelity: f64) -> Result<f64> {
    catalog::werner(fidelity)?;
    Ok((4.0 * fidelity - 1.0).powi(2) / 9.0)
}
