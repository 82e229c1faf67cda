//! Random states and unitaries for property checks and optimizer restarts.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::register::QuditRegister;
use crate::state::PureState;

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state on `register`.
pub fn random_pure_state<R: Rng + ?Sized>(
    rng: &mut R,
    register: &QuditRegister,
) -> Result<PureState> {
    let amps = (0..register.total_dim())
        .map(|_| gaussian_complex(rng))
        .collect();
    PureState::new(register.clone(), amps)
}

/// Tensor product of independent Haar-random single-site states.
pub fn random_product_state<R: Rng + ?Sized>(
    rng: &mut R,
    register: &QuditRegister,
) -> Result<PureState> {
    let mut factors = register
        .dims()
        .iter()
        .map(|&d| random_pure_state(rng, &QuditRegister::new(vec![d])?));
    let first = factors.next().expect("register has a site")?;
    factors.try_fold(first, |acc, f| acc.tensor_product(&f?))
}

/// Haar-random `d x d` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Apply an independent Haar unitary to every site.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, state: &PureState) -> Result<PureState> {
    let mut out = state.clone();
    for site in 1..=state.register().num_sites() {
        let u = haar_unitary(rng, state.register().dim(site));
        out = out.apply_local(site, &u)?;
    }
    Ok(out)
}

/// Uniformly random permutation of `1..=n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}
