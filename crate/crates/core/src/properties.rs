//! Randomized checks of the measure's structural properties: zero on
//! product states, nonnegativity, local-unitary invariance, vanishing of
//! connected tensors across product cuts, and relabeling consistency.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{connected_tensor, measure_b};
use crate::random;
use crate::register::QuditRegister;
use crate::state::{DensityMatrix, PureState, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyCheck {
    SeparableZero,
    Nonneg,
    LuInvariance,
    ProductCut,
    Permutation,
}

impl PropertyCheck {
    pub const ALL: [PropertyCheck; 5] = [
        PropertyCheck::SeparableZero,
        PropertyCheck::Nonneg,
        PropertyCheck::LuInvariance,
        PropertyCheck::ProductCut,
        PropertyCheck::Permutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyCheck::SeparableZero => "separable-zero",
            PropertyCheck::Nonneg => "nonneg",
            PropertyCheck::LuInvariance => "lu-invariance",
            PropertyCheck::ProductCut => "product-cut",
            PropertyCheck::Permutation => "permutation",
        }
    }

    /// Worst-case deviation allowed; for `nonneg` the statistic is the
    /// minimum value and must not fall below this.
    pub fn threshold(self) -> f64 {
        match self {
            PropertyCheck::SeparableZero => 1e-10,
            PropertyCheck::Nonneg => 0.0,
            PropertyCheck::LuInvariance => 1e-9,
            PropertyCheck::ProductCut => 1e-10,
            PropertyCheck::Permutation => 1e-12,
        }
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown property check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub check: PropertyCheck,
    pub trials: usize,
    pub seed: u64,
    pub evaluations: usize,
    /// Maximum deviation, or the minimum value for `nonneg`.
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// All subsets of `1..=n` with at least two sites, by increasing size.
pub fn subsets_min2(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (1..=n).filter(|s| m & (1 << (s - 1)) != 0).collect())
        .collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

fn random_register<R: Rng>(
    rng: &mut R,
    min_sites: usize,
    max_sites: usize,
) -> Result<QuditRegister> {
    let n = rng.random_range(min_sites..=max_sites);
    // mostly qubits, occasionally qutrits; uniform so the default normalization applies
    let d = if rng.random_bool(0.15) { 3 } else { 2 };
    QuditRegister::new(vec![d; n])
}

fn random_mixed<R: Rng>(rng: &mut R, register: &QuditRegister) -> Result<DensityMatrix> {
    let a = random::random_pure_state(rng, register)?.to_density();
    let b = random::random_pure_state(rng, register)?.to_density();
    let p = rng.random_range(0.0..1.0);
    DensityMatrix::mixture(&[(p, &a), (1.0 - p, &b)])
}

pub fn run_property(check: PropertyCheck, trials: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = match check {
        PropertyCheck::Nonneg => f64::INFINITY,
        _ => 0.0,
    };
    let mut evaluations = 0;
    for _ in 0..trials {
        match check {
            PropertyCheck::SeparableZero => {
                let reg = random_register(&mut rng, 2, 4)?;
                let s = random::random_product_state(&mut rng, &reg)?;
                for sub in subsets_min2(reg.num_sites()) {
                    worst = f64::max(worst, measure_b(&s, &sub, None)?.value.abs());
                    evaluations += 1;
                }
            }
            PropertyCheck::Nonneg => {
                let reg = random_register(&mut rng, 2, 4)?;
                let s: State = if rng.random_bool(0.5) {
                    random::random_pure_state(&mut rng, &reg)?.into()
                } else {
                    random_mixed(&mut rng, &reg)?.into()
                };
                for sub in subsets_min2(reg.num_sites()) {
                    worst = f64::min(worst, measure_b(&s, &sub, None)?.value);
                    evaluations += 1;
                }
            }
            PropertyCheck::LuInvariance => {
                let reg = random_register(&mut rng, 2, 4)?;
                let (before, after) = if rng.random_bool(0.5) {
                    let s = random::random_pure_state(&mut rng, &reg)?;
                    let t = random::random_local_unitary(&mut rng, &s)?;
                    (State::from(s), State::from(t))
                } else {
                    let rho = random_mixed(&mut rng, &reg)?;
                    let mut sigma = rho.clone();
                    for site in 1..=reg.num_sites() {
                        let u = random::haar_unitary(&mut rng, reg.dim(site));
                        sigma = sigma.apply_local_unitary(site, &u)?;
                    }
                    (State::from(rho), State::from(sigma))
                };
                for sub in subsets_min2(reg.num_sites()) {
                    let b0 = measure_b(&before, &sub, None)?.value;
                    let b1 = measure_b(&after, &sub, None)?.value;
                    worst = worst.max((b0 - b1).abs());
                    evaluations += 1;
                }
            }
            PropertyCheck::ProductCut => {
                let reg_a = random_register(&mut rng, 1, 3)?;
                let reg_b = random_register(&mut rng, 1, 2)?;
                let a = random::random_pure_state(&mut rng, &reg_a)?;
                let b = random::random_pure_state(&mut rng, &reg_b)?;
                let s = a.tensor_product(&b)?;
                let cut = reg_a.num_sites();
                for sub in subsets_min2(s.register().num_sites()) {
                    if sub.iter().any(|&x| x <= cut) && sub.iter().any(|&x| x > cut) {
                        worst = worst.max(connected_tensor(&s, &sub)?.max_abs());
                        evaluations += 1;
                    }
                }
            }
            PropertyCheck::Permutation => {
                let reg = random_register(&mut rng, 2, 4)?;
                let s = random::random_pure_state(&mut rng, &reg)?;
                let perm = random::random_permutation(&mut rng, reg.num_sites());
                let t: PureState = s.permute_sites(&perm)?;
                // old site `perm[k]` now sits at k + 1
                let new_label =
                    |old: usize| perm.iter().position(|&p| p == old).expect("in perm") + 1;
                for sub in subsets_min2(reg.num_sites()) {
                    let moved: Vec<usize> = sub.iter().map(|&x| new_label(x)).collect();
                    let b0 = measure_b(&s, &sub, None)?.value;
                    let b1 = measure_b(&t, &moved, None)?.value;
                    worst = worst.max((b0 - b1).abs());
                    evaluations += 1;
                }
            }
        }
    }
    let threshold = check.threshold();
    let passed = match check {
        PropertyCheck::Nonneg => worst >= threshold,
        _ => worst < threshold,
    };
    Ok(PropertyReport {
        check,
        trials,
        seed,
        evaluations,
        worst,
        threshold,
        passed,
    })
}
