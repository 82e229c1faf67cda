use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::catalog;

/// `𝒩(m)` together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub order: usize,
    pub dim: usize,
    /// Raw connected sum of the `m`-site GHZ analog, which is `𝒩` itself.
    pub ghz_raw_sum: f64,
}

/// `𝒩(m)` for sites of dimension `d`: the raw connected sum of
/// `(Σ_k |k…k>)/√d` on `m` sites, so that this state scores exactly 1.
pub fn calibrate_normalization(m: usize, d: usize) -> Result<f64> {
    Ok(calibration(m, d)?.ghz_raw_sum)
}

pub fn calibration(m: usize, d: usize) -> Result<Calibration> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "normalization order must be >= 2, got {m}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "site dimension must be >= 2, got {d}"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&hit) = cache.lock().unwrap_or_else(|p| p.into_inner()).get(&(m, d)) {
        return Ok(Calibration {
            order: m,
            dim: d,
            ghz_raw_sum: hit,
        });
    }
    let ghz = catalog::ghz_qudit(m, d)?;
    let sites: Vec<usize> = (1..=m).collect();
    let raw = super::connected_tensor_capped(&ghz, &sites, usize::MAX)?.squared_norm();
    if raw.is_nan() || raw <= 0.0 {
        return Err(Error::Numeric(format!(
            "GHZ raw sum for m={m}, d={d} is {raw}"
        )));
    }
    cache
        .lock()
        .unwrap_or_else(|p| p.into_inner())
        .insert((m, d), raw);
    Ok(Calibration {
        order: m,
        dim: d,
        ghz_raw_sum: raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_constants() {
        for (m, expect) in [(2, 3.0), (3, 4.0), (4, 12.0)] {
            let n = calibrate_normalization(m, 2).unwrap();
            assert!((n - expect).abs() < 1e-12, "m={m}: {n}");
        }
        assert!(calibrate_normalization(1, 2).is_err());
        assert!(calibrate_normalization(2, 1).is_err());
    }
}
