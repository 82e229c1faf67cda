//! Reproduction of the reference three- and four-qubit tables and the
//! Werner-state closed form.
//!
//! Cells that cover several subsets ("x or 0") are expanded into one
//! row per subset. Rows with `m = 2` and the Werner rows only depend on
//! `𝒩(2) = 3`; rows with `m ≥ 3` also depend on the GHZ-calibrated
//! constants, so their mismatches are classified separately.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measure::{calibrate_normalization, measure_b};
use crate::properties::subsets_min2;
use crate::state::{catalog, PureState, State};

/// A cell matches when the absolute error is below this.
pub const MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub state: String,
    pub subset: Vec<usize>,
    pub m: usize,
    pub expected: Option<String>,
    pub computed: f64,
    pub error: Option<f64>,
    pub status: String,
    #[serde(default)]
    pub raw_sum: f64,
    #[serde(default)]
    pub normalization: f64,
}

impl TableRow {
    pub fn is_match(&self) -> bool {
        self.status == "match"
    }

    /// Rows whose value depends on a reconstructed `𝒩(m)` with `m ≥ 3`.
    pub fn depends_on_calibration(&self) -> bool {
        self.m >= 3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub calibration: BTreeMap<String, f64>,
}

impl TableReport {
    /// Mismatches in rows that only depend on `𝒩(2)`, including Werner.
    pub fn hard_failures(&self) -> Vec<&TableRow> {
        self.rows
            .iter()
            .filter(|r| !r.is_match() && !r.depends_on_calibration())
            .collect()
    }

    /// Mismatches in rows that depend on the GHZ calibration for `m ≥ 3`.
    pub fn calibration_failures(&self) -> Vec<&TableRow> {
        self.rows
            .iter()
            .filter(|r| !r.is_match() && r.depends_on_calibration())
            .collect()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "| state | subset | m | expected | computed | abs error | raw sum | 𝒩 | status |\n",
        );
        out.push_str("|---|---|---|---|---|---|---|---|---|\n");
        for r in &self.rows {
            let subset: Vec<String> = r.subset.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(
                out,
                "| {} | ({}) | {} | {} | {:.15} | {} | {:.12} | {:.12} | {} |",
                r.state,
                subset.join(","),
                r.m,
                r.expected.as_deref().unwrap_or("-"),
                r.computed,
                r.error.map_or("-".to_string(), |e| format!("{e:.2e}")),
                r.raw_sum,
                r.normalization,
                r.status
            );
        }
        out.push_str("\nCalibration constants: ");
        let cal: Vec<String> = self
            .calibration
            .iter()
            .map(|(m, n)| format!("𝒩({m}) = {n:.12}"))
            .collect();
        out.push_str(&cal.join(", "));
        out.push('\n');
        let hard = self.hard_failures();
        let soft = self.calibration_failures();
        out.push('\n');
        if hard.is_empty() && soft.is_empty() {
            out.push_str("All cells match.\n");
        }
        for r in hard {
            let _ = writeln!(out, "MISMATCH (m = 2 / Werner): {} {:?}", r.state, r.subset);
        }
        for r in soft {
            let _ = writeln!(
                out,
                "CALIBRATION-HYPOTHESIS FAILURE: {} {:?}: expected {}, computed {:.15} (raw sum {:.15}, 𝒩 = {:.12})",
                r.state,
                r.subset,
                r.expected.as_deref().unwrap_or("-"),
                r.computed,
                r.raw_sum,
                r.normalization
            );
        }
        out
    }
}

/// One reference state and its expected values per subset.
pub struct GoldenState {
    pub name: &'static str,
    pub state: PureState,
    /// `(subset, numerator, denominator)` for every subset of size ≥ 2.
    pub expected: Vec<(Vec<usize>, i64, i64)>,
}

fn uniform(n: usize, by_size: &[(usize, (i64, i64))]) -> Vec<(Vec<usize>, i64, i64)> {
    subsets_min2(n)
        .into_iter()
        .map(|s| {
            let (_, (p, q)) = by_size
                .iter()
                .find(|(m, _)| *m == s.len())
                .expect("size listed");
            (s, *p, *q)
        })
        .collect()
}

fn with_pattern(n: usize, value: impl Fn(&[usize]) -> (i64, i64)) -> Vec<(Vec<usize>, i64, i64)> {
    subsets_min2(n)
        .into_iter()
        .map(|s| {
            let (p, q) = value(&s);
            (s, p, q)
        })
        .collect()
}

/// Every state and cell of both reference tables.
pub fn golden_states() -> Result<Vec<GoldenState>> {
    let zero = PureState::basis(crate::QuditRegister::qubits(1)?, &[0])?;
    let bell = catalog::bell();
    let within = |s: &[usize], block: &[usize]| s.iter().all(|x| block.contains(x));
    Ok(vec![
        GoldenState {
            name: "GHZ3",
            state: catalog::ghz(3)?,
            expected: uniform(3, &[(2, (1, 3)), (3, (1, 1))]),
        },
        GoldenState {
            name: "W3",
            state: catalog::w(3)?,
            expected: uniform(3, &[(2, (88, 243)), (3, (280, 729))]),
        },
        GoldenState {
            name: "Bell⊗|0>",
            state: bell.tensor_product(&zero)?,
            expected: with_pattern(3, |s| if s == [1, 2] { (1, 1) } else { (0, 1) }),
        },
        GoldenState {
            name: "GHZ4",
            state: catalog::ghz(4)?,
            expected: uniform(4, &[(2, (1, 3)), (3, (0, 1)), (4, (1, 1))]),
        },
        GoldenState {
            name: "W4",
            state: catalog::w(4)?,
            expected: uniform(4, &[(2, (3, 16)), (3, (7, 64)), (4, (51, 256))]),
        },
        GoldenState {
            name: "phi6",
            state: catalog::phi6(),
            expected: uniform(4, &[(2, (1, 3)), (3, (0, 1)), (4, (7, 27))]),
        },
        GoldenState {
            name: "phi4",
            state: catalog::phi4(),
            expected: with_pattern(4, |s| match s.len() {
                2 if s == [1, 2] || s == [3, 4] => (1, 3),
                2 | 3 => (0, 1),
                _ => (1, 3),
            }),
        },
        GoldenState {
            name: "GHZ3⊗|0>",
            state: catalog::ghz(3)?.tensor_product(&zero)?,
            expected: with_pattern(4, |s| match s.len() {
                2 if within(s, &[1, 2, 3]) => (1, 3),
                3 if s == [1, 2, 3] => (1, 1),
                _ => (0, 1),
            }),
        },
        GoldenState {
            name: "Bell⊗Bell",
            state: bell.tensor_product(&bell)?,
            expected: with_pattern(4, |s| {
                if s == [1, 2] || s == [3, 4] {
                    (1, 1)
                } else {
                    (0, 1)
                }
            }),
        },
    ])
}

/// Werner fidelities checked against the closed form, as exact rationals.
pub const WERNER_FIDELITIES: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

fn row(
    state: &str,
    subset: Vec<usize>,
    expected: Ratio<i64>,
    computed: f64,
    raw: f64,
    norm: f64,
) -> TableRow {
    let exp = expected.to_f64().expect("small rational");
    let error = (computed - exp).abs();
    TableRow {
        state: state.to_string(),
        m: subset.len(),
        subset,
        expected: Some(expected.to_string()),
        computed,
        error: Some(error),
        status: if error < MATCH_TOL {
            "match"
        } else {
            "mismatch"
        }
        .to_string(),
        raw_sum: raw,
        normalization: norm,
    }
}

/// Recompute every cell of both tables plus the Werner checks.
pub fn reproduce_tables() -> Result<TableReport> {
    let mut rows = Vec::new();
    for g in golden_states()? {
        for (subset, p, q) in &g.expected {
            let r = measure_b(&g.state, subset, None)?;
            rows.push(row(
                g.name,
                subset.clone(),
                Ratio::new(*p, *q),
                r.value,
                r.raw_sum,
                r.normalization,
            ));
        }
    }
    for (p, q) in WERNER_FIDELITIES {
        let f = Ratio::new(p, q);
        let rho = State::Mixed(catalog::werner(f.to_f64().expect("small"))?);
        let r = measure_b(&rho, &[1, 2], None)?;
        let t = f * 4 - 1;
        let expected = t * t / 9;
        rows.push(row(
            &format!("werner({})", f.to_f64().expect("small")),
            vec![1, 2],
            expected,
            r.value,
            r.raw_sum,
            r.normalization,
        ));
    }
    let mut calibration = BTreeMap::new();
    for m in 2..=4 {
        calibration.insert(m.to_string(), calibrate_normalization(m, 2)?);
    }
    Ok(TableReport { rows, calibration })
}
