use std::fs;
use std::path::Path;

use qcorr::measure::{
    calibration, connected_tensor_capped, correlation_tensor, measure_b_with, MeasureConfig,
};
use qcorr::properties::{run_property, PropertyCheck};
use qcorr::roof::{roof_b_with, RoofBudget, StopReason};
use qcorr::tables::reproduce_tables;
use qcorr::{generator_basis, MeasureResult, QuditRegister};
use serde::Serialize;

use crate::input::{load_state, parse_list, parse_subset, Loaded};
use crate::{CliError, RoofArgs, StateArgs};

/// Label used for every convex-roof value.
const ROOF_LABEL: &str = "roof (upper bound)";

fn load(args: &StateArgs) -> Result<(Loaded, Vec<usize>), CliError> {
    let dims = args
        .dims
        .as_deref()
        .map(|d| parse_list(d, "--dims"))
        .transpose()?;
    let loaded = load_state(&args.state, dims.as_deref())?;
    let subset = parse_subset(args.subset.as_deref(), loaded.state.register())?;
    Ok((loaded, subset))
}

fn config(args: &StateArgs, norm: Option<f64>) -> Result<MeasureConfig, CliError> {
    if let Some(n) = norm {
        if !(n.is_finite() && n > 0.0) {
            return Err(CliError::Input(format!(
                "--norm must be a positive number, got {n}"
            )));
        }
    }
    Ok(MeasureConfig {
        normalization: norm,
        max_order: args.max_qubits,
    })
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("plain data serializes")
    );
}

fn fmt_subset(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Serialize)]
struct ComputeReport<'a> {
    state: &'a str,
    dims: &'a [usize],
    #[serde(flatten)]
    result: &'a MeasureResult,
    normalization_source: &'static str,
}

pub fn compute(args: &StateArgs, norm: Option<f64>) -> Result<(), CliError> {
    let (loaded, subset) = load(args)?;
    let result = measure_b_with(&loaded.state, &subset, &config(args, norm)?)?;
    let source = if norm.is_some() {
        "override"
    } else {
        "ghz-calibration"
    };
    if args.json {
        print_json(&ComputeReport {
            state: &loaded.label,
            dims: loaded.state.register().dims(),
            result: &result,
            normalization_source: source,
        });
    } else {
        let m = subset.len();
        println!("state    {}", loaded.label);
        println!("subset   {}", fmt_subset(&subset));
        println!("B({m})     {:.15}", result.value);
        println!("raw sum  {:.15}", result.raw_sum);
        println!("N({m})     {:.15} ({source})", result.normalization);
    }
    Ok(())
}

#[derive(Serialize)]
struct TensorEntry {
    index: Vec<usize>,
    label: String,
    value: f64,
}

#[derive(Serialize)]
struct TensorReport {
    subset: Vec<usize>,
    shape: Vec<usize>,
    connected: bool,
    squared_norm: f64,
    entries: Vec<TensorEntry>,
}

pub fn tensor(args: &StateArgs, raw: bool, all: bool) -> Result<(), CliError> {
    let (loaded, subset) = load(args)?;
    if subset.len() > args.max_qubits {
        return Err(qcorr::Error::InvalidSubset(format!(
            "subset of {} sites exceeds --max-qubits {}",
            subset.len(),
            args.max_qubits
        ))
        .into());
    }
    let t = if raw {
        correlation_tensor(&loaded.state, &subset)?
    } else {
        connected_tensor_capped(&loaded.state, &subset, args.max_qubits)?
    };
    let reg: &QuditRegister = loaded.state.register();
    let bases = subset
        .iter()
        .map(|&s| generator_basis(reg.dim(s)))
        .collect::<Result<Vec<_>, _>>()?;
    let entries: Vec<TensorEntry> = t
        .indexed()
        .filter(|(_, v)| all || v.abs() > 1e-14)
        .map(|(index, value)| {
            let label = index
                .iter()
                .zip(&bases)
                .map(|(&i, b)| b.label(i))
                .collect::<Vec<_>>()
                .join(",");
            TensorEntry {
                index,
                label,
                value,
            }
        })
        .collect();
    let report = TensorReport {
        subset: subset.clone(),
        shape: t.shape().to_vec(),
        connected: !raw,
        squared_norm: t.squared_norm(),
        entries,
    };
    if args.json {
        print_json(&report);
    } else {
        let name = if raw { "M" } else { "M'" };
        println!(
            "{name} on {} (shape {:?})",
            fmt_subset(&subset),
            report.shape
        );
        for e in &report.entries {
            println!("{name}({}) = {:.15}", e.label, e.value);
        }
        if report.entries.is_empty() {
            println!("(all entries vanish)");
        }
        println!("sum of squares = {:.15}", report.squared_norm);
    }
    Ok(())
}

pub fn tables(
    json: bool,
    markdown_out: Option<&Path>,
    json_out: Option<&Path>,
) -> Result<(), CliError> {
    let report = reproduce_tables()?;
    let markdown = report.to_markdown();
    let json_text = serde_json::to_string_pretty(&report).expect("plain data serializes");
    let write = |path: &Path, text: &str| {
        fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))
    };
    if let Some(p) = markdown_out {
        write(p, &markdown)?;
    }
    if let Some(p) = json_out {
        write(p, &json_text)?;
    }
    if json {
        println!("{json_text}");
    } else {
        print!("{markdown}");
    }
    if report.hard_failures().is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

#[derive(Serialize)]
struct CalibrationReport {
    m: usize,
    d: usize,
    normalization: f64,
    ghz_raw_sum: f64,
}

pub fn calibrate(m: usize, d: usize, json: bool) -> Result<(), CliError> {
    let c = calibration(m, d)?;
    if json {
        print_json(&CalibrationReport {
            m,
            d,
            normalization: c.ghz_raw_sum,
            ghz_raw_sum: c.ghz_raw_sum,
        });
    } else {
        println!("N({m}) = {:.15}  (d = {d})", c.ghz_raw_sum);
        println!("GHZ raw connected sum = {:.15}", c.ghz_raw_sum);
    }
    Ok(())
}

#[derive(Serialize)]
struct RoofReport<'a> {
    kind: &'static str,
    state: &'a str,
    subset: &'a [usize],
    value: f64,
    normalization: f64,
    direct_value: f64,
    eigen_value: f64,
    restarts: usize,
    best_restart: usize,
    iterations: usize,
    total_iterations: usize,
    converged: bool,
    stop: StopReason,
    spread: f64,
    ensemble_size: usize,
    weights: &'a [f64],
    reconstruction_error: f64,
    seed: u64,
}

pub fn roof(args: &StateArgs, norm: Option<f64>, budget: &RoofArgs) -> Result<(), CliError> {
    let (loaded, subset) = load(args)?;
    let cfg = config(args, norm)?;
    let rho = loaded.state.to_density();
    let b = RoofBudget {
        restarts: budget.restarts,
        max_iterations: budget.max_iterations,
        k_max: budget.k_max,
        seed: budget.seed,
    };
    let r = roof_b_with(&rho, &subset, &b, &cfg)?;
    let direct = measure_b_with(&loaded.state, &subset, &cfg)?;
    let report = RoofReport {
        kind: ROOF_LABEL,
        state: &loaded.label,
        subset: &subset,
        value: r.value,
        normalization: r.normalization,
        direct_value: direct.value,
        eigen_value: r.eigen_value,
        restarts: r.restarts,
        best_restart: r.best_restart,
        iterations: r.iterations,
        total_iterations: r.total_iterations,
        converged: r.converged,
        stop: r.outcomes[r.best_restart].stop,
        spread: r.spread,
        ensemble_size: r.ensemble.len(),
        weights: &r.ensemble.weights,
        reconstruction_error: r.ensemble.reconstruction_error(&rho),
        seed: budget.seed,
    };
    if args.json {
        print_json(&report);
    } else {
        let m = subset.len();
        let rows = [
            ("state".to_string(), loaded.label.clone()),
            ("subset".to_string(), fmt_subset(&subset)),
            (
                format!("B({m}) {ROOF_LABEL}"),
                format!("{:.12}", report.value),
            ),
            (
                format!("direct B({m})"),
                format!("{:.12}", report.direct_value),
            ),
            (
                "eigen-ensemble value".to_string(),
                format!("{:.12}", report.eigen_value),
            ),
            (format!("N({m})"), format!("{:.12}", report.normalization)),
            (
                "restarts".to_string(),
                format!(
                    "{} (best #{}, spread {:.3e}, seed {})",
                    report.restarts, report.best_restart, report.spread, report.seed
                ),
            ),
            (
                "iterations".to_string(),
                format!(
                    "{} (total {}), stop: {:?}, converged: {}",
                    report.iterations, report.total_iterations, report.stop, report.converged
                ),
            ),
            (
                "ensemble".to_string(),
                format!(
                    "{} members, reconstruction error {:.1e}",
                    report.ensemble_size, report.reconstruction_error
                ),
            ),
        ];
        let width = rows
            .iter()
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        for (k, v) in rows {
            println!("{k:<width$}  {v}");
        }
    }
    Ok(())
}

pub fn props(check: &str, trials: usize, seed: u64, json: bool) -> Result<(), CliError> {
    let check: PropertyCheck = check.parse()?;
    let r = run_property(check, trials, seed)?;
    if json {
        print_json(&r);
    } else {
        let (stat, rel) = match check {
            PropertyCheck::Nonneg => ("min B", ">="),
            _ => ("max deviation", "<"),
        };
        println!(
            "{} {check}: {} trials ({} evaluations), seed {seed}, {stat} {:.3e} (required {rel} {:e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.trials,
            r.evaluations,
            r.worst,
            r.threshold
        );
    }
    if r.passed {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
