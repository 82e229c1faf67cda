//! Turning command-line strings into states and site lists.

use std::fs;

use qcorr::state::catalog::catalog_state;
use qcorr::state::KetExpression;
use qcorr::{parse_ket_expression, DensityMatrix, Error, PureState, QuditRegister, State};

use crate::CliError;

/// Where a state came from, for error rendering.
pub struct Loaded {
    pub state: State,
    pub label: String,
}

pub fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .enumerate()
        .map(|(k, t)| {
            t.parse::<usize>().map_err(|_| {
                CliError::Input(format!(
                    "{what}: entry {} (`{t}`) is not a nonnegative integer",
                    k + 1
                ))
            })
        })
        .collect()
}

/// Sites `1..=n` for `all` or a missing flag, otherwise the listed sites.
pub fn parse_subset(text: Option<&str>, register: &QuditRegister) -> Result<Vec<usize>, CliError> {
    match text.map(str::trim) {
        None | Some("all") => Ok((1..=register.num_sites()).collect()),
        Some(t) => parse_list(t, "--subset"),
    }
}

fn ket_register(text: &str, dims: Option<&[usize]>) -> Result<QuditRegister, CliError> {
    match dims {
        Some(d) => Ok(QuditRegister::new(d.to_vec())?),
        None => {
            let expr = KetExpression::parse(text).map_err(|e| CliError::located(e, text))?;
            Ok(QuditRegister::qubits(expr.first_ket_len())?)
        }
    }
}

fn parse_ket(text: &str, dims: Option<&[usize]>) -> Result<State, CliError> {
    let reg = ket_register(text, dims)?;
    parse_ket_expression(text, &reg)
        .map(State::from)
        .map_err(|e| CliError::located(e, text))
}

fn parse_json_state(text: &str) -> Result<State, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!(
            "state file is not valid JSON (line {}, column {}): {e}",
            e.line(),
            e.column()
        ))
    })?;
    if value.get("entries").is_some() {
        Ok(DensityMatrix::from_json(text)?.into())
    } else if value.get("amplitudes").is_some() {
        let s: PureState = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("pure-state JSON: {e}")))?;
        Ok(s.into())
    } else {
        Err(CliError::Input(
            "state JSON needs either `entries` (density matrix) or `amplitudes` (pure state)"
                .into(),
        ))
    }
}

/// Resolve `--state`: `@file` (JSON or ket text), a catalog name, or an
/// inline ket expression.
pub fn load_state(spec: &str, dims: Option<&[usize]>) -> Result<Loaded, CliError> {
    let spec = spec.trim();
    let state = if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read `{path}`: {e}")))?;
        let text = text.trim();
        if text.starts_with('{') {
            parse_json_state(text)?
        } else {
            parse_ket(text, dims)?
        }
    } else {
        match catalog_state(spec) {
            Ok(s) => s,
            Err(Error::UnknownState(_)) if spec.contains('|') => parse_ket(spec, dims)?,
            Err(e) => return Err(e.into()),
        }
    };
    if let Some(d) = dims {
        if state.register().dims() != d {
            return Err(Error::Shape(format!(
                "state has dims {:?} but --dims says {d:?}",
                state.register().dims()
            ))
            .into());
        }
    }
    Ok(Loaded {
        state,
        label: spec.to_string(),
    })
}
