//! Named states used throughout the tables and tests.
//!
//! `bell` is the singlet `(|01> - |10>)/√2`; `werner(F)` is parametrized by
//! its singlet fidelity `F`.

use num_complex::Complex64;

use super::{parse_ket_expression, DensityMatrix, PureState, State};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};
use crate::register::QuditRegister;

pub fn bell() -> PureState {
    parse_ket_expression(
        "(|01> - |10>)/sqrt(2)",
        &QuditRegister::qubits(2).expect("2 qubits"),
    )
    .expect("literal parses")
}

/// `(|0…0> + |1…1>)/√2` on `n ≥ 2` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    ghz_qudit(n, 2)
}

/// `(Σ_k |k…k>)/√d` on `n ≥ 2` sites of dimension `d`.
pub fn ghz_qudit(n: usize, d: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ghz needs n >= 2, got {n}"
        )));
    }
    let register = QuditRegister::new(vec![d; n])?;
    let mut amps = vec![ZERO; register.total_dim()];
    for k in 0..d {
        amps[register.index_of(&vec![k; n])] = Complex64::new(1.0, 0.0);
    }
    PureState::new(register, amps)
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("w needs n >= 2, got {n}")));
    }
    let register = QuditRegister::qubits(n)?;
    let mut amps = vec![ZERO; register.total_dim()];
    for k in 0..n {
        amps[1 << k] = Complex64::new(1.0, 0.0);
    }
    PureState::new(register, amps)
}

pub fn phi4() -> PureState {
    parse_ket_expression(
        "(|0000> + |0011> + |1100> - |1111>)/2",
        &QuditRegister::qubits(4).expect("4 qubits"),
    )
    .expect("literal parses")
}

pub fn phi6() -> PureState {
    parse_ket_expression(
        "(|0011> + |0101> + |1001> + |1010> + |0110> + |1100>)/sqrt(6)",
        &QuditRegister::qubits(4).expect("4 qubits"),
    )
    .expect("literal parses")
}

/// `a|00> + b|11>` with `b = √(1 - a²)`, `0 ≤ a ≤ 1`.
pub fn schmidt(a: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "schmidt coefficient {a} outside [0, 1]"
        )));
    }
    let b = (1.0 - a * a).max(0.0).sqrt();
    PureState::new(
        QuditRegister::qubits(2)?,
        vec![Complex64::new(a, 0.0), ZERO, ZERO, Complex64::new(b, 0.0)],
    )
}

/// `F |ψ⁻><ψ⁻| + (1-F)/3 (I - |ψ⁻><ψ⁻|)`.
pub fn werner(fidelity: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::InvalidParameter(format!(
            "werner fidelity {fidelity} outside [0, 1]"
        )));
    }
    let singlet = bell().to_density();
    let proj = singlet.matrix();
    let id = CMatrix::identity(4, 4);
    let rest = (1.0 - fidelity) / 3.0;
    let m = proj * Complex64::new(fidelity, 0.0) + (id - proj) * Complex64::new(rest, 0.0);
    DensityMatrix::new(QuditRegister::qubits(2)?, m)
}

pub fn product(factors: &[PureState]) -> Result<PureState> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("product of no states".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, f| acc.tensor_product(f))
}

/// Look up a state by textual name.
///
/// Accepted forms: `bell`, `phi4`, `phi6`, `ghz(n)` / `ghz:n`,
/// `ghz(n,d)`, `w(n)`, `werner(F)`, `schmidt(a)`, and
/// `product(A, B, ...)` whose factors are catalog names or qubit ket
/// expressions such as `|0>`.
pub fn catalog_state(spec: &str) -> Result<State> {
    let spec = spec.trim();
    let (name, args) = split_call(spec)?;
    let arg_usize = |k: usize| -> Result<usize> {
        let a = args
            .get(k)
            .ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs argument {}", k + 1)))?;
        a.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("`{a}` is not a nonnegative integer")))
    };
    let arg_f64 = |k: usize| -> Result<f64> {
        let a = args
            .get(k)
            .ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs argument {}", k + 1)))?;
        a.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("`{a}` is not a number")))
    };
    let expect_args = |n: usize| -> Result<()> {
        if args.len() > n {
            Err(Error::InvalidParameter(format!(
                "`{name}` takes at most {n} argument(s)"
            )))
        } else {
            Ok(())
        }
    };
    let state: State = match name {
        "bell" | "singlet" => {
            expect_args(0)?;
            bell().into()
        }
        "phi4" => {
            expect_args(0)?;
            phi4().into()
        }
        "phi6" => {
            expect_args(0)?;
            phi6().into()
        }
        "ghz" => {
            expect_args(2)?;
            let d = if args.len() == 2 { arg_usize(1)? } else { 2 };
            ghz_qudit(arg_usize(0)?, d)?.into()
        }
        "w" => {
            expect_args(1)?;
            w(arg_usize(0)?)?.into()
        }
        "werner" => {
            expect_args(1)?;
            werner(arg_f64(0)?)?.into()
        }
        "schmidt" => {
            expect_args(1)?;
            schmidt(arg_f64(0)?)?.into()
        }
        "product" => {
            if args.is_empty() {
                return Err(Error::InvalidParameter("product of no states".into()));
            }
            let mut acc: Option<State> = None;
            for a in &args {
                let f = factor_state(a)?;
                acc = Some(match acc {
                    None => f,
                    Some(prev) => prev.tensor_product(&f)?,
                });
            }
            acc.expect("nonempty")
        }
        other => return Err(Error::UnknownState(other.to_string())),
    };
    Ok(state)
}

fn factor_state(text: &str) -> Result<State> {
    let text = text.trim();
    if text.contains('|') {
        let expr = super::KetExpression::parse(text)?;
        let register = QuditRegister::qubits(expr.first_ket_len().max(1))?;
        Ok(parse_ket_expression(text, &register)?.into())
    } else {
        catalog_state(text)
    }
}

/// `name`, `name:a,b`, or `name(a, b)`, with commas inside nested
/// parentheses left alone.
fn split_call(spec: &str) -> Result<(&str, Vec<&str>)> {
    if let Some(open) = spec.find('(') {
        if !spec.ends_with(')') {
            return Err(Error::parse(
                spec.len(),
                "expected `)` closing the argument list",
            ));
        }
        let name = spec[..open].trim();
        let inner = &spec[open + 1..spec.len() - 1];
        Ok((name, split_top_level(inner)))
    } else if let Some((name, rest)) = spec.split_once(':') {
        Ok((name.trim(), split_top_level(rest)))
    } else {
        Ok((spec, Vec::new()))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(s: State) -> PureState {
        match s {
            State::Pure(p) => p,
            State::Mixed(_) => panic!("expected a pure state"),
        }
    }

    #[test]
    fn ghz3_amplitudes() {
        let g = ghz(3).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (k, a) in g.amplitudes().iter().enumerate() {
            let expect = if k == 0 || k == 7 { h } else { 0.0 };
            assert!((a.re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn phi4_signs() {
        let p = phi4();
        let a = p.amplitudes();
        assert!((a[0].re - 0.5).abs() < 1e-15);
        assert!((a[3].re - 0.5).abs() < 1e-15);
        assert!((a[12].re - 0.5).abs() < 1e-15);
        assert!((a[15].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn werner_endpoints() {
        let pure_singlet = werner(1.0).unwrap();
        let proj = bell().to_density();
        assert!((pure_singlet.matrix() - proj.matrix())
            .iter()
            .all(|z| z.norm() < 1e-15));
        let mixed = werner(0.25).unwrap();
        for r in 0..4 {
            assert!((mixed.matrix()[(r, r)].re - 0.25).abs() < 1e-15);
        }
        assert!(werner(1.5).is_err());
        assert!(werner(-0.1).is_err());
    }

    #[test]
    fn lookup_forms() {
        assert_eq!(pure(catalog_state("ghz:3").unwrap()), ghz(3).unwrap());
        assert_eq!(pure(catalog_state("ghz(3)").unwrap()), ghz(3).unwrap());
        assert_eq!(pure(catalog_state("w(4)").unwrap()), w(4).unwrap());
        let psi3 = pure(catalog_state("product(bell, |0>)").unwrap());
        assert_eq!(psi3.register().dims(), &[2, 2, 2]);
        let bb = pure(catalog_state("product(bell,bell)").unwrap());
        assert_eq!(bb, bell().tensor_product(&bell()).unwrap());
        assert!(matches!(catalog_state("werner(0.3)"), Ok(State::Mixed(_))));
        assert!(matches!(catalog_state("nope"), Err(Error::UnknownState(_))));
        assert!(matches!(
            catalog_state("ghz(1)"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            catalog_state("werner(2)"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(catalog_state("bell(3)").is_err());
    }
}
