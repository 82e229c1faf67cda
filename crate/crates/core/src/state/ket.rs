//! Parser and renderer for bra-ket state expressions such as
//! `(|01> - |10>)/sqrt(2)`.
//!
//! ```text
//! expr   := term (("+" | "-") term)* ;
//! term   := coeff? "*"? atom ("/" scalar)? ;
//! atom   := ket | "(" expr ")" ;
//! ket    := "|" digit+ ">" ;
//! coeff  := scalar | "i" | scalar "i" ;
//! scalar := number | number "/" number | "sqrt(" number ")" | number "/sqrt(" number ")" ;
//! ```
//!
//! An expression (or a parenthesised sub-expression) may also open with a
//! sign. Coefficients are evaluated exactly and only converted to floating
//! point once the whole expression has been reduced.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{Monomial, RadicalSum};
use super::PureState;
use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::register::QuditRegister;

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum KetExpression {
    /// Basis ket; `pos` is the byte offset of its opening `|`.
    Ket {
        digits: Vec<usize>,
        pos: usize,
    },
    Scaled(Monomial, Box<KetExpression>),
    Sum(Vec<KetExpression>),
}

impl KetExpression {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(
                p.pos,
                format!("unexpected `{}`", p.peek_char()),
            ));
        }
        Ok(expr)
    }

    /// Number of digits in the first ket literal, used to infer the site
    /// count when no register is supplied.
    pub fn first_ket_len(&self) -> usize {
        match self {
            KetExpression::Ket { digits, .. } => digits.len(),
            KetExpression::Scaled(_, e) => e.first_ket_len(),
            KetExpression::Sum(terms) => terms.first().map_or(0, |t| t.first_ket_len()),
        }
    }

    /// Exact amplitudes keyed by flat basis index.
    pub fn evaluate(&self, register: &QuditRegister) -> Result<BTreeMap<usize, RadicalSum>> {
        let mut out = BTreeMap::new();
        self.accumulate(register, &Monomial::rational(BigRational::one()), &mut out)?;
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn accumulate(
        &self,
        register: &QuditRegister,
        factor: &Monomial,
        out: &mut BTreeMap<usize, RadicalSum>,
    ) -> Result<()> {
        match self {
            KetExpression::Ket { digits, pos } => {
                if digits.len() != register.num_sites() {
                    return Err(Error::parse(
                        *pos,
                        format!(
                            "ket has {} digits but the register has {} sites",
                            digits.len(),
                            register.num_sites()
                        ),
                    ));
                }
                for (k, (&x, &d)) in digits.iter().zip(register.dims()).enumerate() {
                    if x >= d {
                        return Err(Error::parse(
                            pos + 1 + k,
                            format!("digit {x} out of range for site {} of dimension {d}", k + 1),
                        ));
                    }
                }
                out.entry(register.index_of(digits))
                    .or_default()
                    .add(&RadicalSum::from_monomial(factor));
            }
            KetExpression::Scaled(m, inner) => inner.accumulate(register, &factor.mul(m), out)?,
            KetExpression::Sum(terms) => {
                for t in terms {
                    t.accumulate(register, factor, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Parse `text` against `register` and return the normalized state.
pub fn parse_ket_expression(text: &str, register: &QuditRegister) -> Result<PureState> {
    let expr = KetExpression::parse(text)?;
    let exact = expr.evaluate(register)?;
    if exact.is_empty() {
        return Err(Error::InvalidParameter(
            "expression evaluates to the zero vector".into(),
        ));
    }
    let mut amps = vec![ZERO; register.total_dim()];
    for (k, v) in exact {
        amps[k] = v.to_complex();
    }
    PureState::new(register.clone(), amps)
}

/// Render a state in the ket grammar. Amplitudes are written as shortest
/// round-trip decimals, so parsing the output reproduces the state.
pub fn render(state: &PureState) -> String {
    let reg = state.register();
    let mut out = String::new();
    let mut push = |value: f64, imaginary: bool, index: usize| {
        if value == 0.0 {
            return;
        }
        let sign = if value < 0.0 { "-" } else { "+" };
        if out.is_empty() {
            if value < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{}", value.abs()));
        if imaginary {
            out.push('i');
        }
        out.push('|');
        for d in reg.digits(index) {
            out.push_str(&d.to_string());
        }
        out.push('>');
    };
    for (k, a) in state.amplitudes().iter().enumerate() {
        push(a.re, false, k);
        push(a.im, true, k);
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.src.get(self.pos).map_or('\0', |&b| b as char)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(Error::parse(
                self.pos,
                format!("expected `{}`, found end of input", b as char),
            ))
        } else {
            Err(Error::parse(
                self.pos,
                format!("expected `{}`, found `{}`", b as char, self.peek_char()),
            ))
        }
    }

    fn expr(&mut self) -> Result<KetExpression> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negate {
                KetExpression::Scaled(Monomial::rational(-BigRational::one()), Box::new(t))
            } else {
                t
            });
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            KetExpression::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<KetExpression> {
        let coeff = self.coeff()?;
        if coeff.is_some() {
            self.eat(b'*');
        }
        let mut atom = self.atom()?;
        if let Some(c) = coeff {
            atom = KetExpression::Scaled(c, Box::new(atom));
        }
        if self.eat(b'/') {
            let at = self.pos;
            let divisor = self.scalar_after_slash()?;
            let inv = divisor
                .inverse()
                .ok_or_else(|| Error::parse(at, "division by zero"))?;
            atom = KetExpression::Scaled(inv, Box::new(atom));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<KetExpression> {
        match self.peek() {
            Some(b'|') => self.ket(),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            None => Err(Error::parse(
                self.pos,
                "expected a ket or `(`, found end of input",
            )),
            Some(_) => Err(Error::parse(
                self.pos,
                format!("expected a ket or `(`, found `{}`", self.peek_char()),
            )),
        }
    }

    fn ket(&mut self) -> Result<KetExpression> {
        let start = self.pos;
        self.pos += 1;
        let mut digits = Vec::new();
        while let Some(&b) = self.src.get(self.pos) {
            if b.is_ascii_digit() {
                digits.push((b - b'0') as usize);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(Error::parse(self.pos, "ket needs at least one digit"));
        }
        if self.src.get(self.pos) != Some(&b'>') {
            return Err(Error::parse(self.pos, "expected `>` closing the ket"));
        }
        self.pos += 1;
        Ok(KetExpression::Ket { digits, pos: start })
    }

    /// Optional coefficient in front of an atom.
    fn coeff(&mut self) -> Result<Option<Monomial>> {
        let scalar = match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'.' => Some(self.scalar()?),
            Some(b's') => Some(self.scalar()?),
            _ => None,
        };
        let imaginary = self.eat(b'i');
        Ok(match (scalar, imaginary) {
            (Some(s), true) => Some(s.mul(&Monomial::i())),
            (None, true) => Some(Monomial::i()),
            (s, false) => s,
        })
    }

    /// number | number "/" number | sqrt(number) | number "/sqrt(" number ")"
    fn scalar(&mut self) -> Result<Monomial> {
        if self.eat_keyword("sqrt") {
            return self.sqrt_body();
        }
        let n = self.number()?;
        let save = self.pos;
        if self.eat(b'/') {
            match self.peek() {
                Some(b) if b.is_ascii_digit() || b == b's' || b == b'.' => {
                    let at = self.pos;
                    let d = self.scalar_after_slash()?;
                    let inv = d
                        .inverse()
                        .ok_or_else(|| Error::parse(at, "division by zero"))?;
                    return Ok(Monomial::rational(n).mul(&inv));
                }
                // `/` belongs to something else; leave it
                _ => self.pos = save,
            }
        }
        Ok(Monomial::rational(n))
    }

    /// Divisor following a `/`: a number or `sqrt(number)`.
    fn scalar_after_slash(&mut self) -> Result<Monomial> {
        if self.eat_keyword("sqrt") {
            self.sqrt_body()
        } else {
            Ok(Monomial::rational(self.number()?))
        }
    }

    fn sqrt_body(&mut self) -> Result<Monomial> {
        self.expect(b'(')?;
        let at = self.pos;
        let n = self.number()?;
        self.expect(b')')?;
        Monomial::sqrt(&n).ok_or_else(|| Error::parse(at, "radicand too large"))
    }

    fn number(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        let mut int_part = String::new();
        let mut frac_part = String::new();
        let mut seen_dot = false;
        while let Some(&b) = self.src.get(self.pos) {
            match b {
                b'0'..=b'9' if seen_dot => frac_part.push(b as char),
                b'0'..=b'9' => int_part.push(b as char),
                b'.' if !seen_dot => seen_dot = true,
                _ => break,
            }
            self.pos += 1;
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(Error::parse(start, "expected a number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::parse(start, "bad number"))?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        debug_assert!(!value.denom().is_zero());
        Ok(value)
    }
}
