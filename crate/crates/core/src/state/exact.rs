//! Exact arithmetic for ket coefficients: finite sums `Σ c_s √s` with complex
//! rational `c_s` and squarefree radicands `s`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest integer we are willing to factor when reducing a radicand.
const MAX_RADICAND: u64 = 1 << 50;

/// A single factor `q · √s` or `q · √s · i`, with `s` squarefree.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: BigRational,
    pub radicand: u64,
    pub imaginary: bool,
}

impl Monomial {
    pub fn rational(q: BigRational) -> Self {
        Self {
            coef: q,
            radicand: 1,
            imaginary: false,
        }
    }

    pub fn i() -> Self {
        Self {
            coef: BigRational::one(),
            radicand: 1,
            imaginary: true,
        }
    }

    /// `√q` for a nonnegative rational `q`. Returns `None` when the radicand
    /// is too large to reduce.
    pub fn sqrt(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        // √(p/r) = √(p·r) / r
        let p = q.numer().to_u64()?;
        let r = q.denom().to_u64()?;
        let pr = p.checked_mul(r).filter(|&x| x <= MAX_RADICAND)?;
        let (outer, inner) = split_square(pr);
        Some(Self {
            coef: BigRational::new(BigInt::from(outer), BigInt::from(r)),
            radicand: inner,
            imaginary: false,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (extra, radicand) = mul_radicals(self.radicand, other.radicand);
        let mut coef = &self.coef * &other.coef * BigRational::from_integer(BigInt::from(extra));
        let imaginary = self.imaginary ^ other.imaginary;
        if self.imaginary && other.imaginary {
            coef = -coef;
        }
        Monomial {
            coef,
            radicand,
            imaginary,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Monomial> {
        if self.coef.is_zero() {
            return None;
        }
        // 1/(q√s) = √s/(q s);  1/i = -i
        let s = BigRational::from_integer(BigInt::from(self.radicand));
        let mut coef = (&self.coef * s).recip();
        if self.imaginary {
            coef = -coef;
        }
        Some(Monomial {
            coef,
            radicand: self.radicand,
            imaginary: self.imaginary,
        })
    }
}

/// `n = outer² · inner` with `inner` squarefree.
fn split_square(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            inner *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outer, inner * n)
}

/// `√a · √b = extra · √rad` for squarefree `a`, `b`.
fn mul_radicals(a: u64, b: u64) -> (u64, u64) {
    let g = num_integer::gcd(a, b);
    (g, (a / g) * (b / g))
}

/// Sum of monomials, kept in canonical form keyed by radicand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RadicalSum {
    terms: BTreeMap<u64, (BigRational, BigRational)>,
}

impl RadicalSum {
    pub fn from_monomial(m: &Monomial) -> Self {
        let mut s = Self::default();
        s.add_monomial(m);
        s
    }

    fn add_monomial(&mut self, m: &Monomial) {
        let entry = self
            .terms
            .entry(m.radicand)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        if m.imaginary {
            entry.1 += &m.coef;
        } else {
            entry.0 += &m.coef;
        }
        if entry.0.is_zero() && entry.1.is_zero() {
            self.terms.remove(&m.radicand);
        }
    }

    pub fn add(&mut self, other: &RadicalSum) {
        for (&rad, (re, im)) in &other.terms {
            self.add_monomial(&Monomial {
                coef: re.clone(),
                radicand: rad,
                imaginary: false,
            });
            self.add_monomial(&Monomial {
                coef: im.clone(),
                radicand: rad,
                imaginary: true,
            });
        }
    }

    pub fn scale(&self, m: &Monomial) -> RadicalSum {
        let mut out = RadicalSum::default();
        for (&rad, (re, im)) in &self.terms {
            for (c, imaginary) in [(re, false), (im, true)] {
                if c.is_zero() {
                    continue;
                }
                let term = Monomial {
                    coef: c.clone(),
                    radicand: rad,
                    imaginary,
                };
                out.add_monomial(&term.mul(m));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(&rad, (re, im))| {
                let r = (rad as f64).sqrt();
                Complex64::new(
                    re.to_f64().unwrap_or(f64::NAN) * r,
                    im.to_f64().unwrap_or(f64::NAN) * r,
                )
            })
            .sum()
    }
}
