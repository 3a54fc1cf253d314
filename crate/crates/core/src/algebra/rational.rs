//! Arbitrary-precision integers and rationals.
//!
//! `Rational` is always kept in lowest terms with a positive denominator by
//! `num-rational`; the helpers here cover parsing, canonical formatting and a
//! few integer utilities that the rest of the crate needs.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    InvalidInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The positive denominator of `r` written in reduced form.
pub fn den(r: &Rational) -> Integer {
    r.denom().clone()
}

/// Parses `"p"`, `"-p"` or `"p/q"` (optional surrounding whitespace).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        let t = t.trim();
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::InvalidInteger(t.to_string()));
        }
        t.parse::<BigInt>()
            .map_err(|_| ParseRationalError::InvalidInteger(t.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical exact string: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Wrapper giving `Display` in the canonical exact format.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn floor(r: &Rational) -> Integer {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> Integer {
    r.ceil().to_integer()
}

pub fn factorial(n: usize) -> Integer {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn lcm(a: &Integer, b: &Integer) -> Integer {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    a.lcm(b)
}

/// gcd of all entries (0 for an all-zero slice).
pub fn content(v: &[Integer]) -> Integer {
    let mut g = BigInt::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Divides by the content and makes the first nonzero entry positive.
/// The zero vector is returned unchanged.
pub fn primitive_normalized(mut v: Vec<Integer>) -> Vec<Integer> {
    let g = content(&v);
    if g.is_zero() {
        return v;
    }
    let flip = v
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.sign() == Sign::Minus)
        .unwrap_or(false);
    let g = if flip { -g } else { g };
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Natural logarithm approximation of a positive rational, for diagnostics only.
/// Works for values far outside the `f64` range.
pub fn ln_approx(r: &Rational) -> f64 {
    debug_assert!(r.is_positive());
    ln_int_approx(r.numer()) - ln_int_approx(r.denom())
}

fn ln_int_approx(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Decimal rendering with `digits` digits after the point, truncated toward zero.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.abs() * Rational::from_integer(scale.clone())).to_integer();
    let (ip, fp) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        s.push('.');
        let frac = fp.to_string();
        s.extend(std::iter::repeat('0').take(digits - frac.len()));
        s.push_str(&frac);
    }
    s
}
