//! Rational functions over ℚ and a small expression parser for them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::RatPoly;
use super::rational::Rational;

/// `num / den`, reduced so that `gcd(num, den) = 1` and `den` is monic.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    /// Panics if `den` is zero.
    pub fn new(num: RatPoly, den: RatPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: RatPoly::zero(),
            den: RatPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(RatPoly::constant(c))
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFunc {
            num: p,
            den: RatPoly::one(),
        }
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&RatPoly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// `None` when dividing by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Some(Self::new(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// `r(c z)`
    pub fn dilate(&self, c: &Rational) -> Self {
        Self::new(self.num.dilate(c), self.den.dilate(c))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Laurent expansion at `c`: returns `(k, coeffs)` with
    /// `r(c + w) = Σ_j coeffs[j] w^{j-k}`, `k` the pole order (0 when regular),
    /// `len` coefficients produced.
    pub fn laurent_at(&self, c: &Rational, len: usize) -> (usize, Vec<Rational>) {
        let num = self.num.shift(c);
        let den = self.den.shift(c);
        let k = den.valuation().unwrap_or(0);
        let den_coeffs = &den.coeffs()[k..];
        // power series division num(w) / (den(w) / w^k)
        let d0_inv = den_coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for j in 0..len {
            let mut acc = num.coeff(j);
            for i in 1..=j.min(den_coeffs.len().saturating_sub(1)) {
                acc -= &den_coeffs[i] * &out[j - i];
            }
            out.push(acc * &d0_inv);
        }
        (k, out)
    }

    /// Pole order at `c` (0 if `c` is not a pole).
    pub fn pole_order_at(&self, c: &Rational) -> usize {
        self.den.shift(c).valuation().unwrap_or(0)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseExprError {
    /// 1-based column inside the expression string.
    pub column: usize,
    pub message: String,
}

impl FromStr for RatFunc {
    type Err = ParseExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ExprParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(r)
    }
}

/// Parses a polynomial string; fails if the expression has a nontrivial denominator.
pub fn parse_poly(s: &str) -> Result<RatPoly, ParseExprError> {
    let r: RatFunc = s.parse()?;
    r.as_poly().cloned().ok_or(ParseExprError {
        column: 1,
        message: "expected a polynomial, found a rational function".into(),
    })
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> ParseExprError {
        ParseExprError {
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ParseExprError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).ok_or(ParseExprError {
                        column: at + 1,
                        message: "division by zero".into(),
                    })?;
                }
                // implicit multiplication, e.g. `3z` or `2(z+1)`
                Some(b'z' | b'(') => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ParseExprError {
                    column: start + 1,
                    message: "expected a nonnegative integer exponent".into(),
                })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ParseExprError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(RatFunc::from_poly(RatPoly::z()))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RatFunc::constant(Rational::from_integer(n)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}
