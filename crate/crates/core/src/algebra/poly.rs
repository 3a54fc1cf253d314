//! Dense univariate polynomials in `z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, lcm, Integer, Rational};

/// Coefficient ring of a [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_usize(n: usize) -> Self;
}

impl Coeff for BigInt {
    fn from_usize(n: usize) -> Self {
        BigInt::from(n)
    }
}

impl Coeff for Rational {
    fn from_usize(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

/// Polynomial with coefficients indexed by degree. Trailing zeros are never
/// stored, so the zero polynomial has an empty coefficient list and
/// `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<Integer>;
pub type RatPoly = Poly<Rational>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^d`
    pub fn monomial(c: T, d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    pub fn z() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Order of vanishing at `z = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &T::from_usize(i))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// `P(c z)`
    pub fn dilate(&self, c: &T) -> Self {
        let mut pow = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * &pow);
            pow = pow * c;
        }
        Self::new(out)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl IntPoly {
    pub fn to_rat(&self) -> RatPoly {
        self.map(|c| Rational::from_integer(c.clone()))
    }

    pub fn max_abs_coeff(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Integer::zero)
    }
}

impl RatPoly {
    /// Exact conversion when every coefficient is an integer.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Least common multiple of the coefficient denominators (1 for zero).
    pub fn denominator_lcm(&self) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::one(), |acc, c| lcm(&acc, c.denom()))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        let (q, _) = (self * other).div_rem(&g);
        q.monic()
    }

    /// Taylor coefficients of `P(c + w)` in `w`.
    pub fn shift(&self, c: &Rational) -> Self {
        // repeated synthetic division
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            for j in (k + 1..n).rev() {
                let t = &work[j] * c;
                work[j - 1] += t;
            }
            out.push(work[k].clone());
        }
        Self::new(out)
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + &(a.clone() * b);
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coeff> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Coeff> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Coeff> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

fn write_terms<T>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    is_neg: impl Fn(&T) -> bool,
    abs_str: impl Fn(&T) -> String,
) -> fmt::Result {
    if coeffs.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for (d, c) in coeffs.iter().enumerate().rev() {
        let s = abs_str(c);
        if s == "0" {
            continue;
        }
        let neg = is_neg(c);
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let mono = match d {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{d}"),
        };
        match (d, s.as_str()) {
            (0, _) => f.write_str(&s)?,
            (_, "1") => f.write_str(&mono)?,
            _ => write!(f, "{s}*{mono}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.is_negative(), |c| c.abs().to_string())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            &self.coeffs,
            |c| c.is_negative(),
            |c| format_rational(&c.abs()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn rp(c: &[(i64, i64)]) -> RatPoly {
        Poly::new(c.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn derivative_examples() {
        // z^2 + 1 -> 2z
        assert_eq!(rp(&[(1, 1), (0, 1), (1, 1)]).derivative(), rp(&[(0, 1), (2, 1)]));
        // 2 + z -> 1
        assert_eq!(rp(&[(2, 1), (1, 1)]).derivative(), RatPoly::one());
        assert!(RatPoly::constant(int(5)).derivative().is_zero());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(RatPoly::zero().degree(), None);
        assert_eq!(rp(&[(0, 1), (0, 1)]).degree(), None);
        assert_eq!(rp(&[(3, 1)]).degree(), Some(0));
    }

    #[test]
    fn division_and_gcd() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = rp(&[(-2, 1), (1, 1), (1, 1)]);
        let b = rp(&[(3, 1), (-4, 1), (1, 1)]);
        assert_eq!(a.gcd(&b), rp(&[(-1, 1), (1, 1)]));
        let (q, r) = a.div_rem(&rp(&[(-1, 1), (1, 1)]));
        assert_eq!(q, rp(&[(2, 1), (1, 1)]));
        assert!(r.is_zero());
        assert_eq!(a.lcm(&b).degree(), Some(3));
    }

    #[test]
    fn shift_and_dilate() {
        // z^2 at z = 1 + w -> 1 + 2w + w^2
        let p = rp(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(p.shift(&int(1)), rp(&[(1, 1), (2, 1), (1, 1)]));
        assert_eq!(p.dilate(&rat(1, 2)), rp(&[(0, 1), (0, 1), (1, 4)]));
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(rp(&[(1, 1), (-1, 2), (3, 1)]).to_string(), "3*z^2 - 1/2*z + 1");
        assert_eq!(rp(&[(0, 1), (-1, 1)]).to_string(), "-z");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }
}
