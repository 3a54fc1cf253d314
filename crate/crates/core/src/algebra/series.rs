//! Truncated power series with exact rational coefficients.

use num_traits::Zero;

use super::poly::RatPoly;
use super::rational::Rational;

/// `Σ_{k < len} c_k z^k + O(z^len)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatSeries {
    coeffs: Vec<Rational>,
}

impl RatSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        RatSeries { coeffs }
    }

    /// Number of known coefficients (the series is exact modulo `z^len`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, len: usize) -> Self {
        RatSeries::new(self.coeffs[..len.min(self.len())].to_vec())
    }

    /// First nonzero index among the known coefficients.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        RatSeries::new((0..n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        RatSeries::new((0..n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatSeries::new(out)
    }

    /// Product with an exact polynomial; keeps this series' length.
    pub fn mul_poly(&self, p: &RatPoly) -> Self {
        let n = self.len();
        let mut out = vec![Rational::zero(); n];
        for (d, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() || d >= n {
                continue;
            }
            for (k, a) in self.coeffs[..n - d].iter().enumerate() {
                out[k + d] += c * a;
            }
        }
        RatSeries::new(out)
    }

    /// Formal derivative; the result has one coefficient fewer.
    pub fn derivative(&self) -> Self {
        RatSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact partial sum `Σ_{k < len} c_k x^k`.
    pub fn partial_sum(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }
}
