//! Certified evaluation with rational-endpoint intervals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{format_rational, Integer, Rational};
use crate::efunction::{DiffSystem, EFunctionError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("system has no growth certificate")]
    MissingGrowth,
    #[error("component {index} out of range for a system of dimension {m}")]
    NoSuchComponent { index: usize, m: usize },
    #[error("target width must be positive")]
    NonPositiveWidth,
    #[error("logarithm of a non-positive interval {0}")]
    NonPositiveLog(String),
    #[error(transparent)]
    System(#[from] EFunctionError),
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    /// `[c - r, c + r]`
    pub fn ball(c: &Rational, r: &Rational) -> Self {
        Self::new(c - r, c + r)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// `min |x|` over the interval.
    pub fn abs_lower(&self) -> Rational {
        if self.lo.is_positive() {
            self.lo.clone()
        } else if self.hi.is_negative() {
            -self.hi.clone()
        } else {
            Rational::zero()
        }
    }

    /// `max |x|` over the interval.
    pub fn abs_upper(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul(&Self::point(c.clone()))
    }

    /// Absolute value as an interval.
    pub fn abs(&self) -> Self {
        Self::new(self.abs_lower(), self.abs_upper())
    }

    /// Outward rounding of both endpoints to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u64) -> Self {
        Self::new(round_down(&self.lo, bits), round_up(&self.hi, bits))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

fn pow2(bits: u64) -> Integer {
    Integer::one() << bits
}

/// Largest multiple of `2^-bits` not above `x`.
pub fn round_down(x: &Rational, bits: u64) -> Rational {
    let s = pow2(bits);
    Rational::new((x * Rational::from_integer(s.clone())).floor().to_integer(), s)
}

/// Smallest multiple of `2^-bits` not below `x`.
pub fn round_up(x: &Rational, bits: u64) -> Rational {
    let s = pow2(bits);
    Rational::new((x * Rational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// `⌊log2 |x|⌋` for nonzero `x`.
pub fn floor_log2(x: &Rational) -> i64 {
    let n = x.numer().abs();
    let d = x.denom().clone();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e ≤ n/d < 2^{e+1} after adjustment
    let ge = |e: i64| {
        if e >= 0 {
            n >= (&d << e as u64)
        } else {
            (&n << (-e) as u64) >= d
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    e
}

/// Rounds a positive `x` down to a dyadic with `sig` significant bits.
pub fn round_down_significant(x: &Rational, sig: u64) -> Rational {
    if !x.is_positive() {
        return x.clone();
    }
    let e = floor_log2(x);
    let shift = sig as i64 - 1 - e;
    if shift >= 0 {
        round_down(x, shift as u64)
    } else {
        let s = pow2((-shift) as u64);
        Rational::from_integer((x / Rational::from_integer(s.clone())).floor().to_integer() * s)
    }
}

/// Rounds a positive `x` up to a dyadic with `sig` significant bits.
pub fn round_up_significant(x: &Rational, sig: u64) -> Rational {
    if !x.is_positive() {
        return x.clone();
    }
    let e = floor_log2(x);
    let shift = sig as i64 - 1 - e;
    if shift >= 0 {
        round_up(x, shift as u64)
    } else {
        let s = pow2((-shift) as u64);
        Rational::from_integer((x / Rational::from_integer(s.clone())).ceil().to_integer() * s)
    }
}

/// Number of fractional bits with `2^-bits ≤ w`.
fn bits_for_width(w: &Rational) -> u64 {
    (1 - floor_log2(w)).max(0) as u64
}

/// Majorant of `Σ_{k>N} C·X^k/k!` valid when `N + 2 > X`.
fn exp_tail(c: &Rational, x: &Rational, n: usize) -> Rational {
    let np2 = Rational::from_integer((n + 2).into());
    let mut term = c.clone();
    for k in 1..=n + 1 {
        term = term * x / Rational::from_integer(k.into());
    }
    term / (Rational::one() - x / np2)
}

/// `f_i(x)` to within `target_width`, using the system's growth certificate.
pub fn eval_component(
    sys: &DiffSystem,
    i: usize,
    x: &Rational,
    target_width: &Rational,
) -> Result<RatInterval, EvalError> {
    let g = sys.growth().ok_or(EvalError::MissingGrowth)?;
    if i >= sys.m() {
        return Err(EvalError::NoSuchComponent { index: i, m: sys.m() });
    }
    if !target_width.is_positive() {
        return Err(EvalError::NonPositiveWidth);
    }
    if x.is_zero() {
        let c0 = sys.coefficients(0)?[i].coeff(0).clone();
        return Ok(RatInterval::point(c0));
    }
    let c = g.c.clone();
    let big_x = &c * x.abs();
    let quarter = target_width / Rational::from_integer(4.into());
    // smallest N with N + 2 > 2X, so the geometric factor is at most 2
    let mut n = (&big_x * Rational::from_integer(2.into())).floor().to_integer();
    n = n.max(BigInt::from(8));
    let mut n: usize = n.try_into().expect("evaluation point too large");
    loop {
        let tail = exp_tail(&c, &big_x, n);
        if tail <= quarter {
            let series = sys.coefficients(n)?;
            let s = series[i].partial_sum(x);
            let bits = bits_for_width(&quarter);
            return Ok(RatInterval::ball(&s, &tail).round_outward(bits));
        }
        n += n / 2 + 4;
    }
}

/// `e^r` to within `target_width`.
pub fn eval_exp(r: &Rational, target_width: &Rational) -> Result<RatInterval, EvalError> {
    if !target_width.is_positive() {
        return Err(EvalError::NonPositiveWidth);
    }
    if r.is_zero() {
        return Ok(RatInterval::point(Rational::one()));
    }
    let one = Rational::one();
    let big_x = r.abs();
    let quarter = target_width / Rational::from_integer(4.into());
    let mut n: usize = (&big_x * Rational::from_integer(2.into()))
        .floor()
        .to_integer()
        .max(BigInt::from(8))
        .try_into()
        .expect("exponent too large");
    while exp_tail(&one, &big_x, n) > quarter {
        n += n / 2 + 4;
    }
    let tail = exp_tail(&one, &big_x, n);
    let mut term = one.clone();
    let mut s = one.clone();
    for k in 1..=n {
        term = term * r / Rational::from_integer(k.into());
        s += &term;
    }
    Ok(RatInterval::ball(&s, &tail).round_outward(bits_for_width(&quarter)))
}

/// `2·atanh(u)` for `0 ≤ u < 1` with absolute error at most `eps`.
///
/// Terms are accumulated on a dyadic grid with outward rounding so that the
/// sizes of the intermediate rationals stay bounded.
fn two_atanh(u: &Rational, eps: &Rational) -> RatInterval {
    let bits = bits_for_width(eps) + 64;
    let u2 = u * u;
    let u2_lo = round_down(&u2, bits);
    let u2_hi = round_up(&u2, bits);
    let one_minus = Rational::one() - &u2_hi;
    let (mut pw_lo, mut pw_hi) = (round_down(u, bits), round_up(u, bits));
    let (mut s_lo, mut s_hi) = (Rational::zero(), Rational::zero());
    let mut j = 0usize;
    loop {
        let k = Rational::from_integer((2 * j + 1).into());
        s_lo += round_down(&(&pw_lo / &k), bits);
        s_hi += round_up(&(&pw_hi / &k), bits);
        pw_lo = round_down(&(&pw_lo * &u2_lo), bits);
        pw_hi = round_up(&(&pw_hi * &u2_hi), bits);
        // remaining terms ≤ u^{2j+3}/((2j+3)(1-u²))
        let tail = &pw_hi / Rational::from_integer((2 * j + 3).into()) / &one_minus;
        if (&s_hi - &s_lo + &tail) * Rational::from_integer(2.into()) <= *eps || pw_hi.is_zero() {
            let two = Rational::from_integer(2.into());
            return RatInterval::new(s_lo * &two, (s_hi + tail) * two);
        }
        j += 1;
    }
}

/// `ln 2` to within `eps`.
fn ln2(eps: &Rational) -> RatInterval {
    two_atanh(&Rational::new(1.into(), 3.into()), eps)
}

/// `ln x` for a positive rational, to within `target_width`.
pub fn eval_ln(x: &Rational, target_width: &Rational) -> Result<RatInterval, EvalError> {
    if !x.is_positive() {
        return Err(EvalError::NonPositiveLog(format_rational(x)));
    }
    if !target_width.is_positive() {
        return Err(EvalError::NonPositiveWidth);
    }
    // x = 2^k·y with 1 ≤ y < 2
    let k = floor_log2(x);
    let y = if k >= 0 {
        x / Rational::from_integer(pow2(k as u64))
    } else {
        x * Rational::from_integer(pow2((-k) as u64))
    };
    let eighth = target_width / Rational::from_integer(8.into());
    let kabs = Rational::from_integer(k.abs().max(1).into());
    let l2 = ln2(&(&eighth / kabs));
    let u = (&y - Rational::one()) / (&y + Rational::one());
    let ly = two_atanh(&u, &eighth);
    let part = l2.scale(&Rational::from_integer(k.into()));
    Ok(part.add(&ly).round_outward(bits_for_width(&eighth)))
}

/// Interval containing `ln` of every point of a positive interval.
pub fn eval_ln_interval(iv: &RatInterval, target_width: &Rational) -> Result<RatInterval, EvalError> {
    if !iv.strictly_positive() {
        return Err(EvalError::NonPositiveLog(iv.to_string()));
    }
    let half = target_width / Rational::from_integer(2.into());
    let lo = eval_ln(iv.lo(), &half)?;
    let hi = eval_ln(iv.hi(), &half)?;
    Ok(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

/// Decimal string of `x` truncated toward zero to `digits` fractional digits.
pub fn decimal(x: &Rational, digits: usize) -> String {
    crate::algebra::rational::to_decimal(x, digits)
}
