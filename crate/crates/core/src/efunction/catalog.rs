//! Built-in systems with closed-form growth certificates.
//!
//! * `exp(βz)`: `φ_k = β^k`, so `C = max(1, |β|)` and `D = den(β)`.
//! * `J0`: `φ_{2n} = (-1)^n binom(2n, n) / 4^n`, so `|φ_k| ≤ 1` and the
//!   denominators of `φ_0..φ_k` divide `2^k`. The derivative component has
//!   `φ_k(J0') = φ_{k+1}(J0)`, giving `C = 1`, `D = 2`.
//! * `1F1(a; b)` with `a = a1/a2`, `b = b1/b2`: `φ_k = (a)_k / (b)_k`.
//!   Past the first index `J` where `b + J > 0` and `a + J ≥ 0` each factor
//!   `(a+j)/(b+j)` is at most `ρ = max(1, 1 + (a-b)/(b+J))`, and the earlier
//!   factors multiply to at most `K`, so `C = K·ρ` covers both components.
//!   For a prime `p ∤ a2·b2`, counting multiples of `p^e` among `a+j` and
//!   `b+j` gives `v_p(den φ_k) ≤ ⌊log_p X⌋` with `X = |b1| + (k-1)·b2`;
//!   primes dividing `a2` add at most `a2^k`, primes dividing only `b2` add
//!   nothing. Hence `den | a2^k·lcm(1..X) < a2^k·3^X`, using `ψ(x) < 1.04x`,
//!   and `D = a2·3^(b2 + |b1|)`.

use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{
    augment_exp, DiffSystem, EFunctionError, ExponentBound, GrowthCertificate, Provenance,
    SingularPoint,
};
use crate::algebra::{den, format_rational, parse_rational, RatFunc, RatPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    Exp(Rational),
    BesselJ0,
    Hyp1F1(Rational, Rational),
}

impl FromStr for CatalogEntry {
    type Err = EFunctionError;

    /// Accepts `exp(β)`, `bessel_j0` and `1F1(a;b)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |m: &str| EFunctionError::InvalidCatalogParams(format!("{s}: {m}"));
        let parse = |t: &str| parse_rational(t.trim()).map_err(|e| bad(&e.to_string()));
        if s == "bessel_j0" {
            return Ok(CatalogEntry::BesselJ0);
        }
        if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            return Ok(CatalogEntry::Exp(parse(inner)?));
        }
        if let Some(inner) = s.strip_prefix("1F1(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(';').ok_or_else(|| bad("expected `a;b`"))?;
            return Ok(CatalogEntry::Hyp1F1(parse(a)?, parse(b)?));
        }
        Err(EFunctionError::UnsupportedCatalog(s.to_string()))
    }
}

impl std::fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatalogEntry::Exp(b) => write!(f, "exp({})", format_rational(b)),
            CatalogEntry::BesselJ0 => write!(f, "bessel_j0"),
            CatalogEntry::Hyp1F1(a, b) => {
                write!(f, "1F1({};{})", format_rational(a), format_rational(b))
            }
        }
    }
}

fn cert(c: Rational, d: Rational) -> GrowthCertificate {
    GrowthCertificate::new(c, d, Provenance::Catalog).expect("catalog constants are at least 1")
}

fn constant(c: Rational) -> RatFunc {
    RatFunc::constant(c)
}

/// `c / z`
fn over_z(c: Rational) -> RatFunc {
    RatFunc::new(RatPoly::constant(c), RatPoly::z())
}

pub fn catalog(entry: &CatalogEntry) -> Result<DiffSystem, EFunctionError> {
    match entry {
        CatalogEntry::Exp(beta) => {
            let sys = DiffSystem::new(
                vec![vec![constant(beta.clone())]],
                vec![vec![Rational::one()]],
                vec![format!("exp({} z)", format_rational(beta))],
            )?;
            Ok(sys.with_growth(cert(
                beta.abs().max(Rational::one()),
                Rational::from_integer(den(beta)),
            )))
        }
        CatalogEntry::BesselJ0 => {
            let one = Rational::one();
            let sys = DiffSystem::new(
                vec![
                    vec![RatFunc::zero(), constant(one.clone())],
                    vec![constant(-one.clone()), over_z(-one.clone())],
                ],
                vec![vec![one.clone()], vec![Rational::zero()]],
                vec!["J0".into(), "J0'".into()],
            )?;
            Ok(sys
                .with_growth(cert(one, Rational::from_integer(2.into())))
                .with_exponent_bounds(vec![ExponentBound {
                    point: SingularPoint::Infinity,
                    bound: Rational::from_integer(2.into()),
                }]))
        }
        CatalogEntry::Hyp1F1(a, b) => hyp1f1(a, b),
    }
}

fn hyp1f1(a: &Rational, b: &Rational) -> Result<DiffSystem, EFunctionError> {
    if b.is_integer() && !b.is_positive() {
        return Err(EFunctionError::InvalidCatalogParams(format!(
            "1F1 lower parameter {} is a nonpositive integer",
            format_rational(b)
        )));
    }
    // z y'' + (b - z) y' - a y = 0
    let zb = RatFunc::new(
        RatPoly::new(vec![-b.clone(), Rational::one()]),
        RatPoly::z(),
    );
    let label = format!("1F1({};{};z)", format_rational(a), format_rational(b));
    let sys = DiffSystem::new(
        vec![
            vec![RatFunc::zero(), constant(Rational::one())],
            vec![over_z(a.clone()), zb],
        ],
        vec![vec![Rational::one()], vec![a / b]],
        vec![label.clone(), format!("{label}'")],
    )?;

    let (c, d) = hyp1f1_growth(a, b);
    let one = Rational::one();
    let spread = [(&one - b).abs(), a.abs(), (a - b).abs()]
        .into_iter()
        .max()
        .unwrap();
    let inf_bound = Rational::from_integer(spread.ceil().to_integer()) + &one;
    Ok(sys
        .with_growth(cert(c, d))
        .with_exponent_bounds(vec![ExponentBound {
            point: SingularPoint::Infinity,
            bound: inf_bound,
        }]))
}

fn hyp1f1_growth(a: &Rational, b: &Rational) -> (Rational, Rational) {
    let one = Rational::one();
    let mut j = 0u64;
    let mut k = one.clone();
    loop {
        let jr = Rational::from_integer(j.into());
        let (aj, bj) = (a + &jr, b + &jr);
        if bj.is_positive() && !aj.is_negative() {
            let rho = if a <= b { one.clone() } else { &one + (a - b) / &bj };
            return (&k * rho, hyp1f1_denominator(a, b));
        }
        let ratio = aj.abs() / bj.abs();
        if ratio > one {
            k *= ratio;
        }
        j += 1;
    }
}

fn hyp1f1_denominator(a: &Rational, b: &Rational) -> Rational {
    let e = b.denom() + b.numer().abs();
    let exp: u32 = e.try_into().expect("1F1 parameter too large");
    Rational::from_integer(a.denom() * num_traits::pow(crate::algebra::Integer::from(3), exp as usize))
}

/// `exp(z) ⊕ exp(2z)`
pub fn exp_pair() -> DiffSystem {
    let one = catalog(&CatalogEntry::Exp(Rational::one())).expect("exp catalog");
    augment_exp(&one, &Rational::from_integer(2.into()))
}
