//! Vectors of E-functions given as solutions of `Y' = A·Y` with Taylor seeds.

mod catalog;
mod recurrence;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{den, format_rational, IntPoly, RatFunc, RatPoly, RatSeries, Rational};
use recurrence::{Recurrence, RecurrenceIssue};

pub use catalog::{catalog, exp_pair, CatalogEntry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EFunctionError {
    #[error("system matrix must be square and nonempty (got {rows} rows, row {bad_row} has {cols} entries)")]
    Shape {
        rows: usize,
        bad_row: usize,
        cols: usize,
    },
    #[error("expected {expected} seed lists and labels, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("seeds do not determine coefficient {index}; supply more seed terms")]
    UnderdeterminedSeeds { index: usize },
    #[error("seeds contradict the recurrence at coefficient {index}")]
    InconsistentSeeds { index: usize },
    #[error("all components vanish identically")]
    AllComponentsZero,
    #[error("T = {t} does not clear the denominators of A")]
    NotACommonDenominator { t: String },
    #[error("T = {t} has degree {got}, the minimal common denominator has degree {minimal}")]
    NonMinimalDenominator {
        t: String,
        got: usize,
        minimal: usize,
    },
    #[error("rescaling by zero")]
    ZeroRescale,
    #[error("growth constants must be at least 1 (C = {c}, D = {d})")]
    InvalidGrowth { c: String, d: String },
    #[error("unknown catalog entry `{0}`")]
    UnsupportedCatalog(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidCatalogParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Catalog,
    UserSupplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Catalog => "catalog",
            Provenance::UserSupplied => "user-supplied",
        }
    }
}

/// `|φ_{k,i}| ≤ C^{k+1}` and `den(φ_{0,i}, …, φ_{k,i}) ≤ D^{k+1}` for all `k`,
/// where `f_i = Σ φ_{k,i} z^k / k!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub c: Rational,
    pub d: Rational,
    pub provenance: Provenance,
}

impl GrowthCertificate {
    pub fn new(c: Rational, d: Rational, provenance: Provenance) -> Result<Self, EFunctionError> {
        if c < Rational::one() || d < Rational::one() {
            return Err(EFunctionError::InvalidGrowth {
                c: format_rational(&c),
                d: format_rational(&d),
            });
        }
        Ok(GrowthCertificate { c, d, provenance })
    }
}

/// A point of the Riemann sphere for which an exponent bound is recorded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SingularPoint {
    Finite(Rational),
    Infinity,
    /// Every root of `T` that is not rational.
    Irrational,
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Finite(c) => write!(f, "{}", format_rational(c)),
            SingularPoint::Infinity => write!(f, "inf"),
            SingularPoint::Irrational => write!(f, "other"),
        }
    }
}

impl std::str::FromStr for SingularPoint {
    type Err = crate::algebra::ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" => Ok(SingularPoint::Infinity),
            "other" => Ok(SingularPoint::Irrational),
            t => crate::algebra::parse_rational(t).map(SingularPoint::Finite),
        }
    }
}

/// User-supplied upper bound on the moduli of the generalized exponents at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentBound {
    pub point: SingularPoint,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemParams {
    pub p: usize,
    pub q: usize,
    pub e: Rational,
    pub t: IntPoly,
    /// Least positive integer `δ` with `δ·T·A` integral.
    pub delta: crate::algebra::Integer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffSystem {
    a: Vec<Vec<RatFunc>>,
    t: IntPoly,
    ta: Vec<Vec<RatPoly>>,
    seeds: Vec<Vec<Rational>>,
    labels: Vec<String>,
    growth: Option<GrowthCertificate>,
    exponent_bounds: Vec<ExponentBound>,
}

/// Primitive integer multiple of the monic lcm of the denominators of `a`.
pub fn minimal_denominator(a: &[Vec<RatFunc>]) -> IntPoly {
    let l = a
        .iter()
        .flatten()
        .fold(RatPoly::one(), |acc, r| acc.lcm(r.den()));
    let scale = Rational::from_integer(l.denominator_lcm());
    let scaled = l.scale(&scale).to_int().expect("denominators cleared");
    let g = crate::algebra::rational::content(scaled.coeffs());
    let t = scaled.map(|c| c / &g);
    if t.leading().is_some_and(|c| c.is_negative()) {
        -&t
    } else {
        t
    }
}

impl DiffSystem {
    /// Builds the system with the minimal integer common denominator `T`.
    pub fn new(
        a: Vec<Vec<RatFunc>>,
        seeds: Vec<Vec<Rational>>,
        labels: Vec<String>,
    ) -> Result<Self, EFunctionError> {
        check_shape(&a, &seeds, &labels)?;
        let t = minimal_denominator(&a);
        Self::assemble(a, t, seeds, labels)
    }

    /// Builds the system with a prescribed `T`, which must clear every
    /// denominator of `A` and have minimal degree.
    pub fn with_denominator(
        a: Vec<Vec<RatFunc>>,
        t: IntPoly,
        seeds: Vec<Vec<Rational>>,
        labels: Vec<String>,
    ) -> Result<Self, EFunctionError> {
        check_shape(&a, &seeds, &labels)?;
        let tr = t.to_rat();
        let clears = !t.is_zero()
            && a.iter()
                .flatten()
                .all(|r| tr.div_rem(r.den()).1.is_zero());
        if !clears {
            return Err(EFunctionError::NotACommonDenominator { t: t.to_string() });
        }
        let minimal = minimal_denominator(&a).degree().unwrap_or(0);
        let got = t.degree().unwrap_or(0);
        if got != minimal {
            return Err(EFunctionError::NonMinimalDenominator {
                t: t.to_string(),
                got,
                minimal,
            });
        }
        Self::assemble(a, t, seeds, labels)
    }

    fn assemble(
        a: Vec<Vec<RatFunc>>,
        t: IntPoly,
        seeds: Vec<Vec<Rational>>,
        labels: Vec<String>,
    ) -> Result<Self, EFunctionError> {
        let tr = RatFunc::from_poly(t.to_rat());
        let ta = a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|r| tr.mul(r).as_poly().cloned().expect("T clears A"))
                    .collect()
            })
            .collect();
        let sys = DiffSystem {
            a,
            t,
            ta,
            seeds,
            labels,
            growth: None,
            exponent_bounds: Vec::new(),
        };
        let rec = sys.recurrence();
        let seed_len = sys.seeds.iter().map(Vec::len).max().unwrap_or(0);
        let check = seed_len.max(rec.last_singular_index().unwrap_or(0)) + 1;
        rec.solve(&sys.seeds, check).map_err(issue_to_error)?;
        Ok(sys)
    }

    pub fn with_growth(mut self, g: GrowthCertificate) -> Self {
        self.growth = Some(g);
        self
    }

    pub fn with_exponent_bounds(mut self, bounds: Vec<ExponentBound>) -> Self {
        self.exponent_bounds = bounds;
        self
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<RatFunc>] {
        &self.a
    }

    pub fn t(&self) -> &IntPoly {
        &self.t
    }

    /// `T·A` entries (polynomials, possibly with rational coefficients).
    pub fn ta(&self) -> &[Vec<RatPoly>] {
        &self.ta
    }

    pub fn seeds(&self) -> &[Vec<Rational>] {
        &self.seeds
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn growth(&self) -> Option<&GrowthCertificate> {
        self.growth.as_ref()
    }

    pub fn exponent_bounds(&self) -> &[ExponentBound] {
        &self.exponent_bounds
    }

    fn recurrence(&self) -> Recurrence {
        Recurrence::new(&self.t.to_rat(), &self.ta)
    }

    /// Taylor coefficients `c_0..=c_n` of every component.
    pub fn coefficients(&self, n: usize) -> Result<Vec<RatSeries>, EFunctionError> {
        let ys = self
            .recurrence()
            .solve(&self.seeds, n)
            .map_err(issue_to_error)?;
        Ok((0..self.m())
            .map(|i| RatSeries::new(ys.iter().map(|y| y[i].clone()).collect()))
            .collect())
    }

    /// Least positive integer `δ` such that `δ·T·A` has integer coefficients.
    pub fn ladder_denominator(&self) -> crate::algebra::Integer {
        self.ta
            .iter()
            .flatten()
            .fold(One::one(), |acc, p| {
                crate::algebra::rational::lcm(&acc, &p.denominator_lcm())
            })
    }

    pub fn params(&self) -> Result<SystemParams, EFunctionError> {
        let seed_len = self.seeds.iter().map(Vec::len).max().unwrap_or(0);
        // the solution is zero iff all seeds vanish, so p < seed_len otherwise
        let series = self.coefficients(seed_len.max(1))?;
        let p = series
            .iter()
            .filter_map(RatSeries::valuation)
            .min()
            .ok_or(EFunctionError::AllComponentsZero)?;
        let q = self
            .ta
            .iter()
            .flatten()
            .filter_map(RatPoly::degree)
            .chain(self.t.degree())
            .max()
            .unwrap_or(0);
        let e = self
            .ta
            .iter()
            .flatten()
            .map(RatPoly::max_abs_coeff)
            .chain(std::iter::once(Rational::from_integer(self.t.max_abs_coeff())))
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(SystemParams {
            p,
            q,
            e,
            t: self.t.clone(),
            delta: self.ladder_denominator(),
        })
    }
}

pub fn extract_params(sys: &DiffSystem) -> Result<SystemParams, EFunctionError> {
    sys.params()
}

fn check_shape(
    a: &[Vec<RatFunc>],
    seeds: &[Vec<Rational>],
    labels: &[String],
) -> Result<(), EFunctionError> {
    let m = a.len();
    if m == 0 {
        return Err(EFunctionError::Shape {
            rows: 0,
            bad_row: 0,
            cols: 0,
        });
    }
    if let Some((i, row)) = a.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(EFunctionError::Shape {
            rows: m,
            bad_row: i,
            cols: row.len(),
        });
    }
    for got in [seeds.len(), labels.len()] {
        if got != m {
            return Err(EFunctionError::ComponentCount { expected: m, got });
        }
    }
    Ok(())
}

fn issue_to_error(e: RecurrenceIssue) -> EFunctionError {
    match e {
        RecurrenceIssue::Underdetermined { index } => EFunctionError::UnderdeterminedSeeds { index },
        RecurrenceIssue::Inconsistent { index } => EFunctionError::InconsistentSeeds { index },
    }
}

/// Appends `exp(βz)` as a new last component.
pub fn augment_exp(sys: &DiffSystem, beta: &Rational) -> DiffSystem {
    let m = sys.m();
    let mut a: Vec<Vec<RatFunc>> = sys
        .a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(RatFunc::zero());
            r
        })
        .collect();
    let mut last = vec![RatFunc::zero(); m];
    last.push(RatFunc::constant(beta.clone()));
    a.push(last);
    let mut seeds = sys.seeds.clone();
    seeds.push(vec![Rational::one()]);
    let mut labels = sys.labels.clone();
    labels.push(format!("exp({} z)", format_rational(beta)));
    let out = DiffSystem::with_denominator(a, sys.t.clone(), seeds, labels)
        .expect("block-diagonal extension of a valid system");
    let growth = sys.growth.as_ref().map(|g| GrowthCertificate {
        c: g.c.clone().max(beta.abs()),
        d: &g.d * Rational::from_integer(den(beta)),
        provenance: g.provenance,
    });
    DiffSystem {
        growth,
        exponent_bounds: sys.exponent_bounds.clone(),
        ..out
    }
}

/// The system satisfied by `z ↦ Y(ξz)`.
pub fn rescale(sys: &DiffSystem, xi: &Rational) -> Result<DiffSystem, EFunctionError> {
    if xi.is_zero() {
        return Err(EFunctionError::ZeroRescale);
    }
    let a: Vec<Vec<RatFunc>> = sys
        .a
        .iter()
        .map(|row| row.iter().map(|r| r.dilate(xi).scale(xi)).collect())
        .collect();
    let seeds = sys
        .seeds
        .iter()
        .map(|s| {
            let mut pw = Rational::one();
            s.iter()
                .map(|c| {
                    let v = c * &pw;
                    pw *= xi;
                    v
                })
                .collect()
        })
        .collect();
    let out = DiffSystem::new(a, seeds, sys.labels.clone())?;
    let growth = sys.growth.as_ref().map(|g| GrowthCertificate {
        c: &g.c * xi.abs().max(Rational::one()),
        d: &g.d * Rational::from_integer(den(xi)),
        provenance: g.provenance,
    });
    let exponent_bounds = sys
        .exponent_bounds
        .iter()
        .map(|b| ExponentBound {
            point: match &b.point {
                SingularPoint::Finite(c) => SingularPoint::Finite(c / xi),
                p => p.clone(),
            },
            bound: b.bound.clone(),
        })
        .collect();
    Ok(DiffSystem {
        growth,
        exponent_bounds,
        ..out
    })
}
