//! Lower bounds on `|ln f₁(ξ) - a/b|`.
//!
//! The system is rescaled so that the point becomes 1, then extended by
//! `exp(βz)` with `β = a/b`. A lower bound on `|f₁(1) - e^β|` turns into one
//! on the logarithmic distance through the mean value theorem:
//! `|ln x - ln y| ≥ |x - y| / max(x, y)`.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{format_rational, Integer, Rational};
use crate::efunction::{augment_exp, rescale, DiffSystem, EFunctionError, GrowthCertificate, SystemParams};
use crate::evalcert::{eval_component, eval_exp, eval_ln_interval, EvalError, RatInterval};
use crate::forms::{adaptive_bound, AdaptiveBound, BoundConfig, FormsError};
use crate::zeroestimate::{system_n0, N0Bound, ZeroEstimateError};

/// Width of the diagnostic logarithm oracle, about 100 decimal digits.
const ORACLE_BITS: u64 = 340;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogMeasureError {
    #[error("f_1({xi}) lies in {interval}, which is not strictly positive")]
    NonPositiveValue { xi: String, interval: String },
    #[error("xi = {0} is zero or a root of T")]
    SingularEvaluationPoint(String),
    #[error("denominator of the approximation must be positive")]
    NonPositiveDenominator,
    #[error("b_max must be at least 1")]
    EmptyScan,
    #[error("exponent fit needs at least 3 distinct b with bound below 1, got {distinct}")]
    DegenerateFit { distinct: usize },
    #[error("cannot derive a default n_max: {0}")]
    NoDefaultNMax(ZeroEstimateError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    System(#[from] EFunctionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConfig {
    pub bound: BoundConfig,
    pub n_start: usize,
    /// Defaults to `4·n₀` of the augmented system.
    pub n_max: Option<usize>,
}

impl Default for LogConfig {
    fn default() -> Self {
        LogConfig {
            bound: BoundConfig::default(),
            n_start: 1,
            n_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPath {
    Forms,
    Interval,
}

impl BoundPath {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundPath::Forms => "forms",
            BoundPath::Interval => "interval",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormsOutcome {
    Certified(AdaptiveBound),
    Failed(FormsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBoundResult {
    pub xi: Rational,
    pub a: Integer,
    pub b: Integer,
    pub beta: Rational,
    pub forms: FormsOutcome,
    /// Forms lower bound on `|f₁(1) - e^β|` divided by `ω`.
    pub forms_bound: Option<Rational>,
    /// `|f₁(1) - e^β|_lo / ω`, when positive.
    pub direct_bound: Option<Rational>,
    pub f_value: RatInterval,
    pub exp_value: RatInterval,
    pub omega_upper: Rational,
    /// `|f₁(1) - e^β| < f₁(1)/2`, when decidable from the intervals.
    pub guard: Option<bool>,
    pub bound: Rational,
    pub path: BoundPath,
    pub n_max: usize,
    /// Distance interval from a ~100 digit logarithm; diagnostic only.
    pub oracle: RatInterval,
    /// Dimension of the augmented system.
    pub m: usize,
    /// Parameters of the augmented system (`E`, `δ` depend on `β`).
    pub params: SystemParams,
    pub growth: GrowthCertificate,
    pub n0: Option<N0Bound>,
}

impl LogBoundResult {
    /// `n` of the forms certificate, if it succeeded.
    pub fn n_used(&self) -> Option<usize> {
        match &self.forms {
            FormsOutcome::Certified(a) => Some(a.certificate.n),
            FormsOutcome::Failed(_) => None,
        }
    }
}

/// Data shared by every approximation `a/b` at a fixed `ξ`.
struct Prepared {
    xi: Rational,
    sys: DiffSystem,
    f_value: RatInterval,
    ln_f: RatInterval,
}

fn width(bits: u64) -> Rational {
    Rational::new(One::one(), Integer::one() << bits)
}

fn prepare(sys: &DiffSystem, xi: &Rational, config: &LogConfig) -> Result<Prepared, LogMeasureError> {
    let singular = || LogMeasureError::SingularEvaluationPoint(format_rational(xi));
    if xi.is_zero() || sys.t().to_rat().eval(xi).is_zero() {
        return Err(singular());
    }
    let sys = rescale(sys, xi)?;
    let f_value = eval_component(&sys, 0, &Rational::one(), &width(config.bound.precision))?;
    let f_oracle = eval_component(&sys, 0, &Rational::one(), &width(ORACLE_BITS + 8))?;
    if !f_value.strictly_positive() || !f_oracle.strictly_positive() {
        return Err(LogMeasureError::NonPositiveValue {
            xi: format_rational(xi),
            interval: f_value.to_string(),
        });
    }
    let ln_f = eval_ln_interval(&f_oracle, &width(ORACLE_BITS))?;
    Ok(Prepared {
        xi: xi.clone(),
        sys,
        f_value,
        ln_f,
    })
}

fn bound_row(p: &Prepared, a: &Integer, b: &Integer, config: &LogConfig) -> Result<LogBoundResult, LogMeasureError> {
    if !b.is_positive() {
        return Err(LogMeasureError::NonPositiveDenominator);
    }
    let beta = Rational::new(a.clone(), b.clone());
    let aug = augment_exp(&p.sys, &beta);
    let params = aug.params()?;
    let growth = aug.growth().cloned().expect("rescaled system keeps its certificate");
    let n0 = system_n0(&aug);
    let n_max = match (config.n_max, &n0) {
        (Some(n), _) => n,
        (None, Ok(b)) => usize::try_from(b.value.saturating_mul(4)).unwrap_or(usize::MAX),
        (None, Err(e)) => return Err(LogMeasureError::NoDefaultNMax(e.clone())),
    };

    let m = aug.m();
    let mut target = vec![Integer::zero(); m];
    target[0] = Integer::one();
    target[m - 1] = -Integer::one();
    let forms = match adaptive_bound(&aug, &Rational::one(), &target, config.n_start, n_max, &config.bound) {
        Ok(a) => FormsOutcome::Certified(a),
        Err(e @ FormsError::ExhaustedN { .. }) => FormsOutcome::Failed(e),
        Err(e) => return Err(e.into()),
    };

    let exp_value = eval_exp(&beta, &width(config.bound.precision))?;
    let omega_upper = p.f_value.hi().clone().max(exp_value.hi().clone());
    let diff = p.f_value.sub(&exp_value);
    let direct = diff.abs_lower();
    let direct_bound = direct.is_positive().then(|| &direct / &omega_upper);
    let forms_bound = match &forms {
        FormsOutcome::Certified(a) => a.certificate.lower_bound.as_ref().map(|l| l / &omega_upper),
        FormsOutcome::Failed(_) => None,
    };
    let half_f = p.f_value.scale(&Rational::new(1.into(), 2.into()));
    let guard = if diff.abs_upper() < *half_f.lo() {
        Some(true)
    } else if diff.abs_lower() >= *half_f.hi() {
        Some(false)
    } else {
        None
    };

    let (bound, path) = match (&forms_bound, &direct_bound) {
        (Some(f), Some(d)) if d > f => (d.clone(), BoundPath::Interval),
        (Some(f), _) => (f.clone(), BoundPath::Forms),
        (None, Some(d)) => (d.clone(), BoundPath::Interval),
        (None, None) => match forms {
            FormsOutcome::Failed(e) => return Err(e.into()),
            FormsOutcome::Certified(_) => unreachable!("certified outcome carries a bound"),
        },
    };

    let oracle = p.ln_f.sub(&RatInterval::point(beta.clone())).abs();
    Ok(LogBoundResult {
        xi: p.xi.clone(),
        a: a.clone(),
        b: b.clone(),
        beta,
        forms,
        forms_bound,
        direct_bound,
        f_value: p.f_value.clone(),
        exp_value,
        omega_upper,
        guard,
        bound,
        path,
        n_max,
        oracle,
        m,
        params,
        growth,
        n0: n0.ok(),
    })
}

/// Certified lower bound on `|ln f₁(ξ) - a/b|`, with `f₁` the first component.
pub fn log_lower_bound(
    sys: &DiffSystem,
    xi: &Rational,
    approx: &Rational,
    config: &LogConfig,
) -> Result<LogBoundResult, LogMeasureError> {
    let p = prepare(sys, xi, config)?;
    bound_row(&p, approx.numer(), approx.denom(), config)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub b: Integer,
    pub a: Integer,
    pub outcome: Result<LogBoundResult, LogMeasureError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanTable {
    pub xi: Rational,
    /// Enclosure of `ln f₁(ξ)` used to select the rows.
    pub ln_f: RatInterval,
    pub rows: Vec<ScanRow>,
}

/// Reduced `a/b` with `b ≤ b_max` whose distance to `ln f₁(ξ)` may be at
/// most `window`, sorted by `b` then `a`.
pub fn scan_candidates(ln_f: &RatInterval, b_max: u64, window: &Rational) -> Vec<(Integer, Integer)> {
    let mut out = Vec::new();
    for b in 1..=b_max {
        let bi = Integer::from(b);
        let br = Rational::from_integer(bi.clone());
        let lo = ((ln_f.lo() - window) * &br).ceil().to_integer();
        let hi = ((ln_f.hi() + window) * &br).floor().to_integer();
        let mut a = lo;
        while a <= hi {
            if a.gcd(&bi).is_one() {
                out.push((bi.clone(), a.clone()));
            }
            a += 1;
        }
    }
    out
}

/// One row per reduced `a/b` near `ln f₁(ξ)`; rows are computed in parallel.
pub fn measure_scan(
    sys: &DiffSystem,
    xi: &Rational,
    b_max: u64,
    window: &Rational,
    config: &LogConfig,
) -> Result<ScanTable, LogMeasureError> {
    if b_max == 0 {
        return Err(LogMeasureError::EmptyScan);
    }
    let p = prepare(sys, xi, config)?;
    let candidates = scan_candidates(&p.ln_f, b_max, window);
    let rows = candidates
        .into_par_iter()
        .map(|(b, a)| ScanRow {
            outcome: bound_row(&p, &a, &b, config),
            b,
            a,
        })
        .collect();
    Ok(ScanTable {
        xi: xi.clone(),
        ln_f: p.ln_f,
        rows,
    })
}

/// `(b, bound)` pairs of the certified rows of a scan.
pub fn fit_points(table: &ScanTable) -> Vec<(u64, Rational)> {
    table
        .rows
        .iter()
        .filter_map(|r| {
            let res = r.outcome.as_ref().ok()?;
            Some((u64::try_from(&r.b).ok()?, res.bound.clone()))
        })
        .collect()
}

/// Least-squares fit of `bound ≈ exp(-c·b^d)`, i.e. of `ln(-ln bound)` against
/// `ln b`, using the smallest bound for each `b`. Diagnostic only.
pub fn exponent_fit(points: &[(u64, Rational)]) -> Result<(f64, f64), LogMeasureError> {
    let mut best: std::collections::BTreeMap<u64, &Rational> = std::collections::BTreeMap::new();
    for (b, v) in points {
        if *b == 0 || !v.is_positive() || *v >= Rational::one() {
            continue;
        }
        best.entry(*b).and_modify(|x| *x = (*x).min(v)).or_insert(v);
    }
    if best.len() < 3 {
        return Err(LogMeasureError::DegenerateFit { distinct: best.len() });
    }
    let pts: Vec<(f64, f64)> = best
        .iter()
        .map(|(b, v)| ((*b as f64).ln(), (-crate::algebra::rational::ln_approx(v)).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let d = sxy / sxx;
    Ok(((my - d * mx).exp(), d))
}
