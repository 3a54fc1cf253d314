//! Serializable reports. Field order is declaration order; exact values are
//! strings (`"p/q"` for rationals), decimal approximations are labelled.

use std::collections::BTreeMap;

use efcert::algebra::{format_rational, Integer, Rational};
use efcert::auxiliary::AuxiliaryBasis;
use efcert::efunction::{DiffSystem, SystemParams};
use efcert::evalcert::{decimal, RatInterval};
use efcert::forms::{Attempt, AttemptOutcome, BoundCertificate, BoundStatus};
use efcert::logmeasure::{FormsOutcome, LogBoundResult, ScanRow, ScanTable};
use efcert::zeroestimate::{Exponent, ExponentData, N0Bound, PointStatus};
use serde::Serialize;

/// Digits used for the human-readable decimal fields.
pub const DECIMAL_DIGITS: usize = 30;

fn q(r: &Rational) -> String {
    format_rational(r)
}

fn z(i: &Integer) -> String {
    i.to_string()
}

#[derive(Debug, Serialize)]
pub struct Command {
    pub name: &'static str,
    pub args: BTreeMap<&'static str, String>,
}

#[derive(Debug, Serialize)]
pub struct Interval {
    pub lo: String,
    pub hi: String,
    pub lo_decimal: String,
    pub hi_decimal: String,
}

impl From<&RatInterval> for Interval {
    fn from(iv: &RatInterval) -> Self {
        Interval {
            lo: q(iv.lo()),
            hi: q(iv.hi()),
            lo_decimal: decimal(iv.lo(), DECIMAL_DIGITS),
            hi_decimal: decimal(iv.hi(), DECIMAL_DIGITS),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Growth {
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub provenance: &'static str,
}

#[derive(Debug, Serialize)]
pub struct PointReport {
    pub point: String,
    pub source: &'static str,
    pub exponents: Vec<String>,
    pub modulus_bound: String,
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "E")]
    pub e: String,
    #[serde(rename = "T")]
    pub t: String,
    pub delta: String,
    pub growth: Option<Growth>,
    pub exponent_points: Vec<PointReport>,
    pub exponent_ceil: Option<u64>,
    pub n0_bound: Option<String>,
    pub n0_unavailable: Option<String>,
}

impl Parameters {
    pub fn new(sys: &DiffSystem, params: &SystemParams, exps: Result<&ExponentData, String>, n0: Option<N0Bound>) -> Self {
        let (points, ceil, missing) = match exps {
            Ok(d) => (
                d.points
                    .iter()
                    .map(|p| PointReport {
                        point: p.point.to_string(),
                        source: match p.status {
                            PointStatus::Regular => "computed",
                            PointStatus::User => "user bound",
                        },
                        exponents: p
                            .exponents
                            .iter()
                            .map(|e| match e {
                                Exponent::Exact(r) => q(r),
                                Exponent::Bounded(b) => format!("|x| <= {}", q(b)),
                            })
                            .collect(),
                        modulus_bound: q(&p.modulus_bound),
                    })
                    .collect(),
                Some(d.ceil),
                None,
            ),
            Err(e) => (Vec::new(), None, Some(e)),
        };
        Parameters {
            m: sys.m(),
            p: params.p,
            q: params.q,
            e: q(&params.e),
            t: params.t.to_string(),
            delta: z(&params.delta),
            growth: sys.growth().map(|g| Growth {
                c: q(&g.c),
                d: q(&g.d),
                provenance: g.provenance.as_str(),
            }),
            exponent_points: points,
            exponent_ceil: ceil,
            n0_bound: n0.map(|b| b.value.to_string()),
            n0_unavailable: missing,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    pub command: Command,
    pub labels: Vec<String>,
    pub parameters: Parameters,
    pub default_eps1: String,
}

#[derive(Debug, Serialize)]
pub struct N0Report {
    pub command: Command,
    pub n0_bound: String,
}

#[derive(Debug, Serialize)]
pub struct ConstructReport {
    pub command: Command,
    pub m: usize,
    pub n: usize,
    pub eps1: String,
    pub tau: usize,
    pub t1: usize,
    pub ladder_length: usize,
    #[serde(rename = "P")]
    pub polys: Vec<String>,
    pub achieved_order: usize,
    /// `false` means the order is at least `achieved_order`.
    pub order_exact: bool,
    pub height: String,
    pub kernel_dim: usize,
}

impl ConstructReport {
    pub fn new(command: Command, basis: &AuxiliaryBasis, ladder_length: usize) -> Self {
        ConstructReport {
            command,
            m: basis.polys.len(),
            n: basis.n,
            eps1: q(&basis.eps1),
            tau: basis.tau,
            t1: ladder_length - basis.polys.len(),
            ladder_length,
            polys: basis.polys.iter().map(ToString::to_string).collect(),
            achieved_order: basis.achieved_order,
            order_exact: basis.order_exact,
            height: z(&basis.height),
            kernel_dim: basis.kernel_dim,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AttemptReport {
    pub n: usize,
    pub outcome: &'static str,
    pub detail: Option<String>,
}

impl From<&Attempt> for AttemptReport {
    fn from(a: &Attempt) -> Self {
        let (outcome, detail) = match &a.outcome {
            AttemptOutcome::NotCertified { margin } => ("NotCertified", Some(format!("margin {}", q(margin)))),
            AttemptOutcome::RankDeficient { rank } => ("RankDeficientLadder", Some(format!("rank {rank}"))),
            AttemptOutcome::TargetInSpan => ("TargetInSpanFailure", None),
        };
        AttemptReport { n: a.n, outcome, detail }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub status: &'static str,
    pub n: usize,
    pub eps1: String,
    pub tau: usize,
    pub t1: usize,
    pub achieved_order: usize,
    pub ladder_length: usize,
    pub ladder_rank: usize,
    pub selected_rows: Vec<usize>,
    pub ell: usize,
    pub delta: String,
    pub cofactors: Vec<String>,
    pub form_bounds: Vec<String>,
    pub remainder_cutoff: usize,
    pub f_ell: Interval,
    pub margin: String,
    pub lower_bound: Option<String>,
    pub lower_bound_decimal: Option<String>,
}

impl From<&BoundCertificate> for CertificateReport {
    fn from(c: &BoundCertificate) -> Self {
        CertificateReport {
            status: match c.status {
                BoundStatus::Certified => "Certified",
                BoundStatus::NotCertified => "NotCertified",
            },
            n: c.n,
            eps1: q(&c.eps1),
            tau: c.tau,
            t1: c.ladder_length - c.cofactors.len(),
            achieved_order: c.achieved_order,
            ladder_length: c.ladder_length,
            ladder_rank: c.ladder_rank,
            selected_rows: c.selected_rows.clone(),
            ell: c.ell,
            delta: z(&c.delta),
            cofactors: c.cofactors.iter().map(z).collect(),
            form_bounds: c.form_bounds.iter().map(q).collect(),
            remainder_cutoff: c.remainder_cutoff,
            f_ell: (&c.f_ell).into(),
            margin: q(&c.margin),
            lower_bound: c.lower_bound.as_ref().map(q),
            lower_bound_decimal: c.lower_bound.as_ref().map(|b| decimal(b, DECIMAL_DIGITS)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub command: Command,
    pub parameters: Parameters,
    pub target: Vec<String>,
    #[serde(rename = "H")]
    pub height: String,
    pub n_start: usize,
    pub n_max: usize,
    pub status: &'static str,
    pub attempts: Vec<AttemptReport>,
    pub certificate: Option<CertificateReport>,
}

#[derive(Debug, Serialize)]
pub struct FormsReport {
    pub status: &'static str,
    pub n_max: usize,
    pub attempts: Vec<AttemptReport>,
    pub certificate: Option<CertificateReport>,
}

impl FormsReport {
    fn new(outcome: &FormsOutcome, n_max: usize) -> Self {
        match outcome {
            FormsOutcome::Certified(a) => FormsReport {
                status: "Certified",
                n_max,
                attempts: a.attempts.iter().map(Into::into).collect(),
                certificate: Some((&a.certificate).into()),
            },
            FormsOutcome::Failed(efcert::forms::FormsError::ExhaustedN { attempts, .. }) => FormsReport {
                status: "ExhaustedN",
                n_max,
                attempts: attempts.iter().map(Into::into).collect(),
                certificate: None,
            },
            FormsOutcome::Failed(_) => FormsReport {
                status: "Failed",
                n_max,
                attempts: Vec::new(),
                certificate: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AugmentedReport {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "T")]
    pub t: String,
    pub n0_bound: Option<String>,
    #[serde(rename = "E")]
    pub e: String,
    pub delta: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
}

#[derive(Debug, Serialize)]
pub struct LogResultReport {
    pub a: String,
    pub b: String,
    pub beta: String,
    /// Structural data of the system extended by `exp(βz)`: `m, p, q, T` and
    /// the `n₀` bound do not depend on `β`, while `E, δ, C, D` do.
    pub augmented: AugmentedReport,
    pub f_value: Interval,
    pub exp_value: Interval,
    pub omega_upper: String,
    pub guard: Option<bool>,
    pub forms: FormsReport,
    pub forms_bound: Option<String>,
    pub direct_bound: Option<String>,
    pub bound: String,
    pub bound_decimal: String,
    pub path: &'static str,
    pub oracle_distance: Interval,
}

impl From<&LogBoundResult> for LogResultReport {
    fn from(r: &LogBoundResult) -> Self {
        LogResultReport {
            a: z(&r.a),
            b: z(&r.b),
            beta: q(&r.beta),
            augmented: AugmentedReport {
                m: r.m,
                p: r.params.p,
                q: r.params.q,
                t: r.params.t.to_string(),
                n0_bound: r.n0.map(|b| b.value.to_string()),
                e: q(&r.params.e),
                delta: z(&r.params.delta),
                c: q(&r.growth.c),
                d: q(&r.growth.d),
            },
            f_value: (&r.f_value).into(),
            exp_value: (&r.exp_value).into(),
            omega_upper: q(&r.omega_upper),
            guard: r.guard,
            forms: FormsReport::new(&r.forms, r.n_max),
            forms_bound: r.forms_bound.as_ref().map(q),
            direct_bound: r.direct_bound.as_ref().map(q),
            bound: q(&r.bound),
            bound_decimal: decimal(&r.bound, DECIMAL_DIGITS),
            path: r.path.as_str(),
            oracle_distance: (&r.oracle).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LogBoundReport {
    pub command: Command,
    pub xi: String,
    pub status: &'static str,
    pub result: LogResultReport,
}

#[derive(Debug, Serialize)]
pub struct ScanRowReport {
    pub b: String,
    pub a: String,
    pub status: &'static str,
    pub error: Option<String>,
    pub result: Option<LogResultReport>,
}

impl From<&ScanRow> for ScanRowReport {
    fn from(r: &ScanRow) -> Self {
        match &r.outcome {
            Ok(res) => ScanRowReport {
                b: z(&r.b),
                a: z(&r.a),
                status: "Certified",
                error: None,
                result: Some(res.into()),
            },
            Err(e) => ScanRowReport {
                b: z(&r.b),
                a: z(&r.a),
                status: "Failed",
                error: Some(e.to_string()),
                result: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Fit {
    pub c: Option<String>,
    pub d: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub command: Command,
    pub xi: String,
    pub ln_f: Interval,
    pub rows: Vec<ScanRowReport>,
    pub exponent_fit: Fit,
}

impl ScanReport {
    pub fn new(command: Command, table: &ScanTable, fit: Result<(f64, f64), String>) -> Self {
        ScanReport {
            command,
            xi: q(&table.xi),
            ln_f: (&table.ln_f).into(),
            rows: table.rows.iter().map(Into::into).collect(),
            exponent_fit: match fit {
                Ok((c, d)) => Fit {
                    c: Some(format!("{c:.6}")),
                    d: Some(format!("{d:.6}")),
                    note: Some("least-squares fit of ln(-ln bound) against ln b; diagnostic only".into()),
                },
                Err(e) => Fit {
                    c: None,
                    d: None,
                    note: Some(e),
                },
            },
        }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
