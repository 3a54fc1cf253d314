//! The ladder `R_1 = R`, `R_{k+1} = T·R_k'`, its integer forms at `ξ`, and
//! the determinant lower bound on `|Σ a_i f_i(ξ)|`.
//!
//! When `T·A` has rational coefficients with common denominator `δ`, the
//! ladder stores `Q_{k,i} = δ^{k-1}·P_{k,i}`, which are integer polynomials.

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    cofactor, den, det_exact, rank, IntMatrix, IntPoly, Integer, RatPoly, Rational,
};
use crate::auxiliary::{self, combine, default_eps1, AuxiliaryBasis, AuxiliaryError};
use crate::efunction::{DiffSystem, EFunctionError};
use crate::evalcert::{eval_component, round_down_significant, round_up_significant, EvalError, RatInterval};

/// Significant bits kept when rounding reported bounds.
const REPORT_BITS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("target vector is zero")]
    ZeroTarget,
    #[error("target has {got} entries, the system has {expected} components")]
    TargetLength { expected: usize, got: usize },
    #[error("xi = {0} is zero or a root of T")]
    SingularEvaluationPoint(String),
    #[error("ladder at n = {n} has rank {rank} < {m}")]
    RankDeficientLadder { n: usize, rank: usize, m: usize },
    #[error("no ladder rows complete the target to a nonsingular matrix at n = {n}")]
    TargetInSpanFailure { n: usize },
    #[error("internal error: ladder identity fails at row {row}")]
    LadderVerification { row: usize },
    #[error("internal error: degree of row {row} exceeds n + (k-1)q")]
    DegreeBound { row: usize },
    #[error("no certificate for n in {n_start}..={n_max} ({} attempts)", attempts.len())]
    ExhaustedN {
        n_start: usize,
        n_max: usize,
        attempts: Vec<Attempt>,
    },
    #[error(transparent)]
    Auxiliary(#[from] AuxiliaryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    System(#[from] EFunctionError),
}

/// `m + t₁` with `t₁ = q(m-1)m/2 + ⌊ε₁ n⌋ + p`.
pub fn ladder_length(m: usize, q: usize, p: usize, n: usize, eps1: &Rational) -> usize {
    m + q * (m - 1) * m / 2 + auxiliary::floor_usize(&(eps1 * Rational::from_integer(n.into()))) + p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormsLadder {
    /// `rows[k-1][i] = Q_{k,i}`
    pub rows: Vec<Vec<IntPoly>>,
    pub t: IntPoly,
    pub delta: Integer,
    pub n: usize,
    pub q: usize,
    /// `n + (k-1)q` per row.
    pub degree_bounds: Vec<usize>,
    /// Rows where some degree reaches its bound (the strict form fails).
    pub degree_bound_attained: Vec<usize>,
    pub verified_order: usize,
}

impl FormsLadder {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn poly_row_series(row: &[IntPoly], series: &[crate::algebra::RatSeries], len: usize) -> Vec<Rational> {
    combine(row, series, len)
}

pub fn build_ladder(basis: &AuxiliaryBasis, sys: &DiffSystem, k: usize) -> Result<FormsLadder, FormsError> {
    let m = sys.m();
    let params = sys.params()?;
    let delta = params.delta.clone();
    let t = sys.t().clone();
    let dta: Vec<Vec<IntPoly>> = sys
        .ta()
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    p.scale(&Rational::from_integer(delta.clone()))
                        .to_int()
                        .expect("delta clears T·A")
                })
                .collect()
        })
        .collect();
    let mut rows = vec![basis.polys.clone()];
    for _ in 1..k {
        let prev = rows.last().unwrap();
        let next: Vec<IntPoly> = (0..m)
            .map(|j| {
                let mut acc = (&t * &prev[j].derivative()).map(|c| c * &delta);
                for (i, p) in prev.iter().enumerate() {
                    acc = &acc + &(p * &dta[i][j]);
                }
                acc
            })
            .collect();
        rows.push(next);
    }

    let degree_bounds: Vec<usize> = (0..k).map(|r| basis.n + r * params.q).collect();
    let mut degree_bound_attained = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let max_deg = row.iter().filter_map(IntPoly::degree).max();
        match max_deg {
            Some(d) if d > degree_bounds[r] => return Err(FormsError::DegreeBound { row: r + 1 }),
            Some(d) if d == degree_bounds[r] => degree_bound_attained.push(r + 1),
            _ => {}
        }
    }

    // Σ Q_{k+1,i} f_i = δ·T·(Σ Q_{k,i} f_i)' on truncations
    let order = basis.achieved_order + k * (params.q + 1) + 8;
    let series = sys.coefficients(order)?;
    let tr = t.to_rat().scale(&Rational::from_integer(delta.clone()));
    let mut prev = poly_row_series(&rows[0], &series, order + 1);
    for (r, row) in rows.iter().enumerate().skip(1) {
        let cur = poly_row_series(row, &series, order + 1);
        let deriv: Vec<Rational> = prev
            .iter()
            .enumerate()
            .skip(1)
            .map(|(v, c)| c * Rational::from_integer(v.into()))
            .collect();
        let lhs = crate::algebra::RatSeries::new(deriv).mul_poly(&tr);
        if lhs.coeffs() != &cur[..order] {
            return Err(FormsError::LadderVerification { row: r + 1 });
        }
        prev = cur;
    }

    Ok(FormsLadder {
        rows,
        t,
        delta,
        n: basis.n,
        q: params.q,
        degree_bounds,
        degree_bound_attained,
        verified_order: order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerForms {
    pub xi: Rational,
    /// `a_{k,i} = s_k·P_{k,i}(ξ)`
    pub rows: Vec<Vec<Integer>>,
    /// `s_k = den(ξ)^{n+(k-1)q}·δ^{k-1}`
    pub scales: Vec<Integer>,
}

fn check_point(t: &IntPoly, xi: &Rational) -> Result<(), FormsError> {
    if xi.is_zero() || t.to_rat().eval(xi).is_zero() {
        return Err(FormsError::SingularEvaluationPoint(crate::algebra::format_rational(xi)));
    }
    Ok(())
}

pub fn evaluate_forms(ladder: &FormsLadder, xi: &Rational) -> Result<IntegerForms, FormsError> {
    check_point(&ladder.t, xi)?;
    let d = den(xi);
    let mut rows = Vec::with_capacity(ladder.len());
    let mut scales = Vec::with_capacity(ladder.len());
    for (r, row) in ladder.rows.iter().enumerate() {
        let dpow = Rational::from_integer(num_traits::pow(d.clone(), ladder.degree_bounds[r]));
        rows.push(
            row.iter()
                .map(|p| {
                    let v = p.to_rat().eval(xi) * &dpow;
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect(),
        );
        scales.push(dpow.to_integer() * num_traits::pow(ladder.delta.clone(), r));
    }
    Ok(IntegerForms {
        xi: xi.clone(),
        rows,
        scales,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundConfig {
    /// Defaults to `1/(2m)`.
    pub eps1: Option<Rational>,
    /// Interval width target `2^-precision` for function values.
    pub precision: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            eps1: None,
            precision: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub n: usize,
    pub eps1: Rational,
    pub tau: usize,
    pub achieved_order: usize,
    pub ladder_length: usize,
    pub ladder_rank: usize,
    /// 1-based ladder rows placed above the target row.
    pub selected_rows: Vec<usize>,
    /// 1-based column index `ℓ`.
    pub ell: usize,
    pub delta: Integer,
    /// `Δ_{j,ℓ}` for `j = 1..m` (the last one belongs to the target row).
    pub cofactors: Vec<Integer>,
    /// Upper bounds on `|s_k R_k(ξ)|` for the selected rows.
    pub form_bounds: Vec<Rational>,
    pub remainder_cutoff: usize,
    pub f_ell: RatInterval,
    /// `|f_ℓ|_lo·|Δ| - (m-1)·max|Δ_{j,ℓ}|·max U_j`
    pub margin: Rational,
    pub lower_bound: Option<Rational>,
    pub status: BoundStatus,
}

/// Majorant of `|(T·d/dz)^j z^ν|` at `x`, divided by `x^ν`: `W^j·Π_{s<j}(ν + s·δ')`.
fn derivative_factor(w: &Rational, j: usize, nu: usize, dprime: usize) -> Rational {
    let mut f = Rational::one();
    for s in 0..j {
        f *= w * Rational::from_integer((nu + s * dprime).into());
    }
    f
}

struct FormValueBounds {
    cutoff: usize,
    /// indexed by ladder row (0-based)
    bounds: Vec<Option<Rational>>,
}

/// Upper bounds on `|R_k(ξ)|` (before scaling) for the requested 0-based rows.
fn form_value_bounds(
    sys: &DiffSystem,
    basis: &AuxiliaryBasis,
    ladder: &FormsLadder,
    xi: &Rational,
    wanted: &[usize],
) -> Result<FormValueBounds, FormsError> {
    let x = xi.abs();
    let t_hat = RatPoly::new(ladder.t.coeffs().iter().map(|c| Rational::from_integer(c.abs())).collect());
    let w = t_hat.eval(&x) / &x;
    let dprime = ladder.t.degree().unwrap_or(0).saturating_sub(1);
    let tr = ladder.t.to_rat();
    let n = basis.n;
    let jmax = wanted.iter().copied().max().unwrap_or(0);
    let start = basis.achieved_order.max(n + 1) + n + 16;
    let cap = start + 128;
    let mut cutoff = start;
    loop {
        let rem = auxiliary::remainder(basis, sys, cutoff)?;
        let mut head = RatPoly::new(rem.coeffs.clone());
        let mut bounds = vec![None; jmax + 1];
        let mut tight = true;
        // ratio of consecutive tail terms beyond the cutoff
        let c = Rational::from_integer(cutoff.into());
        let growth = (&c + Rational::from_integer(2.into())) / (&c + Rational::one());
        let first = rem.tail.bound(cutoff + 1) * num_traits::pow(x.clone(), cutoff + 1);
        for j in 0..=jmax {
            if wanted.contains(&j) {
                let rho = &rem.tail.c_hat * &x / Rational::from_integer((cutoff + 2 - n).into())
                    * num_traits::pow(growth.clone(), j);
                if rho >= Rational::one() {
                    tight = false;
                    bounds[j] = None;
                } else {
                    let tail = &first * derivative_factor(&w, j, cutoff + 1, dprime)
                        / (Rational::one() - &rho);
                    let h = head.eval(xi).abs();
                    if &tail * Rational::from_integer(Integer::one() << 32u32) > h {
                        tight = false;
                    }
                    bounds[j] = Some(h + tail);
                }
            }
            head = &tr * &head.derivative();
        }
        let all_finite = wanted.iter().all(|&j| bounds[j].is_some());
        if (tight || cutoff >= cap) && all_finite {
            return Ok(FormValueBounds { cutoff, bounds });
        }
        cutoff += 16 + cutoff / 4;
    }
}

fn check_target(sys: &DiffSystem, target: &[Integer]) -> Result<(), FormsError> {
    if target.len() != sys.m() {
        return Err(FormsError::TargetLength {
            expected: sys.m(),
            got: target.len(),
        });
    }
    if target.iter().all(Zero::is_zero) {
        return Err(FormsError::ZeroTarget);
    }
    Ok(())
}

pub fn certified_lower_bound(
    sys: &DiffSystem,
    xi: &Rational,
    target: &[Integer],
    n: usize,
    config: &BoundConfig,
) -> Result<BoundCertificate, FormsError> {
    check_target(sys, target)?;
    check_point(sys.t(), xi)?;
    sys.growth().ok_or(AuxiliaryError::MissingGrowth)?;
    let m = sys.m();
    let eps1 = config.eps1.clone().unwrap_or_else(|| default_eps1(m));
    let params = sys.params()?;
    let basis = auxiliary::construct(sys, n, &eps1)?;
    let k = ladder_length(m, params.q, params.p, n, &eps1);
    let ladder = build_ladder(&basis, sys, k)?;
    let forms = evaluate_forms(&ladder, xi)?;

    let ladder_rank = rank(&forms.rows);
    if ladder_rank < m {
        return Err(FormsError::RankDeficientLadder { n, rank: ladder_rank, m });
    }
    // greedy completion of the target row
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = vec![target.to_vec()];
    for (r, row) in forms.rows.iter().enumerate() {
        if chosen.len() + 1 == m {
            break;
        }
        let mut trial = current.clone();
        trial.push(row.clone());
        if rank(&trial) > current.len() {
            current = trial;
            chosen.push(r);
        }
    }
    if chosen.len() + 1 < m {
        return Err(FormsError::TargetInSpanFailure { n });
    }
    let mut mat_rows: Vec<Vec<Integer>> = chosen.iter().map(|&r| forms.rows[r].clone()).collect();
    mat_rows.push(target.to_vec());
    let mat = IntMatrix::from_rows(mat_rows);
    let delta = det_exact(&mat).expect("square");
    if delta.is_zero() {
        return Err(FormsError::TargetInSpanFailure { n });
    }

    let width = Rational::new(One::one(), Integer::one() << config.precision);
    let values = (0..m)
        .map(|i| eval_component(sys, i, xi, &width))
        .collect::<Result<Vec<_>, _>>()?;
    let cof = |j: usize, l: usize| cofactor(&mat, j, l).expect("in range");
    let ell = (0..m)
        .filter(|&l| !cof(m - 1, l).is_zero())
        .max_by(|&a, &b| {
            values[a]
                .abs_lower()
                .cmp(&values[b].abs_lower())
                .then_with(|| b.cmp(&a))
        })
        .expect("Δ ≠ 0 has a nonzero cofactor in its last row");
    let cofactors: Vec<Integer> = (0..m).map(|j| cof(j, ell)).collect();

    let fv = form_value_bounds(sys, &basis, &ladder, xi, &chosen)?;
    let form_bounds: Vec<Rational> = chosen
        .iter()
        .map(|&r| {
            let raw = fv.bounds[r].clone().expect("requested");
            round_up_significant(&(raw * Rational::from_integer(forms.scales[r].clone())), REPORT_BITS)
        })
        .collect();
    let max_u = form_bounds.iter().max().cloned().unwrap_or_else(Rational::zero);
    let max_cof = cofactors[..m - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Integer::zero);
    let f_lo = values[ell].abs_lower();
    let margin = &f_lo * Rational::from_integer(delta.abs())
        - Rational::from_integer(Integer::from(m - 1) * max_cof) * &max_u;
    let (lower_bound, status) = if margin.is_positive() {
        let b = &margin / Rational::from_integer(cofactors[m - 1].abs());
        (Some(round_down_significant(&b, REPORT_BITS)), BoundStatus::Certified)
    } else {
        (None, BoundStatus::NotCertified)
    };
    Ok(BoundCertificate {
        n,
        eps1,
        tau: basis.tau,
        achieved_order: basis.achieved_order,
        ladder_length: k,
        ladder_rank,
        selected_rows: chosen.iter().map(|r| r + 1).collect(),
        ell: ell + 1,
        delta,
        cofactors,
        form_bounds,
        remainder_cutoff: fv.cutoff,
        f_ell: values[ell].clone(),
        margin,
        lower_bound,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptOutcome {
    NotCertified { margin: Rational },
    RankDeficient { rank: usize },
    TargetInSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub n: usize,
    pub outcome: AttemptOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptiveBound {
    pub certificate: BoundCertificate,
    /// Failed attempts before the certified one.
    pub attempts: Vec<Attempt>,
}

pub fn adaptive_bound(
    sys: &DiffSystem,
    xi: &Rational,
    target: &[Integer],
    n_start: usize,
    n_max: usize,
    config: &BoundConfig,
) -> Result<AdaptiveBound, FormsError> {
    check_target(sys, target)?;
    check_point(sys.t(), xi)?;
    let mut attempts = Vec::new();
    for n in n_start.max(1)..=n_max {
        let outcome = match certified_lower_bound(sys, xi, target, n, config) {
            Ok(c) if c.status == BoundStatus::Certified => {
                return Ok(AdaptiveBound {
                    certificate: c,
                    attempts,
                })
            }
            Ok(c) => AttemptOutcome::NotCertified { margin: c.margin },
            Err(FormsError::RankDeficientLadder { rank, .. }) => AttemptOutcome::RankDeficient { rank },
            Err(FormsError::TargetInSpanFailure { .. }) => AttemptOutcome::TargetInSpan,
            Err(e) => return Err(e),
        };
        attempts.push(Attempt { n, outcome });
    }
    Err(FormsError::ExhaustedN {
        n_start,
        n_max,
        attempts,
    })
}
