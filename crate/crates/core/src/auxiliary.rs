//! Auxiliary polynomials `P_1..P_m` of degree `≤ n` such that
//! `R = Σ P_i f_i` vanishes to order `≥ τ` at the origin.

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    kernel_basis, rational::factorial, Integer, IntPoly, RatMatrix, RatSeries, Rational,
};
use crate::efunction::{DiffSystem, EFunctionError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuxiliaryError {
    #[error("eps1 = {eps1} must lie strictly between 0 and 1/(2m-1) = 1/{bound}")]
    EpsilonOutOfRange { eps1: String, bound: usize },
    #[error("remainder cutoff {cutoff} is below the order of vanishing {order}")]
    CutoffBelowOrder { cutoff: usize, order: usize },
    #[error("system has no growth certificate")]
    MissingGrowth,
    #[error(transparent)]
    System(#[from] EFunctionError),
}

/// `m(n+1) - ⌊ε₁ n⌋ - 1`
pub fn vanishing_order_target(m: usize, n: usize, eps1: &Rational) -> Result<usize, AuxiliaryError> {
    check_eps1(m, eps1)?;
    let drop = floor_usize(&(eps1 * Rational::from_integer(n.into())));
    Ok(m * (n + 1) - drop - 1)
}

pub fn default_eps1(m: usize) -> Rational {
    Rational::new(One::one(), (2 * m).into())
}

pub(crate) fn check_eps1(m: usize, eps1: &Rational) -> Result<(), AuxiliaryError> {
    let bound = 2 * m - 1;
    if !eps1.is_positive() || eps1 * Rational::from_integer(bound.into()) >= Rational::one() {
        return Err(AuxiliaryError::EpsilonOutOfRange {
            eps1: crate::algebra::format_rational(eps1),
            bound,
        });
    }
    Ok(())
}

pub(crate) fn floor_usize(r: &Rational) -> usize {
    r.floor().to_integer().try_into().expect("nonnegative and small")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryBasis {
    pub n: usize,
    pub eps1: Rational,
    pub tau: usize,
    pub polys: Vec<IntPoly>,
    /// Order of vanishing of `R` at 0; a lower bound when `order_exact` is false.
    pub achieved_order: usize,
    pub order_exact: bool,
    /// `max |b_{i,ν}|`
    pub height: Integer,
    pub kernel_dim: usize,
}

impl AuxiliaryBasis {
    /// Coefficients `b_{i,ν}` laid out as `i·(n+1) + ν`.
    pub fn coefficient_vector(&self) -> Vec<Integer> {
        self.polys
            .iter()
            .flat_map(|p| (0..=self.n).map(move |v| p.coeff(v)))
            .collect()
    }

    /// Search limit used for `achieved_order`.
    pub fn order_search_limit(&self) -> usize {
        order_limit(self.polys.len(), self.n, self.tau)
    }
}

fn order_limit(m: usize, n: usize, tau: usize) -> usize {
    tau + m * (n + 1) + 8
}

/// Taylor coefficients `r_0..=r_len-1` of `Σ P_i f_i`.
pub(crate) fn combine(polys: &[IntPoly], series: &[RatSeries], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (p, s) in polys.iter().zip(series) {
        for (v, b) in p.coeffs().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let b = Rational::from_integer(b.clone());
            for k in v..len.min(s.len() + v) {
                let c = s.coeff(k - v);
                if !c.is_zero() {
                    out[k] += &b * c;
                }
            }
        }
    }
    out
}

pub fn construct(sys: &DiffSystem, n: usize, eps1: &Rational) -> Result<AuxiliaryBasis, AuxiliaryError> {
    let m = sys.m();
    let tau = vanishing_order_target(m, n, eps1)?;
    let limit = order_limit(m, n, tau);
    let series = sys.coefficients(limit)?;
    let cols = m * (n + 1);
    let mat = RatMatrix::from_fn(tau, cols, |k, col| {
        let (i, v) = (col / (n + 1), col % (n + 1));
        if k >= v {
            series[i].coeff(k - v).clone()
        } else {
            Rational::zero()
        }
    });
    let kernel = kernel_basis(&mat);
    let kernel_dim = kernel.len();
    let best = kernel
        .into_iter()
        .min_by(|a, b| {
            let na = a.iter().map(|x| x.abs()).max();
            let nb = b.iter().map(|x| x.abs()).max();
            na.cmp(&nb).then_with(|| a.cmp(b))
        })
        .expect("more unknowns than conditions");
    let polys: Vec<IntPoly> = best
        .chunks(n + 1)
        .map(|c| IntPoly::new(c.to_vec()))
        .collect();
    let height = best.iter().map(|x| x.abs()).max().unwrap_or_default();
    let r = combine(&polys, &series, limit + 1);
    debug_assert!(r[..tau].iter().all(Zero::is_zero));
    let first = r.iter().position(|x| !x.is_zero());
    Ok(AuxiliaryBasis {
        n,
        eps1: eps1.clone(),
        tau,
        polys,
        achieved_order: first.unwrap_or(limit + 1),
        order_exact: first.is_some(),
        height,
        kernel_dim,
    })
}

/// Majorant `|r_ν| ≤ m(n+1)·B·Ĉ^{ν+1}/(ν-n)!` for `ν ≥ n`, with `Ĉ = max(1, C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailBound {
    pub m: usize,
    pub n: usize,
    pub height: Integer,
    pub c_hat: Rational,
}

impl TailBound {
    pub fn bound(&self, nu: usize) -> Rational {
        assert!(nu >= self.n, "tail majorant needs nu >= n");
        let lead = Rational::from_integer(Integer::from(self.m * (self.n + 1)) * &self.height);
        lead * num_traits::pow(self.c_hat.clone(), nu + 1) / Rational::from_integer(factorial(nu - self.n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainderSeries {
    /// Taylor coefficients `a_ν/ν!` for `ν ≤ cutoff`.
    pub coeffs: Vec<Rational>,
    pub cutoff: usize,
    pub tail: TailBound,
}

pub fn remainder(basis: &AuxiliaryBasis, sys: &DiffSystem, cutoff: usize) -> Result<RemainderSeries, AuxiliaryError> {
    if cutoff < basis.achieved_order {
        return Err(AuxiliaryError::CutoffBelowOrder {
            cutoff,
            order: basis.achieved_order,
        });
    }
    let g = sys.growth().ok_or(AuxiliaryError::MissingGrowth)?;
    let series = sys.coefficients(cutoff)?;
    Ok(RemainderSeries {
        coeffs: combine(&basis.polys, &series, cutoff + 1),
        cutoff,
        tail: TailBound {
            m: sys.m(),
            n: basis.n,
            height: basis.height.clone(),
            c_hat: g.c.clone().max(Rational::one()),
        },
    })
}
