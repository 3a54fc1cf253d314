//! Local exponents at singular points and the zero-estimate threshold `n0`.
//!
//! The system is first split into its diagonal blocks (connected components
//! of the nonzero pattern of `A`). A block in companion form is treated as
//! the scalar equation `y^(k) = Σ c_j y^(j)` and tested with the Fuchs
//! criterion; any other block is regular at a point only when `A` has at
//! most a simple pole there, in which case the exponents are the eigenvalues
//! of the residue matrix. Constant `1×1` blocks are exponentials and have
//! exponent 0 everywhere. Irregular points need a user-supplied bound.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{RatFunc, RatPoly, Rational};
use crate::efunction::{minimal_denominator, DiffSystem, SingularPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZeroEstimateError {
    #[error("{0} is an irregular singular point; supply an exponent bound for it")]
    IrregularSingularPoint(SingularPoint),
    #[error("{0} is not a singular point of the system")]
    NotASingularity(SingularPoint),
    #[error("no exponent bound supplied for irregular point {0}")]
    MissingExponentBound(SingularPoint),
    #[error(transparent)]
    System(#[from] crate::efunction::EFunctionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Exact(Rational),
    /// A root that is not rational, known only through a modulus bound.
    Bounded(Rational),
}

impl Exponent {
    pub fn modulus_bound(&self) -> Rational {
        match self {
            Exponent::Exact(r) => r.abs(),
            Exponent::Bounded(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Regular,
    /// At least one block is irregular here and a user bound was used.
    User,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointExponents {
    pub point: SingularPoint,
    pub status: PointStatus,
    pub exponents: Vec<Exponent>,
    /// Upper bound on the moduli of all exponents at this point.
    pub modulus_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentData {
    pub points: Vec<PointExponents>,
    pub max_modulus: Rational,
    pub ceil: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct N0Bound {
    pub value: u64,
    pub m: usize,
    pub q: usize,
    pub exponent_ceil: u64,
}

/// `2(q+1)·m²·(𝓔 + (q+1)·m + 1)`
pub fn n0_bound(m: usize, q: usize, exponent_ceil: u64) -> N0Bound {
    let (m64, q1) = (m as u64, q as u64 + 1);
    let value = 2u64
        .saturating_mul(q1)
        .saturating_mul(m64.saturating_mul(m64))
        .saturating_mul(exponent_ceil.saturating_add(q1.saturating_mul(m64)).saturating_add(1));
    N0Bound {
        value,
        m,
        q,
        exponent_ceil,
    }
}

/// The `n₀` bound of a system, from its `q` and its exponent data.
pub fn system_n0(sys: &DiffSystem) -> Result<N0Bound, ZeroEstimateError> {
    let q = sys.params()?.q;
    Ok(n0_bound(sys.m(), q, exponent_data(sys)?.ceil))
}

/// `exp(βz)` has exponent 0 at every point.
pub fn exponent_for_exp_block(_beta: &Rational) -> Vec<Rational> {
    vec![Rational::zero()]
}

/// Index sets of the diagonal blocks of `a`, ordered by smallest index.
pub fn diagonal_blocks(a: &[Vec<RatFunc>]) -> Vec<Vec<usize>> {
    let m = a.len();
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..m {
        for j in 0..m {
            if !a[i][j].is_zero() {
                let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
                if ri != rj {
                    comp[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_to_block = std::collections::BTreeMap::new();
    for i in 0..m {
        let r = find(&mut comp, i);
        let b = *root_to_block.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(i);
    }
    blocks
}

enum Local {
    Ordinary,
    Regular(Vec<Exponent>),
    Irregular,
}

fn sub_block(a: &[Vec<RatFunc>], idx: &[usize]) -> Vec<Vec<RatFunc>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect())
        .collect()
}

fn is_exp_block(b: &[Vec<RatFunc>]) -> bool {
    b.len() == 1 && b[0][0].as_poly().is_some_and(|p| p.degree().unwrap_or(0) == 0)
}

fn is_companion(b: &[Vec<RatFunc>]) -> bool {
    let k = b.len();
    (0..k - 1).all(|r| {
        (0..k).all(|c| {
            let want = if c == r + 1 { Rational::one() } else { Rational::zero() };
            b[r][c] == RatFunc::constant(want)
        })
    })
}

/// `r(1/w)`
fn invert_variable(r: &RatFunc) -> RatFunc {
    let rev = |p: &RatPoly| {
        let mut c = p.coeffs().to_vec();
        c.reverse();
        RatPoly::new(c)
    };
    let dn = r.num().degree().unwrap_or(0);
    let dd = r.den().degree().unwrap_or(0);
    let mut num = rev(r.num());
    let mut den = rev(r.den());
    if dd > dn {
        num = &num * &RatPoly::monomial(Rational::one(), dd - dn);
    } else {
        den = &den * &RatPoly::monomial(Rational::one(), dn - dd);
    }
    RatFunc::new(num, den)
}

/// Coefficient of `w^e` (any sign) in the Laurent expansion at `c`, plus the valuation.
fn laurent(r: &RatFunc, c: &Rational, upto: i64) -> (i64, impl Fn(i64) -> Rational) {
    let len = 4 + upto.max(0) as usize + r.pole_order_at(c);
    let (k, coeffs) = r.laurent_at(c, len);
    let k = k as i64;
    let val = if r.is_zero() {
        i64::MAX
    } else {
        coeffs.iter().position(|x| !x.is_zero()).map_or(i64::MAX, |p| p as i64 - k)
    };
    (val, move |e: i64| {
        let idx = e + k;
        if idx < 0 {
            Rational::zero()
        } else {
            coeffs.get(idx as usize).cloned().unwrap_or_else(Rational::zero)
        }
    })
}

/// `ρ(ρ-1)…(ρ-j+1)`
fn falling(j: usize) -> RatPoly {
    (0..j).fold(RatPoly::one(), |acc, i| {
        &acc * &RatPoly::new(vec![-Rational::from_integer(i.into()), Rational::one()])
    })
}

/// Local data of a block at a finite point `c` (or at `w = 0` after inversion).
fn local_finite(b: &[Vec<RatFunc>], c: &Rational) -> Local {
    let k = b.len();
    if b.iter().flatten().all(|r| r.pole_order_at(c) == 0) {
        return Local::Ordinary;
    }
    if is_companion(b) {
        let last = &b[k - 1];
        let mut indicial = falling(k);
        for (j, cj) in last.iter().enumerate() {
            let need = (k - j) as i64;
            let (val, coeff) = laurent(cj, c, 0);
            if val < -need {
                return Local::Irregular;
            }
            let g = coeff(-need);
            indicial = &indicial - &falling(j).scale(&g);
        }
        return Local::Regular(polynomial_roots(&indicial));
    }
    residue_exponents(b, c)
}

fn residue_exponents(b: &[Vec<RatFunc>], c: &Rational) -> Local {
    if b.iter().flatten().any(|r| r.pole_order_at(c) > 1) {
        return Local::Irregular;
    }
    let res: Vec<Vec<Rational>> = b
        .iter()
        .map(|row| row.iter().map(|r| laurent(r, c, 0).1(-1)).collect())
        .collect();
    Local::Regular(polynomial_roots(&characteristic_polynomial(&res)))
}

fn local_infinity(b: &[Vec<RatFunc>]) -> Local {
    let k = b.len();
    let zero = Rational::zero();
    if is_companion(b) {
        // y = z^{-ρ}: (-ρ)^(k) = Σ γ_j (-ρ)^(j), c_j ~ γ_j z^{-(k-j)}
        let last = &b[k - 1];
        let neg = |p: RatPoly| p.dilate(&-Rational::one());
        let mut indicial = neg(falling(k));
        for (j, cj) in last.iter().enumerate() {
            let need = (k - j) as i64;
            let (val, coeff) = laurent(&invert_variable(cj), &zero, need);
            if val < need {
                return Local::Irregular;
            }
            indicial = &indicial - &neg(falling(j)).scale(&coeff(need));
        }
        return Local::Regular(polynomial_roots(&indicial));
    }
    // B(w) = -A(1/w)/w^2
    let scale = RatFunc::new(
        RatPoly::constant(-Rational::one()),
        RatPoly::monomial(Rational::one(), 2),
    );
    let bw: Vec<Vec<RatFunc>> = b
        .iter()
        .map(|row| row.iter().map(|r| invert_variable(r).mul(&scale)).collect())
        .collect();
    if bw.iter().flatten().all(|r| r.pole_order_at(&zero) == 0) {
        return Local::Ordinary;
    }
    residue_exponents(&bw, &zero)
}

/// Local exponents of the whole system at `point`.
pub fn indicial_exponents(
    sys: &DiffSystem,
    point: &SingularPoint,
) -> Result<Vec<Exponent>, ZeroEstimateError> {
    let mut out = Vec::new();
    let mut singular = false;
    for idx in diagonal_blocks(sys.a()) {
        let b = sub_block(sys.a(), &idx);
        if is_exp_block(&b) {
            // exp(βz) is only singular at infinity, with exponent 0
            if *point == SingularPoint::Infinity && !b[0][0].is_zero() {
                singular = true;
                out.extend(exponent_for_exp_block(&Rational::zero()).into_iter().map(Exponent::Exact));
            }
            continue;
        }
        let local = match point {
            SingularPoint::Finite(c) => local_finite(&b, c),
            SingularPoint::Infinity => local_infinity(&b),
            SingularPoint::Irrational => Local::Irregular,
        };
        match local {
            Local::Ordinary => {}
            Local::Regular(e) => {
                singular = true;
                out.extend(e);
            }
            Local::Irregular => return Err(ZeroEstimateError::IrregularSingularPoint(point.clone())),
        }
    }
    if !singular {
        return Err(ZeroEstimateError::NotASingularity(point.clone()));
    }
    Ok(out)
}

/// Exponent data at every singular point, combining computed exponents and
/// the system's recorded bounds (by maximum).
pub fn exponent_data(sys: &DiffSystem) -> Result<ExponentData, ZeroEstimateError> {
    let user = |p: &SingularPoint| {
        sys.exponent_bounds()
            .iter()
            .filter(|b| &b.point == p)
            .map(|b| b.bound.clone())
            .max()
    };
    let (rational_roots, has_irrational) = singular_points(sys);
    let mut points: Vec<SingularPoint> = rational_roots.into_iter().map(SingularPoint::Finite).collect();
    if has_irrational {
        points.push(SingularPoint::Irrational);
    }
    points.push(SingularPoint::Infinity);

    let mut out = Vec::new();
    for p in points {
        let user_bound = user(&p);
        let entry = match indicial_exponents(sys, &p) {
            Ok(exponents) => {
                let computed = exponents
                    .iter()
                    .map(Exponent::modulus_bound)
                    .max()
                    .unwrap_or_else(Rational::zero);
                PointExponents {
                    modulus_bound: user_bound.map_or(computed.clone(), |u| u.max(computed)),
                    point: p,
                    status: PointStatus::Regular,
                    exponents,
                }
            }
            Err(ZeroEstimateError::NotASingularity(_)) => continue,
            Err(_) => {
                let bound = user_bound.ok_or_else(|| ZeroEstimateError::MissingExponentBound(p.clone()))?;
                PointExponents {
                    point: p,
                    status: PointStatus::User,
                    exponents: Vec::new(),
                    modulus_bound: bound,
                }
            }
        };
        out.push(entry);
    }
    let max_modulus = out
        .iter()
        .map(|e| e.modulus_bound.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let ceil = max_modulus.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    Ok(ExponentData {
        points: out,
        max_modulus,
        ceil,
    })
}

/// Rational roots of `T` (sorted) and whether `T` has other roots.
fn singular_points(sys: &DiffSystem) -> (Vec<Rational>, bool) {
    let t = minimal_denominator(sys.a()).to_rat();
    let roots = polynomial_roots(&t);
    let mut rational: Vec<Rational> = roots
        .iter()
        .filter_map(|e| match e {
            Exponent::Exact(r) => Some(r.clone()),
            Exponent::Bounded(_) => None,
        })
        .collect();
    rational.sort();
    rational.dedup();
    let irrational = roots.iter().any(|e| matches!(e, Exponent::Bounded(_)));
    (rational, irrational)
}

/// `det(x·I - m)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(m: &[Vec<Rational>]) -> RatPoly {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // mk <- m·mk + c_{n-k+1}·I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for l in 0..n {
                    if !m[i][l].is_zero() && !mk[l][j].is_zero() {
                        acc += &m[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = acc;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &m[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -tr / Rational::from_integer(k.into());
    }
    RatPoly::new(coeffs)
}

/// Largest integer whose divisors are enumerated when searching for rational roots.
const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&v| v <= DIVISOR_SEARCH_LIMIT)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// All roots of `p` with multiplicity: rational ones exactly, the rest
/// through a Cauchy modulus bound on the remaining factor.
pub fn polynomial_roots(p: &RatPoly) -> Vec<Exponent> {
    let mut out = Vec::new();
    let Some(v) = p.valuation() else {
        return out;
    };
    out.extend((0..v).map(|_| Exponent::Exact(Rational::zero())));
    let mut rest = RatPoly::new(p.coeffs()[v..].to_vec());
    let mut found = Vec::new();
    if rest.degree().unwrap_or(0) > 0 {
        let scale = Rational::from_integer(rest.denominator_lcm());
        let ints = rest.scale(&scale).to_int().expect("cleared");
        let a0 = ints.coeff(0);
        let an = ints.leading().cloned().unwrap();
        if let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) {
            for pn in &ps {
                for qd in &qs {
                    if pn.gcd(qd) != BigInt::one() {
                        continue;
                    }
                    for s in [1, -1] {
                        let r = Rational::new(pn * s, qd.clone());
                        if !found.contains(&r) {
                            found.push(r);
                        }
                    }
                }
            }
        }
    }
    found.sort();
    for r in found {
        let lin = RatPoly::new(vec![-r.clone(), Rational::one()]);
        loop {
            let (quo, rem) = rest.div_rem(&lin);
            if !rem.is_zero() || rest.degree().unwrap_or(0) == 0 {
                break;
            }
            out.push(Exponent::Exact(r.clone()));
            rest = quo;
        }
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        let lead = rest.leading().unwrap().abs();
        let bound = Rational::one()
            + rest.coeffs()[..d]
                .iter()
                .map(|c| c.abs() / &lead)
                .max()
                .unwrap();
        out.extend((0..d).map(|_| Exponent::Bounded(bound.clone())));
    }
    out
}
