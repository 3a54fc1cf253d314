//! Cross-module properties checked against a fixed-point evaluator that
//! shares no code with the library.

use efcert::algebra::{Integer, Rational};
use efcert::auxiliary::{construct, default_eps1};
use efcert::efunction::{augment_exp, catalog, exp_pair, rescale, CatalogEntry, DiffSystem};
use efcert::evalcert::{eval_component, RatInterval};
use efcert::forms::{adaptive_bound, build_ladder, ladder_length, BoundConfig, BoundStatus};
use efcert::logmeasure::{log_lower_bound, LogConfig};
use efcert::zeroestimate::system_n0;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn j0() -> DiffSystem {
    catalog(&CatalogEntry::BesselJ0).unwrap()
}

/// Fixed-point series evaluation with scale `10^DIGITS`.
mod oracle {
    use super::*;

    const DIGITS: usize = 110;

    fn scale() -> Integer {
        num_traits::pow(Integer::from(10), DIGITS)
    }

    /// Sum of `t_k` where `t_0 = s·num0/den0` and `t_k = t_{k-1}·num(k)/den(k)`,
    /// truncating each step; returns the sum and an error bound in ulps.
    fn series(
        start_num: &Integer,
        start_den: &Integer,
        step: impl Fn(u64) -> (Integer, Integer),
        alternating: bool,
    ) -> (Integer, Integer) {
        let mut t = scale() * start_num / start_den;
        let mut sum = t.clone();
        let mut k = 1u64;
        loop {
            let (n, d) = step(k);
            t = &t * n / d;
            if t.is_zero() {
                break;
            }
            if alternating && k % 2 == 1 {
                sum -= &t;
            } else {
                sum += &t;
            }
            k += 1;
        }
        (sum, Integer::from(k + 4))
    }

    fn interval(v: (Integer, Integer)) -> RatInterval {
        let s = scale();
        RatInterval::new(
            Rational::new(&v.0 - &v.1, s.clone()),
            Rational::new(&v.0 + &v.1, s),
        )
    }

    /// `e^{p/q}`; terms shrink by half once `k > 2|p/q|`, so the neglected
    /// remainder is below two ulps.
    pub fn exp(x: &Rational) -> RatInterval {
        let (p, q) = (x.numer().abs(), x.denom().clone());
        interval(series(&Integer::one(), &Integer::one(), |k| (p.clone(), &q * k), x.is_negative()))
    }

    /// `J0(x)` and `J0'(x) = -J1(x)`.
    pub fn bessel(x: &Rational) -> (RatInterval, RatInterval) {
        let (p, q) = (x.numer().abs(), x.denom().clone());
        let p2 = &p * &p;
        let q2 = &q * &q * 4u32;
        let j0 = series(&Integer::one(), &Integer::one(), |k| (p2.clone(), &q2 * k * k), true);
        let j1 = series(&p, &(&q * 2u32), |k| (p2.clone(), &q2 * k * (k + 1)), true);
        let j1 = interval(j1);
        let j1 = if x.is_negative() { j1.neg() } else { j1 };
        (interval(j0), j1.neg())
    }

    pub fn values(name: &str, x: &Rational) -> Vec<RatInterval> {
        match name {
            "exp_pair" => vec![exp(x), exp(&(x * Rational::from_integer(2.into())))],
            "bessel_j0" => {
                let (a, b) = bessel(x);
                vec![a, b]
            }
            _ => unreachable!(),
        }
    }
}

fn system(name: &str) -> DiffSystem {
    match name {
        "exp_pair" => exp_pair(),
        _ => j0(),
    }
}

/// Truncated decimal as an exact rational.
fn dec(s: &str) -> Rational {
    let (i, f) = s.split_once('.').unwrap();
    Rational::new(format!("{i}{f}").parse().unwrap(), num_traits::pow(Integer::from(10), f.len()))
}

#[test]
fn oracle_self_check() {
    let ulp = dec("0.000000000000000000000000000001");
    let e = oracle::exp(&Rational::one());
    let e_ref = dec("2.718281828459045235360287471352");
    assert!(e.lo() >= &e_ref && e.hi() <= &(&e_ref + &ulp));
    let (j, _) = oracle::bessel(&Rational::one());
    let j_ref = dec("0.765197686557966551449717526102");
    assert!(j.lo() >= &j_ref && j.hi() <= &(&j_ref + &ulp));
}

#[test]
fn interval_evaluator_agrees_with_oracle() {
    let w = Rational::new(One::one(), num_traits::pow(Integer::from(10), 60));
    for name in ["exp_pair", "bessel_j0"] {
        let sys = system(name);
        for x in [r(1, 1), r(1, 2), r(-7, 3), r(5, 2)] {
            let o = oracle::values(name, &x);
            for (i, oi) in o.iter().enumerate() {
                let v = eval_component(&sys, i, &x, &w).unwrap();
                assert!(v.intersects(oi), "{name} component {i} at {x}");
                assert!(v.width() <= w);
            }
        }
    }
}

#[test]
fn ladder_identity_and_degrees_on_catalog() {
    let h = catalog(&"1F1(1/3;1/2)".parse().unwrap()).unwrap();
    for sys in [exp_pair(), j0(), h] {
        let p = sys.params().unwrap();
        for n in [2, 5, 9] {
            let eps1 = default_eps1(sys.m());
            let b = construct(&sys, n, &eps1).unwrap();
            assert!(b.achieved_order >= b.tau);
            let k = ladder_length(sys.m(), p.q, p.p, n, &eps1);
            let l = build_ladder(&b, &sys, k).unwrap();
            for (row, bound) in l.rows.iter().zip(&l.degree_bounds) {
                assert!(row.iter().filter_map(|q| q.degree()).all(|d| d <= *bound));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescale_dilates_coefficients(p in -6i64..=6, q in 1i64..=5) {
        prop_assume!(p != 0);
        let xi = r(p, q);
        for sys in [exp_pair(), j0()] {
            let s = rescale(&sys, &xi).unwrap();
            let a = sys.coefficients(12).unwrap();
            let b = s.coefficients(12).unwrap();
            for (ca, cb) in a.iter().zip(&b) {
                let mut pw = Rational::one();
                for k in 0..=12 {
                    prop_assert_eq!(ca.coeff(k) * &pw, cb.coeff(k).clone());
                    pw *= &xi;
                }
            }
        }
    }

    #[test]
    fn augmented_component_is_exponential(p in -20i64..=20, q in 1i64..=9) {
        let beta = r(p, q);
        let aug = augment_exp(&j0(), &beta);
        let c = aug.coefficients(15).unwrap();
        let base = j0().coefficients(15).unwrap();
        prop_assert_eq!(&c[..2], &base[..]);
        let mut term = Rational::one();
        for k in 0..=15usize {
            prop_assert_eq!(c[2].coeff(k).clone(), term.clone());
            term = term * &beta / Rational::from_integer(((k + 1) as i64).into());
        }
    }

    #[test]
    fn structure_is_independent_of_beta(p in -100i64..=100, q in 1i64..=10) {
        let beta = r(p, q);
        let a = augment_exp(&j0(), &beta);
        let b = augment_exp(&j0(), &r(1, 7));
        let (pa, pb) = (a.params().unwrap(), b.params().unwrap());
        prop_assert_eq!((pa.p, pa.q, &pa.t), (pb.p, pb.q, &pb.t));
        prop_assert_eq!(system_n0(&a).unwrap(), system_n0(&b).unwrap());
        let g = a.growth().unwrap();
        let one = Rational::one();
        prop_assert_eq!(&g.c, &beta.abs().max(one.clone()));
        prop_assert_eq!(&pa.e, &beta.abs().max(one));
        prop_assert_eq!(g.d.clone(), Rational::from_integer(Integer::from(2) * beta.denom()));
    }

    #[test]
    fn interval_arithmetic_contains_pointwise(
        a in -50i64..50, b in 0i64..20, c in -50i64..50, d in 0i64..20,
        s in 0i64..=8, t in 0i64..=8,
    ) {
        let x = RatInterval::new(r(a, 3), r(a + b, 3));
        let y = RatInterval::new(r(c, 7), r(c + d, 7));
        let px = x.lo() + (x.width() * r(s, 8));
        let py = y.lo() + (y.width() * r(t, 8));
        prop_assert!(x.add(&y).contains(&(&px + &py)));
        prop_assert!(x.sub(&y).contains(&(&px - &py)));
        prop_assert!(x.mul(&y).contains(&(&px * &py)));
        prop_assert!(x.abs().contains(&px.abs()));
        prop_assert!(x.abs_lower() <= px.abs());
    }

    #[test]
    fn shrinking_width_stays_consistent(p in -30i64..=30, q in 1i64..=7, e in 2u32..40) {
        let x = r(p, q);
        let coarse = Rational::new(One::one(), num_traits::pow(Integer::from(2), e as usize));
        let fine = &coarse / Rational::from_integer(1024.into());
        for sys in [exp_pair(), j0()] {
            let a = eval_component(&sys, 0, &x, &coarse).unwrap();
            let b = eval_component(&sys, 0, &x, &fine).unwrap();
            prop_assert!(a.width() <= coarse && b.width() <= fine);
            prop_assert!(a.intersects(&b));
        }
    }

    #[test]
    fn certified_bounds_never_exceed_oracle(
        which in 0usize..2, half in any::<bool>(),
        a1 in -1000i64..=1000, a2 in -1000i64..=1000,
    ) {
        prop_assume!(a1 != 0 || a2 != 0);
        let name = ["exp_pair", "bessel_j0"][which];
        let xi = if half { r(1, 2) } else { Rational::one() };
        let target = vec![Integer::from(a1), Integer::from(a2)];
        let res = adaptive_bound(&system(name), &xi, &target, 1, 40, &BoundConfig::default()).unwrap();
        let c = res.certificate;
        prop_assert_eq!(c.status, BoundStatus::Certified);
        let o = oracle::values(name, &xi);
        let l = o[0].scale(&Rational::from_integer(a1.into())).add(&o[1].scale(&Rational::from_integer(a2.into())));
        prop_assert!(c.lower_bound.unwrap() <= l.abs_lower());
    }

    #[test]
    fn log_bounds_are_sound(a in -8i64..=3, b in 1i64..=6) {
        let approx = r(a, b);
        let res = log_lower_bound(&j0(), &Rational::one(), &approx, &LogConfig::default()).unwrap();
        prop_assert!(res.bound.is_positive());
        // J0(1) - e^β from the oracle; the bound is below |ln J0(1) - β|,
        // which in turn is at least |J0(1) - e^β| / max(J0(1), e^β)
        let (j, _) = oracle::bessel(&Rational::one());
        let e = oracle::exp(&approx);
        let diff = j.sub(&e).abs_upper();
        let lo_max = j.lo().clone().max(e.lo().clone());
        let min_v = j.lo().clone().min(e.lo().clone());
        prop_assert!(min_v.is_positive() && lo_max.is_positive());
        // mean value: |ln x - ln y| ≤ |x - y| / min(x, y)
        prop_assert!(res.bound <= diff / min_v);
    }
}
