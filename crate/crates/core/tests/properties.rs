use std::collections::BTreeMap;

use proptest::prelude::*;
use rug::Rational;

use qsv::backend::{Evaluator, Numeric};
use qsv::expr::{m, pinf, th, Expr};
use qsv::formalq::{qpoch_formal, QLaurent, QMono};
use qsv::identities::sample::{rng_for, sample_numeric};
use qsv::identities::{check_numeric, lookup, resolve_constraints, ParamSet};
use qsv::qcore::{qpoch, qpoch_infinite, theta_product, theta_series, Nome, PochOrder};
use qsv::scalar::{NumericConfig, Scalar};

fn cfg() -> NumericConfig {
    NumericConfig::new(30)
}

fn rel(a: &Scalar, b: &Scalar) -> f64 {
    let d = (a - b).abs_f64();
    let s = b.abs_f64().max(a.abs_f64());
    if s == 0.0 { d } else { d / s }
}

fn nome(r: f64, phi: f64) -> Nome {
    Nome::new(Scalar::from_polar(cfg().prec, r, phi)).unwrap()
}

fn cplx(r: f64, phi: f64) -> Scalar {
    Scalar::from_polar(cfg().prec, r, phi)
}

fn param() -> impl Strategy<Value = (f64, f64)> {
    (0.3f64..3.0, 0.0f64..std::f64::consts::TAU)
}

fn nome_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..0.6, 0.0f64..std::f64::consts::TAU)
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, s)| Rational::from((p, s)))
}

fn eval(desc_ps: &ParamSet<Scalar>, q: &Nome, e: &Expr) -> Scalar {
    let b = Numeric::new(cfg(), q.clone());
    let env = desc_ps.env();
    Evaluator::new(&b, &env).eval(e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_poch_recurrence(x in param(), q in nome_strategy(), n in 0i64..12) {
        let (c, q) = (cfg(), nome(q.0, q.1));
        let x = cplx(x.0, x.1);
        let lhs = qpoch(&x, &q, PochOrder::Finite(n + 1), &c).unwrap();
        let step = (&x * &q.value().powi(n)).one_minus();
        let rhs = &qpoch(&x, &q, PochOrder::Finite(n), &c).unwrap() * &step;
        prop_assert!(rel(&lhs, &rhs) < 1e-40);
    }

    #[test]
    fn negative_order_poch_inverts_shifted_product(x in param(), q in nome_strategy(), n in 1i64..8) {
        // (x;q)_{-n} = 1 / (x q^{-n}; q)_n
        let (c, q) = (cfg(), nome(q.0, q.1));
        let x = cplx(x.0, x.1);
        let lhs = qpoch(&x, &q, PochOrder::Finite(-n), &c).unwrap();
        let shifted = &x * &q.value().powi(-n);
        let mut naive = Scalar::one(c.prec);
        for k in 0..n {
            naive = &naive * &(&shifted * &q.value().powi(k)).one_minus();
        }
        prop_assert!(rel(&(&lhs * &naive), &Scalar::one(c.prec)) < 1e-40);
    }

    #[test]
    fn infinite_poch_matches_naive_product(x in param(), q in nome_strategy()) {
        let (c, q) = (cfg(), nome(q.0, q.1));
        let x = cplx(x.0, x.1);
        let fast = qpoch_infinite(&x, &q, &c).value;
        let mut naive = Scalar::one(c.prec);
        let mut t = x.clone();
        for _ in 0..400 {
            naive = &naive * &t.one_minus();
            t = &t * q.value();
        }
        prop_assert!(rel(&fast, &naive) < 1e-33);
        // (x;q)_∞ = (1 - x)(xq;q)_∞
        let tail = qpoch_infinite(&(&x * q.value()), &q, &c).value;
        prop_assert!(rel(&fast, &(&x.one_minus() * &tail)) < 1e-33);
    }

    #[test]
    fn theta_product_agrees_with_series(x in param(), q in nome_strategy()) {
        let (c, q) = (cfg(), nome(q.0, q.1));
        let x = cplx(x.0, x.1);
        let p = theta_product(&x, &q, &c).unwrap();
        let s = theta_series(&x, &q, &c).unwrap();
        prop_assert!(rel(&p, &s) < 1e-30);
    }

    #[test]
    fn theta_inversion_and_quasi_period(x in param(), q in nome_strategy()) {
        let (c, q) = (cfg(), nome(q.0, q.1));
        let x = cplx(x.0, x.1);
        let t = theta_product(&x, &q, &c).unwrap();
        // θ(q/x) = θ(x)
        let reflected = theta_product(&(q.value() / &x), &q, &c).unwrap();
        prop_assert!(rel(&reflected, &t) < 1e-33);
        // θ(1/x) = -θ(x)/x
        let inv = theta_product(&x.recip(), &q, &c).unwrap();
        prop_assert!(rel(&inv, &(&-&t / &x)) < 1e-33);
        // θ(qx) = -θ(x)/x
        let shifted = theta_product(&(&x * q.value()), &q, &c).unwrap();
        prop_assert!(rel(&shifted, &(&-&t / &x)) < 1e-33);
    }

    #[test]
    fn laurent_inverse_round_trips(coeffs in prop::collection::vec(small_rat(), 1..6), offset in -3i64..3, cap in 5i64..15) {
        let a = QLaurent::from_coeffs(offset, coeffs, None);
        // The inverse starts at q^{-offset}, so it must reach cap - offset.
        let inv = a.inv(cap - offset).unwrap();
        let prod = a.mul(&inv).truncate(cap);
        prop_assert_eq!(prod.coeff(0), Rational::from(1));
        for k in 1..cap {
            prop_assert_eq!(prod.coeff(k), Rational::from(0));
        }
    }

    #[test]
    fn laurent_mul_matches_pointwise_evaluation(
        a in prop::collection::vec(small_rat(), 1..5),
        b in prop::collection::vec(small_rat(), 1..5),
        oa in -2i64..3, ob in -2i64..3, q in small_rat(),
    ) {
        let (x, y) = (QLaurent::from_coeffs(oa, a, None), QLaurent::from_coeffs(ob, b, None));
        let xy = x.mul(&y);
        prop_assert_eq!(xy.eval_at(&q).unwrap(), x.eval_at(&q).unwrap() * y.eval_at(&q).unwrap());
        prop_assert_eq!(xy, y.mul(&x));
    }

    #[test]
    fn formal_poch_evaluates_to_exact_product(r in small_rat(), e in 0i64..3, n in 0i64..6, q in small_rat()) {
        prop_assume!(q.clone().abs() < 1);
        let x = QMono::new(r.clone(), e);
        let p = qpoch_formal(&x, PochOrder::Finite(n), 0).unwrap();
        prop_assume!(p.is_exact());
        let mut naive = Rational::from(1);
        for k in 0..n {
            let qk = (0..e + k).fold(Rational::from(1), |acc, _| acc * &q);
            naive *= Rational::from(1) - r.clone() * qk;
        }
        prop_assert_eq!(p.eval_at(&q).unwrap(), naive);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), idx in 0usize..50) {
        let d = lookup("BAILEY_66").unwrap();
        let (a, ra) = sample_numeric(d, &mut rng_for(seed, "BAILEY_66/numeric", idx), &cfg(), None).unwrap();
        let (b, rb) = sample_numeric(d, &mut rng_for(seed, "BAILEY_66/numeric", idx), &cfg(), None).unwrap();
        prop_assert_eq!(ra, rb);
        prop_assert_eq!(a.q.to_decimal(40), b.q.to_decimal(40));
        for (k, v) in &a.vals {
            prop_assert_eq!(v.to_decimal(40), b.vals[k].to_decimal(40));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn weier_equiv_is_symmetric_in_bcd_e(seed in any::<u64>(), perm in 0usize..24) {
        // e is fixed by a²q = bcde, which is itself symmetric; permuting
        // (b,c,d,e) means choosing a new triple of free symbols.
        let d = lookup("WEIER_EQUIV").unwrap();
        let c = cfg();
        let (ps, _) = sample_numeric(d, &mut rng_for(seed, "WEIER_EQUIV/numeric", 0), &c, None).unwrap();
        let mut four: Vec<Scalar> = ['b', 'c', 'd', 'e'].iter().map(|k| ps.vals[k].clone()).collect();
        let mut p = perm;
        for i in (1..4).rev() {
            four.swap(i, p % (i + 1));
            p /= i + 1;
        }
        let q = Nome::new(ps.q.clone()).unwrap();
        let free: BTreeMap<char, Scalar> =
            [('a', ps.vals[&'a'].clone()), ('b', four[0].clone()), ('c', four[1].clone()), ('d', four[2].clone())].into();
        let b = Numeric::new(c.clone(), q);
        let permuted = resolve_constraints(d, &b, &free, None).unwrap();
        prop_assert!(rel(&permuted.vals[&'e'], &four[3]) < 1e-40);

        let r0 = check_numeric(d, &ps, &c, 1e-22);
        let r1 = check_numeric(d, &permuted, &c, 1e-22);
        prop_assert!(r0.pass && r1.pass);
        let lhs0 = c.parse(r0.lhs.as_ref().unwrap()).unwrap();
        let lhs1 = c.parse(r1.lhs.as_ref().unwrap()).unwrap();
        let rhs0 = c.parse(r0.rhs.as_ref().unwrap()).unwrap();
        let rhs1 = c.parse(r1.rhs.as_ref().unwrap()).unwrap();
        prop_assert!(rel(&lhs0, &lhs1) < 1e-25);
        prop_assert!(rel(&rhs0, &rhs1) < 1e-25);
    }

    #[test]
    fn lambda1_times_its_reciprocal_is_one(seed in any::<u64>()) {
        let d = lookup("LEMMA_8W7").unwrap();
        let (ps, _) = sample_numeric(d, &mut rng_for(seed, "LEMMA_8W7/numeric", 0), &cfg(), None).unwrap();
        let q = Nome::new(ps.q.clone()).unwrap();
        let lam = d.coefficient("lambda1").unwrap();
        let xs: Vec<_> = ["b", "c", "d", "e", "h", "k"].iter().map(|s| m(s)).collect();
        let recip = pinf(&["q", "aq", "q/a"]) / pinf(&["b^2q/a"])
            * Expr::Omega(vec![m("aq/b"), m("bq")], xs[1..].to_vec())
            / Expr::Omega(vec![m("q"), m("aq")], xs)
            * th(&["z/a", "z"])
            / th(&["bz/a", "z/b"]);
        let prod = &eval(&ps, &q, lam) * &eval(&ps, &q, &recip);
        prop_assert!(rel(&prod, &Scalar::one(cfg().prec)) < 1e-30);
    }

    #[test]
    fn d0_vanishes_when_fg_is_aq(seed in any::<u64>()) {
        let d = lookup("SLATER_R5").unwrap();
        let c = cfg();
        let (mut ps, _) = sample_numeric(d, &mut rng_for(seed, "SLATER_R5/numeric", 0), &c, None).unwrap();
        let f = &(&ps.vals[&'a'] * &ps.q) / &ps.vals[&'g'];
        ps.vals.insert('f', f);
        let q = Nome::new(ps.q.clone()).unwrap();
        prop_assert!(eval(&ps, &q, d.coefficient("d0").unwrap()).is_zero());
    }

    #[test]
    fn gen_weier_second_term_vanishes_at_b_one(seed in any::<u64>()) {
        let d = lookup("GEN_WEIER").unwrap();
        let c = cfg();
        let (ps, _) = sample_numeric(d, &mut rng_for(seed, "GEN_WEIER/numeric", 0), &c, None).unwrap();
        let q = Nome::new(ps.q.clone()).unwrap();
        let mut free: BTreeMap<char, Scalar> = ['a', 'c', 'd', 'e'].iter().map(|k| (*k, ps.vals[k].clone())).collect();
        free.insert('b', Scalar::one(c.prec));
        let at_one = resolve_constraints(d, &Numeric::new(c.clone(), q.clone()), &free, None).unwrap();
        let Expr::Sum(terms) = &d.rhs else { panic!("GEN_WEIER right side is a sum") };
        prop_assert_eq!(terms.len(), 2);
        prop_assert!(eval(&at_one, &q, &terms[1]).is_zero());
    }
}

#[test]
fn jtp_at_x_equal_one_is_zero_on_both_sides() {
    let d = lookup("JTP").unwrap();
    let c = cfg();
    for (r, phi) in [(0.3, 0.0), (0.5, 1.0), (0.12, -2.5)] {
        let free: BTreeMap<char, Scalar> = [('x', Scalar::one(c.prec))].into();
        let q = Nome::new(cplx(r, phi)).unwrap();
        let ps = resolve_constraints(d, &Numeric::new(c.clone(), q), &free, None).unwrap();
        let rep = check_numeric(d, &ps, &c, 1e-22);
        assert!(rep.pass, "{rep:?}");
        assert!(c.parse(rep.lhs.as_ref().unwrap()).unwrap().abs_f64() < 1e-30);
        assert!(c.parse(rep.rhs.as_ref().unwrap()).unwrap().is_zero());
    }
}
