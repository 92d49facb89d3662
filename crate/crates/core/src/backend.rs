//! Evaluation of expression trees over three arithmetics: high-precision
//! complex numbers, truncated formal Laurent series in q, and exact rationals
//! with q itself rational.

use std::cell::RefCell;
use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Mono, Order};
use crate::formalq::{qpoch_formal, QLaurent, QMono};
use crate::qcore::{self, Nome, PochOrder};
use crate::scalar::{NumericConfig, Scalar};
use crate::series::formal::{formal_series_eval, rational_series_eval, FormalSeriesSpec, FormalStopRule, RationalSeriesSpec};
use crate::series::{self, SeriesKind, SeriesSpec, TruncationPolicy, Weight};

/// A series with every parameter evaluated.
#[derive(Clone, Debug)]
pub struct ResolvedSeries<P> {
    pub kind: SeriesKind,
    pub num: Vec<P>,
    pub den: Vec<P>,
    pub z: P,
    pub weight: Weight<P>,
}

/// Bookkeeping for one series evaluated inside an expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub label: String,
    pub terms_pos: usize,
    pub terms_neg: usize,
    pub terminated: bool,
    /// Largest |term| met, as a short decimal string (numeric backend only).
    pub max_term_mag: Option<String>,
    pub warnings: Vec<String>,
}

impl SeriesStats {
    pub fn terms_used(&self) -> usize {
        self.terms_pos + self.terms_neg
    }
}

pub trait Backend {
    /// Parameter values (monomials evaluate to these).
    type P: Clone;
    /// Expression values.
    type V: Clone;

    fn q_param(&self) -> Self::P;
    fn param_ratio(&self, num: i64, den: i64) -> Self::P;
    fn param_mul(&self, a: &Self::P, b: &Self::P) -> Self::P;
    fn param_inv(&self, a: &Self::P) -> Result<Self::P>;

    fn lift(&self, p: &Self::P) -> Self::V;
    fn int(&self, k: i64) -> Self::V;
    fn one_minus(&self, p: &Self::P) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;

    fn poch(&self, x: &Self::P, order: PochOrder) -> Result<Self::V>;
    fn theta(&self, x: &Self::P) -> Result<Self::V>;
    fn theta_series(&self, x: &Self::P) -> Result<Self::V>;
    fn series(&self, s: &ResolvedSeries<Self::P>, label: &str) -> Result<(Self::V, SeriesStats)>;
}

/// Values of the free symbols and of the integer parameter n.
#[derive(Clone, Debug)]
pub struct Env<P> {
    pub vals: BTreeMap<char, P>,
    pub n: Option<i64>,
}

impl<P> Env<P> {
    pub fn new() -> Self {
        Env { vals: BTreeMap::new(), n: None }
    }
}

impl<P> Default for Env<P> {
    fn default() -> Self {
        Env::new()
    }
}

fn param_pow<B: Backend>(b: &B, x: &B::P, k: i64) -> Result<B::P> {
    let base = if k < 0 { b.param_inv(x)? } else { x.clone() };
    let mut out = b.param_ratio(1, 1);
    for _ in 0..k.abs() {
        out = b.param_mul(&out, &base);
    }
    Ok(out)
}

pub fn eval_mono<B: Backend>(b: &B, m: &Mono, env: &Env<B::P>) -> Result<B::P> {
    let mut out = b.param_ratio(m.num, m.den);
    for (c, e) in &m.syms {
        let v = env.vals.get(c).ok_or_else(|| Error::Config(format!("no value for symbol '{c}'")))?;
        out = b.param_mul(&out, &param_pow(b, v, *e)?);
    }
    let qe = m.qe + m.qn * resolve_n(m.qn, env.n)?;
    Ok(b.param_mul(&out, &param_pow(b, &b.q_param(), qe)?))
}

fn resolve_n(coef: i64, n: Option<i64>) -> Result<i64> {
    match (coef, n) {
        (0, _) => Ok(0),
        (_, Some(n)) => Ok(n),
        (_, None) => Err(Error::Config("expression uses n but no value was given".into())),
    }
}

pub fn resolve_order(o: Order, n: Option<i64>) -> Result<PochOrder> {
    Ok(match o {
        Order::Infinite => PochOrder::Infinite,
        Order::Finite { k, kn } => PochOrder::Finite(k + kn * resolve_n(kn, n)?),
    })
}

/// Walks an expression, recording per-series statistics as it goes.
pub struct Evaluator<'a, B: Backend> {
    pub backend: &'a B,
    pub env: &'a Env<B::P>,
    stats: RefCell<Vec<SeriesStats>>,
}

impl<'a, B: Backend> Evaluator<'a, B> {
    pub fn new(backend: &'a B, env: &'a Env<B::P>) -> Self {
        Evaluator { backend, env, stats: RefCell::new(Vec::new()) }
    }

    pub fn take_stats(&self) -> Vec<SeriesStats> {
        std::mem::take(&mut self.stats.borrow_mut())
    }

    pub fn mono(&self, m: &Mono) -> Result<B::P> {
        eval_mono(self.backend, m, self.env)
    }

    fn monos(&self, ms: &[Mono]) -> Result<Vec<B::P>> {
        ms.iter().map(|m| self.mono(m)).collect()
    }

    pub fn eval(&self, e: &Expr) -> Result<B::V> {
        self.eval_at(e, "")
    }

    fn eval_at(&self, e: &Expr, path: &str) -> Result<B::V> {
        let b = self.backend;
        let sub = |s: &str| if path.is_empty() { s.to_string() } else { format!("{path}/{s}") };
        match e {
            Expr::Int(k) => Ok(b.int(*k)),
            Expr::Mono(m) => Ok(b.lift(&self.mono(m)?)),
            Expr::OneMinus(m) => Ok(b.one_minus(&self.mono(m)?)),
            Expr::Poch(xs, o) => {
                let order = resolve_order(*o, self.env.n)?;
                let mut acc = b.int(1);
                for (x, m) in self.monos(xs)?.iter().zip(xs) {
                    let v = b.poch(x, order).map_err(|e| e.at(&sub(&format!("({m};q)"))))?;
                    acc = b.mul(&acc, &v);
                }
                Ok(acc)
            }
            Expr::Theta(xs) => {
                let mut acc = b.int(1);
                for (x, m) in self.monos(xs)?.iter().zip(xs) {
                    let v = b.theta(x).map_err(|e| e.at(&sub(&format!("theta({m})"))))?;
                    acc = b.mul(&acc, &v);
                }
                Ok(acc)
            }
            Expr::ThetaSeries(m) => b.theta_series(&self.mono(m)?).map_err(|e| e.at(&sub(&format!("theta({m})")))),
            Expr::Omega(xs, as_) => {
                let mut acc = b.int(1);
                for xm in xs {
                    for am in as_ {
                        let x = self.mono(&xm.div(am))?;
                        let v = b.poch(&x, PochOrder::Infinite).map_err(|e| e.at(&sub(&format!("omega({xm}/{am})"))))?;
                        acc = b.mul(&acc, &v);
                    }
                }
                Ok(acc)
            }
            Expr::Series(label, form) => {
                let (kind, num, den, z, weight) = form.layout();
                let weight = match weight {
                    Weight::None => Weight::None,
                    Weight::UnitLimit => Weight::UnitLimit,
                    Weight::Vwp(a) => Weight::Vwp(self.mono(&a)?),
                };
                let rs = ResolvedSeries { kind, num: self.monos(&num)?, den: self.monos(&den)?, z: self.mono(&z)?, weight };
                let (v, st) = b.series(&rs, label).map_err(|e| e.at(&sub(label)))?;
                self.stats.borrow_mut().push(st);
                Ok(v)
            }
            Expr::Sum(v) => {
                let mut acc = b.int(0);
                for (i, t) in v.iter().enumerate() {
                    acc = b.add(&acc, &self.eval_at(t, &sub(&format!("term[{i}]")))?);
                }
                Ok(acc)
            }
            Expr::Prod(v) => {
                let mut acc = b.int(1);
                for (i, t) in v.iter().enumerate() {
                    acc = b.mul(&acc, &self.eval_at(t, &sub(&format!("factor[{i}]")))?);
                }
                Ok(acc)
            }
            Expr::Div(x, y) => {
                let n = self.eval_at(x, &sub("num"))?;
                let d = self.eval_at(y, &sub("den"))?;
                b.div(&n, &d).map_err(|e| e.at(&sub("den")))
            }
            Expr::Neg(x) => Ok(b.neg(&self.eval_at(x, path)?)),
            Expr::Named(name, x) => self.eval_at(x, &sub(name)),
        }
    }
}

/// Arbitrary-precision complex arithmetic at a fixed nome.
#[derive(Clone, Debug)]
pub struct Numeric {
    pub cfg: NumericConfig,
    pub q: Nome,
    pub policy: TruncationPolicy,
}

impl Numeric {
    pub fn new(cfg: NumericConfig, q: Nome) -> Self {
        let policy = TruncationPolicy::for_config(&cfg);
        Numeric { cfg, q, policy }
    }

    pub fn spec(&self, s: &ResolvedSeries<Scalar>) -> Result<SeriesSpec> {
        if let Weight::Vwp(a) = &s.weight {
            if a.is_zero() {
                return Err(Error::InvalidParameter("very-well-poised base a = 0".into()));
            }
            if self.cfg.is_numerical_zero(&a.one_minus()) {
                return Err(Error::InvalidParameter("very-well-poised base a = 1".into()));
            }
        }
        Ok(SeriesSpec {
            kind: s.kind,
            num_params: s.num.clone(),
            den_params: s.den.clone(),
            q: self.q.clone(),
            z: s.z.clone(),
            weight: s.weight.clone(),
        })
    }
}

impl Backend for Numeric {
    type P = Scalar;
    type V = Scalar;

    fn q_param(&self) -> Scalar {
        self.q.value().clone()
    }
    fn param_ratio(&self, num: i64, den: i64) -> Scalar {
        Scalar::from_rational(self.cfg.prec, &Rational::from((num, den)))
    }
    fn param_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn param_inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("inverse of a zero parameter".into()));
        }
        Ok(a.recip())
    }
    fn lift(&self, p: &Scalar) -> Scalar {
        p.clone()
    }
    fn int(&self, k: i64) -> Scalar {
        Scalar::from_i64(self.cfg.prec, k)
    }
    fn one_minus(&self, p: &Scalar) -> Scalar {
        p.one_minus()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if self.cfg.is_numerical_zero(b) {
            return Err(Error::DivisionByZero("denominator evaluates to zero".into()));
        }
        Ok(a / b)
    }
    fn poch(&self, x: &Scalar, order: PochOrder) -> Result<Scalar> {
        qcore::qpoch(x, &self.q, order, &self.cfg)
    }
    fn theta(&self, x: &Scalar) -> Result<Scalar> {
        qcore::theta_product(x, &self.q, &self.cfg)
    }
    fn theta_series(&self, x: &Scalar) -> Result<Scalar> {
        qcore::theta_series(x, &self.q, &self.cfg)
    }
    fn series(&self, s: &ResolvedSeries<Scalar>, label: &str) -> Result<(Scalar, SeriesStats)> {
        let v = series::eval(&self.spec(s)?, &self.policy, &self.cfg)?;
        let st = SeriesStats {
            label: label.into(),
            terms_pos: v.terms_used_pos,
            terms_neg: v.terms_used_neg,
            terminated: v.terminated,
            max_term_mag: Some(format!("{:.6e}", v.max_term_mag)),
            warnings: v.warnings,
        };
        Ok((v.value, st))
    }
}

/// Formal power series in q, every operation exact below q^order.
#[derive(Clone, Debug)]
pub struct Formal {
    pub order: i64,
}

impl Backend for Formal {
    type P = QMono;
    type V = QLaurent;

    fn q_param(&self) -> QMono {
        QMono::q()
    }
    fn param_ratio(&self, num: i64, den: i64) -> QMono {
        QMono::constant(Rational::from((num, den)))
    }
    fn param_mul(&self, a: &QMono, b: &QMono) -> QMono {
        a.mul(b)
    }
    fn param_inv(&self, a: &QMono) -> Result<QMono> {
        a.inv()
    }
    fn lift(&self, p: &QMono) -> QLaurent {
        QLaurent::from_mono(p)
    }
    fn int(&self, k: i64) -> QLaurent {
        QLaurent::monomial(Rational::from(k), 0)
    }
    fn one_minus(&self, p: &QMono) -> QLaurent {
        QLaurent::binomial(&p.coef, p.exp)
    }
    fn add(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        a.add(b)
    }
    fn neg(&self, a: &QLaurent) -> QLaurent {
        a.neg()
    }
    fn mul(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        a.mul(b)
    }
    fn div(&self, a: &QLaurent, b: &QLaurent) -> Result<QLaurent> {
        a.div(b, self.order)
    }
    fn poch(&self, x: &QMono, order: PochOrder) -> Result<QLaurent> {
        qpoch_formal(x, order, self.order)
    }
    fn theta(&self, x: &QMono) -> Result<QLaurent> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("theta of 0".into()));
        }
        let a = qpoch_formal(x, PochOrder::Infinite, self.order)?;
        let b = qpoch_formal(&QMono::q().mul(&x.inv()?), PochOrder::Infinite, self.order)?;
        Ok(a.mul(&b))
    }
    fn theta_series(&self, x: &QMono) -> Result<QLaurent> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("theta of 0".into()));
        }
        // Σ (-1)^k q^{k(k-1)/2} x^k / (q;q)_∞ with x = r q^e; the exponent
        // k(k-1)/2 + e k is convex in k, so only a window of k contributes.
        let e = x.exp;
        let span = e.abs() + 4 + (2.0 * (self.order.abs() as f64 + e.pow(2) as f64 + 1.0)).sqrt() as i64;
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for k in -span..=span {
            let ex = k * (k - 1) / 2 + e * k;
            if ex >= self.order {
                continue;
            }
            let mut c = Rational::from((&x.coef).pow(k as i32));
            if k % 2 != 0 {
                c = -c;
            }
            *coeffs.entry(ex).or_insert_with(|| Rational::from(0)) += c;
        }
        let lo = coeffs.keys().next().copied().unwrap_or(0);
        let mut dense = vec![Rational::from(0); (self.order - lo).max(0) as usize];
        for (k, c) in coeffs {
            dense[(k - lo) as usize] = c;
        }
        let sum = QLaurent::from_coeffs(lo, dense, Some(self.order));
        let qq = qpoch_formal(&QMono::q(), PochOrder::Infinite, self.order - lo.min(0))?;
        sum.div(&qq, self.order)
    }
    fn series(&self, s: &ResolvedSeries<QMono>, label: &str) -> Result<(QLaurent, SeriesStats)> {
        let spec = FormalSeriesSpec {
            kind: s.kind,
            num_params: s.num.clone(),
            den_params: s.den.clone(),
            z: s.z.clone(),
            weight: s.weight.clone(),
        };
        let v = formal_series_eval(&spec, &FormalStopRule::new(self.order))?;
        let st = SeriesStats {
            label: label.into(),
            terms_pos: v.terms_used_pos,
            terms_neg: v.terms_used_neg,
            terminated: v.terminated,
            max_term_mag: None,
            warnings: Vec::new(),
        };
        Ok((v.value, st))
    }
}

/// Exact rational arithmetic with q a rational number; only finite products
/// and terminating unilateral series are available.
#[derive(Clone, Debug)]
pub struct RationalQ {
    pub q: Rational,
}

impl Backend for RationalQ {
    type P = Rational;
    type V = Rational;

    fn q_param(&self) -> Rational {
        self.q.clone()
    }
    fn param_ratio(&self, num: i64, den: i64) -> Rational {
        Rational::from((num, den))
    }
    fn param_mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }
    fn param_inv(&self, a: &Rational) -> Result<Rational> {
        if *a == 0 {
            return Err(Error::ZeroArgument("inverse of a zero parameter".into()));
        }
        Ok(a.clone().recip())
    }
    fn lift(&self, p: &Rational) -> Rational {
        p.clone()
    }
    fn int(&self, k: i64) -> Rational {
        Rational::from(k)
    }
    fn one_minus(&self, p: &Rational) -> Rational {
        Rational::from(1 - p)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a + b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        Rational::from(-a)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }
    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if *b == 0 {
            return Err(Error::DivisionByZero("denominator is exactly zero".into()));
        }
        Ok(Rational::from(a / b))
    }
    fn poch(&self, x: &Rational, order: PochOrder) -> Result<Rational> {
        let n = match order {
            PochOrder::Infinite => return Err(Error::Unsupported("infinite product at rational q".into())),
            PochOrder::Finite(n) => n,
        };
        let mut acc = Rational::from(1);
        if n >= 0 {
            let mut t = x.clone();
            for _ in 0..n {
                acc *= Rational::from(1 - &t);
                t *= &self.q;
            }
            return Ok(acc);
        }
        let qi = self.q.clone().recip();
        let mut t = Rational::from(x * &qi);
        for k in 1..=(-n) {
            let f = Rational::from(1 - &t);
            if f == 0 {
                return Err(Error::DivisionByZero(format!("factor 1 - x q^-{k} is zero")));
            }
            acc /= f;
            t *= &qi;
        }
        Ok(acc)
    }
    fn theta(&self, _: &Rational) -> Result<Rational> {
        Err(Error::Unsupported("theta function at rational q".into()))
    }
    fn theta_series(&self, _: &Rational) -> Result<Rational> {
        Err(Error::Unsupported("theta function at rational q".into()))
    }
    fn series(&self, s: &ResolvedSeries<Rational>, label: &str) -> Result<(Rational, SeriesStats)> {
        let spec = RationalSeriesSpec {
            kind: s.kind,
            num_params: s.num.clone(),
            den_params: s.den.clone(),
            q: self.q.clone(),
            z: s.z.clone(),
            weight: s.weight.clone(),
        };
        let (v, terms) = rational_series_eval(&spec)?;
        let st = SeriesStats {
            label: label.into(),
            terms_pos: terms,
            terms_neg: 0,
            terminated: true,
            max_term_mag: None,
            warnings: Vec::new(),
        };
        Ok((v, st))
    }
}
