//! Executable identity catalog: descriptors, constraint resolution,
//! admissibility checks and residual reports.

mod catalog;
pub mod chains;
pub mod sample;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::backend::{eval_mono, resolve_order, Backend, Env, Evaluator, Formal, Numeric, RationalQ, SeriesStats};
use crate::error::{Error, Result};
use crate::expr::{Expr, Mono};
use crate::formalq::{compare_mod_qn, QLaurent, QMono};
use crate::qcore::{Nome, PochOrder};
use crate::scalar::{float_to_decimal, rel_residual, NumericConfig, Scalar};
use crate::series::{SeriesKind, Weight};

pub(crate) use catalog::cor_222_terms;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub numeric: bool,
    pub formal: bool,
    /// Exact evaluation with q a rational number (terminating identities).
    pub rational: bool,
}

#[derive(Clone, Debug)]
pub struct IdentityDescriptor {
    pub id: &'static str,
    /// Classical name, as printed by `qsv list`.
    pub name: &'static str,
    pub free: Vec<char>,
    /// Dependent symbols, solved by substitution in this order.
    pub constraints: Vec<(char, Mono)>,
    /// Admissible range of the integer parameter n, if the identity has one.
    pub int_param: Option<(i64, i64)>,
    /// Each monomial must have modulus below 1.
    pub convergence: Vec<Mono>,
    pub lhs: Expr,
    pub rhs: Expr,
    pub support: Support,
    /// q-exponents given to free symbols when sampling for the formal backend
    /// (symbols not listed are q-free rationals).
    pub formal_exps: Vec<(char, i64)>,
}

impl IdentityDescriptor {
    /// Named coefficients on either side, first occurrence of each name.
    pub fn coefficients(&self) -> Vec<(&str, &Expr)> {
        let mut seen = BTreeSet::new();
        self.lhs.named().into_iter().chain(self.rhs.named()).filter(|(n, _)| seen.insert(n.to_string())).collect()
    }

    pub fn coefficient(&self, name: &str) -> Option<&Expr> {
        self.coefficients().into_iter().find(|(n, _)| *n == name).map(|(_, e)| e)
    }

    /// The series with the given label, as a standalone expression.
    pub fn series_expr(&self, label: &str) -> Option<Expr> {
        let mut all = self.lhs.series();
        all.extend(self.rhs.series());
        all.into_iter().find(|(l, _)| *l == label).map(|(l, f)| Expr::Series(l.to_string(), Box::new(f.clone())))
    }

    fn constraint_map(&self) -> BTreeMap<char, Mono> {
        let mut out: BTreeMap<char, Mono> = BTreeMap::new();
        for (c, mo) in &self.constraints {
            let s = substitute(mo, &out);
            out.insert(*c, s);
        }
        out
    }
}

fn substitute(mo: &Mono, map: &BTreeMap<char, Mono>) -> Mono {
    let mut out = Mono { syms: Vec::new(), ..mo.clone() };
    for (c, e) in &mo.syms {
        let f = map.get(c).cloned().unwrap_or_else(|| Mono::sym(*c));
        out = out.mul(&f.pow(*e));
    }
    out
}

static CATALOG: OnceLock<Vec<IdentityDescriptor>> = OnceLock::new();

pub fn catalog() -> &'static [IdentityDescriptor] {
    CATALOG.get_or_init(catalog::build)
}

pub fn lookup(id: &str) -> Result<&'static IdentityDescriptor> {
    catalog().iter().find(|d| d.id == id).ok_or_else(|| Error::Config(format!("unknown identity id '{id}'")))
}

/// Values of all symbols of an identity, dependent ones included.
#[derive(Clone, Debug)]
pub struct ParamSet<P> {
    pub q: P,
    pub vals: BTreeMap<char, P>,
    pub n: Option<i64>,
}

impl<P: Clone> ParamSet<P> {
    pub fn env(&self) -> Env<P> {
        Env { vals: self.vals.clone(), n: self.n }
    }
}

fn check_inputs<P>(desc: &IdentityDescriptor, free: &BTreeMap<char, P>, n: Option<i64>) -> Result<()> {
    let want: BTreeSet<char> = desc.free.iter().copied().collect();
    let got: BTreeSet<char> = free.keys().copied().collect();
    if want != got {
        let list = |s: &BTreeSet<char>| s.iter().collect::<String>();
        return Err(Error::Config(format!("{} takes free symbols [{}], got [{}]", desc.id, list(&want), list(&got))));
    }
    match (desc.int_param, n) {
        (Some((lo, hi)), Some(n)) if n < lo || n > hi => {
            Err(Error::Config(format!("{}: n = {n} outside {lo}..={hi}", desc.id)))
        }
        (Some(_), None) => Err(Error::Config(format!("{} needs an integer n", desc.id))),
        (None, Some(_)) => Err(Error::Config(format!("{} has no integer parameter", desc.id))),
        _ => Ok(()),
    }
}

/// Solves the constraints of `desc` by substitution, in declared order.
pub fn resolve_constraints<B: Backend>(
    desc: &IdentityDescriptor,
    b: &B,
    free: &BTreeMap<char, B::P>,
    n: Option<i64>,
) -> Result<ParamSet<B::P>> {
    check_inputs(desc, free, n)?;
    let mut env = Env { vals: free.clone(), n };
    for (c, mo) in &desc.constraints {
        let v = eval_mono(b, mo, &env).map_err(|e| e.at(&format!("constraint {c}")))?;
        env.vals.insert(*c, v);
    }
    Ok(ParamSet { q: b.q_param(), vals: env.vals, n })
}

/// Range of k over which the factor 1 - x q^k occurs (inclusive, open ends
/// unbounded).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Window {
    lo: Option<i64>,
    hi: Option<i64>,
}

const ALL: Window = Window { lo: None, hi: None };
const NONNEG: Window = Window { lo: Some(0), hi: None };
const ZERO: Window = Window { lo: Some(0), hi: Some(0) };

impl Window {
    fn contains(&self, k: i64) -> bool {
        self.lo.is_none_or(|l| k >= l) && self.hi.is_none_or(|h| k <= h)
    }

    fn clamp(&self, k: i64) -> i64 {
        let k = self.lo.map_or(k, |l| k.max(l));
        self.hi.map_or(k, |h| k.min(h))
    }
}

/// Every 1 - x q^k factor argument of the expression, with its k-range.
fn factor_args(e: &Expr, n: Option<i64>) -> Result<Vec<(Mono, Window)>> {
    let mut out = Vec::new();
    let mut err = None;
    e.walk(&mut |node| match node {
        Expr::OneMinus(x) => out.push((x.clone(), ZERO)),
        Expr::Theta(xs) => out.extend(xs.iter().map(|x| (x.clone(), ALL))),
        Expr::ThetaSeries(x) => out.push((x.clone(), ALL)),
        Expr::Omega(xs, as_) => {
            for x in xs {
                out.extend(as_.iter().map(|a| (x.div(a), NONNEG)));
            }
        }
        Expr::Poch(xs, o) => match resolve_order(*o, n) {
            Ok(PochOrder::Infinite) => out.extend(xs.iter().map(|x| (x.clone(), NONNEG))),
            Ok(PochOrder::Finite(0)) => {}
            Ok(PochOrder::Finite(m)) => {
                let w = if m > 0 { Window { lo: Some(0), hi: Some(m - 1) } } else { Window { lo: Some(m), hi: Some(-1) } };
                out.extend(xs.iter().map(|x| (x.clone(), w)));
            }
            Err(e) => err = Some(e),
        },
        Expr::Series(_, s) => {
            let (kind, num, den, _, weight) = s.layout();
            // A numerator zero only truncates the sum; the poles come from
            // numerator parameters at negative k and denominator ones at k ≥ 0.
            if kind == SeriesKind::Bilateral {
                out.extend(num.iter().map(|x| (x.clone(), Window { lo: None, hi: Some(-1) })));
            }
            // A structural q^-m upper parameter stops the sum after k = m.
            let last = num
                .iter()
                .filter(|x| x.syms.is_empty() && x.num == 1 && x.den == 1)
                .filter_map(|x| n.map(|n| x.qe + x.qn * n).or((x.qn == 0).then_some(x.qe)))
                .filter(|e| *e <= 0)
                .map(|e| -e - 1)
                .min();
            let w = Window { lo: Some(0), hi: last };
            out.extend(den.into_iter().map(|x| (x, w)));
            if let Weight::Vwp(a) = weight {
                out.push((a, ZERO));
            }
        }
        _ => {}
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Factor arguments that depend on at least one free symbol once the
/// constraints are substituted; the rest are fixed by the identity's shape.
fn generic_factor_args(desc: &IdentityDescriptor, n: Option<i64>) -> Result<Vec<(Mono, Window)>> {
    let cm = desc.constraint_map();
    let mut out = factor_args(&desc.lhs, n)?;
    out.extend(factor_args(&desc.rhs, n)?);
    out.retain(|(x, _)| !substitute(x, &cm).syms.is_empty());
    out.dedup();
    Ok(out)
}

/// Distance below which a factor 1 - x q^k counts as degenerate.
pub const DEGENERACY_RADIUS: f64 = 1e-4;

/// Rejects parameter sets that put a factor near one of its zeros, or that
/// violate a convergence condition by more than `limit` (|·| < limit).
pub fn admissible_numeric(desc: &IdentityDescriptor, b: &Numeric, ps: &ParamSet<Scalar>, limit: f64) -> Result<()> {
    let env = ps.env();
    let q = b.q.value();
    let lq = q.abs_f64().ln();
    for (x, w) in generic_factor_args(desc, ps.n)? {
        let xv = eval_mono(b, &x, &env)?;
        if xv.is_zero() {
            return Err(Error::DegenerateParameters(format!("{x} = 0")));
        }
        let kc = w.clamp((-xv.abs_f64().ln() / lq).round() as i64);
        for k in [kc - 1, kc, kc + 1] {
            if !w.contains(k) {
                continue;
            }
            let f = (&xv * &q.powi(k)).one_minus();
            if f.abs_f64() < DEGENERACY_RADIUS {
                return Err(Error::DegenerateParameters(format!("1 - ({x})·q^{k} = {} is within {DEGENERACY_RADIUS:e} of zero", f.to_decimal(6))));
            }
        }
    }
    admissible_convergence(desc, b, ps, limit)
}

/// The convergence half of [`admissible_numeric`]: explicit conditions plus
/// the asymptotic term ratios of every non-terminating series direction.
pub fn admissible_convergence(desc: &IdentityDescriptor, b: &Numeric, ps: &ParamSet<Scalar>, limit: f64) -> Result<()> {
    let env = ps.env();
    let q = b.q.value();
    let lq = q.abs_f64().ln();
    for c in &desc.convergence {
        let v = eval_mono(b, c, &env)?.abs_f64();
        if v >= limit {
            return Err(Error::UnsatisfiedConvergence(format!("|{c}| = {v:.4} is not below {limit}")));
        }
    }
    for e in [&desc.lhs, &desc.rhs] {
        for (label, form) in e.series() {
            let ev = Evaluator::new(b, &env);
            let (kind, num, den, z, weight) = form.layout();
            let num: Vec<Scalar> = num.iter().map(|m| ev.mono(m)).collect::<Result<_>>()?;
            let den: Vec<Scalar> = den.iter().map(|m| ev.mono(m)).collect::<Result<_>>()?;
            let weight = match weight {
                Weight::Vwp(a) => Weight::Vwp(ev.mono(&a)?),
                Weight::UnitLimit => Weight::UnitLimit,
                Weight::None => Weight::None,
            };
            let spec = b.spec(&crate::backend::ResolvedSeries { kind, num: num.clone(), den: den.clone(), z: ev.mono(&z)?, weight })?;
            let (fwd, bwd) = spec.asymptotic_ratios();
            let hits = |xs: &[Scalar], ks: Window| {
                xs.iter().any(|x| {
                    if x.is_zero() {
                        return false;
                    }
                    let k = ks.clamp((-x.abs_f64().ln() / lq).round() as i64);
                    ks.contains(k) && b.cfg.is_numerical_zero(&(x * &q.powi(k)).one_minus())
                })
            };
            if !hits(&num, NONNEG) && fwd >= limit {
                return Err(Error::UnsatisfiedConvergence(format!("{label}: forward term ratio {fwd:.4} is not below {limit}")));
            }
            if let Some(r) = bwd {
                if !hits(&den, Window { lo: Some(1), hi: None }) && r >= limit {
                    return Err(Error::UnsatisfiedConvergence(format!("{label}: backward term ratio {r:.4} is not below {limit}")));
                }
            }
        }
    }
    Ok(())
}

/// Formal analogue. Stricter than the numeric test: a generic factor argument
/// may not be a pure power of q at any k, so sums never collapse to a shorter
/// range through a parameter coincidence (small random rationals hit those
/// often, and the identity then only holds as a limit).
pub fn admissible_formal(desc: &IdentityDescriptor, ps: &ParamSet<QMono>) -> Result<()> {
    let b = Formal { order: 1 };
    let env = ps.env();
    for (x, _) in generic_factor_args(desc, ps.n)? {
        let xv = eval_mono(&b, &x, &env)?;
        if xv.is_zero() {
            return Err(Error::DegenerateParameters(format!("{x} = 0")));
        }
        if xv.coef == 1 {
            return Err(Error::DegenerateParameters(format!("1 - ({x})·q^{} vanishes identically", -xv.exp)));
        }
    }
    Ok(())
}

/// Exact analogue at rational q.
pub fn admissible_rational(desc: &IdentityDescriptor, b: &RationalQ, ps: &ParamSet<Rational>) -> Result<()> {
    let env = ps.env();
    let lq = b.q.to_f64().abs().ln();
    for (x, w) in generic_factor_args(desc, ps.n)? {
        let xv = eval_mono(b, &x, &env)?;
        if xv == 0 {
            return Err(Error::DegenerateParameters(format!("{x} = 0")));
        }
        let kc = w.clamp((-xv.to_f64().abs().ln() / lq).round() as i64);
        for k in [kc - 1, kc, kc + 1] {
            if !w.contains(k) {
                continue;
            }
            let qk = Rational::from((&b.q).pow(k as i32));
            if Rational::from(&xv * &qk) == 1 {
                return Err(Error::DegenerateParameters(format!("1 - ({x})·q^{k} is exactly zero")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Evaluates one side, returning its value and the statistics of every series
/// summed on the way.
pub fn eval_side<B: Backend>(desc: &IdentityDescriptor, side: Side, b: &B, ps: &ParamSet<B::P>) -> Result<(B::V, Vec<SeriesStats>)> {
    let env = ps.env();
    let ev = Evaluator::new(b, &env);
    let (e, tag) = match side {
        Side::Lhs => (&desc.lhs, "lhs"),
        Side::Rhs => (&desc.rhs, "rhs"),
    };
    let v = ev.eval(e).map_err(|err| err.at(tag))?;
    Ok((v, ev.take_stats()))
}

/// Values of the named coefficients (κ, λ, μ, d, c, Δ, ...).
pub fn transform_coeffs<B: Backend>(desc: &IdentityDescriptor, b: &B, ps: &ParamSet<B::P>) -> Result<BTreeMap<String, B::V>> {
    let env = ps.env();
    let ev = Evaluator::new(b, &env);
    let mut out = BTreeMap::new();
    for (name, e) in desc.coefficients() {
        out.insert(name.to_string(), ev.eval(e).map_err(|err| err.at(name))?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ReportError {
    fn from(e: &Error) -> Self {
        ReportError { kind: e.kind().into(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Working precision in decimal digits (numeric backend).
    pub precision_digits: Option<u32>,
    /// Working truncation order of the final formal evaluation.
    pub working_order: Option<i64>,
    pub series: Vec<SeriesStats>,
    pub coefficients: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub backend: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub abs_residual: Option<String>,
    pub rel_residual: Option<String>,
    pub tolerance: Option<String>,
    /// Exponents below this order were compared exactly (formal backend).
    pub formal_order: Option<i64>,
    /// First differing coefficient, `q^k: lhs vs rhs` (formal backend).
    pub mismatch: Option<String>,
    pub pass: bool,
    pub error: Option<ReportError>,
    pub diagnostics: Diagnostics,
}

impl CheckReport {
    fn new(id: &str, backend: &str, params: BTreeMap<String, String>) -> Self {
        CheckReport {
            id: id.into(),
            backend: backend.into(),
            params,
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            tolerance: None,
            formal_order: None,
            mismatch: None,
            pass: false,
            error: None,
            diagnostics: Diagnostics::default(),
        }
    }

    fn fail(mut self, e: &Error) -> Self {
        self.pass = false;
        self.error = Some(e.into());
        self
    }

    /// The relative residual as a float, when there is one.
    pub fn rel_residual_f64(&self) -> Option<f64> {
        self.rel_residual.as_deref().and_then(|s| s.parse().ok())
    }

    pub fn terms_used(&self) -> usize {
        self.diagnostics.series.iter().map(SeriesStats::terms_used).sum()
    }
}

fn param_strings<P>(ps: &ParamSet<P>, f: impl Fn(&P) -> String) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = ps.vals.iter().map(|(c, v)| (c.to_string(), f(v))).collect();
    out.insert("q".into(), f(&ps.q));
    if let Some(n) = ps.n {
        out.insert("n".into(), n.to_string());
    }
    out
}

/// Both sides in the numeric backend plus their series statistics.
pub fn eval_numeric(desc: &IdentityDescriptor, ps: &ParamSet<Scalar>, cfg: &NumericConfig) -> Result<(Scalar, Scalar, Vec<SeriesStats>)> {
    let b = Numeric::new(cfg.clone(), Nome::new(ps.q.clone())?);
    let (l, mut st) = eval_side(desc, Side::Lhs, &b, ps)?;
    let (r, st2) = eval_side(desc, Side::Rhs, &b, ps)?;
    st.extend(st2);
    Ok((l, r, st))
}

fn boundary_warnings(desc: &IdentityDescriptor, b: &Numeric, ps: &ParamSet<Scalar>) -> Vec<String> {
    let env = ps.env();
    desc.convergence
        .iter()
        .filter_map(|c| {
            let v = eval_mono(b, c, &env).ok()?.abs_f64();
            ((v - 1.0).abs() < 1e-12).then(|| format!("convergence condition |{c}| < 1 is on its boundary"))
        })
        .collect()
}

/// Numeric check: pass iff the relative residual is at most `tol`. Math
/// failures are recorded in the report, never raised.
pub fn check_numeric(desc: &IdentityDescriptor, ps: &ParamSet<Scalar>, cfg: &NumericConfig, tol: f64) -> CheckReport {
    let digits = cfg.digits as usize;
    let mut rep = CheckReport::new(desc.id, "numeric", param_strings(ps, |v| v.to_decimal(digits)));
    rep.tolerance = Some(format!("{tol:e}"));
    rep.diagnostics.precision_digits = Some(cfg.digits);
    let b = match Nome::new(ps.q.clone()) {
        Ok(q) => Numeric::new(cfg.clone(), q),
        Err(e) => return rep.fail(&e),
    };
    rep.diagnostics.warnings = boundary_warnings(desc, &b, ps);
    let (l, r, stats) = match eval_numeric(desc, ps, cfg) {
        Ok(v) => v,
        Err(e) => return rep.fail(&e),
    };
    if let Ok(cs) = transform_coeffs(desc, &b, ps) {
        rep.diagnostics.coefficients = cs.into_iter().map(|(k, v)| (k, v.to_decimal(digits))).collect();
    }
    for s in &stats {
        rep.diagnostics.warnings.extend(s.warnings.iter().map(|w| format!("{}: {w}", s.label)));
    }
    rep.diagnostics.series = stats;
    let (abs, rel) = rel_residual(&l, &r);
    rep.pass = l.is_finite() && r.is_finite() && rel.to_f64() <= tol;
    rep.lhs = Some(l.to_decimal(digits));
    rep.rhs = Some(r.to_decimal(digits));
    rep.abs_residual = Some(float_to_decimal(&abs, 20));
    rep.rel_residual = Some(float_to_decimal(&rel, 20));
    rep
}

/// Formal check: exact coefficient comparison below q^order. The working
/// order is raised until negative valuations no longer eat into the target.
pub fn check_formal(desc: &IdentityDescriptor, ps: &ParamSet<QMono>, order: i64) -> CheckReport {
    let mut rep = CheckReport::new(desc.id, "formal", param_strings(ps, |v| v.to_string()));
    let mut work = order + 4;
    for _ in 0..8 {
        let b = Formal { order: work };
        let res = eval_side(desc, Side::Lhs, &b, ps).and_then(|(l, mut st)| {
            let (r, st2) = eval_side(desc, Side::Rhs, &b, ps)?;
            st.extend(st2);
            Ok((l, r, st))
        });
        let (l, r, stats) = match res {
            Ok(v) => v,
            Err(e) => return rep.fail(&e),
        };
        let reached = compare_mod_qn(&l, &r).order;
        if let Some(o) = reached.filter(|o| *o < order) {
            work += order - o + 4;
            continue;
        }
        let (l, r) = (l.truncate(order), r.truncate(order));
        let v = compare_mod_qn(&l, &r);
        rep.diagnostics.working_order = Some(work);
        rep.diagnostics.series = stats;
        if let Ok(cs) = transform_coeffs(desc, &b, ps) {
            rep.diagnostics.coefficients = cs.into_iter().map(|(k, v)| (k, v.truncate(order).to_string())).collect();
        }
        rep.formal_order = v.order.or(Some(order));
        rep.pass = v.equal;
        if v.equal {
            rep.abs_residual = Some("0".into());
            rep.rel_residual = Some("0".into());
        }
        rep.mismatch = v.mismatch.map(|(k, a, c)| format!("q^{k}: {a} vs {c}"));
        rep.lhs = Some(l.to_string());
        rep.rhs = Some(r.to_string());
        return rep;
    }
    rep.fail(&Error::NonGradedSeries(format!("could not reach order {order} by raising the working order to {work}")))
}

/// Exact check at rational q: pass iff both sides are the same rational.
pub fn check_rational(desc: &IdentityDescriptor, ps: &ParamSet<Rational>) -> CheckReport {
    let mut rep = CheckReport::new(desc.id, "rational", param_strings(ps, |v| v.to_string()));
    let b = RationalQ { q: ps.q.clone() };
    let res = eval_side(desc, Side::Lhs, &b, ps).and_then(|(l, mut st)| {
        let (r, st2) = eval_side(desc, Side::Rhs, &b, ps)?;
        st.extend(st2);
        Ok((l, r, st))
    });
    let (l, r, stats) = match res {
        Ok(v) => v,
        Err(e) => return rep.fail(&e),
    };
    let diff = Rational::from(&l - &r);
    rep.diagnostics.series = stats;
    rep.pass = diff == 0;
    rep.abs_residual = Some(diff.clone().abs().to_string());
    rep.rel_residual = rep.pass.then(|| "0".to_string());
    rep.lhs = Some(l.to_string());
    rep.rhs = Some(r.to_string());
    rep
}

/// Resolves a numeric parameter assignment and checks it is admissible with
/// the plain |·| < 1 convergence conditions.
pub fn resolve_numeric(
    desc: &IdentityDescriptor,
    q: Scalar,
    free: &BTreeMap<char, Scalar>,
    n: Option<i64>,
    cfg: &NumericConfig,
    limit: f64,
) -> Result<ParamSet<Scalar>> {
    let b = Numeric::new(cfg.clone(), Nome::new(q)?);
    let ps = resolve_constraints(desc, &b, free, n)?;
    admissible_numeric(desc, &b, &ps, limit)?;
    Ok(ps)
}

pub fn resolve_formal(desc: &IdentityDescriptor, free: &BTreeMap<char, QMono>, n: Option<i64>) -> Result<ParamSet<QMono>> {
    let ps = resolve_constraints(desc, &Formal { order: 1 }, free, n)?;
    admissible_formal(desc, &ps)?;
    Ok(ps)
}

pub fn resolve_rational(desc: &IdentityDescriptor, q: Rational, free: &BTreeMap<char, Rational>, n: Option<i64>) -> Result<ParamSet<Rational>> {
    if q == 0 || q.clone().abs() >= 1 {
        return Err(Error::InvalidParameter(format!("rational q = {q} must satisfy 0 < |q| < 1")));
    }
    let b = RationalQ { q };
    let ps = resolve_constraints(desc, &b, free, n)?;
    admissible_rational(desc, &b, &ps)?;
    Ok(ps)
}

/// Laurent value of a formal side, exposed for callers that want the series.
pub fn eval_formal(desc: &IdentityDescriptor, side: Side, ps: &ParamSet<QMono>, order: i64) -> Result<QLaurent> {
    Ok(eval_side(desc, side, &Formal { order }, ps)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_well_formed() {
        let ids: Vec<_> = catalog().iter().map(|d| d.id).collect();
        assert_eq!(ids.len(), 21);
        let unique: BTreeSet<_> = ids.iter().collect();
        assert_eq!(unique.len(), ids.len());
        for d in catalog() {
            let mut known: BTreeSet<char> = d.free.iter().copied().collect();
            for (c, mo) in &d.constraints {
                for s in mo.symbols() {
                    assert!(known.contains(&s), "{}: constraint {c} uses {s} before it is bound", d.id);
                }
                known.insert(*c);
            }
            for s in d.lhs.symbols().into_iter().chain(d.rhs.symbols()) {
                assert!(known.contains(&s), "{}: symbol {s} is neither free nor constrained", d.id);
            }
            for mo in &d.convergence {
                assert!(mo.symbols().all(|s| known.contains(&s)));
            }
        }
        assert_eq!(lookup("NOPE").unwrap_err().kind(), "ConfigError");
    }

    #[test]
    fn jackson_constraint_value() {
        let d = lookup("JACKSON_8W7").unwrap();
        let b = RationalQ { q: Rational::from((1, 2)) };
        let free: BTreeMap<char, Rational> = [('a', 10), ('b', 2), ('c', 3), ('d', 5)].into_iter().map(|(c, v)| (c, Rational::from(v))).collect();
        let ps = resolve_constraints(d, &b, &free, Some(1)).unwrap();
        assert_eq!(ps.vals[&'z'], 12);
        let rep = check_rational(d, &ps);
        assert!(rep.pass, "{rep:?}");
        let (v, st) = eval_side(d, Side::Lhs, &b, &ps).unwrap();
        assert_eq!(v, eval_side(d, Side::Rhs, &b, &ps).unwrap().0);
        assert_eq!(st[0].terms_pos, 2);
    }

    #[test]
    fn wrong_free_symbols_are_config_errors() {
        let d = lookup("WEIERSTRASS").unwrap();
        let b = RationalQ { q: Rational::from((1, 3)) };
        let free: BTreeMap<char, Rational> = [('x', Rational::from(2))].into_iter().collect();
        assert_eq!(resolve_constraints(d, &b, &free, None).unwrap_err().kind(), "ConfigError");
    }

    #[test]
    fn weierstrass_numeric_and_formal() {
        let d = lookup("WEIERSTRASS").unwrap();
        let cfg = NumericConfig::new(30);
        let free: BTreeMap<char, Scalar> = [('x', 2.0), ('a', 3.0), ('b', 5.0), ('c', 7.0)].into_iter().map(|(c, v)| (c, cfg.scalar(v))).collect();
        let ps = resolve_numeric(d, cfg.parse("1/3").unwrap(), &free, None, &cfg, 1.0).unwrap();
        let rep = check_numeric(d, &ps, &cfg, 1e-30);
        assert!(rep.pass, "{rep:?}");

        let free: BTreeMap<char, QMono> = [('x', 2), ('a', 3), ('b', 5), ('c', 7)].into_iter().map(|(c, v)| (c, QMono::constant(Rational::from(v)))).collect();
        let ps = resolve_formal(d, &free, None).unwrap();
        let rep = check_formal(d, &ps, 20);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.formal_order, Some(20));
    }

    #[test]
    fn bailey_worked_example() {
        let d = lookup("BAILEY_66").unwrap();
        let cfg = NumericConfig::new(30);
        let free: BTreeMap<char, Scalar> = [('a', 4.0), ('b', 2.0), ('c', 3.0), ('d', 5.0), ('e', 7.0)].into_iter().map(|(c, v)| (c, cfg.scalar(v))).collect();
        let ps = resolve_numeric(d, cfg.parse("1/5").unwrap(), &free, None, &cfg, 1.0).unwrap();
        let rep = check_numeric(d, &ps, &cfg, 1e-30);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn degenerate_and_divergent_inputs_are_rejected() {
        let d = lookup("BAILEY_66").unwrap();
        let cfg = NumericConfig::new(30);
        let mk = |vals: [f64; 5]| -> BTreeMap<char, Scalar> { "abcde".chars().zip(vals).map(|(c, v)| (c, cfg.scalar(v))).collect() };
        // b = q: the factor (q/b;q)_∞ vanishes
        let e = resolve_numeric(d, cfg.parse("1/5").unwrap(), &mk([4.0, 0.2, 3.0, 5.0, 7.0]), None, &cfg, 1.0).unwrap_err();
        assert_eq!(e.kind(), "DegenerateParameters");
        // |a²q/bcde| > 1
        let e = resolve_numeric(d, cfg.parse("1/5").unwrap(), &mk([40.0, 2.0, 3.0, 5.0, 7.0]), None, &cfg, 1.0).unwrap_err();
        assert_eq!(e.kind(), "UnsatisfiedConvergence");
    }
}
