//! Unilateral and bilateral basic hypergeometric series, summed by their
//! term-ratio recurrences.
//!
//! Conventions: a unilateral spec lists its upper parameters `a_0..a_r` and
//! lower parameters `b_1..b_r`; the `(q;q)_n` divisor is implicit. A bilateral
//! spec has equally many upper and lower parameters.

pub mod formal;

use rug::Float;

use crate::error::{Error, Result};
use crate::qcore::{qpoch, Nome, PochOrder};
use crate::scalar::{NumericConfig, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
}

/// Extra per-term weight.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<T> {
    None,
    /// (1 - a q^{2n}) / (1 - a): the ±q√a pair of a very-well-poised series.
    Vwp(T),
    /// The a → 1 limit of the very-well-poised weight: `(1 + q^n)/2` for a
    /// bilateral sum (symmetrized form), and `1, 1 + q^n (n ≥ 1)` for a
    /// unilateral one.
    UnitLimit,
}

#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub num_params: Vec<Scalar>,
    pub den_params: Vec<Scalar>,
    pub q: Nome,
    pub z: Scalar,
    pub weight: Weight<Scalar>,
}

#[derive(Clone, Debug)]
pub struct TruncationPolicy {
    pub tail_tol: f64,
    pub consecutive_small: usize,
    pub max_abs_index: usize,
    pub divergence_window: usize,
}

impl TruncationPolicy {
    pub fn for_config(cfg: &NumericConfig) -> Self {
        TruncationPolicy {
            tail_tol: 10f64.powf(cfg.tail_log10()),
            consecutive_small: 5,
            max_abs_index: 10_000,
            divergence_window: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Scalar,
    pub terms_used_pos: usize,
    pub terms_used_neg: usize,
    pub max_term_mag: f64,
    pub terminated: bool,
    pub warnings: Vec<String>,
}

impl SeriesValue {
    pub fn terms_used(&self) -> usize {
        self.terms_used_pos + self.terms_used_neg
    }
}

impl SeriesSpec {
    fn validate(&self) -> Result<()> {
        let (n, d) = (self.num_params.len(), self.den_params.len());
        match self.kind {
            SeriesKind::Unilateral if n != d + 1 => {
                Err(Error::InvalidParameter(format!("unilateral series needs r+1 upper and r lower parameters, got {n} and {d}")))
            }
            SeriesKind::Bilateral if n != d => {
                Err(Error::InvalidParameter(format!("bilateral series needs equally many parameters, got {n} and {d}")))
            }
            SeriesKind::Bilateral if self.z.is_zero() => Err(Error::ZeroArgument("bilateral series with z = 0".into())),
            _ => Ok(()),
        }
    }

    /// Limits of |T_{n+1}/T_n| as n → +∞ and of |T_{n-1}/T_n| as n → -∞.
    pub fn asymptotic_ratios(&self) -> (f64, Option<f64>) {
        let fwd = self.z.abs_f64();
        if self.kind == SeriesKind::Unilateral {
            return (fwd, None);
        }
        let lq = self.q.value().log10_abs();
        let mut l = -self.z.log10_abs();
        for b in &self.den_params {
            l += b.log10_abs();
        }
        for a in &self.num_params {
            l -= a.log10_abs();
        }
        match self.weight {
            Weight::Vwp(_) => l -= 2.0 * lq,
            Weight::UnitLimit => l -= lq,
            Weight::None => {}
        }
        (fwd, Some(10f64.powf(l)))
    }

    /// Weight at index n given q^n.
    fn weight_at(&self, n: i64, qn: &Scalar) -> Scalar {
        let p = qn.prec();
        match &self.weight {
            Weight::None => Scalar::one(p),
            Weight::Vwp(a) => (a * &(qn * qn)).one_minus() / a.one_minus(),
            Weight::UnitLimit => {
                let s = &Scalar::one(p) + qn;
                match self.kind {
                    SeriesKind::Bilateral => s.mul_real(&Float::with_val(p, 0.5)),
                    SeriesKind::Unilateral if n == 0 => Scalar::one(p),
                    SeriesKind::Unilateral => s,
                }
            }
        }
    }
}

struct Tail {
    sum: Scalar,
    terms: usize,
    terminated: bool,
}

/// Running state shared by both summation directions.
struct Sweep<'a> {
    spec: &'a SeriesSpec,
    policy: &'a TruncationPolicy,
    cfg: &'a NumericConfig,
    max_sq: Float,
    tol_sq: Float,
}

impl<'a> Sweep<'a> {
    fn new(spec: &'a SeriesSpec, policy: &'a TruncationPolicy, cfg: &'a NumericConfig) -> Self {
        let tol = Float::with_val(cfg.prec, policy.tail_tol);
        Sweep { spec, policy, cfg, max_sq: Float::with_val(cfg.prec, 0), tol_sq: Float::with_val(cfg.prec, tol.square_ref()) }
    }

    fn note(&mut self, term: &Scalar) -> Float {
        let m = term.norm_sq();
        if m > self.max_sq {
            self.max_sq = m.clone();
        }
        m
    }

    fn is_small(&self, mag_sq: &Float) -> bool {
        let t = Float::with_val(self.cfg.prec, &self.max_sq * &self.tol_sq);
        *mag_sq < t
    }

    /// Once every |param · q^n| is at most 1/2 the ratio is close to its
    /// limit, and steady growth can be read as divergence.
    fn past_burn_in(&self, qn: &Scalar, params: &[&Scalar]) -> bool {
        let lim = Float::with_val(self.cfg.prec, 0.25);
        params.iter().all(|p| (*p * qn).norm_sq() <= lim)
    }

    fn forward(&mut self) -> Result<Tail> {
        let spec = self.spec;
        let cfg = self.cfg;
        let prec = cfg.prec;
        let q = spec.q.value().with_prec(prec);
        let all: Vec<&Scalar> = spec.num_params.iter().chain(&spec.den_params).collect();
        let mut t = Scalar::one(prec);
        let mut qn = Scalar::one(prec);
        let first = &t * &spec.weight_at(0, &qn);
        self.note(&first);
        let mut tail = Tail { sum: first, terms: 1, terminated: false };
        let mut small = 0usize;
        let mut growing = 0usize;
        let mut last_sq = Float::with_val(prec, 0);
        let mut n: i64 = 0;
        loop {
            if n as usize >= self.policy.max_abs_index {
                return Err(Error::Divergence(format!("no convergence within {} terms", self.policy.max_abs_index)));
            }
            let mut num = spec.z.with_prec(prec);
            for a in &spec.num_params {
                let f = (a * &qn).one_minus();
                if cfg.is_numerical_zero(&f) {
                    tail.terminated = true;
                    return Ok(tail);
                }
                num = &num * &f;
            }
            let mut den = Scalar::one(prec);
            let den_iter = spec.den_params.iter().map(|b| (b * &qn).one_minus());
            let implicit = match spec.kind {
                SeriesKind::Unilateral => Some((&qn * &q).one_minus()),
                SeriesKind::Bilateral => None,
            };
            for (i, f) in den_iter.chain(implicit).enumerate() {
                if cfg.near_pole(&f) {
                    return Err(Error::PoleInDenominator(format!("lower factor #{i} vanishes at n = {}", n + 1)));
                }
                den = &den * &f;
            }
            t = &t * &(&num / &den);
            n += 1;
            qn = &qn * &q;
            let term = &t * &spec.weight_at(n, &qn);
            let mag = self.note(&term);
            tail.sum = &tail.sum + &term;
            tail.terms += 1;
            if self.is_small(&mag) {
                small += 1;
                if small >= self.policy.consecutive_small {
                    return Ok(tail);
                }
            } else {
                small = 0;
            }
            if mag > last_sq && self.past_burn_in(&qn, &all) {
                growing += 1;
                if growing >= self.policy.divergence_window {
                    return Err(Error::Divergence(format!("{growing} consecutive growing terms up to n = {n}")));
                }
            } else {
                growing = 0;
            }
            last_sq = mag;
        }
    }

    fn backward(&mut self) -> Result<Tail> {
        let spec = self.spec;
        let cfg = self.cfg;
        let prec = cfg.prec;
        let qinv = spec.q.value().with_prec(prec).recip();
        let zinv = spec.z.with_prec(prec).recip();
        // For n → -∞ the relevant magnitudes are |q^n / param|.
        let inv_params: Vec<Scalar> = spec.num_params.iter().chain(&spec.den_params).map(Scalar::recip).collect();
        let inv_refs: Vec<&Scalar> = inv_params.iter().collect();
        let mut t = Scalar::one(prec);
        // q^{n-1} for the current n, starting at n = 0
        let mut qm = qinv.clone();
        let mut tail = Tail { sum: Scalar::zero(prec), terms: 0, terminated: false };
        let mut small = 0usize;
        let mut growing = 0usize;
        let mut last_sq = Float::with_val(prec, 0);
        let mut n: i64 = 0;
        loop {
            if (-n) as usize >= self.policy.max_abs_index {
                return Err(Error::Divergence(format!("no convergence within {} negative terms", self.policy.max_abs_index)));
            }
            let mut num = zinv.clone();
            for b in &spec.den_params {
                let f = (b * &qm).one_minus();
                if cfg.is_numerical_zero(&f) {
                    tail.terminated = true;
                    return Ok(tail);
                }
                num = &num * &f;
            }
            let mut den = Scalar::one(prec);
            for (i, a) in spec.num_params.iter().enumerate() {
                let f = (a * &qm).one_minus();
                if cfg.near_pole(&f) {
                    return Err(Error::PoleInDenominator(format!("upper factor #{i} vanishes at n = {}", n - 1)));
                }
                den = &den * &f;
            }
            t = &t * &(&num / &den);
            n -= 1;
            let term = &t * &spec.weight_at(n, &qm);
            let q_pos = qm.recip();
            qm = &qm * &qinv;
            let mag = self.note(&term);
            tail.sum = &tail.sum + &term;
            tail.terms += 1;
            if self.is_small(&mag) {
                small += 1;
                if small >= self.policy.consecutive_small {
                    return Ok(tail);
                }
            } else {
                small = 0;
            }
            if mag > last_sq && self.past_burn_in(&q_pos, &inv_refs) {
                growing += 1;
                if growing >= self.policy.divergence_window {
                    return Err(Error::Divergence(format!("{growing} consecutive growing terms down to n = {n}")));
                }
            } else {
                growing = 0;
            }
            last_sq = mag;
        }
    }

    fn max_term_mag(&self) -> f64 {
        Float::with_val(64, self.max_sq.sqrt_ref()).to_f64()
    }
}

fn convergence_warnings(spec: &SeriesSpec) -> Vec<String> {
    let (fwd, bwd) = spec.asymptotic_ratios();
    let mut w = Vec::new();
    if fwd >= 1.0 {
        w.push(format!("forward ratio |z| = {fwd:.4} is not below 1"));
    }
    if let Some(b) = bwd {
        if b >= 1.0 {
            w.push(format!("backward ratio = {b:.4} is not below 1"));
        }
    }
    w
}

/// Σ_{n≥0} T_n for a unilateral spec.
pub fn phi_eval(spec: &SeriesSpec, policy: &TruncationPolicy, cfg: &NumericConfig) -> Result<SeriesValue> {
    if spec.kind != SeriesKind::Unilateral {
        return Err(Error::InvalidParameter("phi_eval needs a unilateral spec".into()));
    }
    spec.validate()?;
    let mut sweep = Sweep::new(spec, policy, cfg);
    let fwd = sweep.forward()?;
    let mut warnings = Vec::new();
    if !fwd.terminated {
        warnings = convergence_warnings(spec);
    }
    Ok(SeriesValue {
        value: fwd.sum,
        terms_used_pos: fwd.terms,
        terms_used_neg: 0,
        max_term_mag: sweep.max_term_mag(),
        terminated: fwd.terminated,
        warnings,
    })
}

/// Σ_{n∈ℤ} T_n for a bilateral spec; both tails are closed independently.
pub fn psi_eval(spec: &SeriesSpec, policy: &TruncationPolicy, cfg: &NumericConfig) -> Result<SeriesValue> {
    if spec.kind != SeriesKind::Bilateral {
        return Err(Error::InvalidParameter("psi_eval needs a bilateral spec".into()));
    }
    spec.validate()?;
    let mut sweep = Sweep::new(spec, policy, cfg);
    let fwd = sweep.forward()?;
    let bwd = sweep.backward()?;
    let (f, b) = spec.asymptotic_ratios();
    let mut warnings = Vec::new();
    if !fwd.terminated && f >= 1.0 {
        warnings.push(format!("forward ratio |z| = {f:.4} is not below 1"));
    }
    if let Some(b) = b {
        if !bwd.terminated && b >= 1.0 {
            warnings.push(format!("backward ratio = {b:.4} is not below 1"));
        }
    }
    Ok(SeriesValue {
        value: &fwd.sum + &bwd.sum,
        terms_used_pos: fwd.terms,
        terms_used_neg: bwd.terms,
        max_term_mag: sweep.max_term_mag(),
        terminated: fwd.terminated || bwd.terminated,
        warnings,
    })
}

pub fn eval(spec: &SeriesSpec, policy: &TruncationPolicy, cfg: &NumericConfig) -> Result<SeriesValue> {
    match spec.kind {
        SeriesKind::Unilateral => phi_eval(spec, policy, cfg),
        SeriesKind::Bilateral => psi_eval(spec, policy, cfg),
    }
}

fn check_vwp_base(a: &Scalar, cfg: &NumericConfig) -> Result<()> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("very-well-poised base a = 0".into()));
    }
    if cfg.is_numerical_zero(&a.one_minus()) {
        return Err(Error::InvalidParameter("very-well-poised base a = 1".into()));
    }
    Ok(())
}

/// ₍r+1₎W_r[a; extras; q, z]: upper parameters a, extras; lower aq/x; weight
/// (1 - a q^{2n})/(1 - a) in place of the ±q√a pair.
pub fn vwp_w_spec(a: &Scalar, extras: &[Scalar], q: &Nome, z: &Scalar, cfg: &NumericConfig) -> Result<SeriesSpec> {
    check_vwp_base(a, cfg)?;
    let aq = a * q.value();
    let mut num = vec![a.clone()];
    num.extend(extras.iter().cloned());
    Ok(SeriesSpec {
        kind: SeriesKind::Unilateral,
        num_params: num,
        den_params: extras.iter().map(|x| &aq / x).collect(),
        q: q.clone(),
        z: z.clone(),
        weight: Weight::Vwp(a.clone()),
    })
}

/// Very-well-poised bilateral series with base a.
pub fn vwp_psi_spec(a: &Scalar, extras: &[Scalar], q: &Nome, z: &Scalar, cfg: &NumericConfig) -> Result<SeriesSpec> {
    check_vwp_base(a, cfg)?;
    let aq = a * q.value();
    Ok(SeriesSpec {
        kind: SeriesKind::Bilateral,
        num_params: extras.to_vec(),
        den_params: extras.iter().map(|x| &aq / x).collect(),
        q: q.clone(),
        z: z.clone(),
        weight: Weight::Vwp(a.clone()),
    })
}

/// The unilateral very-well-poised series at a = 1, where the weight and the
/// (a;q)_n/(q;q)_n pair collapse to 1 + q^n.
pub fn unit_w_spec(extras: &[Scalar], q: &Nome, z: &Scalar) -> SeriesSpec {
    let mut num = vec![q.value().clone()];
    num.extend(extras.iter().cloned());
    SeriesSpec {
        kind: SeriesKind::Unilateral,
        num_params: num,
        den_params: extras.iter().map(|x| q.value() / x).collect(),
        q: q.clone(),
        z: z.clone(),
        weight: Weight::UnitLimit,
    }
}

/// ½ Σ_{n∈ℤ} (1 + q^n) (c,d,e,1/z,z;q)_n / (q/c,q/d,q/e,zq,q/z;q)_n (q/z)^n,
/// the symmetric realization of the a → 1 limit of the ₈ψ₈ with base a.
pub fn sym_psi8_at_unit(
    c: &Scalar,
    d: &Scalar,
    e: &Scalar,
    z: &Scalar,
    q: &Nome,
    policy: &TruncationPolicy,
    cfg: &NumericConfig,
) -> Result<SeriesValue> {
    if z.is_zero() {
        return Err(Error::ZeroArgument("z = 0".into()));
    }
    let expect = &(&(c * d) * e) / q.value();
    let (_, rel) = crate::scalar::rel_residual(&expect, z);
    if rel > 10f64.powf(-(cfg.digits as f64) + 10.0) {
        return Err(Error::InvalidParameter("z must equal cde/q".into()));
    }
    let spec = sym_unit_spec(&[c.clone(), d.clone(), e.clone(), z.recip(), z.clone()], q, &(q.value() / z));
    psi_eval(&spec, policy, cfg)
}

pub fn sym_unit_spec(extras: &[Scalar], q: &Nome, arg: &Scalar) -> SeriesSpec {
    SeriesSpec {
        kind: SeriesKind::Bilateral,
        num_params: extras.to_vec(),
        den_params: extras.iter().map(|x| q.value() / x).collect(),
        q: q.clone(),
        z: arg.clone(),
        weight: Weight::UnitLimit,
    }
}

/// T_n evaluated from q-Pochhammer symbols rather than the recurrence.
pub fn term_direct(spec: &SeriesSpec, n: i64, cfg: &NumericConfig) -> Result<Scalar> {
    let ord = PochOrder::Finite(n);
    let mut t = spec.z.with_prec(cfg.prec).powi(n);
    for a in &spec.num_params {
        t = &t * &qpoch(a, &spec.q, ord, cfg)?;
    }
    let mut den = Scalar::one(cfg.prec);
    for b in &spec.den_params {
        den = &den * &qpoch(b, &spec.q, ord, cfg)?;
    }
    if spec.kind == SeriesKind::Unilateral {
        den = &den * &qpoch(spec.q.value(), &spec.q, ord, cfg)?;
    }
    let qn = spec.q.value().with_prec(cfg.prec).powi(n);
    Ok(&(&t / &den) * &spec.weight_at(n, &qn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qpoch_multi;
    use crate::scalar::rel_residual;

    fn setup() -> (NumericConfig, TruncationPolicy) {
        let c = NumericConfig::new(30);
        let p = TruncationPolicy::for_config(&c);
        (c, p)
    }

    fn rel(a: &Scalar, b: &Scalar) -> f64 {
        rel_residual(a, b).1.to_f64()
    }

    #[test]
    fn unit_upper_parameter_truncates_to_one() {
        let (c, p) = setup();
        let q = Nome::new(c.scalar(0.3)).unwrap();
        let spec = SeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![c.scalar(1.0), c.scalar(0.7)],
            den_params: vec![c.scalar(0.2)],
            q,
            z: c.scalar(0.5),
            weight: Weight::None,
        };
        let v = phi_eval(&spec, &p, &c).unwrap();
        assert_eq!(v.value, Scalar::one(c.prec));
        assert!(v.terminated);
        assert_eq!(v.terms_used_pos, 1);
    }

    #[test]
    fn terminating_w_series_uses_three_terms() {
        let (c, p) = setup();
        let qv = c.scalar(0.4);
        let q = Nome::new(qv.clone()).unwrap();
        let a = c.scalar(0.37);
        let extras = vec![qv.powi(-2), c.scalar(1.3), c.scalar(-0.6), c.scalar(2.2), Scalar::from_parts_f64(c.prec, 0.1, 0.9)];
        let spec = vwp_w_spec(&a, &extras, &q, &qv, &c).unwrap();
        let v = phi_eval(&spec, &p, &c).unwrap();
        assert!(v.terminated);
        assert_eq!(v.terms_used_pos, 3);
        let mut direct = Scalar::zero(c.prec);
        for n in 0..3 {
            direct = &direct + &term_direct(&spec, n, &c).unwrap();
        }
        assert!(rel(&v.value, &direct) < 1e-50);
    }

    #[test]
    fn vwp_weight_values() {
        let c = NumericConfig::new(30);
        let qv = c.scalar(0.3);
        let q = Nome::new(qv.clone()).unwrap();
        let a = qv.recip();
        let spec = vwp_w_spec(&a, &[], &q, &qv, &c).unwrap();
        assert_eq!(spec.weight_at(0, &Scalar::one(c.prec)), Scalar::one(c.prec));
        let w1 = spec.weight_at(1, &qv);
        assert!(rel(&w1, &(-&qv)) < 1e-60);
        assert!(vwp_w_spec(&c.scalar(1.0), &[], &q, &qv, &c).is_err());
        assert!(vwp_psi_spec(&c.scalar(0.0), &[], &q, &qv, &c).is_err());
    }

    #[test]
    fn weight_form_matches_literal_sqrt_pair() {
        // a = r², so ±q√a are the honest parameters qr, -qr over r, -r.
        let (c, p) = setup();
        let qv = Scalar::from_parts_f64(c.prec, 0.25, -0.2);
        let q = Nome::new(qv.clone()).unwrap();
        let r = Scalar::from_parts_f64(c.prec, 0.9, 0.35);
        let a = &r * &r;
        let extras = [c.scalar(1.4), Scalar::from_parts_f64(c.prec, -0.7, 0.6), c.scalar(2.1)];
        let z = &(&a * &qv) / &(&extras[0] * &extras[2]);
        let qr = &qv * &r;
        let aq = &a * &qv;
        let literal = |kind, lead: Vec<Scalar>| {
            let mut num = lead;
            num.extend([qr.clone(), -&qr]);
            num.extend(extras.iter().cloned());
            let mut den = vec![r.clone(), -&r];
            den.extend(extras.iter().map(|x| &aq / x));
            SeriesSpec { kind, num_params: num, den_params: den, q: q.clone(), z: z.clone(), weight: Weight::None }
        };
        let w = phi_eval(&vwp_w_spec(&a, &extras, &q, &z, &c).unwrap(), &p, &c).unwrap();
        let w_lit = phi_eval(&literal(SeriesKind::Unilateral, vec![a.clone()]), &p, &c).unwrap();
        assert!(rel(&w.value, &w_lit.value) < 1e-30);
        let s = psi_eval(&vwp_psi_spec(&a, &extras, &q, &z, &c).unwrap(), &p, &c).unwrap();
        let s_lit = psi_eval(&literal(SeriesKind::Bilateral, vec![]), &p, &c).unwrap();
        assert!(rel(&s.value, &s_lit.value) < 1e-30);
    }

    #[test]
    fn bailey_six_psi_six_at_rational_point() {
        let (c, p) = setup();
        let v = |x: f64| c.scalar(x);
        let qv = v(0.2);
        let q = Nome::new(qv.clone()).unwrap();
        let (a, b, cc, d, e) = (v(4.0), v(2.0), v(3.0), v(5.0), v(7.0));
        let z = &(&(&a * &a) * &qv) / &(&(&b * &cc) * &(&d * &e));
        let spec = vwp_psi_spec(&a, &[b.clone(), cc.clone(), d.clone(), e.clone()], &q, &z, &c).unwrap();
        let lhs = psi_eval(&spec, &p, &c).unwrap();
        let aq = &a * &qv;
        let num = [qv.clone(), &qv / &a, aq.clone(), &aq / &(&b * &cc), &aq / &(&b * &d), &aq / &(&b * &e), &aq / &(&cc * &d), &aq / &(&cc * &e), &aq / &(&d * &e)];
        let den = [&qv / &b, &qv / &cc, &qv / &d, &qv / &e, &aq / &b, &aq / &cc, &aq / &d, &aq / &e, z.clone()];
        let rhs = &qpoch_multi(&num, &q, PochOrder::Infinite, &c).unwrap() / &qpoch_multi(&den, &q, PochOrder::Infinite, &c).unwrap();
        assert!(rel(&lhs.value, &rhs) < 1e-30, "{}", rel(&lhs.value, &rhs));
    }

    #[test]
    fn lower_parameter_q_reduces_to_unilateral() {
        let (c, p) = setup();
        let qv = Scalar::from_parts_f64(c.prec, 0.2, 0.25);
        let q = Nome::new(qv.clone()).unwrap();
        let a1 = Scalar::from_parts_f64(c.prec, 0.8, -0.4);
        let a2 = c.scalar(1.7);
        let b2 = Scalar::from_parts_f64(c.prec, -0.5, 1.1);
        let z = Scalar::from_parts_f64(c.prec, 0.3, 0.1);
        let bil = SeriesSpec {
            kind: SeriesKind::Bilateral,
            num_params: vec![a1.clone(), a2.clone()],
            den_params: vec![qv.clone(), b2.clone()],
            q: q.clone(),
            z: z.clone(),
            weight: Weight::None,
        };
        let uni = SeriesSpec { kind: SeriesKind::Unilateral, num_params: vec![a1, a2], den_params: vec![b2], q, z, weight: Weight::None };
        let x = psi_eval(&bil, &p, &c).unwrap();
        let y = phi_eval(&uni, &p, &c).unwrap();
        assert_eq!(x.terms_used_neg, 0);
        assert!(rel(&x.value, &y.value) < 1e-30);
    }

    #[test]
    fn divergence_is_reported() {
        let (c, p) = setup();
        let q = Nome::new(c.scalar(0.5)).unwrap();
        let spec = SeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![c.scalar(0.3), c.scalar(0.2)],
            den_params: vec![c.scalar(0.1)],
            q,
            z: c.scalar(3.0),
            weight: Weight::None,
        };
        assert_eq!(phi_eval(&spec, &p, &c).unwrap_err().kind(), "Divergence");
    }

    #[test]
    fn pole_in_lower_parameter() {
        let (c, p) = setup();
        let qv = c.scalar(0.5);
        let q = Nome::new(qv.clone()).unwrap();
        let spec = SeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![c.scalar(0.3), c.scalar(0.2)],
            den_params: vec![qv.powi(-2)],
            q,
            z: c.scalar(0.5),
            weight: Weight::None,
        };
        assert_eq!(phi_eval(&spec, &p, &c).unwrap_err().kind(), "PoleInDenominator");
    }

    #[test]
    fn symmetric_unit_sum_matches_unilateral_limit() {
        let (c, p) = setup();
        let qv = Scalar::from_parts_f64(c.prec, 0.15, -0.2);
        let q = Nome::new(qv.clone()).unwrap();
        let cc = Scalar::from_parts_f64(c.prec, 1.2, 0.5);
        let d = Scalar::from_parts_f64(c.prec, -0.9, 1.4);
        let e = c.scalar(2.1);
        let z = &(&(&cc * &d) * &e) / &qv;
        let sym = sym_psi8_at_unit(&cc, &d, &e, &z, &q, &p, &c).unwrap();
        let uni = phi_eval(&unit_w_spec(&[cc.clone(), d.clone(), e.clone(), z.recip(), z.clone()], &q, &(&qv / &z)), &p, &c).unwrap();
        assert!(rel(&sym.value, &uni.value) < 1e-30);
        let swapped = sym_psi8_at_unit(&d, &cc, &e, &z, &q, &p, &c).unwrap();
        assert!(rel(&sym.value, &swapped.value) < 1e-50);
        assert!(sym_psi8_at_unit(&cc, &d, &e, &c.scalar(3.0), &q, &p, &c).is_err());
    }
}
