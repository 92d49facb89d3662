//! q-Pochhammer symbols, theta functions and Ω products over arbitrary-precision
//! complex numbers.

use rug::Float;

use crate::error::{Error, Result};
use crate::scalar::{NumericConfig, Scalar};

/// Base of all q-series; always strictly inside the unit disk.
#[derive(Clone, Debug)]
pub struct Nome {
    q: Scalar,
}

impl Nome {
    pub fn new(q: Scalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParameter("nome q = 0".into()));
        }
        let one = Float::with_val(q.prec(), 1);
        if q.norm_sq() >= one {
            return Err(Error::InvalidParameter(format!("|q| >= 1 (q = {})", q.to_decimal(12))));
        }
        Ok(Nome { q })
    }

    pub fn value(&self) -> &Scalar {
        &self.q
    }

    pub fn abs_f64(&self) -> f64 {
        self.q.abs_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

/// An infinite product together with its truncation bookkeeping.
#[derive(Clone, Debug)]
pub struct InfiniteProduct {
    pub value: Scalar,
    pub factors: usize,
    /// Upper bound on log10 |log(neglected tail)|; -inf when the product is exact.
    pub tail_log10: f64,
}

/// (x;q)_∞, truncated at the first N with |x q^N| below the tail tolerance.
pub fn qpoch_infinite(x: &Scalar, q: &Nome, cfg: &NumericConfig) -> InfiniteProduct {
    let prec = cfg.prec;
    let mut acc = Scalar::one(prec);
    let mut t = x.with_prec(prec);
    let mut n = 0usize;
    loop {
        if cfg.below_tail(&t) {
            break;
        }
        let f = t.one_minus();
        if cfg.is_numerical_zero(&f) {
            return InfiniteProduct { value: Scalar::zero(prec), factors: n + 1, tail_log10: f64::NEG_INFINITY };
        }
        acc = &acc * &f;
        t = &t * q.value();
        n += 1;
    }
    let tail_log10 = if t.is_zero() {
        f64::NEG_INFINITY
    } else {
        // Σ_{k≥N} |x||q|^k / (1 - |x||q|^k) ≤ |t| / ((1-|q|)(1-|t|))
        let lt = t.log10_abs();
        let aq = q.abs_f64();
        let at = 10f64.powf(lt).min(0.5);
        lt - ((1.0 - aq) * (1.0 - at)).log10()
    };
    InfiniteProduct { value: acc, factors: n, tail_log10 }
}

/// ∏_{k=0}^{n-1} (1 - x q^k) for n ≥ 0.
fn qpoch_positive(x: &Scalar, q: &Scalar, n: i64, prec: u32) -> Scalar {
    let mut acc = Scalar::one(prec);
    let mut t = x.with_prec(prec);
    for _ in 0..n {
        acc = &acc * &t.one_minus();
        t = &t * q;
    }
    acc
}

/// (x;q)_n for every integer order and for n = ∞.
pub fn qpoch(x: &Scalar, q: &Nome, order: PochOrder, cfg: &NumericConfig) -> Result<Scalar> {
    match order {
        PochOrder::Infinite => Ok(qpoch_infinite(x, q, cfg).value),
        PochOrder::Finite(n) if n >= 0 => Ok(qpoch_positive(x, q.value(), n, cfg.prec)),
        PochOrder::Finite(n) => {
            let qinv = q.value().recip();
            let mut t = &x.with_prec(cfg.prec) * &qinv;
            let mut den = Scalar::one(cfg.prec);
            for k in 1..=(-n) {
                let f = t.one_minus();
                if cfg.near_pole(&f) {
                    return Err(Error::DivisionByZero(format!(
                        "factor 1 - x q^-{k} vanishes in (x;q)_{n} (x = {})",
                        x.to_decimal(12)
                    )));
                }
                den = &den * &f;
                t = &t * &qinv;
            }
            Ok(den.recip())
        }
    }
}

pub fn qpoch_multi(xs: &[Scalar], q: &Nome, order: PochOrder, cfg: &NumericConfig) -> Result<Scalar> {
    let mut acc = Scalar::one(cfg.prec);
    for (i, x) in xs.iter().enumerate() {
        let v = qpoch(x, q, order, cfg).map_err(|e| e.at(&format!("qpoch argument #{i}")))?;
        acc = &acc * &v;
    }
    Ok(acc)
}

/// θ(x) = (x, q/x; q)_∞.
pub fn theta_product(x: &Scalar, q: &Nome, cfg: &NumericConfig) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("theta of 0".into()));
    }
    let a = qpoch_infinite(x, q, cfg).value;
    if a.is_zero() {
        return Ok(a);
    }
    let b = qpoch_infinite(&(q.value() / x), q, cfg).value;
    Ok(&a * &b)
}

/// θ(x) from the bilateral sum Σ (-1)^n q^{n(n-1)/2} x^n / (q;q)_∞.
pub fn theta_series(x: &Scalar, q: &Nome, cfg: &NumericConfig) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("theta of 0".into()));
    }
    let prec = cfg.prec;
    let x = x.with_prec(prec);
    let qv = q.value().with_prec(prec);
    let mut sum = Scalar::one(prec);
    let mut max_sq = Float::with_val(prec, 1);
    let tail = cfg.tail_sq().clone();

    // Forward: t_{n+1} = -x q^n t_n.  Backward: t_{n-1} = -q^{1-n}/x t_n.
    let step = |forward: bool, sum: &mut Scalar, max_sq: &mut Float| {
        let mut t = Scalar::one(prec);
        let mut qn = Scalar::one(prec);
        let ratio_base = if forward { -&x } else { -&x.recip() };
        let mut small = 0;
        let mut n = 0usize;
        while small < 5 && n < 100_000 {
            // forward uses q^n with n = 0,1,..; backward uses q^{1-n} with n = 0,-1,.. i.e. q^1, q^2, ..
            if !forward && n == 0 {
                qn = qv.clone();
            }
            t = &(&t * &ratio_base) * &qn;
            qn = &qn * &qv;
            *sum = &*sum + &t;
            let mag = t.norm_sq();
            if mag > *max_sq {
                *max_sq = mag.clone();
            }
            let thresh = Float::with_val(prec, &*max_sq * &tail);
            if mag < thresh {
                small += 1;
            } else {
                small = 0;
            }
            n += 1;
        }
    };
    step(true, &mut sum, &mut max_sq);
    step(false, &mut sum, &mut max_sq);
    let qq = qpoch_infinite(&qv, q, cfg).value;
    Ok(&sum / &qq)
}

pub fn theta_multi(xs: &[Scalar], q: &Nome, cfg: &NumericConfig) -> Result<Scalar> {
    let mut acc = Scalar::one(cfg.prec);
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroArgument(format!("theta argument #{i} is 0")));
        }
        acc = &acc * &theta_product(x, q, cfg)?;
    }
    Ok(acc)
}

/// Ω(xs; as) = ∏_i ∏_j (x_i / a_j; q)_∞.
pub fn omega(xs: &[Scalar], as_: &[Scalar], q: &Nome, cfg: &NumericConfig) -> Result<Scalar> {
    if let Some(j) = as_.iter().position(Scalar::is_zero) {
        return Err(Error::ZeroArgument(format!("omega divisor #{j} is 0")));
    }
    let mut acc = Scalar::one(cfg.prec);
    for x in xs {
        for a in as_ {
            acc = &acc * &qpoch_infinite(&(x / a), q, cfg).value;
        }
    }
    Ok(acc)
}
