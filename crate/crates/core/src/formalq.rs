//! Truncated Laurent series in q with exact rational coefficients.
//!
//! A `QLaurent` is either an exact Laurent polynomial (`trunc == None`) or a
//! series known exactly for every exponent below `trunc`.

use std::fmt;

use rug::{Assign, Rational};

use crate::error::{Error, Result};
use crate::qcore::PochOrder;

/// `coef · q^exp`: the shape every formal parameter takes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMono {
    pub coef: Rational,
    pub exp: i64,
}

impl QMono {
    pub fn new(coef: Rational, exp: i64) -> Self {
        QMono { coef, exp }
    }

    pub fn constant(coef: Rational) -> Self {
        QMono { coef, exp: 0 }
    }

    pub fn q() -> Self {
        QMono { coef: Rational::from(1), exp: 1 }
    }

    pub fn one() -> Self {
        QMono::constant(Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.coef == 0
    }

    pub fn mul(&self, o: &QMono) -> QMono {
        QMono { coef: Rational::from(&self.coef * &o.coef), exp: self.exp + o.exp }
    }

    pub fn inv(&self) -> Result<QMono> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of a zero monomial".into()));
        }
        Ok(QMono { coef: Rational::from(self.coef.recip_ref()), exp: -self.exp })
    }

    pub fn pow(&self, n: i64) -> Result<QMono> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut coef = Rational::from(1);
        for _ in 0..n.unsigned_abs() {
            coef *= &base.coef;
        }
        Ok(QMono { coef, exp: base.exp * n.abs() })
    }

    pub fn shift(&self, k: i64) -> QMono {
        QMono { coef: self.coef.clone(), exp: self.exp + k }
    }

    /// Parses `r`, `q`, `q^k`, `r*q` or `r*q^k` with `r` an integer or `p/s`
    /// (the `Display` form round-trips).
    pub fn parse(s: &str) -> Result<QMono> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Config(format!("bad formal monomial '{s}'"));
        let (coef, exp) = match t.find('q') {
            None => (t.as_str(), 0),
            Some(i) => {
                let exp = match &t[i + 1..] {
                    "" => 1,
                    rest => {
                        let e = rest.strip_prefix('^').ok_or_else(bad)?;
                        let e = e.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(e);
                        e.parse().map_err(|_| bad())?
                    }
                };
                let c = t[..i].strip_suffix('*').unwrap_or(&t[..i]);
                (match c {
                    "" => "1",
                    "-" => "-1",
                    c => c,
                }, exp)
            }
        };
        let coef: Rational = coef.parse().map_err(|_| bad())?;
        Ok(QMono { coef, exp })
    }
}

impl fmt::Display for QMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{}", self.coef),
            1 => write!(f, "{}*q", self.coef),
            e => write!(f, "{}*q^{}", self.coef, e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLaurent {
    offset: i64,
    coeffs: Vec<Rational>,
    trunc: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { offset: 0, coeffs: Vec::new(), trunc: None }
    }

    /// O(q^n): nothing known to be nonzero below n.
    pub fn big_o(n: i64) -> Self {
        QLaurent { offset: n, coeffs: Vec::new(), trunc: Some(n) }
    }

    pub fn one() -> Self {
        QLaurent::monomial(Rational::from(1), 0)
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        QLaurent::from_coeffs(e, vec![c], None)
    }

    pub fn from_mono(m: &QMono) -> Self {
        QLaurent::monomial(m.coef.clone(), m.exp)
    }

    /// 1 - r q^e as an exact polynomial.
    pub fn binomial(r: &Rational, e: i64) -> Self {
        let mut out = QLaurent::one();
        out.mul_binomial_assign(r, e);
        out
    }

    pub fn from_coeffs(offset: i64, coeffs: Vec<Rational>, trunc: Option<i64>) -> Self {
        let mut s = QLaurent { offset, coeffs, trunc };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(t) = self.trunc {
            let keep = (t - self.offset).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        let lead = self.coeffs.iter().position(|c| *c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.offset = self.trunc.unwrap_or(0);
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.offset += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| *c == 0) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Exponent of the first nonzero coefficient; `None` for a (known) zero.
    pub fn min_order(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset)
        }
    }

    /// Lower bound on the order of the series: min_order, or the truncation
    /// order when no coefficient is known to be nonzero.
    pub fn valuation_bound(&self) -> Option<i64> {
        self.min_order().or(self.trunc)
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn coeff(&self, k: i64) -> Rational {
        if k < self.offset {
            return Rational::new();
        }
        self.coeffs.get((k - self.offset) as usize).cloned().unwrap_or_default()
    }

    /// Nonzero (exponent, coefficient) pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        let off = self.offset;
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(move |(i, c)| (off + i as i64, c))
    }

    fn max_exp_plus_one(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    /// Forget everything at or above q^n.
    pub fn truncate(&self, n: i64) -> QLaurent {
        let t = min_opt(self.trunc, Some(n));
        QLaurent::from_coeffs(self.offset, self.coeffs.clone(), t)
    }

    pub fn neg(&self) -> QLaurent {
        QLaurent { offset: self.offset, coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(), trunc: self.trunc }
    }

    pub fn add(&self, o: &QLaurent) -> QLaurent {
        let trunc = min_opt(self.trunc, o.trunc);
        if self.is_zero() {
            return o.truncate_opt(trunc);
        }
        if o.is_zero() {
            return self.truncate_opt(trunc);
        }
        let lo = self.offset.min(o.offset);
        let mut hi = self.max_exp_plus_one().max(o.max_exp_plus_one());
        if let Some(t) = trunc {
            hi = hi.min(t);
        }
        let len = (hi - lo).max(0) as usize;
        let mut coeffs = vec![Rational::new(); len];
        for (src, off) in [(&self.coeffs, self.offset), (&o.coeffs, o.offset)] {
            for (i, c) in src.iter().enumerate() {
                let k = off + i as i64 - lo;
                if (k as usize) < len {
                    coeffs[k as usize] += c;
                }
            }
        }
        QLaurent::from_coeffs(lo, coeffs, trunc)
    }

    fn truncate_opt(&self, t: Option<i64>) -> QLaurent {
        match t {
            Some(n) => self.truncate(n),
            None => self.clone(),
        }
    }

    pub fn sub(&self, o: &QLaurent) -> QLaurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> QLaurent {
        if *r == 0 {
            return QLaurent::zero();
        }
        QLaurent { offset: self.offset, coeffs: self.coeffs.iter().map(|c| Rational::from(c * r)).collect(), trunc: self.trunc }
    }

    pub fn mul_mono(&self, m: &QMono) -> QLaurent {
        if m.is_zero() {
            return QLaurent::zero();
        }
        let mut out = self.scale(&m.coef);
        out.offset += m.exp;
        out.trunc = out.trunc.map(|t| t + m.exp);
        out
    }

    /// Cauchy product, known up to min(N_a + min_b, N_b + min_a).
    pub fn mul(&self, o: &QLaurent) -> QLaurent {
        let ta = self.trunc.zip(o.valuation_bound()).map(|(n, m)| n + m);
        let tb = o.trunc.zip(self.valuation_bound()).map(|(n, m)| n + m);
        // A truncated zero times anything is O(...) of the combined bound.
        let trunc = match (self.trunc, o.trunc) {
            (None, None) => None,
            _ => min_opt(ta, tb).or_else(|| min_opt(self.trunc, o.trunc)),
        };
        if (self.is_zero() && self.trunc.is_none()) || (o.is_zero() && o.trunc.is_none()) {
            return QLaurent::zero();
        }
        if self.is_zero() || o.is_zero() {
            let t = trunc.unwrap_or(0);
            return QLaurent::big_o(t);
        }
        let lo = self.offset + o.offset;
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(t) = trunc {
            len = len.min((t - lo).max(0) as usize);
        }
        let mut coeffs = vec![Rational::new(); len];
        let mut tmp = Rational::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 || i >= len {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if *b == 0 {
                    continue;
                }
                tmp.assign(a * b);
                coeffs[i + j] += &tmp;
            }
        }
        QLaurent::from_coeffs(lo, coeffs, trunc)
    }

    /// In-place multiplication by the exact binomial 1 - r q^e.
    pub fn mul_binomial_assign(&mut self, r: &Rational, e: i64) {
        if *r == 0 {
            return;
        }
        if e == 0 {
            let f = Rational::from(1 - r);
            *self = self.scale(&f);
            return;
        }
        if self.is_zero() {
            if let Some(t) = self.trunc {
                *self = QLaurent::big_o(t + e.min(0));
            }
            return;
        }
        let lo = self.offset + e.min(0);
        let mut hi = self.max_exp_plus_one() + e.max(0);
        let trunc = self.trunc.map(|t| t + e.min(0));
        if let Some(t) = trunc {
            hi = hi.min(t);
        }
        let len = (hi - lo).max(0) as usize;
        let mut coeffs = vec![Rational::new(); len];
        let mut tmp = Rational::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.offset + i as i64;
            let a = (k - lo) as usize;
            if a < len {
                coeffs[a] += c;
            }
            let b = k + e - lo;
            if b >= 0 && (b as usize) < len {
                tmp.assign(r * c);
                coeffs[b as usize] -= &tmp;
            }
        }
        *self = QLaurent::from_coeffs(lo, coeffs, trunc);
    }

    /// Division by the exact binomial 1 - r q^e. Exact inputs that do not
    /// divide evenly are expanded up to (absolute) order `cap`.
    pub fn div_binomial(&self, r: &Rational, e: i64, cap: i64) -> Result<QLaurent> {
        if *r == 0 {
            return Ok(self.clone());
        }
        if e == 0 {
            if *r == 1 {
                return Err(Error::DivisionByZero("division by 1 - q^0".into()));
            }
            let f = Rational::from(1 - r).recip();
            return Ok(self.scale(&f));
        }
        if e < 0 {
            // 1 - r q^e = -r q^e (1 - q^{-e}/r)
            let rinv = Rational::from(r.recip_ref());
            let shifted = self.mul_mono(&QMono::new(Rational::from(-&rinv), -e));
            return shifted.div_binomial(&rinv, -e, cap);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Exact division first: polynomials divisible by the binomial stay exact.
        if self.is_exact() {
            if let Some(qt) = self.exact_quotient(r, e) {
                return Ok(qt);
            }
        }
        let trunc = min_opt(self.trunc, Some(cap));
        let t = trunc.unwrap_or(cap);
        let lo = self.offset;
        let len = (t - lo).max(0) as usize;
        let mut coeffs = vec![Rational::new(); len];
        let e = e as usize;
        let mut tmp = Rational::new();
        for k in 0..len {
            let mut c = self.coeff(lo + k as i64);
            if k >= e {
                tmp.assign(r * &coeffs[k - e]);
                c += &tmp;
            }
            coeffs[k] = c;
        }
        Ok(QLaurent::from_coeffs(lo, coeffs, trunc))
    }

    fn exact_quotient(&self, r: &Rational, e: i64) -> Option<QLaurent> {
        // Synthetic division from the top: p = (1 - r q^e) s.
        let e = e as usize;
        let n = self.coeffs.len();
        if n <= e {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let m = n - e;
        let mut quo = vec![Rational::new(); m];
        let neg_rinv = -Rational::from(r.recip_ref());
        for k in (0..m).rev() {
            // leading term of rem at index k+e equals -r * quo[k]
            let qk = Rational::from(&rem[k + e] * &neg_rinv);
            rem[k + e] = Rational::new();
            let t = qk.clone();
            rem[k] -= &t;
            quo[k] = qk;
        }
        if rem.iter().all(|c| *c == 0) {
            Some(QLaurent::from_coeffs(self.offset, quo, None))
        } else {
            None
        }
    }

    /// Multiplicative inverse. A truncated input with order m known to N
    /// yields a result known to N - 2m; exact non-monomial inputs are expanded
    /// up to `cap`.
    pub fn inv(&self, cap: i64) -> Result<QLaurent> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of a series that vanishes to its truncation order".into()));
        }
        let m = self.offset;
        if self.coeffs.len() == 1 && self.trunc.is_none() {
            return Ok(QLaurent::monomial(self.coeffs[0].clone().recip(), -m));
        }
        let trunc = match self.trunc {
            Some(n) => (n - 2 * m).min(cap),
            None => cap,
        };
        let len = (trunc + m).max(0) as usize;
        let c0inv = Rational::from(self.coeffs[0].recip_ref());
        let mut u = vec![Rational::new(); len];
        let mut tmp = Rational::new();
        for k in 0..len {
            if k == 0 {
                u[0] = c0inv.clone();
                continue;
            }
            let mut acc = Rational::new();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                if self.coeffs[j] == 0 {
                    continue;
                }
                tmp.assign(&self.coeffs[j] * &u[k - j]);
                acc += &tmp;
            }
            acc *= &c0inv;
            u[k] = -acc;
        }
        Ok(QLaurent::from_coeffs(-m, u, Some(trunc)))
    }

    pub fn div(&self, o: &QLaurent, cap: i64) -> Result<QLaurent> {
        if o.is_exact() {
            let nz: Vec<(i64, &Rational)> = o.terms().collect();
            match nz.len() {
                1 => return Ok(self.mul(&o.inv(cap)?)),
                2 => {
                    // c1 q^k1 (1 - r q^(k2-k1))
                    let lead = QMono::new(nz[0].1.clone(), nz[0].0).inv()?;
                    let r = -Rational::from(nz[1].1 / nz[0].1);
                    return self.mul_mono(&lead).div_binomial(&r, nz[1].0 - nz[0].0, cap);
                }
                _ => {}
            }
        }
        // Enough precision in the inverse for the product to reach cap.
        let cap_inv = cap - self.valuation_bound().unwrap_or(0);
        Ok(self.mul(&o.inv(cap_inv)?))
    }

    /// Value at a rational point; only meaningful for exact polynomials.
    pub fn eval_at(&self, q: &Rational) -> Option<Rational> {
        if !self.is_exact() {
            return None;
        }
        if self.is_zero() {
            return Some(Rational::new());
        }
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= q;
            acc += c;
        }
        let mut p = Rational::from(1);
        let base = if self.offset < 0 { Rational::from(q.recip_ref()) } else { q.clone() };
        for _ in 0..self.offset.unsigned_abs() {
            p *= &base;
        }
        Some(acc * p)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let (neg, mag) = if *c < 0 { (true, Rational::from(-c)) } else { (false, c.clone()) };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = match (k, mag == 1) {
                (0, _) => mag.to_string(),
                (1, true) => "q".to_string(),
                (1, false) => format!("{mag}q"),
                (_, true) => format!("q^{k}"),
                (_, false) => format!("{mag}q^{k}"),
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        match self.trunc {
            Some(t) if first => write!(f, "O(q^{t})"),
            Some(t) => write!(f, " + O(q^{t})"),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

pub fn ql_add(a: &QLaurent, b: &QLaurent) -> QLaurent {
    a.add(b)
}

pub fn ql_mul(a: &QLaurent, b: &QLaurent) -> QLaurent {
    a.mul(b)
}

/// Inverse of a truncated series (or an exact monomial).
pub fn ql_inv(a: &QLaurent) -> Result<QLaurent> {
    let cap = match a.trunc() {
        Some(n) => n - 2 * a.valuation_bound().unwrap_or(0),
        None if a.coeffs.len() == 1 => 0,
        None => {
            return Err(Error::InvalidParameter("inverse of an exact non-monomial needs an explicit order; use QLaurent::inv".into()))
        }
    };
    a.inv(cap)
}

/// (x;q)_order for x = r q^e, exact modulo q^n.
///
/// Only infinite products and negative orders are truncated; nonnegative
/// finite orders return exact polynomials.
pub fn qpoch_formal(x: &QMono, order: PochOrder, n: i64) -> Result<QLaurent> {
    let r = &x.coef;
    let e = x.exp;
    match order {
        PochOrder::Finite(m) if m >= 0 => {
            let mut acc = QLaurent::one();
            for k in 0..m {
                acc.mul_binomial_assign(r, e + k);
            }
            Ok(acc)
        }
        PochOrder::Finite(m) => {
            let mut acc = QLaurent::one();
            for k in 1..=(-m) {
                if *r == 1 && e - k == 0 {
                    return Err(Error::DivisionByZero(format!("factor 1 - {x}·q^-{k} is identically zero")));
                }
                acc = acc.div_binomial(r, e - k, n)?;
            }
            Ok(acc)
        }
        PochOrder::Infinite => {
            if *r == 0 {
                return Ok(QLaurent::one());
            }
            // Factors with negative exponent lower the order of the partial
            // product; compensate so the result is exact below q^n.
            let neg: i64 = (0..).map(|j| e + j).take_while(|k| *k < 0).sum();
            let stop = n - neg;
            let mut acc = QLaurent::one();
            let mut k = e;
            while k < stop {
                if *r == 1 && k == 0 {
                    return Ok(QLaurent::zero());
                }
                acc.mul_binomial_assign(r, k);
                k += 1;
            }
            Ok(acc.truncate(n))
        }
    }
}

/// Outcome of an exact coefficient comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equal: bool,
    /// Exponents below this were compared; `None` means all of them.
    pub order: Option<i64>,
    pub mismatch: Option<(i64, Rational, Rational)>,
}

pub fn compare_mod_qn(a: &QLaurent, b: &QLaurent) -> Verdict {
    let order = min_opt(a.trunc(), b.trunc());
    let d = a.sub(b);
    let first = d.terms().map(|(k, _)| k).find(|k| order.is_none_or(|n| *k < n));
    match first {
        None => Verdict { equal: true, order, mismatch: None },
        Some(k) => Verdict { equal: false, order, mismatch: Some((k, a.coeff(k), b.coeff(k))) },
    }
}
