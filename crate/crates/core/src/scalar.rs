//! Arbitrary-precision complex scalars and the numeric configuration that
//! fixes working precision and the various thresholds derived from it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::PowAssign;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Extra decimal digits carried on top of twice the requested accuracy.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Binary precision needed for `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 4
}

/// Complex number with both parts stored as MPFR floats.
#[derive(Clone, Debug)]
pub struct Scalar {
    re: Float,
    im: Float,
}

impl Scalar {
    pub fn zero(prec: u32) -> Self {
        Scalar { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Scalar::from_f64(prec, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64) -> Self {
        Scalar { re: Float::with_val(prec, re), im: Float::new(prec) }
    }

    pub fn from_parts_f64(prec: u32, re: f64, im: f64) -> Self {
        Scalar { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Scalar { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        Scalar { re: Float::with_val(prec, r), im: Float::new(prec) }
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let p = re.prec().min(im.prec());
        let mut s = Scalar { re, im };
        s.re.set_prec(p);
        s.im.set_prec(p);
        s
    }

    /// Polar constructor; the phase is applied in double precision, which is
    /// all the samplers need.
    pub fn from_polar(prec: u32, r: f64, phi: f64) -> Self {
        Scalar::from_parts_f64(prec, r * phi.cos(), r * phi.sin())
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Scalar { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// |z|^2 at the scalar's own precision.
    pub fn norm_sq(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    /// log10 |z|, or -inf for zero. Never overflows, unlike `abs().to_f64()`.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let a = self.abs();
        Float::with_val(64, a.log10_ref()).to_f64()
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn recip(&self) -> Self {
        Scalar::one(self.prec()) / self
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Scalar::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// 1 - self.
    pub fn one_minus(&self) -> Self {
        let p = self.prec();
        let mut re = Float::with_val(p, 1);
        re -= &self.re;
        Scalar { re, im: Float::with_val(p, -&self.im) }
    }

    pub fn mul_real(&self, r: &Float) -> Self {
        let p = self.prec().min(r.prec());
        Scalar { re: Float::with_val(p, &self.re * r), im: Float::with_val(p, &self.im * r) }
    }

    /// Decimal rendering `re` or `re+imi` with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = float_to_decimal(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = float_to_decimal(&self.im, digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    /// Parses `re`, `re+imi`, `imi`, with each part a decimal (`1.5e-3`) or a
    /// rational (`1/3`).
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Config("empty number".into()));
        }
        let (re_part, im_part) = split_complex(&t);
        let re = match re_part {
            Some(r) => parse_real(r, prec)?,
            None => Float::new(prec),
        };
        let im = match im_part {
            Some(i) => {
                let body = &i[..i.len() - 1];
                let body = match body {
                    "" | "+" => "1",
                    "-" => "-1",
                    b => b,
                };
                parse_real(body, prec)?
            }
            None => Float::new(prec),
        };
        Ok(Scalar { re, im })
    }
}

fn split_complex(t: &str) -> (Option<&str>, Option<&str>) {
    if !t.ends_with('i') {
        return (Some(t), None);
    }
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => (Some(&t[..i]), Some(&t[i..])),
        None => (None, Some(t)),
    }
}

fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.contains('/') {
        let r: Rational = s.parse().map_err(|_| Error::Config(format!("bad rational '{s}'")))?;
        return Ok(Float::with_val(prec, &r));
    }
    let parsed = Float::parse(s).map_err(|_| Error::Config(format!("bad number '{s}'")))?;
    Ok(Float::with_val(prec, parsed))
}

pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let p = self.prec().min(o.prec());
        Scalar { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let p = self.prec().min(o.prec());
        Scalar { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let p = self.prec().min(o.prec());
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        Scalar { re, im }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        let p = self.prec().min(o.prec());
        if o.im.is_zero() {
            return Scalar { re: Float::with_val(p, &self.re / &o.re), im: Float::with_val(p, &self.im / &o.re) };
        }
        let den = o.norm_sq();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re += Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.im * &o.re);
        im -= Float::with_val(p, &self.re * &o.im);
        re /= &den;
        im /= &den;
        Scalar { re, im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Precision and thresholds derived from a requested accuracy of `A`
/// decimal digits.
///
/// * working precision `P = 2A + 10` digits
/// * infinite-product / series tail tolerance `10^-(A+5)`
/// * pole-proximity threshold `10^-(A/2)`
/// * numerical-zero snap `10^-(P-10)`: a factor below it is rounding noise
///   around an exact zero and is treated as one.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    pub accuracy: u32,
    pub digits: u32,
    pub prec: u32,
    tail_sq: Float,
    pole_sq: Float,
    snap_sq: Float,
}

impl NumericConfig {
    pub fn new(accuracy: u32) -> Self {
        let digits = 2 * accuracy + GUARD_DIGITS;
        let prec = bits_for_digits(digits);
        let pow10_sq = |e: i64| {
            let mut f = Float::with_val(64, 10);
            f.pow_assign(2 * e as i32);
            f
        };
        NumericConfig {
            accuracy,
            digits,
            prec,
            tail_sq: pow10_sq(-(accuracy as i64) - 5),
            pole_sq: pow10_sq(-((accuracy / 2) as i64)),
            snap_sq: pow10_sq(-((digits - GUARD_DIGITS) as i64)),
        }
    }

    pub fn tail_log10(&self) -> f64 {
        -(self.accuracy as f64) - 5.0
    }

    pub fn pole_log10(&self) -> f64 {
        -((self.accuracy / 2) as f64)
    }

    /// |x| < tail tolerance.
    pub fn below_tail(&self, x: &Scalar) -> bool {
        x.norm_sq() < self.tail_sq
    }

    /// |x| < pole-proximity threshold.
    pub fn near_pole(&self, x: &Scalar) -> bool {
        x.norm_sq() < self.pole_sq
    }

    /// |x| is at rounding level, i.e. an exact zero blurred by rounding.
    pub fn is_numerical_zero(&self, x: &Scalar) -> bool {
        x.is_zero() || x.norm_sq() < self.snap_sq
    }

    pub fn tail_sq(&self) -> &Float {
        &self.tail_sq
    }

    pub fn scalar(&self, v: f64) -> Scalar {
        Scalar::from_f64(self.prec, v)
    }

    pub fn parse(&self, s: &str) -> Result<Scalar> {
        Scalar::parse(s, self.prec)
    }
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig::new(30)
    }
}

/// Relative residual |l - r| / max(1, |l|, |r|).
pub fn rel_residual(l: &Scalar, r: &Scalar) -> (Float, Float) {
    let abs = (l - r).abs();
    let p = abs.prec();
    let mut scale = Float::with_val(p, 1);
    let la = l.abs();
    let ra = r.abs();
    if la > scale {
        scale = la;
    }
    if ra > scale {
        scale = ra;
    }
    let rel = Float::with_val(p, &abs / &scale);
    (abs, rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_follows_accuracy() {
        let c = NumericConfig::new(30);
        assert_eq!(c.digits, 70);
        assert!(c.prec >= 233);
    }

    #[test]
    fn arithmetic_uses_minimum_precision() {
        let a = Scalar::from_f64(100, 1.5);
        let b = Scalar::from_f64(300, 2.0);
        assert_eq!((&a * &b).prec(), 100);
        assert_eq!((&a + &b).prec(), 100);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = Scalar::from_parts_f64(200, 0.3, -1.7);
        let b = Scalar::from_parts_f64(200, -2.1, 0.4);
        let back = &(&a / &b) * &b;
        let (_, rel) = rel_residual(&back, &a);
        assert!(rel < 1e-55);
    }

    #[test]
    fn parse_forms() {
        let p = 200;
        let x = Scalar::parse("1/3", p).unwrap();
        assert!((x.re().to_f64() - 1.0 / 3.0).abs() < 1e-15);
        let z = Scalar::parse("0.5-0.25i", p).unwrap();
        assert_eq!(z.re().to_f64(), 0.5);
        assert_eq!(z.im().to_f64(), -0.25);
        let w = Scalar::parse("-i", p).unwrap();
        assert_eq!(w.im().to_f64(), -1.0);
        let e = Scalar::parse("1e-3+2e+1i", p).unwrap();
        assert_eq!(e.im().to_f64(), 20.0);
        assert!(Scalar::parse("abc", p).is_err());
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let q = Scalar::from_parts_f64(200, 0.3, 0.2);
        let mut acc = Scalar::one(200);
        for _ in 0..7 {
            acc = &acc * &q;
        }
        let (_, rel) = rel_residual(&q.powi(7), &acc);
        assert!(rel < 1e-55);
        let (_, rel) = rel_residual(&(&q.powi(-3) * &q.powi(3)), &Scalar::one(200));
        assert!(rel < 1e-55);
    }
}
