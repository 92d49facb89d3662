//! Exact series evaluation: q as a formal variable with rational-monomial
//! parameters, and q itself a rational number for terminating sums.

use rug::Rational;

use super::{SeriesKind, Weight};
use crate::error::{Error, Result};
use crate::formalq::{QLaurent, QMono};

#[derive(Clone, Debug)]
pub struct FormalSeriesSpec {
    pub kind: SeriesKind,
    pub num_params: Vec<QMono>,
    pub den_params: Vec<QMono>,
    pub z: QMono,
    pub weight: Weight<QMono>,
}

#[derive(Clone, Debug)]
pub struct FormalStopRule {
    /// Terms are accumulated modulo q^order.
    pub order: i64,
    pub consecutive: usize,
    pub max_terms: usize,
}

impl FormalStopRule {
    pub fn new(order: i64) -> Self {
        FormalStopRule { order, consecutive: 3, max_terms: 400 }
    }
}

#[derive(Clone, Debug)]
pub struct FormalSeriesValue {
    pub value: QLaurent,
    pub terms_used_pos: usize,
    pub terms_used_neg: usize,
    pub terminated: bool,
    /// Numerator and denominator of the sum when every summed direction
    /// terminated: the value as an exact rational function of q.
    pub exact: Option<(QLaurent, QLaurent)>,
}

fn is_unit(m: &QMono, e: i64) -> bool {
    m.coef == 1 && e == 0
}

fn binom_params(m: &QMono, shift: i64) -> (Rational, i64) {
    (m.coef.clone(), m.exp + shift)
}

/// Weight polynomial at index n (before the global 1/(1-a) or 1/2 factor).
fn weight_poly(spec: &FormalSeriesSpec, n: i64) -> Option<QLaurent> {
    match &spec.weight {
        Weight::None => None,
        Weight::Vwp(a) => Some(QLaurent::binomial(&a.coef, a.exp + 2 * n)),
        Weight::UnitLimit if spec.kind == SeriesKind::Unilateral && n == 0 => None,
        Weight::UnitLimit => Some(QLaurent::binomial(&Rational::from(-1), n)),
    }
}

/// Global divisor applied after summation: (1 - a) or 2.
fn weight_divisor(spec: &FormalSeriesSpec) -> Option<QLaurent> {
    match &spec.weight {
        Weight::Vwp(a) => Some(QLaurent::binomial(&a.coef, a.exp)),
        Weight::UnitLimit if spec.kind == SeriesKind::Bilateral => Some(QLaurent::monomial(Rational::from(2), 0)),
        _ => None,
    }
}

/// One step of the term recurrence: upper and lower binomial factors and
/// the monomial multiplier.
struct Step {
    upper: Vec<(Rational, i64)>,
    lower: Vec<(Rational, i64)>,
    mono: QMono,
    terminates: bool,
}

fn forward_step(spec: &FormalSeriesSpec, n: i64) -> Result<Step> {
    let mut terminates = false;
    let mut upper = Vec::new();
    for a in &spec.num_params {
        let (r, e) = binom_params(a, n);
        terminates |= is_unit(a, e);
        upper.push((r, e));
    }
    let mut lower = Vec::new();
    for b in &spec.den_params {
        let (r, e) = binom_params(b, n);
        if !terminates && r == 1 && e == 0 {
            return Err(Error::PoleInDenominator(format!("lower factor 1 - {b}·q^{n} vanishes identically")));
        }
        lower.push((r, e));
    }
    if spec.kind == SeriesKind::Unilateral {
        lower.push((Rational::from(1), n + 1));
    }
    Ok(Step { upper, lower, mono: spec.z.clone(), terminates })
}

fn backward_step(spec: &FormalSeriesSpec, n: i64) -> Result<Step> {
    let mut terminates = false;
    let mut upper = Vec::new();
    for b in &spec.den_params {
        let (r, e) = binom_params(b, n - 1);
        terminates |= r == 1 && e == 0;
        upper.push((r, e));
    }
    let mut lower = Vec::new();
    for a in &spec.num_params {
        let (r, e) = binom_params(a, n - 1);
        if !terminates && r == 1 && e == 0 {
            return Err(Error::PoleInDenominator(format!("upper factor 1 - {a}·q^{} vanishes identically", n - 1)));
        }
        lower.push((r, e));
    }
    Ok(Step { upper, lower, mono: spec.z.inv()?, terminates })
}

/// Whether the tail in the given direction is cut off by an exact zero.
fn direction_terminates(spec: &FormalSeriesSpec, forward: bool) -> bool {
    if forward {
        spec.num_params.iter().any(|a| a.coef == 1 && a.exp <= 0)
    } else {
        spec.kind == SeriesKind::Bilateral && spec.den_params.iter().any(|b| b.coef == 1 && b.exp >= 1)
    }
}

struct FormalTail {
    sum: QLaurent,
    terms: usize,
    terminated: bool,
}

/// 1 - r·q^e written as q^shift · scalar · (1 - r'·q^e') with e' > 0, so the
/// last factor is a unit power series.
struct SplitBinomial {
    shift: i64,
    scalar: Rational,
    unit: Option<(Rational, i64)>,
}

fn split_binomial(r: &Rational, e: i64) -> SplitBinomial {
    match e.cmp(&0) {
        std::cmp::Ordering::Greater => SplitBinomial { shift: 0, scalar: Rational::from(1), unit: Some((r.clone(), e)) },
        std::cmp::Ordering::Equal => SplitBinomial { shift: 0, scalar: Rational::from(1 - r), unit: None },
        std::cmp::Ordering::Less => SplitBinomial { shift: e, scalar: Rational::from(-r), unit: Some((Rational::from(r.recip_ref()), -e)) },
    }
}

/// Exact q-valuation of the weight polynomial at index n.
fn weight_valuation(spec: &FormalSeriesSpec, n: i64) -> i64 {
    match &spec.weight {
        Weight::None => 0,
        Weight::Vwp(a) => (a.exp + 2 * n).min(0),
        Weight::UnitLimit => n.min(0),
    }
}

/// Truncated-series summation of one direction.
///
/// Each term is carried as q^shift times a unit series. A first pass finds
/// every term's exact valuation (which decides where to stop); the unit part
/// is then computed to exactly the relative precision the lowest-order term
/// needs, so large intermediate shifts in either direction cost no accuracy.
fn sum_truncated(spec: &FormalSeriesSpec, rule: &FormalStopRule, forward: bool) -> Result<FormalTail> {
    let cap = rule.order;
    let mut steps = Vec::new();
    let mut vals = Vec::new();
    if forward {
        vals.push(weight_valuation(spec, 0));
    }
    let mut shift = 0i64;
    let mut quiet = 0usize;
    let mut n: i64 = 0;
    let mut terminated = false;
    loop {
        if vals.len() >= rule.max_terms {
            return Err(Error::NonGradedSeries(format!(
                "{} terms in the {} tail without the q-order passing {cap}",
                rule.max_terms,
                if forward { "positive" } else { "negative" }
            )));
        }
        let step = if forward { forward_step(spec, n)? } else { backward_step(spec, n)? };
        if step.terminates {
            terminated = true;
            break;
        }
        shift += step.mono.exp;
        shift += step.upper.iter().map(|(r, e)| split_binomial(r, *e).shift).sum::<i64>();
        shift -= step.lower.iter().map(|(r, e)| split_binomial(r, *e).shift).sum::<i64>();
        n += if forward { 1 } else { -1 };
        let v = shift + weight_valuation(spec, n);
        vals.push(v);
        steps.push(step);
        if v >= cap {
            quiet += 1;
            if quiet >= rule.consecutive {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let rel = vals.iter().map(|v| cap - v).max().unwrap_or(0).max(1);

    let mut sum = QLaurent::big_o(cap);
    let mut u = QLaurent::one();
    let mut shift = 0i64;
    let mut n: i64 = 0;
    if forward {
        let w = weight_poly(spec, 0).unwrap_or_else(QLaurent::one);
        sum = sum.add(&u.mul(&w));
    }
    for (step, v) in steps.iter().zip(vals.iter().skip(forward as usize)) {
        u = u.scale(&step.mono.coef);
        shift += step.mono.exp;
        for (r, e) in &step.upper {
            let sb = split_binomial(r, *e);
            shift += sb.shift;
            u = u.scale(&sb.scalar);
            if let Some((r, e)) = sb.unit {
                u.mul_binomial_assign(&r, e);
                u = u.truncate(rel);
            }
        }
        for (r, e) in &step.lower {
            let sb = split_binomial(r, *e);
            shift -= sb.shift;
            u = u.scale(&Rational::from(sb.scalar.recip_ref()));
            if let Some((r, e)) = sb.unit {
                u = u.div_binomial(&r, e, rel)?;
            }
        }
        n += if forward { 1 } else { -1 };
        if *v >= cap {
            continue;
        }
        let term = u.mul_mono(&QMono::new(Rational::from(1), shift));
        let term = match weight_poly(spec, n) {
            Some(w) => term.mul(&w),
            None => term,
        };
        sum = sum.add(&term);
    }
    Ok(FormalTail { sum, terms: vals.len(), terminated })
}

/// Exact summation of a direction known to terminate: returns the numerator
/// over the common denominator together with that denominator.
fn sum_exact(spec: &FormalSeriesSpec, forward: bool) -> Result<(QLaurent, QLaurent, usize)> {
    // Each term is N_k / D_k with D_k | D_{k+1}; collect the lower factors
    // introduced at every step so the common denominator is their product.
    let mut nums: Vec<QLaurent> = Vec::new();
    let mut steps_lower: Vec<Vec<(Rational, i64)>> = Vec::new();
    let mut t = QLaurent::one();
    if forward {
        nums.push(match weight_poly(spec, 0) {
            Some(w) => t.mul(&w),
            None => t.clone(),
        });
        steps_lower.push(Vec::new());
    }
    let mut n: i64 = 0;
    loop {
        if n.unsigned_abs() as usize > 100_000 {
            return Err(Error::NonGradedSeries("terminating direction did not terminate".into()));
        }
        let step = if forward { forward_step(spec, n)? } else { backward_step(spec, n)? };
        if step.terminates {
            break;
        }
        t = t.mul_mono(&step.mono);
        for (r, e) in &step.upper {
            t.mul_binomial_assign(r, *e);
        }
        n += if forward { 1 } else { -1 };
        nums.push(match weight_poly(spec, n) {
            Some(w) => t.mul(&w),
            None => t.clone(),
        });
        steps_lower.push(step.lower);
    }
    // numerator_k * (product of lower factors from steps k+1..)
    let mut total_num = QLaurent::zero();
    let mut suffix = QLaurent::one();
    for k in (0..nums.len()).rev() {
        total_num = total_num.add(&nums[k].mul(&suffix));
        for (r, e) in &steps_lower[k] {
            suffix.mul_binomial_assign(r, *e);
        }
    }
    Ok((total_num, suffix, nums.len()))
}

fn add_fractions(a: (QLaurent, QLaurent), b: (QLaurent, QLaurent)) -> (QLaurent, QLaurent) {
    (a.0.mul(&b.1).add(&b.0.mul(&a.1)), a.1.mul(&b.1))
}

/// Sum of a formal series modulo q^order. Terminating directions are summed
/// exactly; if every direction terminates the exact rational function is
/// returned alongside its expansion.
pub fn formal_series_eval(spec: &FormalSeriesSpec, rule: &FormalStopRule) -> Result<FormalSeriesValue> {
    let (n, d) = (spec.num_params.len(), spec.den_params.len());
    match spec.kind {
        SeriesKind::Unilateral if n != d + 1 => return Err(Error::InvalidParameter("unilateral parameter counts".into())),
        SeriesKind::Bilateral if n != d => return Err(Error::InvalidParameter("bilateral parameter counts".into())),
        _ => {}
    }
    if spec.z.is_zero() {
        return Err(Error::ZeroArgument("series argument 0".into()));
    }
    let dirs: &[bool] = if spec.kind == SeriesKind::Bilateral { &[true, false] } else { &[true] };
    let mut exact_part: Option<(QLaurent, QLaurent)> = None;
    let mut series_part = QLaurent::zero();
    let mut all_exact = true;
    let (mut pos, mut neg) = (0, 0);
    let mut terminated = false;
    for &fwd in dirs {
        let count;
        if direction_terminates(spec, fwd) {
            let (num, den, k) = sum_exact(spec, fwd)?;
            count = k;
            terminated = true;
            exact_part = Some(match exact_part {
                None => (num, den),
                Some(prev) => add_fractions(prev, (num, den)),
            });
        } else {
            let tail = sum_truncated(spec, rule, fwd)?;
            count = tail.terms;
            terminated |= tail.terminated;
            all_exact = false;
            series_part = series_part.add(&tail.sum);
        }
        if fwd {
            pos = count;
        } else {
            neg = count;
        }
    }
    let divisor = weight_divisor(spec);
    let mut value = series_part;
    let mut exact = None;
    if let Some((num, mut den)) = exact_part {
        if let Some(w) = &divisor {
            den = den.mul(w);
        }
        value = value.add(&num.div(&den, rule.order)?);
        if all_exact {
            exact = Some((num, den));
        }
    } else if let Some(w) = &divisor {
        value = value.div(w, rule.order)?;
    }
    Ok(FormalSeriesValue { value, terms_used_pos: pos, terms_used_neg: neg, terminated, exact })
}

/// Terminating series with every quantity, q included, a rational number.
#[derive(Clone, Debug)]
pub struct RationalSeriesSpec {
    pub kind: SeriesKind,
    pub num_params: Vec<Rational>,
    pub den_params: Vec<Rational>,
    pub q: Rational,
    pub z: Rational,
    pub weight: Weight<Rational>,
}

/// Exact sum of a terminating series at rational q. Returns the value and the
/// number of terms summed. Series that do not terminate are rejected: their
/// value is not rational in general.
pub fn rational_series_eval(spec: &RationalSeriesSpec) -> Result<(Rational, usize)> {
    if spec.kind == SeriesKind::Bilateral {
        return Err(Error::Unsupported("bilateral sums at rational q".into()));
    }
    let one = Rational::from(1);
    let weight = |n: i64, qn: &Rational| -> Result<Rational> {
        Ok(match &spec.weight {
            Weight::None => one.clone(),
            Weight::Vwp(a) => {
                let den = Rational::from(&one - a);
                if den == 0 {
                    return Err(Error::InvalidParameter("very-well-poised base a = 1".into()));
                }
                (Rational::from(&one - a * Rational::from(qn * qn))) / den
            }
            Weight::UnitLimit if n == 0 => one.clone(),
            Weight::UnitLimit => Rational::from(&one + qn),
        })
    };
    let mut t = one.clone();
    let mut qn = one.clone();
    let mut sum = weight(0, &qn)?;
    let mut terms = 1usize;
    for n in 0..100_000i64 {
        let mut num = spec.z.clone();
        let mut zero = false;
        for a in &spec.num_params {
            let f = Rational::from(&one - Rational::from(a * &qn));
            zero |= f == 0;
            num *= f;
        }
        if zero {
            return Ok((sum, terms));
        }
        let mut den = Rational::from(&one - Rational::from(&qn * &spec.q));
        for b in &spec.den_params {
            den *= Rational::from(&one - Rational::from(b * &qn));
        }
        if den == 0 {
            return Err(Error::PoleInDenominator(format!("lower factor vanishes at n = {}", n + 1)));
        }
        t *= num / den;
        qn *= &spec.q;
        sum += Rational::from(&t * &weight(n + 1, &qn)?);
        terms += 1;
    }
    Err(Error::Unsupported("non-terminating series at rational q".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalq::compare_mod_qn;

    fn m(n: i64, d: i64, e: i64) -> QMono {
        QMono::new(Rational::from((n, d)), e)
    }

    #[test]
    fn geometric_series() {
        // Σ z^n (a;q)_n/(q;q)_n with a = 0 and z = q: Σ q^n / (q;q)_n = 1/(q;q)_∞
        let spec = FormalSeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![m(0, 1, 0)],
            den_params: vec![],
            z: m(1, 1, 1),
            weight: Weight::None,
        };
        let v = formal_series_eval(&spec, &FormalStopRule::new(12)).unwrap();
        let qq = crate::formalq::qpoch_formal(&QMono::q(), crate::qcore::PochOrder::Infinite, 12).unwrap();
        let prod = v.value.mul(&qq);
        assert!(compare_mod_qn(&prod, &QLaurent::one()).equal);
        assert_eq!(v.value.trunc(), Some(12));
    }

    #[test]
    fn terminating_sum_is_exact() {
        // q-binomial theorem: Σ (q^-2;q)_n/(q;q)_n z^n = (z q^-2; q)_2
        let spec = FormalSeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![m(1, 1, -2)],
            den_params: vec![],
            z: m(3, 1, 0),
            weight: Weight::None,
        };
        let v = formal_series_eval(&spec, &FormalStopRule::new(10)).unwrap();
        assert!(v.terminated);
        assert_eq!(v.terms_used_pos, 3);
        let (num, den) = v.exact.clone().unwrap();
        let expect = crate::formalq::qpoch_formal(&m(3, 1, -2), crate::qcore::PochOrder::Finite(2), 10).unwrap();
        assert_eq!(num, expect.mul(&den));
    }

    #[test]
    fn non_graded_series_is_rejected() {
        // argument of q-order 0 with no decay in q-order
        let spec = FormalSeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![m(1, 2, 0)],
            den_params: vec![],
            z: m(1, 3, 0),
            weight: Weight::None,
        };
        let e = formal_series_eval(&spec, &FormalStopRule::new(6)).unwrap_err();
        assert_eq!(e.kind(), "NonGradedSeries");
    }

    #[test]
    fn rational_terminating_sum() {
        // 1 + (2;q)_1/(q;q)_1 z, and (2q;q) vanishes at q = 1/2
        let q = Rational::from((1, 2));
        let spec = RationalSeriesSpec {
            kind: SeriesKind::Unilateral,
            num_params: vec![Rational::from(2)],
            den_params: vec![],
            q: q.clone(),
            z: Rational::from(5),
            weight: Weight::None,
        };
        let (v, n) = rational_series_eval(&spec).unwrap();
        assert_eq!(n, 2);
        assert_eq!(v, Rational::from(1) + Rational::from(-1) * 5 / Rational::from((1, 2)));
    }
}
