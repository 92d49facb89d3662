//! Expression trees for identity sides.
//!
//! Parameters enter as monomials in the named symbols and q, written the way
//! they are usually typeset: `a^2q/bcde`, `bcd/aq^(n+1)`, `q^(-n)`. The integer
//! `n` may only appear in exponents of q.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::series::{SeriesKind, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub num: i64,
    pub den: i64,
    /// Symbol exponents, sorted by symbol, no zero entries.
    pub syms: Vec<(char, i64)>,
    /// Exponent of q is `qe + qn·n`.
    pub qe: i64,
    pub qn: i64,
}

impl Mono {
    pub fn one() -> Self {
        Mono { num: 1, den: 1, syms: Vec::new(), qe: 0, qn: 0 }
    }

    pub fn q() -> Self {
        Mono { qe: 1, ..Mono::one() }
    }

    pub fn sym(c: char) -> Self {
        Mono { syms: vec![(c, 1)], ..Mono::one() }
    }

    pub fn parse(s: &str) -> Result<Mono> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parts = split_top(&t, '/');
        if parts.len() > 2 || parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Config(format!("bad monomial '{s}'")));
        }
        let mut m = parse_product(parts.remove(0)).map_err(|e| Error::Config(format!("'{s}': {e}")))?;
        if let Some(d) = parts.pop() {
            let dm = parse_product(d).map_err(|e| Error::Config(format!("'{s}': {e}")))?;
            m = m.mul(&dm.inv());
        }
        Ok(m)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut map: BTreeMap<char, i64> = self.syms.iter().cloned().collect();
        for (c, e) in &o.syms {
            *map.entry(*c).or_insert(0) += e;
        }
        let g = |a: i64, b: i64| gcd(a.unsigned_abs(), b.unsigned_abs()).max(1) as i64;
        let (mut num, mut den) = (self.num * o.num, self.den * o.den);
        let d = g(num, den);
        num /= d;
        den /= d;
        if den < 0 {
            num = -num;
            den = -den;
        }
        Mono { num, den, syms: map.into_iter().filter(|(_, e)| *e != 0).collect(), qe: self.qe + o.qe, qn: self.qn + o.qn }
    }

    pub fn inv(&self) -> Mono {
        let (num, den) = if self.num < 0 { (-self.den, -self.num) } else { (self.den, self.num) };
        Mono { num, den, syms: self.syms.iter().map(|(c, e)| (*c, -e)).collect(), qe: -self.qe, qn: -self.qn }
    }

    pub fn div(&self, o: &Mono) -> Mono {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i64) -> Mono {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Mono::one();
        for _ in 0..k.abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.syms.iter().map(|(c, _)| *c)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_product(s: &str) -> std::result::Result<Mono, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut m = Mono::one();
    let neg = chars.first() == Some(&'-');
    if neg {
        i = 1;
    }
    let digits = |i: &mut usize| -> Option<i64> {
        let st = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (st < *i).then(|| chars[st..*i].iter().collect::<String>().parse().unwrap())
    };
    if let Some(k) = digits(&mut i) {
        m.num = k;
    }
    if neg {
        m.num = -m.num;
    }
    while i < chars.len() {
        let c = chars[i];
        if c == '(' {
            let close = chars[i..].iter().position(|x| *x == ')').ok_or("unclosed group")? + i;
            let inner: String = chars[i + 1..close].iter().collect();
            let g = Mono::parse(&inner).map_err(|e| e.to_string())?;
            i = close + 1;
            let (k, kn) = parse_exponent(&chars, &mut i)?;
            if kn != 0 {
                return Err("n may only appear in exponents of q".into());
            }
            m = m.mul(&g.pow(k));
            continue;
        }
        if !c.is_ascii_alphabetic() || c == 'n' {
            return Err(format!("unexpected '{c}'"));
        }
        i += 1;
        let (k, kn) = parse_exponent(&chars, &mut i)?;
        if c == 'q' {
            m.qe += k;
            m.qn += kn;
        } else {
            if kn != 0 {
                return Err("n may only appear in exponents of q".into());
            }
            m = m.mul(&Mono::sym(c).pow(k));
        }
    }
    Ok(m)
}

/// Exponent after a factor: none, `^k`, or `^(linear expression in n)`.
fn parse_exponent(chars: &[char], i: &mut usize) -> std::result::Result<(i64, i64), String> {
    if *i >= chars.len() || chars[*i] != '^' {
        return Ok((1, 0));
    }
    *i += 1;
    let body: String = if *i < chars.len() && chars[*i] == '(' {
        let close = chars[*i..].iter().position(|x| *x == ')').ok_or("unclosed exponent")? + *i;
        let b = chars[*i + 1..close].iter().collect();
        *i = close + 1;
        b
    } else {
        let st = *i;
        if *i < chars.len() && chars[*i] == '-' {
            *i += 1;
        }
        while *i < chars.len() && (chars[*i].is_ascii_digit() || chars[*i] == 'n') {
            *i += 1;
        }
        chars[st..*i].iter().collect()
    };
    linear_in_n(&body)
}

fn linear_in_n(s: &str) -> std::result::Result<(i64, i64), String> {
    let (mut k, mut kn) = (0i64, 0i64);
    let mut term = String::new();
    let mut flush = |t: &str| -> std::result::Result<(), String> {
        if t.is_empty() || t == "+" {
            return Ok(());
        }
        if let Some(coef) = t.strip_suffix('n') {
            let c = match coef {
                "" | "+" => 1,
                "-" => -1,
                x => x.parse::<i64>().map_err(|_| format!("bad exponent term '{t}'"))?,
            };
            kn += c;
        } else {
            k += t.parse::<i64>().map_err(|_| format!("bad exponent term '{t}'"))?;
        }
        Ok(())
    };
    for c in s.chars() {
        if (c == '+' || c == '-') && !term.is_empty() {
            flush(&term)?;
            term.clear();
        }
        term.push(c);
    }
    flush(&term)?;
    if s.is_empty() {
        return Err("empty exponent".into());
    }
    Ok((k, kn))
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut up = String::new();
        let mut down = String::new();
        let put = |s: &mut String, name: &str, e: i64| {
            let ea = e.abs();
            if ea == 1 {
                s.push_str(name);
            } else {
                s.push_str(&format!("{name}^{ea}"));
            }
        };
        let sign = if self.num < 0 { "-" } else { "" };
        if self.num.abs() != 1 {
            up.push_str(&self.num.abs().to_string());
        }
        if self.den != 1 {
            down.push_str(&self.den.to_string());
        }
        for (c, e) in &self.syms {
            put(if *e > 0 { &mut up } else { &mut down }, &c.to_string(), *e);
        }
        if self.qn != 0 {
            let n = match (self.qe, self.qn) {
                (0, 1) => "n".to_string(),
                (0, -1) => "-n".to_string(),
                (0, k) => format!("{k}n"),
                (c, 1) => format!("n{c:+}"),
                (c, -1) => format!("-n{c:+}"),
                (c, k) => format!("{k}n{c:+}"),
            };
            up.push_str(&format!("q^({n})"));
        } else if self.qe != 0 {
            put(if self.qe > 0 { &mut up } else { &mut down }, "q", self.qe);
        }
        if up.is_empty() {
            up.push('1');
        }
        if down.is_empty() {
            write!(f, "{sign}{up}")
        } else {
            write!(f, "{sign}{up}/{down}")
        }
    }
}

/// Order of a q-Pochhammer symbol inside an expression: `k + kn·n` or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Infinite,
    Finite { k: i64, kn: i64 },
}

/// A series appearing in an identity, in the form it is written.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesForm {
    /// Very-well-poised bilateral series with base a.
    Psi { a: Mono, extras: Vec<Mono>, z: Mono },
    /// Very-well-poised unilateral series ₍r+1₎W_r with base a.
    W { a: Mono, extras: Vec<Mono>, z: Mono },
    /// Generic unilateral series; the (q;q)_n divisor is implicit.
    Phi { num: Vec<Mono>, den: Vec<Mono>, z: Mono, weight: Weight<Mono> },
    /// ½ Σ_{n∈ℤ} (1 + q^n) ∏ (x;q)_n / (q/x;q)_n z^n.
    SymUnit { extras: Vec<Mono>, z: Mono },
}

impl SeriesForm {
    /// Upper parameters, lower parameters, argument, weight and kind.
    pub fn layout(&self) -> (SeriesKind, Vec<Mono>, Vec<Mono>, Mono, Weight<Mono>) {
        match self {
            SeriesForm::Psi { a, extras, z } => {
                let aq = a.mul(&Mono::q());
                let den = extras.iter().map(|x| aq.div(x)).collect();
                (SeriesKind::Bilateral, extras.clone(), den, z.clone(), Weight::Vwp(a.clone()))
            }
            SeriesForm::W { a, extras, z } => {
                let aq = a.mul(&Mono::q());
                let mut num = vec![a.clone()];
                num.extend(extras.iter().cloned());
                let den = extras.iter().map(|x| aq.div(x)).collect();
                (SeriesKind::Unilateral, num, den, z.clone(), Weight::Vwp(a.clone()))
            }
            SeriesForm::Phi { num, den, z, weight } => (SeriesKind::Unilateral, num.clone(), den.clone(), z.clone(), weight.clone()),
            SeriesForm::SymUnit { extras, z } => {
                let den = extras.iter().map(|x| Mono::q().div(x)).collect();
                (SeriesKind::Bilateral, extras.clone(), den, z.clone(), Weight::UnitLimit)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Mono(Mono),
    /// 1 - m
    OneMinus(Mono),
    /// ∏ (x;q)_order over the listed x.
    Poch(Vec<Mono>, Order),
    /// ∏ θ(x), product form.
    Theta(Vec<Mono>),
    /// θ(x) from its bilateral series.
    ThetaSeries(Mono),
    /// Ω(xs; as) = ∏∏ (x/a;q)_∞.
    Omega(Vec<Mono>, Vec<Mono>),
    Series(String, Box<SeriesForm>),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// A labelled subexpression (a coefficient with a conventional name).
    Named(String, Box<Expr>),
}

impl Expr {
    /// Visits every node depth-first.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Sum(v) | Expr::Prod(v) => v.iter().for_each(|e| e.walk(f)),
            Expr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Neg(a) | Expr::Named(_, a) => a.walk(f),
            _ => {}
        }
    }

    pub fn symbols(&self) -> Vec<char> {
        let mut out = std::collections::BTreeSet::new();
        self.walk(&mut |e| {
            let mut add = |m: &Mono| out.extend(m.symbols());
            match e {
                Expr::Mono(m) | Expr::OneMinus(m) | Expr::ThetaSeries(m) => add(m),
                Expr::Poch(v, _) | Expr::Theta(v) => v.iter().for_each(&mut add),
                Expr::Omega(x, a) => x.iter().chain(a).for_each(&mut add),
                Expr::Series(_, s) => {
                    let (_, num, den, z, w) = s.layout();
                    num.iter().chain(&den).for_each(&mut add);
                    add(&z);
                    if let Weight::Vwp(a) = w {
                        add(&a);
                    }
                }
                _ => {}
            }
        });
        out.into_iter().collect()
    }

    pub fn named(&self) -> Vec<(&str, &Expr)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Named(n, inner) = e {
                out.push((n.as_str(), inner.as_ref()));
            }
        });
        out
    }

    pub fn series(&self) -> Vec<(&str, &SeriesForm)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Series(n, s) = e {
                out.push((n.as_str(), s.as_ref()));
            }
        });
        out
    }
}

/// Parses a monomial from a catalog literal.
pub fn m(s: &str) -> Mono {
    Mono::parse(s).unwrap_or_else(|e| panic!("catalog monomial: {e}"))
}

fn ms(xs: &[&str]) -> Vec<Mono> {
    xs.iter().map(|s| m(s)).collect()
}

pub fn int(k: i64) -> Expr {
    Expr::Int(k)
}

pub fn mono(s: &str) -> Expr {
    Expr::Mono(m(s))
}

pub fn one_minus(s: &str) -> Expr {
    Expr::OneMinus(m(s))
}

/// ∏ (x;q)_∞
pub fn pinf(xs: &[&str]) -> Expr {
    Expr::Poch(ms(xs), Order::Infinite)
}

/// ∏ (x;q)_(k + kn·n)
pub fn pfin(xs: &[&str], k: i64, kn: i64) -> Expr {
    Expr::Poch(ms(xs), Order::Finite { k, kn })
}

pub fn th(xs: &[&str]) -> Expr {
    Expr::Theta(ms(xs))
}

pub fn om(xs: &[&str], as_: &[&str]) -> Expr {
    Expr::Omega(ms(xs), ms(as_))
}

pub fn psi(label: &str, a: &str, extras: &[&str], z: &str) -> Expr {
    Expr::Series(label.into(), Box::new(SeriesForm::Psi { a: m(a), extras: ms(extras), z: m(z) }))
}

pub fn w(label: &str, a: &str, extras: &[&str], z: &str) -> Expr {
    Expr::Series(label.into(), Box::new(SeriesForm::W { a: m(a), extras: ms(extras), z: m(z) }))
}

pub fn named(name: &str, e: Expr) -> Expr {
    Expr::Named(name.into(), Box::new(e))
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        let mut v = match self {
            Expr::Prod(v) => v,
            e => vec![e],
        };
        match o {
            Expr::Prod(w) => v.extend(w),
            e => v.push(e),
        }
        Expr::Prod(v)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        let mut v = match self {
            Expr::Sum(v) => v,
            e => vec![e],
        };
        match o {
            Expr::Sum(w) => v.extend(w),
            e => v.push(e),
        }
        Expr::Sum(v)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        self + (-o)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_typeset_monomials() {
        let x = m("a^2q/bcde");
        assert_eq!(x.syms, vec![('a', 2), ('b', -1), ('c', -1), ('d', -1), ('e', -1)]);
        assert_eq!(x.qe, 1);
        let z = m("bcd/aq^(n+1)");
        assert_eq!((z.qe, z.qn), (-1, -1));
        let t = m("q^(-n)");
        assert_eq!((t.qe, t.qn), (0, -1));
        assert_eq!(m("1/z").syms, vec![('z', -1)]);
        let g = m("(bcq)^2/defgq");
        assert_eq!(g.qe, 1);
        assert_eq!(g.syms.iter().find(|s| s.0 == 'b').unwrap().1, 2);
        assert_eq!(m("2a/3"), Mono { num: 2, den: 3, syms: vec![('a', 1)], qe: 0, qn: 0 });
        assert!(Mono::parse("a/b/c").is_err());
        assert!(Mono::parse("an").is_err());
        assert!(Mono::parse("a^(n)").is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["a^2q/bcde", "bcd/aq^(n+1)", "q^(-n)", "1/z", "aq/z^2", "3", "-b/2"] {
            let x = m(s);
            assert_eq!(Mono::parse(&x.to_string()).unwrap(), x, "{s} -> {x}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(m("ab").mul(&m("1/a")), m("b"));
        assert_eq!(m("a").pow(-2), m("1/a^2"));
        assert_eq!(m("bc/a").div(&m("c")), m("b/a"));
    }

    #[test]
    fn operators_flatten() {
        let e = th(&["a"]) * th(&["b"]) * th(&["c"]);
        assert!(matches!(e, Expr::Prod(ref v) if v.len() == 3));
        let s = pinf(&["a"]) + pinf(&["b"]) - pinf(&["c"]);
        assert!(matches!(s, Expr::Sum(ref v) if v.len() == 3));
        assert_eq!(s.symbols(), vec!['a', 'b', 'c']);
    }

    #[test]
    fn series_layouts() {
        let f = SeriesForm::W { a: m("a"), extras: vec![m("b")], z: m("q") };
        let (k, num, den, _, w) = f.layout();
        assert_eq!(k, SeriesKind::Unilateral);
        assert_eq!(num, vec![m("a"), m("b")]);
        assert_eq!(den, vec![m("aq/b")]);
        assert_eq!(w, Weight::Vwp(m("a")));
    }
}
