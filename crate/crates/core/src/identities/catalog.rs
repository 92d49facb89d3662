//! The identity catalog. Every side is written out as it is usually printed;
//! dependent symbols are introduced by constraints in the listed order.

use super::{IdentityDescriptor, Support};
use crate::expr::{int, m, mono, named, om, one_minus, pfin, pinf, th, Expr, Mono, SeriesForm};
use crate::series::Weight;

fn v(xs: &[&str]) -> Vec<Mono> {
    xs.iter().map(|s| m(s)).collect()
}

fn times(xs: &[Mono], f: &str) -> Vec<Mono> {
    let f = m(f);
    xs.iter().map(|x| x.mul(&f)).collect()
}

fn omv(xs: &[&str], as_: Vec<Mono>) -> Expr {
    Expr::Omega(v(xs), as_)
}

fn psiv(label: &str, a: &str, extras: Vec<Mono>, z: &str) -> Expr {
    Expr::Series(label.into(), Box::new(SeriesForm::Psi { a: m(a), extras, z: m(z) }))
}

fn wv(label: &str, a: &str, extras: Vec<Mono>, z: &str) -> Expr {
    Expr::Series(label.into(), Box::new(SeriesForm::W { a: m(a), extras, z: m(z) }))
}

fn psi(label: &str, a: &str, extras: &[&str], z: &str) -> Expr {
    psiv(label, a, v(extras), z)
}

fn w(label: &str, a: &str, extras: &[&str], z: &str) -> Expr {
    wv(label, a, v(extras), z)
}

fn cons(cs: &[(char, &str)]) -> Vec<(char, Mono)> {
    cs.iter().map(|(c, s)| (*c, m(s))).collect()
}

fn free(s: &str) -> Vec<char> {
    s.chars().collect()
}

const BOTH: Support = Support { numeric: true, formal: true, rational: false };

/// κ₀ and κ₁ of Wei's transformation, with t = bcde/aq.
fn wei_kappas() -> (Expr, Expr) {
    let bg = v(&["b", "c", "d", "e", "f", "g"]);
    let k0 = th(&["b/a"]) / th(&["b/t"]) * om(&["tq"], &["b", "c", "d", "e"]) * om(&["aq"], &["cd", "ce", "de", "fg", "tf", "tg"])
        * pinf(&["aq", "q/a"])
        / (om(&["aq"], &["b", "c", "d", "e"])
            * om(&["b/a"], &["1/c", "1/d", "1/e"])
            * pinf(&["q/f", "q/g", "tq", "q/t", "a^3q^2/bcdefg"]));
    let k1 = th(&["t/a"]) / th(&["t/b"]) * omv(&["bq"], bg.clone()) * om(&["b/a"], &["b/ac", "b/ad", "b/ae"])
        * pinf(&["aq/bf", "aq/bg", "q/a", "aq"])
        / (omv(&["aq"], bg) * om(&["b/a"], &["1/c", "1/d", "1/e"]) * pinf(&["q/f", "q/g", "q/b", "b^2q/a"]));
    (named("kappa0", k0), named("kappa1", k1))
}

/// λ₁ of the ₈W₇ lemma for upper parameters b,c,d,e,h,k.
fn lambda1(h: &str, k: &str) -> Expr {
    let xs = v(&["b", "c", "d", "e", h, k]);
    named(
        "lambda1",
        pinf(&["b^2q/a"]) / pinf(&["q", "aq", "q/a"]) * omv(&["q", "aq"], xs.clone()) / omv(&["aq/b", "bq"], xs[1..].to_vec())
            * th(&["bz/a", "z/b"])
            / th(&["z/a", "z"]),
    )
}

fn weierstrass() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "WEIERSTRASS",
        name: "Weierstrass' three-term theta identity",
        free: free("xabc"),
        constraints: vec![],
        int_param: None,
        convergence: vec![],
        lhs: th(&["xa", "x/a", "bc", "b/c"]) - th(&["xc", "x/c", "ab", "b/a"]),
        rhs: mono("b/a") * th(&["xb", "x/b", "ac", "a/c"]),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn bailey_66() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "BAILEY_66",
        name: "Bailey's very-well-poised 6psi6 summation",
        free: free("abcde"),
        constraints: vec![],
        int_param: None,
        convergence: v(&["a^2q/bcde"]),
        lhs: psi("psi6", "a", &["b", "c", "d", "e"], "a^2q/bcde"),
        rhs: pinf(&["q", "q/a", "aq", "aq/bc", "aq/bd", "aq/be", "aq/cd", "aq/ce", "aq/de"])
            / pinf(&["q/b", "q/c", "q/d", "q/e", "aq/b", "aq/c", "aq/d", "aq/e", "a^2q/bcde"]),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn wei() -> IdentityDescriptor {
    let (k0, k1) = wei_kappas();
    let bg = v(&["b", "c", "d", "e", "f", "g"]);
    IdentityDescriptor {
        id: "WEI_8PSI8",
        name: "Wei's 8psi8 transformation",
        free: free("abcdefg"),
        constraints: cons(&[('t', "bcde/aq")]),
        int_param: None,
        convergence: v(&["aq/fg", "a^3q^2/bcdefg"]),
        lhs: psiv("psi8", "a", bg, "a^3q^2/bcdefg"),
        rhs: k0 * psi("psi8_t", "t", &["b", "c", "d", "e", "tf/a", "tg/a"], "aq/fg")
            + k1 * w("W8", "b^2/a", &["bc/a", "bd/a", "be/a", "bf/a", "bg/a"], "a^3q^2/bcdefg"),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn lemma_8w7() -> IdentityDescriptor {
    let xs = v(&["b", "c", "d", "e", "h", "k"]);
    let mu1 = named(
        "mu1",
        pinf(&["b^2q/a"]) / pinf(&["q", "z^2q/a", "aq/z^2"]) * omv(&["aq/z", "zq"], xs.clone())
            / omv(&["aq/b", "bq"], xs[1..].to_vec())
            * th(&["a/b", "b"])
            / th(&["a/z", "z"]),
    );
    let z = "a^3q^2/bcdehk";
    IdentityDescriptor {
        id: "LEMMA_8W7",
        name: "8W7 as a combination of two 8psi8 series",
        free: free("abcdehkz"),
        constraints: vec![],
        int_param: None,
        convergence: v(&[z]),
        lhs: wv("W8", "b^2/a", times(&xs[1..], "b/a"), z),
        rhs: lambda1("h", "k") * psiv("psi8_a", "a", xs.clone(), z) + mu1 * psiv("psi8_z", "z^2/a", times(&xs, "z/a"), z),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn slater_r5() -> IdentityDescriptor {
    let xs = v(&["b", "c", "d", "e", "f", "g", "h", "k"]);
    let no_g: Vec<Mono> = v(&["b", "c", "d", "e", "f", "h", "k"]);
    let d0 = named(
        "d0",
        int(1) / pinf(&["g^2q/a", "aq/g^2"]) * omv(&["gq", "aq/g"], xs.clone())
            / th(&["g", "bgx/a", "gxz/a", "a/g", "bx/g", "xz/g"]),
    );
    let d1 = named("d1", int(1) / pinf(&["aq", "q/a"]) * omv(&["q", "aq"], xs.clone()) / th(&["g", "a/g", "bx/a", "xz/a", "bx", "xz"]));
    let d2 = named(
        "d2",
        int(1) / pinf(&["b^2x^2q/a", "aq/b^2x^2"]) * omv(&["aq/bx", "bqx"], xs.clone())
            / th(&["bgx/a", "bx/g", "a/bx", "z/b", "bx", "bx^2z/a"]),
    );
    let d3 = named(
        "d3",
        int(1) / pinf(&["x^2z^2q/a", "aq/x^2z^2"]) * omv(&["xzq", "aq/xz"], xs.clone())
            / th(&["gxz/a", "xz/g", "b/z", "a/xz", "bx^2z/a", "xz"]),
    );
    let z = "a^4q^3/bcdefghk";
    IdentityDescriptor {
        id: "SLATER_R5",
        name: "Slater's transformation for three 10psi10 series (r = 5)",
        free: free("abcdefghkxz"),
        constraints: vec![],
        int_param: None,
        convergence: v(&[z]),
        lhs: d0 * wv("W10", "g^2/a", times(&no_g, "g/a"), z),
        rhs: d1 * psiv("psi10_a", "a", xs.clone(), z)
            + d2 * psiv("psi10_bx", "b^2x^2/a", times(&xs, "bx/a"), z)
            + d3 * psiv("psi10_xz", "x^2z^2/a", times(&xs, "xz/a"), z),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn contig() -> IdentityDescriptor {
    let xs = v(&["b", "c", "d", "e", "h", "k"]);
    let z = "a^3q^2/bcdehk";
    IdentityDescriptor {
        id: "CONTIG_3PSI8",
        name: "Contiguous relation for three very-well-poised 8psi8 series",
        free: free("abcdehkxz"),
        constraints: vec![],
        int_param: None,
        convergence: v(&[z]),
        lhs: omv(&["q", "aq"], xs.clone()) / th(&["bx/a", "xz/a", "bx", "xz"]) * psiv("psi8_a", "a", xs.clone(), z),
        rhs: pinf(&["aq", "q/a"]) / pinf(&["b^2x^2q/a", "aq/b^2x^2"]) * omv(&["aq/bx", "bqx"], xs.clone())
            / th(&["z/b", "bx", "bx/a", "bx^2z/a"])
            * psiv("psi8_bx", "b^2x^2/a", times(&xs, "bx/a"), z)
            + pinf(&["aq", "q/a"]) / pinf(&["x^2z^2q/a", "aq/x^2z^2"]) * omv(&["xzq", "aq/xz"], xs.clone())
                / th(&["b/z", "xz/a", "bx^2z/a", "xz"])
                * psiv("psi8_xz", "x^2z^2/a", times(&xs, "xz/a"), z),
        support: BOTH,
        formal_exps: vec![],
    }
}

/// The two ₈ψ₈ series on the right of both main transformations.
fn main_rhs_series() -> (Expr, Expr) {
    let bg = v(&["b", "c", "d", "e", "f", "g"]);
    (
        psi("psi8_z", "z", &["b", "c", "d", "e", "fz/a", "gz/a"], "aq/fg"),
        psiv("psi8_z2", "z^2/a", times(&bg, "z/a"), "a^3q^2/bcdefg"),
    )
}

fn thm_i() -> IdentityDescriptor {
    let bg = v(&["b", "c", "d", "e", "f", "g"]);
    let c1 = named(
        "c1",
        one_minus("1/z") * pinf(&["aq", "q/a"]) / om(&["q"], &["f", "g"])
            * om(&["aq"], &["bc", "bd", "be", "cd", "ce", "de", "fg", "fz", "gz"])
            / (om(&["aq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e", "fg/a^2q"])),
    );
    let c2 = named(
        "c2",
        mono("1/z") * pinf(&["aq", "q/a"]) / pinf(&["aq/z^2", "z^2q/a"]) * om(&["aq/z", "zq"], &["f", "g"])
            / om(&["q", "aq"], &["f", "g"])
            * pinf(&["b", "c", "d", "e"])
            * om(&["aq/z"], &["b", "c", "d", "e"])
            / (om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"]) * om(&["aq"], &["b", "c", "d", "e"])),
    );
    let (s1, s2) = main_rhs_series();
    IdentityDescriptor {
        id: "THM_I",
        name: "8psi8 transformation into two 8psi8 series",
        free: free("abcdefg"),
        constraints: cons(&[('z', "bcde/aq")]),
        int_param: None,
        convergence: v(&["a^2q/fgz", "aq/fg"]),
        lhs: psiv("psi8", "a", bg, "a^2q/fgz"),
        rhs: c1 * s1 + c2 * s2,
        support: BOTH,
        formal_exps: vec![],
    }
}

fn thm_ii() -> IdentityDescriptor {
    let bg = v(&["b", "c", "d", "e", "f", "g"]);
    let c1 = named(
        "c1",
        one_minus("1/z") * th(&["bz/a", "z/b"]) / th(&["z/a", "z"]) * pinf(&["b^2q/a"]) / om(&["aq/b", "bq"], &["f", "g"])
            * om(&["q"], &["b", "c", "d", "e"])
            * om(&["aq"], &["f", "g", "cd", "ce", "de", "fg", "fz", "gz"])
            / (om(&["bq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e", "fg/a^2q"])),
    );
    let c2 = named(
        "c2",
        pinf(&["zq/b"]) / pinf(&["z^2q/a"]) * th(&["1/b"]) / th(&["z/a"]) * om(&["b/a"], &["1/bq", "1/c", "1/d", "1/e"])
            * om(&["zq"], &["f", "g"])
            / (om(&["1/z"], &["z/aq", "1/c", "1/d", "1/e"]) * om(&["aq/b"], &["f", "g"]))
            * omv(&["aq/z"], bg.clone())
            / omv(&["bq"], bg),
    );
    let (s1, s2) = main_rhs_series();
    IdentityDescriptor {
        id: "THM_II",
        name: "8W7 transformation into two 8psi8 series",
        free: free("abcdefg"),
        constraints: cons(&[('z', "bcde/aq")]),
        int_param: None,
        convergence: v(&["a^2q/fgz", "aq/fg"]),
        lhs: w("W8", "b^2/a", &["bc/a", "bd/a", "be/a", "bf/a", "bg/a"], "a^2q/fgz"),
        rhs: c1 * s1 + c2 * s2,
        support: BOTH,
        formal_exps: vec![],
    }
}

fn det_closed_form() -> IdentityDescriptor {
    let (_, k1) = wei_kappas();
    IdentityDescriptor {
        id: "DET_CLOSED_FORM",
        name: "Closed form of the determinant 1 - kappa1*lambda1",
        free: free("abcdefg"),
        constraints: cons(&[('t', "bcde/aq"), ('z', "t")]),
        int_param: None,
        convergence: vec![],
        lhs: int(1) - k1 * lambda1("f", "g"),
        rhs: -(mono("aq/bd") * th(&["aq/b", "bcd/aq", "bde/aq", "aq/bce"]) / th(&["bc/a", "bd/a", "be/a", "z"])),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn bailey_equiv() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "BAILEY_EQUIV",
        name: "Bailey's 6psi6 summation, equivalent form",
        free: free("bcdefg"),
        constraints: cons(&[('a', "bc"), ('z', "de/q")]),
        int_param: None,
        convergence: v(&["aq/fg"]),
        lhs: psi("psi6", "z", &["b", "c", "fz/a", "gz/a"], "aq/fg"),
        rhs: pinf(&["q", "de", "q^2/de", "de/bc", "cq/f", "cq/g", "bq/f", "bq/g", "(bcq)^2/defg"])
            / pinf(&["q/b", "q/c", "aq/f", "aq/g", "de/b", "de/c", "aq/fg", "aq^2/def", "aq^2/deg"]),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn weier_equiv() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "WEIER_EQUIV",
        name: "Weierstrass' theta identity, equivalent form",
        free: free("abcd"),
        constraints: cons(&[('e', "a^2q/bcd")]),
        int_param: None,
        convergence: vec![],
        lhs: th(&["b", "c", "d", "e"]) - th(&["a", "bc/a", "bd/a", "be/a"]),
        rhs: mono("a") * th(&["b/a", "c/a", "d/a", "e/a"]),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn gen_weier() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "GEN_WEIER",
        name: "Generalized Weierstrass theta identity",
        free: free("abcde"),
        constraints: cons(&[('z', "bcde/aq")]),
        int_param: None,
        convergence: v(&["aq/z"]),
        lhs: psi("psi8", "a", &["b", "c", "d", "e", "a/z", "z"], "aq/z"),
        rhs: one_minus("1/z") * pinf(&["q", "q", "aq", "q/a"]) / pinf(&["zq/a", "q/z", "aq/z"])
            * om(&["aq"], &["bc", "bd", "be", "cd", "ce", "de", "z^2"])
            / (om(&["aq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"]))
            * w("W8", "1/z", &["b/z", "c/z", "d/z", "e/z", "z/a"], "q")
            + mono("1/z") * pinf(&["q", "q", "aq", "q/a", "b", "c", "d", "e"]) / pinf(&["q/z", "zq/a", "zq", "aq/z"])
                * om(&["aq/z"], &["b", "c", "d", "e"])
                / (om(&["aq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"])),
        support: BOTH,
        formal_exps: vec![],
    }
}

/// Left side of the 8W7 + 8psi8 product evaluation, as two named terms.
pub(crate) fn cor_222_terms() -> (Expr, Expr, Expr) {
    let wterm = pinf(&["aq", "1/z"]) * om(&["aq"], &["bc", "bd", "be", "cd", "ce", "de"]) * w("W8", "z", &["b", "c", "d", "e", "z/a"], "q");
    let pterm = mono("1/z") * pinf(&["q/z", "zq", "zq/a", "aq/z"]) / pinf(&["q", "q", "aq/z^2", "z^2q/a"])
        * psi("psi8", "z^2/a", &["bz/a", "cz/a", "dz/a", "ez/a", "z/a", "z"], "aq/z");
    let clear = pinf(&["b", "c", "d", "e"]) * om(&["aq/z"], &["b", "c", "d", "e"]);
    (wterm, pterm, clear)
}

fn cor_222() -> IdentityDescriptor {
    let (wterm, pterm, clear) = cor_222_terms();
    IdentityDescriptor {
        id: "COR_222",
        name: "8W7 plus 8psi8 evaluated as a product",
        free: free("abcde"),
        constraints: cons(&[('z', "bcde/aq")]),
        int_param: None,
        convergence: v(&["aq/z"]),
        lhs: wterm / clear + pterm,
        rhs: om(&["aq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"])
            / (pinf(&["b", "c", "d", "e"]) * om(&["aq/z"], &["b", "c", "d", "e"])),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn jackson() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "JACKSON_8W7",
        name: "Jackson's terminating 8W7 summation",
        free: free("abcd"),
        constraints: cons(&[('z', "bcd/aq^(n+1)")]),
        int_param: Some((0, 4)),
        convergence: vec![],
        lhs: w("W8", "z", &["b", "c", "d", "z/a", "q^(-n)"], "q"),
        rhs: pfin(&["zq", "zq/bc", "zq/bd", "zq/cd"], 0, 1) / pfin(&["zq/b", "zq/c", "zq/d", "zq/bcd"], 0, 1),
        support: Support { numeric: true, formal: true, rational: true },
        formal_exps: vec![],
    }
}

fn rogers() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "ROGERS_65",
        name: "Rogers' 6W5 summation",
        free: free("dez"),
        constraints: cons(&[('a', "de")]),
        int_param: None,
        convergence: vec![],
        lhs: w("W6", "1/z", &["d/z", "e/z", "z/a"], "q"),
        rhs: pinf(&["q/z", "zq/de", "aq/dz", "aq/ez"]) / pinf(&["q/d", "q/e", "aq/de", "aq/z^2"]),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn cor_3new() -> IdentityDescriptor {
    let delta = named(
        "Delta",
        (th(&["d", "e"]) * pinf(&["b", "c", "aq/bz", "aq/cz"]) - th(&["z", "a/z"]) * pinf(&["aq/bd", "aq/be", "aq/cd", "aq/ce"]))
            / (mono("z") * pinf(&["q/d", "q/e", "zq", "aq/z"])),
    );
    IdentityDescriptor {
        id: "COR_3NEW",
        name: "8psi8 with a = de and bc = zq as a product times Delta",
        free: free("bdez"),
        constraints: cons(&[('a', "de"), ('c', "zq/b")]),
        int_param: None,
        convergence: v(&["aq/z"]),
        lhs: psi("psi8", "a", &["b", "c", "d", "e", "a/z", "z"], "aq/z"),
        rhs: pinf(&["q", "q", "aq", "q/a", "aq/dz", "aq/ez"]) * delta
            / (pinf(&["q/z", "zq/a"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"]) * om(&["aq"], &["b", "c", "d", "e"])),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn cor_49() -> IdentityDescriptor {
    IdentityDescriptor {
        id: "COR_49",
        name: "8W7 with zq = cde in two-term form",
        free: free("acde"),
        constraints: cons(&[('z', "cde/q")]),
        int_param: None,
        convergence: v(&["aq/z"]),
        lhs: w("W8", "a", &["c", "d", "e", "a/z", "z"], "aq/z"),
        rhs: one_minus("1/z") * pinf(&["q", "aq", "q/a", "aq/z^2"]) / (th(&["a/z"]) * pinf(&["q/z"])) * om(&["q"], &["c", "d", "e"])
            * om(&["aq"], &["cd", "ce", "de"])
            / (om(&["aq"], &["c", "d", "e", "z"]) * om(&["1/z"], &["1/c", "1/d", "1/e"]))
            * w("W8_z", "1/z", &["a/z", "c/z", "d/z", "e/z", "z/a"], "q")
            + mono("1/z") * pinf(&["q", "aq", "q/a", "a"]) / (th(&["a/z"]) * pinf(&["zq"])) * om(&["1"], &["1/c", "1/d", "1/e"])
                * om(&["aq/z"], &["c", "d", "e"])
                / (om(&["1/z"], &["1/c", "1/d", "1/e"]) * om(&["aq"], &["c", "d", "e", "z"])),
        support: BOTH,
        formal_exps: vec![],
    }
}

fn prop_a1() -> IdentityDescriptor {
    let sym = Expr::Series(
        "sym8".into(),
        Box::new(SeriesForm::SymUnit { extras: v(&["c", "d", "e", "1/z", "z"]), z: m("q/z") }),
    );
    IdentityDescriptor {
        id: "PROP_A1",
        name: "8W7 at base 1/z and the symmetrized a -> 1 bilateral sum",
        free: free("cde"),
        constraints: cons(&[('z', "cde/q")]),
        int_param: None,
        convergence: v(&["q/z"]),
        lhs: w("W8", "1/z", &["c/z", "d/z", "e/z", "1/z", "z"], "q"),
        rhs: pinf(&["zq", "q/z", "q/z", "q/z"]) / pinf(&["q/z^2", "q", "q", "q"]) * sym,
        support: BOTH,
        formal_exps: vec![],
    }
}

fn cor_final() -> IdentityDescriptor {
    let zz = "(bc)^2/defgq";
    let sum = Expr::Series(
        "W_bq/c".into(),
        Box::new(SeriesForm::Phi {
            num: v(&["q", "dq/c", "eq/c", "fq/c", "gq/c"]),
            den: v(&["bq/d", "bq/e", "bq/f", "bq/g"]),
            z: m(zz),
            weight: Weight::Vwp(m("bq/c")),
        }),
    );
    let kappa2 = named(
        "kappa2",
        one_minus("b/d") * one_minus("b/e") * one_minus("1/de") / (one_minus("1/d") * one_minus("1/e") * pinf(&["q"])),
    );
    IdentityDescriptor {
        id: "COR_FINAL",
        name: "kappa2-weighted unilateral sum in two-term form",
        free: free("bcdefg"),
        constraints: vec![],
        int_param: None,
        convergence: v(&["bc/fg", zz]),
        lhs: om(&["bq", "c"], &["f", "g"]) * one_minus("bq/c") * sum,
        rhs: kappa2 * th(&["deq/c", "de/b"]) / th(&["deq/bc", "de"]) * om(&["q"], &["b", "c"])
            * om(&["bc"], &["f", "g", "de", "fg", "def", "deg"])
            / om(&["1/de"], &["1/b", "1/c", "fgq/(bc)^2"])
            * psi("psi8", "de", &["b", "c", "d", "e", "defq/bc", "degq/bc"], "bc/fg")
            + th(&["1/b", "deq/b"]) / th(&["1/d", "1/e"]) * om(&["q/c"], &["1/c", "1/d", "1/e"])
                * om(&["bc"], &["df", "dg", "ef", "eg", "fg"])
                / om(&["1/de"], &["1/bdq", "1/beq", "bc/d^2e^2q", "fgq/(bc)^2"]),
        support: BOTH,
        formal_exps: vec![('b', 1), ('c', 1)],
    }
}

pub(crate) fn build() -> Vec<IdentityDescriptor> {
    vec![
        IdentityDescriptor {
            id: "JTP",
            name: "Jacobi triple product",
            free: free("x"),
            constraints: vec![],
            int_param: None,
            convergence: vec![],
            lhs: Expr::ThetaSeries(m("x")),
            rhs: th(&["x"]),
            support: BOTH,
            formal_exps: vec![],
        },
        IdentityDescriptor {
            id: "THETA_INV",
            name: "Theta inversion",
            free: free("x"),
            constraints: vec![],
            int_param: None,
            convergence: vec![],
            lhs: th(&["x"]),
            rhs: -(mono("x") * th(&["1/x"])),
            support: BOTH,
            formal_exps: vec![],
        },
        weierstrass(),
        bailey_66(),
        wei(),
        lemma_8w7(),
        slater_r5(),
        contig(),
        thm_i(),
        thm_ii(),
        det_closed_form(),
        bailey_equiv(),
        weier_equiv(),
        gen_weier(),
        cor_222(),
        jackson(),
        rogers(),
        cor_3new(),
        cor_49(),
        prop_a1(),
        cor_final(),
    ]
}
