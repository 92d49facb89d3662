//! Cross-checks between identities: specialization chains, where one identity
//! collapses to another on a shared parameter set, and the round trip through
//! the 2×2 linear system that the two main transformations solve.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sample::{rng_for, sample_numeric, sample_rational, CONVERGENCE_MARGIN, MAX_ATTEMPTS};
use super::{admissible_convergence, check_numeric, check_rational, cor_222_terms, lookup, resolve_constraints, resolve_numeric, CheckReport, IdentityDescriptor, ParamSet, ReportError};
use crate::backend::{Env, Evaluator, Numeric};
use crate::error::{Error, Result};
use crate::expr::{om, pinf, Expr};
use crate::qcore::Nome;
use crate::scalar::{float_to_decimal, rel_residual, NumericConfig, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub name: String,
    pub rel_residual: Option<String>,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain: String,
    pub params: BTreeMap<String, String>,
    pub tolerance: String,
    pub steps: Vec<ChainStep>,
    pub pass: bool,
    pub error: Option<ReportError>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chain {
    /// THM_II at a = bc: the ₈W₇ side terminates and the first ₈ψ₈ is the
    /// ₆ψ₆ of BAILEY_EQUIV.
    ThmIiToBailey,
    /// GEN_WEIER at bcde = a²q (so z = a): both series reduce to one term.
    GenWeierToWeier,
    /// COR_222 at e = q^-n, in the form with denominators cleared.
    Cor222ToJackson,
}

impl Chain {
    pub const ALL: [Chain; 3] = [Chain::ThmIiToBailey, Chain::GenWeierToWeier, Chain::Cor222ToJackson];

    pub fn name(&self) -> &'static str {
        match self {
            Chain::ThmIiToBailey => "THM_II->BAILEY_EQUIV",
            Chain::GenWeierToWeier => "GEN_WEIER->WEIER_EQUIV",
            Chain::Cor222ToJackson => "COR_222->JACKSON_8W7",
        }
    }
}

fn residual_step(name: &str, l: &Scalar, r: &Scalar, tol: f64) -> ChainStep {
    let (_, rel) = rel_residual(l, r);
    ChainStep { name: name.into(), rel_residual: Some(float_to_decimal(&rel, 20)), pass: rel.to_f64() <= tol, note: None }
}

fn report_step(name: &str, rep: &CheckReport) -> ChainStep {
    ChainStep {
        name: name.into(),
        rel_residual: rep.rel_residual.clone(),
        pass: rep.pass,
        note: rep.error.as_ref().map(|e| format!("{}: {}", e.kind, e.message)),
    }
}

fn single_term_step(rep: &CheckReport, label: &str) -> ChainStep {
    let used = rep.diagnostics.series.iter().find(|s| s.label == label).map(|s| s.terms_used());
    ChainStep {
        name: format!("{}: {label} terminates after one term", rep.id),
        rel_residual: None,
        pass: used == Some(1),
        note: Some(match used {
            Some(n) => format!("terms_used = {n}"),
            None => "series was not evaluated".into(),
        }),
    }
}

/// Draws parameter sets for `primary` until `accept` also admits them.
fn shared<T>(
    primary: &IdentityDescriptor,
    rng: &mut rand_chacha::ChaCha8Rng,
    cfg: &NumericConfig,
    accept: impl Fn(&ParamSet<Scalar>) -> Result<T>,
) -> Result<(ParamSet<Scalar>, T)> {
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let (ps, _) = sample_numeric(primary, rng, cfg, None)?;
        match accept(&ps) {
            Ok(t) => return Ok((ps, t)),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::UnsatisfiedConvergence(format!(
        "no parameter set shared with {} after {MAX_ATTEMPTS} attempts (last: {})",
        primary.id,
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

fn pick(ps: &ParamSet<Scalar>, syms: &str) -> BTreeMap<char, Scalar> {
    syms.chars().map(|c| (c, ps.vals[&c].clone())).collect()
}

fn param_strings(vals: &BTreeMap<char, Scalar>, q: &Scalar, n: Option<i64>, digits: usize) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = vals.iter().map(|(c, v)| (c.to_string(), v.to_decimal(digits))).collect();
    out.insert("q".into(), q.to_decimal(digits));
    if let Some(n) = n {
        out.insert("n".into(), n.to_string());
    }
    out
}

/// Specializations are deliberately non-generic (a prefactor vanishes, a
/// series terminates), so only convergence is required of them.
fn specialize(d: &IdentityDescriptor, p: &ParamSet<Scalar>, syms: &str, cfg: &NumericConfig) -> Result<ParamSet<Scalar>> {
    let b = numeric(cfg, &p.q)?;
    let ps = resolve_constraints(d, &b, &pick(p, syms), None)?;
    admissible_convergence(d, &b, &ps, CONVERGENCE_MARGIN)?;
    Ok(ps)
}

fn numeric(cfg: &NumericConfig, q: &Scalar) -> Result<Numeric> {
    Ok(Numeric::new(cfg.clone(), Nome::new(q.clone())?))
}

fn eval(b: &Numeric, env: &Env<Scalar>, e: &Expr) -> Result<Scalar> {
    Evaluator::new(b, env).eval(e)
}

fn finish(chain: &str, tol: f64, res: Result<(BTreeMap<String, String>, Vec<ChainStep>)>) -> ChainReport {
    match res {
        Ok((params, steps)) => ChainReport {
            chain: chain.into(),
            params,
            tolerance: format!("{tol:e}"),
            pass: steps.iter().all(|s| s.pass),
            steps,
            error: None,
        },
        Err(e) => ChainReport {
            chain: chain.into(),
            params: BTreeMap::new(),
            tolerance: format!("{tol:e}"),
            steps: Vec::new(),
            pass: false,
            error: Some((&e).into()),
        },
    }
}

/// Runs one chain on the `idx`-th shared parameter set drawn from `seed`.
pub fn run_chain(chain: Chain, seed: u64, idx: usize, cfg: &NumericConfig, tol: f64) -> ChainReport {
    let mut rng = rng_for(seed, chain.name(), idx);
    let digits = cfg.digits as usize;
    let res = match chain {
        Chain::ThmIiToBailey => (|| {
            let (bailey, thm) = (lookup("BAILEY_EQUIV")?, lookup("THM_II")?);
            let (bp, tp) = shared(bailey, &mut rng, cfg, |p| specialize(thm, p, "abcdefg", cfg))?;
            let br = check_numeric(bailey, &bp, cfg, tol);
            let tr = check_numeric(thm, &tp, cfg, tol);
            let b = numeric(cfg, &tp.q)?;
            let psi8 = eval(&b, &tp.env(), &thm.series_expr("psi8_z").expect("THM_II has psi8_z"))?;
            let psi6 = eval(&b, &bp.env(), &bailey.series_expr("psi6").expect("BAILEY_EQUIV has psi6"))?;
            let steps = vec![
                report_step("BAILEY_EQUIV", &br),
                report_step("THM_II at a = bc", &tr),
                single_term_step(&tr, "W8"),
                residual_step("THM_II psi8_z equals the 6psi6 of BAILEY_EQUIV", &psi8, &psi6, tol),
            ];
            Ok((param_strings(&tp.vals, &tp.q, None, digits), steps))
        })(),
        Chain::GenWeierToWeier => (|| {
            let (weier, gen) = (lookup("WEIER_EQUIV")?, lookup("GEN_WEIER")?);
            let (wp, gp) = shared(weier, &mut rng, cfg, |p| specialize(gen, p, "abcde", cfg))?;
            let wr = check_numeric(weier, &wp, cfg, tol);
            let gr = check_numeric(gen, &gp, cfg, tol);
            let steps = vec![
                report_step("WEIER_EQUIV", &wr),
                report_step("GEN_WEIER at z = a", &gr),
                single_term_step(&gr, "psi8"),
                single_term_step(&gr, "W8"),
            ];
            Ok((param_strings(&gp.vals, &gp.q, None, digits), steps))
        })(),
        Chain::Cor222ToJackson => (|| {
            let jackson = lookup("JACKSON_8W7")?;
            let (jp, _) = shared(jackson, &mut rng, cfg, |_| Ok(()))?;
            let jr = check_numeric(jackson, &jp, cfg, tol);
            let n = jp.n.expect("JACKSON_8W7 has an integer parameter");
            let b = numeric(cfg, &jp.q)?;
            let mut env = jp.env();
            env.vals.insert('e', jp.q.powi(-n));
            let (wterm, pterm, clear) = cor_222_terms();
            // (e;q)_∞ = 0 at e = q^-n removes the ₈ψ₈ term outright.
            let cleared = eval(&b, &env, &clear)?;
            let cleared_psi = if cfg.is_numerical_zero(&cleared) { Scalar::zero(cfg.prec) } else { &eval(&b, &env, &pterm)? * &cleared };
            let lhs = &eval(&b, &env, &wterm)? + &cleared_psi;
            let r_cleared = eval(&b, &env, &(om(&["aq"], &["b", "c", "d", "e"]) * om(&["1/z"], &["1/b", "1/c", "1/d", "1/e"])))?;
            let prefactor = eval(&b, &env, &(pinf(&["aq", "1/z"]) * om(&["aq"], &["bc", "bd", "be", "cd", "ce", "de"])))?;
            let jackson_rhs = eval(&b, &env, &jackson.rhs)?;
            let mut cleared_step = residual_step("COR_222 with denominators cleared, at e = q^-n", &lhs, &r_cleared, tol);
            cleared_step.note = Some(format!("(e;q)_inf·Omega = {}", cleared.to_decimal(6)));
            let steps = vec![
                report_step("JACKSON_8W7", &jr),
                cleared_step,
                residual_step("COR_222 product over the 8W7 prefactor equals the JACKSON_8W7 product", &(&r_cleared / &prefactor), &jackson_rhs, tol),
            ];
            Ok((param_strings(&env.vals, &jp.q, Some(n), digits), steps))
        })(),
    };
    finish(chain.name(), tol, res)
}

/// Re-substitutes the solved pair (ψ₈ from THM_I, ₈W₇ from THM_II) into the
/// two equations they solve: Wei's transformation and the ₈W₇ lemma.
pub fn linear_system_roundtrip(seed: u64, idx: usize, cfg: &NumericConfig, tol: f64) -> ChainReport {
    const NAME: &str = "LINEAR_SYSTEM";
    let mut rng = rng_for(seed, NAME, idx);
    let res = (|| {
        let (thm1, thm2, wei, lemma) = (lookup("THM_I")?, lookup("THM_II")?, lookup("WEI_8PSI8")?, lookup("LEMMA_8W7")?);
        let (ps, _) = shared(thm1, &mut rng, cfg, |p| {
            resolve_numeric(wei, p.q.clone(), &pick(p, "abcdefg"), None, cfg, CONVERGENCE_MARGIN)?;
            let mut lp = pick(p, "abcdez");
            lp.insert('h', p.vals[&'f'].clone());
            lp.insert('k', p.vals[&'g'].clone());
            resolve_numeric(lemma, p.q.clone(), &lp, None, cfg, CONVERGENCE_MARGIN)
        })?;
        let b = numeric(cfg, &ps.q)?;
        let mut env = ps.env();
        let z = ps.vals[&'z'].clone();
        env.vals.insert('t', z);
        env.vals.insert('h', ps.vals[&'f'].clone());
        env.vals.insert('k', ps.vals[&'g'].clone());
        let coef = |d: &IdentityDescriptor, name: &str| eval(&b, &env, d.coefficient(name).expect("named coefficient"));
        let psi8 = eval(&b, &env, &thm1.rhs)?;
        let w8 = eval(&b, &env, &thm2.rhs)?;
        let (k0, k1) = (coef(wei, "kappa0")?, coef(wei, "kappa1")?);
        let (l1, mu1) = (coef(lemma, "lambda1")?, coef(lemma, "mu1")?);
        let x = eval(&b, &env, &wei.series_expr("psi8_t").expect("WEI_8PSI8 has psi8_t"))?;
        let y = eval(&b, &env, &lemma.series_expr("psi8_z").expect("LEMMA_8W7 has psi8_z"))?;
        let steps = vec![
            residual_step("psi8 - kappa1·W = kappa0·psi8_t", &(&psi8 - &(&k1 * &w8)), &(&k0 * &x), tol),
            residual_step("W - lambda1·psi8 = mu1·psi8_z", &(&w8 - &(&l1 * &psi8)), &(&mu1 * &y), tol),
        ];
        Ok((param_strings(&env.vals, &ps.q, None, cfg.digits as usize), steps))
    })();
    finish(NAME, tol, res)
}

/// Exact Jackson summation at rational q: `sets` random parameter sets for
/// each n in the admissible range.
pub fn jackson_exact_sweep(seed: u64, sets: usize) -> Result<Vec<CheckReport>> {
    let d = lookup("JACKSON_8W7")?;
    let (lo, hi) = d.int_param.expect("JACKSON_8W7 has an integer parameter");
    let mut out = Vec::new();
    for n in lo..=hi {
        for i in 0..sets {
            let mut rng = rng_for(seed, &format!("{}/n={n}", d.id), i);
            let (ps, _) = sample_rational(d, &mut rng, Some(n))?;
            out.push(check_rational(d, &ps));
        }
    }
    Ok(out)
}
