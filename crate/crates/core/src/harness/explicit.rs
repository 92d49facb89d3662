//! Checks at user-supplied parameters, and the catalog as JSON.

use std::collections::BTreeMap;

use rug::Rational;
use serde_json::{json, Value};

use super::BackendChoice;
use crate::backend::{Formal, Numeric, RationalQ};
use crate::error::{Error, Result};
use crate::formalq::QMono;
use crate::identities::{
    admissible_formal, admissible_numeric, admissible_rational, catalog, check_formal, check_numeric, check_rational, lookup,
    resolve_constraints, CheckReport,
};
use crate::qcore::Nome;
use crate::scalar::{NumericConfig, Scalar};

pub fn catalog_json() -> Value {
    Value::Array(
        catalog()
            .iter()
            .map(|d| {
                json!({
                    "id": d.id,
                    "name": d.name,
                    "free": d.free.iter().collect::<String>(),
                    "constraints": d.constraints.iter().map(|(c, m)| format!("{c} = {m}")).collect::<Vec<_>>(),
                    "n_range": d.int_param,
                    "convergence": d.convergence.iter().map(|m| format!("|{m}| < 1")).collect::<Vec<_>>(),
                    "support": d.support,
                })
            })
            .collect(),
    )
}

fn symbol(k: &str) -> Result<char> {
    let mut cs = k.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if c.is_ascii_alphabetic() => Ok(c),
        _ => Err(Error::Config(format!("unknown parameter '{k}'"))),
    }
}

fn rational(s: &str) -> Result<Rational> {
    s.parse().map_err(|_| Error::Config(format!("bad rational '{s}'")))
}

/// Resolves explicit parameters (strings keyed by symbol, plus `q` and `n`) and checks the identity. Inadmissible
/// parameters are still evaluated; the admissibility failure becomes a
/// warning (the identity may hold there as well, e.g. both sides zero).
pub fn check_explicit(
    id: &str,
    mut raw: BTreeMap<String, String>,
    backend: BackendChoice,
    accuracy: u32,
    order: i64,
    tolerance: Option<f64>,
) -> Result<CheckReport> {
    if accuracy < 10 {
        return Err(Error::Config(format!("accuracy must be at least 10 digits, got {accuracy}")));
    }
    if order < 4 {
        return Err(Error::Config(format!("formal order must be at least 4, got {order}")));
    }
    let d = lookup(id)?;
    let tol = tolerance.unwrap_or_else(|| 10f64.powi(8 - accuracy as i32));
    let supported = match backend {
        BackendChoice::Numeric => d.support.numeric,
        BackendChoice::Formal => d.support.formal,
        BackendChoice::Rational => d.support.rational,
        BackendChoice::Both => return Err(Error::Config("check takes a single backend".into())),
    };
    if !supported {
        return Err(Error::Config(format!("{} does not support this backend", d.id)));
    }
    let n = raw.remove("n").map(|v| v.parse::<i64>().map_err(|_| Error::Config(format!("n must be an integer, got '{v}'")))).transpose()?;
    let q = raw.remove("q");
    let (mut rep, warning) = match backend {
        BackendChoice::Numeric => {
            let cfg = NumericConfig::new(accuracy);
            let q = cfg.parse(&q.ok_or_else(|| Error::Config("q is required".into()))?)?;
            let b = Numeric::new(cfg.clone(), Nome::new(q).map_err(|e| Error::Config(e.to_string()))?);
            let free = raw.iter().map(|(k, v)| Ok((symbol(k)?, Scalar::parse(v, cfg.prec)?))).collect::<Result<_>>()?;
            let ps = resolve_constraints(d, &b, &free, n)?;
            let warn = admissible_numeric(d, &b, &ps, 1.0).err();
            (check_numeric(d, &ps, &cfg, tol), warn)
        }
        BackendChoice::Formal => {
            if q.as_deref().is_some_and(|v| v != "q") {
                return Err(Error::Config("q is the formal variable in the formal backend".into()));
            }
            let free = raw.iter().map(|(k, v)| Ok((symbol(k)?, QMono::parse(v)?))).collect::<Result<_>>()?;
            let ps = resolve_constraints(d, &Formal { order }, &free, n)?;
            let warn = admissible_formal(d, &ps).err();
            (check_formal(d, &ps, order), warn)
        }
        BackendChoice::Rational => {
            let q = rational(&q.ok_or_else(|| Error::Config("q is required".into()))?)?;
            if q == 0 || q.clone().abs() >= 1 {
                return Err(Error::Config(format!("rational q = {q} must satisfy 0 < |q| < 1")));
            }
            let b = RationalQ { q };
            let free = raw.iter().map(|(k, v)| Ok((symbol(k)?, rational(v)?))).collect::<Result<_>>()?;
            let ps = resolve_constraints(d, &b, &free, n)?;
            let warn = admissible_rational(d, &b, &ps).err();
            (check_rational(d, &ps), warn)
        }
        BackendChoice::Both => unreachable!(),
    };
    if let Some(w) = warning {
        rep.diagnostics.warnings.insert(0, format!("parameters outside the sampled domain: {w}"));
    }
    Ok(rep)
}

