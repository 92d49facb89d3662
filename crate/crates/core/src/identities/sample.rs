//! Random admissible parameter sets for each backend.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::{resolve_formal, resolve_numeric, resolve_rational, IdentityDescriptor, ParamSet};
use crate::error::{Error, Result};
use crate::formalq::QMono;
use crate::scalar::{NumericConfig, Scalar};

pub const MAX_ATTEMPTS: usize = 500;

/// Sampling keeps every |·| < 1 condition below this, so that the series
/// converge at a useful rate.
pub const CONVERGENCE_MARGIN: f64 = 0.7;

/// Seed for one (identity, sample) pair: independent of thread scheduling
/// and of which other identities are in the run.
pub fn pair_seed(master: u64, id: &str, idx: usize) -> u64 {
    let mut h = master ^ 0x9e37_79b9_7f4a_7c15;
    for b in id.bytes().chain((idx as u64).to_le_bytes()) {
        h = splitmix(h ^ b as u64);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(master: u64, id: &str, idx: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(pair_seed(master, id, idx))
}

fn pick_n(desc: &IdentityDescriptor, rng: &mut ChaCha8Rng, n: Option<i64>) -> Option<i64> {
    desc.int_param.map(|(lo, hi)| n.unwrap_or_else(|| rng.random_range(lo..=hi)))
}

/// Numeric sample: |q| in [0.1, 0.5], free symbols of modulus in [0.4, 2.5],
/// all with uniform random phase. Returns the parameter set and how many
/// candidates were rejected.
pub fn sample_numeric(
    desc: &IdentityDescriptor,
    rng: &mut ChaCha8Rng,
    cfg: &NumericConfig,
    n: Option<i64>,
) -> Result<(ParamSet<Scalar>, usize)> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let q = Scalar::from_polar(cfg.prec, rng.random_range(0.1..=0.5), rng.random_range(0.0..TAU));
        let free: BTreeMap<char, Scalar> =
            desc.free.iter().map(|c| (*c, Scalar::from_polar(cfg.prec, rng.random_range(0.4..=2.5), rng.random_range(0.0..TAU)))).collect();
        let n = pick_n(desc, rng, n);
        match resolve_numeric(desc, q, &free, n, cfg, CONVERGENCE_MARGIN) {
            Ok(ps) => return Ok((ps, attempt)),
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::UnsatisfiedConvergence(format!(
        "{}: no admissible parameters after {MAX_ATTEMPTS} attempts (last: {})",
        desc.id,
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    Rational::from((sign * rng.random_range(1..=9i64), rng.random_range(1..=9i64)))
}

/// Formal sample: each free symbol is ±p/s · q^e, with e taken from the
/// descriptor's formal exponents (0 if unlisted).
pub fn sample_formal(desc: &IdentityDescriptor, rng: &mut ChaCha8Rng, n: Option<i64>) -> Result<(ParamSet<QMono>, usize)> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let free: BTreeMap<char, QMono> = desc
            .free
            .iter()
            .map(|c| {
                let e = desc.formal_exps.iter().find(|(s, _)| s == c).map_or(0, |(_, e)| *e);
                (*c, QMono::new(small_rational(rng), e))
            })
            .collect();
        let n = pick_n(desc, rng, n);
        match resolve_formal(desc, &free, n) {
            Ok(ps) => return Ok((ps, attempt)),
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::DegenerateParameters(format!(
        "{}: no admissible formal parameters after {MAX_ATTEMPTS} attempts (last: {})",
        desc.id,
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Exact sample: q = ±p/s with p < s ≤ 9, free symbols ±p/s with p, s ≤ 9.
pub fn sample_rational(desc: &IdentityDescriptor, rng: &mut ChaCha8Rng, n: Option<i64>) -> Result<(ParamSet<Rational>, usize)> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let s = rng.random_range(2..=9i64);
        let p = rng.random_range(1..s);
        let q = Rational::from((if rng.random_bool(0.5) { p } else { -p }, s));
        let free: BTreeMap<char, Rational> = desc.free.iter().map(|c| (*c, small_rational(rng))).collect();
        let n = pick_n(desc, rng, n);
        match resolve_rational(desc, q, &free, n) {
            Ok(ps) => return Ok((ps, attempt)),
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::DegenerateParameters(format!(
        "{}: no admissible rational parameters after {MAX_ATTEMPTS} attempts (last: {})",
        desc.id,
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}
