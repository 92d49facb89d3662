//! Suite runner: configuration, per-pair seeded sampling, parallel checking
//! and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

mod explicit;
pub use explicit::{catalog_json, check_explicit};

use crate::error::{Error, Result};
use crate::identities::chains::{linear_system_roundtrip, run_chain, Chain, ChainReport};
use crate::identities::sample::{rng_for, sample_formal, sample_numeric, sample_rational};
use crate::identities::{catalog, check_formal, check_numeric, check_rational, lookup, CheckReport, IdentityDescriptor, ReportError};
use crate::scalar::NumericConfig;

pub const TOOL_VERSION: &str = concat!("qsv ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Numeric,
    Formal,
    /// Exact arithmetic at rational q; only for terminating identities.
    Rational,
    /// Numeric and formal.
    Both,
}

impl BackendChoice {
    fn expand(self) -> &'static [BackendChoice] {
        match self {
            BackendChoice::Both => &[BackendChoice::Numeric, BackendChoice::Formal],
            BackendChoice::Numeric => &[BackendChoice::Numeric],
            BackendChoice::Formal => &[BackendChoice::Formal],
            BackendChoice::Rational => &[BackendChoice::Rational],
        }
    }

    fn name(self) -> &'static str {
        match self {
            BackendChoice::Numeric => "numeric",
            BackendChoice::Formal => "formal",
            BackendChoice::Rational => "rational",
            BackendChoice::Both => "both",
        }
    }

    fn supported_by(self, d: &IdentityDescriptor) -> bool {
        match self {
            BackendChoice::Numeric => d.support.numeric,
            BackendChoice::Formal => d.support.formal,
            BackendChoice::Rational => d.support.rational,
            BackendChoice::Both => d.support.numeric || d.support.formal,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Catalog ids, or `["all"]`.
    pub identities: Vec<String>,
    pub backend: BackendChoice,
    pub samples: usize,
    /// Target accuracy A in decimal digits.
    pub accuracy: u32,
    /// Formal truncation order N.
    pub formal_order: i64,
    pub seed: u64,
    /// Numeric pass threshold; defaults to 10^-(A-8).
    pub tolerance: Option<f64>,
    /// Fixes the integer parameter of identities that have one.
    pub n: Option<i64>,
    /// Also run the specialization chains and the linear-system round trip.
    pub chains: bool,
    /// Record wall-clock times (makes reports non-reproducible).
    pub timing: bool,
    pub out: Option<String>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            identities: vec!["all".into()],
            backend: BackendChoice::Numeric,
            samples: 25,
            accuracy: 30,
            formal_order: 20,
            seed: 0,
            tolerance: None,
            n: None,
            chains: false,
            timing: false,
            out: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.accuracy < 10 {
            return Err(Error::Config(format!("accuracy must be at least 10 digits, got {}", self.accuracy)));
        }
        if self.formal_order < 4 {
            return Err(Error::Config(format!("formal order must be at least 4, got {}", self.formal_order)));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.identities.is_empty() {
            return Err(Error::Config("no identities selected".into()));
        }
        self.selected().map(|_| ())
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| 10f64.powi(8 - self.accuracy as i32))
    }

    pub fn selected(&self) -> Result<Vec<&'static IdentityDescriptor>> {
        if self.identities.iter().any(|s| s == "all") {
            return Ok(catalog().iter().collect());
        }
        self.identities.iter().map(|id| lookup(id)).collect()
    }

    /// Reads a JSON object of config keys; unspecified keys keep defaults.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("config file: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub sample: usize,
    /// Candidates discarded by the sampler before this one was accepted.
    pub rejections: usize,
    #[serde(flatten)]
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub id: String,
    pub backend: String,
    pub samples: usize,
    pub passes: usize,
    pub rejections: usize,
    pub worst_rel_residual: Option<String>,
    pub mean_terms: f64,
    pub wall_ms: Option<u64>,
    pub cases: Vec<Case>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub tool_version: String,
    pub identities: Vec<IdentitySummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainReport>,
}

impl SuiteReport {
    pub fn empty(config: SuiteConfig) -> Self {
        SuiteReport { config, tool_version: TOOL_VERSION.into(), identities: Vec::new(), chains: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.identities.iter().all(|s| s.passes == s.samples) && self.chains.iter().all(|c| c.pass)
    }
}

fn sampling_failure(d: &IdentityDescriptor, backend: &str, e: &Error) -> CheckReport {
    CheckReport {
        id: d.id.into(),
        backend: backend.into(),
        params: BTreeMap::new(),
        lhs: None,
        rhs: None,
        abs_residual: None,
        rel_residual: None,
        tolerance: None,
        formal_order: None,
        mismatch: None,
        pass: false,
        error: Some(ReportError::from(e)),
        diagnostics: Default::default(),
    }
}

/// Draws the `idx`-th parameter set for `d` and checks it.
pub fn run_case(d: &IdentityDescriptor, backend: BackendChoice, idx: usize, cfg: &SuiteConfig) -> Case {
    let mut rng = rng_for(cfg.seed, &format!("{}/{}", d.id, backend.name()), idx);
    let n = cfg.n;
    let (report, rejections) = match backend {
        BackendChoice::Numeric => {
            let ncfg = NumericConfig::new(cfg.accuracy);
            match sample_numeric(d, &mut rng, &ncfg, n) {
                Ok((ps, rej)) => (check_numeric(d, &ps, &ncfg, cfg.tolerance()), rej),
                Err(e) => (sampling_failure(d, "numeric", &e), crate::identities::sample::MAX_ATTEMPTS),
            }
        }
        BackendChoice::Formal => match sample_formal(d, &mut rng, n) {
            Ok((ps, rej)) => (check_formal(d, &ps, cfg.formal_order), rej),
            Err(e) => (sampling_failure(d, "formal", &e), crate::identities::sample::MAX_ATTEMPTS),
        },
        BackendChoice::Rational => match sample_rational(d, &mut rng, n) {
            Ok((ps, rej)) => (check_rational(d, &ps), rej),
            Err(e) => (sampling_failure(d, "rational", &e), crate::identities::sample::MAX_ATTEMPTS),
        },
        BackendChoice::Both => unreachable!("expanded before sampling"),
    };
    Case { sample: idx, rejections, report }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("QSV_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("QSV_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(Error::Config("QSV_THREADS must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Runs the configured suite. Math failures land in the report; only
/// configuration problems are returned as errors.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let selected = cfg.selected()?;
    if let (Some(n), true) = (cfg.n, selected.iter().all(|d| d.int_param.is_none())) {
        return Err(Error::Config(format!("n = {n} given but no selected identity has an integer parameter")));
    }
    let groups: Vec<(&IdentityDescriptor, BackendChoice)> = selected
        .iter()
        .flat_map(|d| cfg.backend.expand().iter().filter(|b| b.supported_by(d)).map(move |b| (*d, *b)))
        .collect();
    let pool = thread_pool()?;
    let mut report = SuiteReport::empty(cfg.clone());
    pool.install(|| {
        report.identities = groups
            .par_iter()
            .map(|(d, b)| {
                let start = Instant::now();
                let cases: Vec<Case> = (0..cfg.samples).into_par_iter().map(|i| run_case(d, *b, i, cfg)).collect();
                summarize(d.id, b.name(), cases, cfg.timing.then(|| start.elapsed().as_millis() as u64))
            })
            .collect();
        if cfg.chains {
            let ncfg = NumericConfig::new(cfg.accuracy);
            let tol = cfg.tolerance();
            let mut jobs: Vec<(Option<Chain>, usize)> = Chain::ALL.iter().flat_map(|c| (0..cfg.samples).map(move |i| (Some(*c), i))).collect();
            jobs.extend((0..cfg.samples).map(|i| (None, i)));
            report.chains = jobs
                .par_iter()
                .map(|(c, i)| match c {
                    Some(c) => run_chain(*c, cfg.seed, *i, &ncfg, tol),
                    None => linear_system_roundtrip(cfg.seed, *i, &ncfg, tol),
                })
                .collect();
        }
    });
    Ok(report)
}

pub fn summarize(id: &str, backend: &str, cases: Vec<Case>, wall_ms: Option<u64>) -> IdentitySummary {
    let worst = cases
        .iter()
        .filter_map(|c| Some((c.report.rel_residual_f64()?, c.report.rel_residual.clone()?)))
        .fold(None::<(f64, String)>, |acc, (v, s)| match acc {
            Some((w, _)) if w >= v => acc,
            _ => Some((v, s)),
        });
    let mean_terms = if cases.is_empty() { 0.0 } else { cases.iter().map(|c| c.report.terms_used() as f64).sum::<f64>() / cases.len() as f64 };
    IdentitySummary {
        id: id.into(),
        backend: backend.into(),
        samples: cases.len(),
        passes: cases.iter().filter(|c| c.report.pass).count(),
        rejections: cases.iter().map(|c| c.rejections).sum(),
        worst_rel_residual: worst.map(|(_, s)| s),
        mean_terms,
        wall_ms,
        cases,
    }
}

fn short(s: &Option<String>) -> String {
    match s {
        None => "-".into(),
        Some(s) => match s.parse::<f64>() {
            Ok(v) if v == 0.0 => "0".into(),
            Ok(v) => format!("{v:.3e}"),
            Err(_) => s.clone(),
        },
    }
}

pub fn emit_report(report: &SuiteReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}  seed={}  A={}  N={}", report.tool_version, report.config.seed, report.config.accuracy, report.config.formal_order);
            let _ = writeln!(s, "{:<16} {:<8} {:>7} {:>6} {:>10} {:>12} {:>10}", "id", "backend", "samples", "passes", "rejections", "worst_rel", "mean_terms");
            for r in &report.identities {
                let _ = writeln!(
                    s,
                    "{:<16} {:<8} {:>7} {:>6} {:>10} {:>12} {:>10.1}",
                    r.id,
                    r.backend,
                    r.samples,
                    r.passes,
                    r.rejections,
                    short(&r.worst_rel_residual),
                    r.mean_terms
                );
                for c in r.cases.iter().filter(|c| !c.report.pass) {
                    let why = c.report.error.as_ref().map(|e| format!("{}: {}", e.kind, e.message)).or_else(|| c.report.mismatch.clone()).unwrap_or_else(|| format!("rel_residual {}", short(&c.report.rel_residual)));
                    let _ = writeln!(s, "    FAIL sample {}: {why}", c.sample);
                }
            }
            if !report.chains.is_empty() {
                let mut by: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
                for c in &report.chains {
                    let e = by.entry(&c.chain).or_default();
                    e.0 += 1;
                    e.1 += c.pass as usize;
                }
                for (name, (n, p)) in by {
                    let _ = writeln!(s, "{name:<24} {p}/{n} passed");
                }
            }
            Ok(s.into_bytes())
        }
    }
}

pub fn write_report(report: &SuiteReport, format: Format, out: Option<&Path>) -> Result<()> {
    let bytes = emit_report(report, format)?;
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(Error::from)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = SuiteConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SuiteConfig { samples: 0, ..ok.clone() },
            SuiteConfig { accuracy: 9, ..ok.clone() },
            SuiteConfig { formal_order: 3, ..ok.clone() },
            SuiteConfig { identities: vec!["NOT_AN_ID".into()], ..ok.clone() },
        ] {
            assert_eq!(bad.validate().unwrap_err().kind(), "ConfigError");
        }
        assert!((ok.tolerance() - 1e-22).abs() < 1e-35);
    }

    #[test]
    fn config_json_uses_defaults_for_missing_keys() {
        let c = SuiteConfig::from_json(r#"{"identities": ["JTP"], "samples": 3}"#).unwrap();
        assert_eq!(c.samples, 3);
        assert_eq!(c.accuracy, 30);
        assert!(SuiteConfig::from_json(r#"{"sample": 3}"#).is_err());
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = SuiteReport::empty(SuiteConfig::default());
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json).unwrap()).unwrap();
        assert_eq!(v["identities"], serde_json::json!([]));
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { identities: vec!["JTP".into(), "JACKSON_8W7".into()], backend: BackendChoice::Both, samples: 2, ..Default::default() };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.identities.len(), 4);
        assert!(r.all_passed(), "{}", String::from_utf8(emit_report(&r, Format::Text).unwrap()).unwrap());
    }
}
