use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qsv::harness::{catalog_json, check_explicit, run_suite, write_report, BackendChoice, Format, SuiteConfig};
use qsv::identities::{catalog, CheckReport};
use qsv::{Error, Result};

#[derive(Parser)]
#[command(name = "qsv", version, about = "Evaluate and verify basic hypergeometric series identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BackendArg {
    Numeric,
    Formal,
    Rational,
    Both,
}

impl From<BackendArg> for BackendChoice {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Numeric => BackendChoice::Numeric,
            BackendArg::Formal => BackendChoice::Formal,
            BackendArg::Rational => BackendChoice::Rational,
            BackendArg::Both => BackendChoice::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the identity catalog.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Check one identity at explicit parameters given as key=value
    /// (e.g. `qsv check WEIERSTRASS x=2 a=3 b=5 c=7 q=1/3`).
    Check {
        id: String,
        params: Vec<String>,
        /// JSON object of parameters; key=value arguments override it.
        #[arg(long)]
        params_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "numeric")]
        backend: BackendArg,
        #[arg(long, default_value_t = 30)]
        accuracy: u32,
        #[arg(long, default_value_t = 20)]
        formal_order: i64,
        /// Relative-residual threshold (default 10^-(A-8)).
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded random suite over catalog identities.
    Suite {
        /// JSON config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated ids, or `all`.
        #[arg(long, value_delimiter = ',')]
        identities: Option<Vec<String>>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        accuracy: Option<u32>,
        #[arg(long)]
        formal_order: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Fix the integer parameter n.
        #[arg(long)]
        n: Option<i64>,
        /// Also run the specialization chains and the linear-system round trip.
        #[arg(long)]
        chains: bool,
        /// Record wall-clock times in the report.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qsv: {e}");
            ExitCode::from(if matches!(e, Error::Config(_)) { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::List { format } => {
            list(format.into());
            Ok(true)
        }
        Cmd::Check { id, params, params_file, backend, accuracy, formal_order, tolerance, format, out } => {
            let mut raw = match params_file {
                Some(p) => read_params(&p)?,
                None => BTreeMap::new(),
            };
            for kv in params {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got '{kv}'")))?;
                raw.insert(k.trim().to_string(), v.trim().to_string());
            }
            let rep = check_explicit(&id, raw, backend.into(), accuracy, formal_order, tolerance)?;
            let bytes = match format {
                FormatArg::Json => serde_json::to_string_pretty(&rep).map_err(|e| Error::Io(e.to_string()))? + "\n",
                FormatArg::Text => check_text(&rep),
            };
            match out {
                Some(p) => std::fs::write(&p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
                None => print!("{bytes}"),
            }
            Ok(rep.pass)
        }
        Cmd::Suite { config, identities, backend, samples, accuracy, formal_order, seed, tolerance, n, chains, timing, out, format } => {
            let mut cfg = match config {
                Some(p) => SuiteConfig::from_json(&std::fs::read_to_string(&p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?)?,
                None => SuiteConfig::default(),
            };
            if let Some(v) = identities {
                cfg.identities = v;
            }
            if let Some(v) = backend {
                cfg.backend = v.into();
            }
            if let Some(v) = samples {
                cfg.samples = v;
            }
            if let Some(v) = accuracy {
                cfg.accuracy = v;
            }
            if let Some(v) = formal_order {
                cfg.formal_order = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if tolerance.is_some() {
                cfg.tolerance = tolerance;
            }
            if n.is_some() {
                cfg.n = n;
            }
            cfg.chains |= chains;
            cfg.timing |= timing;
            if let Some(p) = out {
                cfg.out = Some(p.display().to_string());
            }
            if let Some(f) = format {
                cfg.format = f.into();
            }
            let report = run_suite(&cfg)?;
            write_report(&report, cfg.format, cfg.out.as_deref().map(std::path::Path::new))?;
            Ok(report.all_passed())
        }
    }
}

fn list(format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&catalog_json()).expect("catalog serializes")),
        Format::Text => {
            for d in catalog() {
                let mut backends = vec![];
                for (on, name) in [(d.support.numeric, "numeric"), (d.support.formal, "formal"), (d.support.rational, "rational")] {
                    if on {
                        backends.push(name);
                    }
                }
                let mut extra: Vec<String> = d.constraints.iter().map(|(c, m)| format!("{c} = {m}")).collect();
                if let Some((lo, hi)) = d.int_param {
                    extra.push(format!("n in {lo}..{hi}"));
                }
                extra.extend(d.convergence.iter().map(|m| format!("|{m}| < 1")));
                println!("{:<16} {}", d.id, d.name);
                println!("{:<16} free {}; {}; [{}]", "", d.free.iter().collect::<String>(), if extra.is_empty() { "-".into() } else { extra.join(", ") }, backends.join(", "));
            }
        }
    }
}

fn read_params(p: &std::path::Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    let v: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: expected a JSON object: {e}", p.display())))?;
    v.into_iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => Ok((k, s)),
            serde_json::Value::Number(n) => Ok((k, n.to_string())),
            other => Err(Error::Config(format!("parameter {k}: expected a string or number, got {other}"))),
        })
        .collect()
}

fn check_text(r: &CheckReport) -> String {
    let mut lines = vec![format!("{} ({}): {}", r.id, r.backend, if r.pass { "PASS" } else { "FAIL" })];
    let show = |k: &str, v: &Option<String>| v.as_ref().map(|v| format!("  {k:<13}{v}"));
    lines.extend(show("lhs", &r.lhs));
    lines.extend(show("rhs", &r.rhs));
    lines.extend(show("rel_residual", &r.rel_residual));
    lines.extend(show("tolerance", &r.tolerance));
    lines.extend(show("mismatch", &r.mismatch));
    if let Some(o) = r.formal_order {
        lines.push(format!("  {:<13}O(q^{o})", "order"));
    }
    if let Some(e) = &r.error {
        lines.push(format!("  {:<13}{}: {}", "error", e.kind, e.message));
    }
    lines.extend(r.diagnostics.warnings.iter().map(|w| format!("  warning      {w}")));
    lines.join("\n") + "\n"
}
