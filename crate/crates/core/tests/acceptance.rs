//! Acceptance run: ten criteria, one PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qsv::harness::{emit_report, run_suite, BackendChoice, Format, SuiteConfig, SuiteReport};
use qsv::identities::chains::{jackson_exact_sweep, linear_system_roundtrip, run_chain, Chain};
use qsv::scalar::{NumericConfig, Scalar};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(ids: &[&str], backend: BackendChoice, samples: usize, tol: f64) -> SuiteReport {
    let cfg = SuiteConfig {
        identities: ids.iter().map(|s| s.to_string()).collect(),
        backend,
        samples,
        accuracy: 30,
        formal_order: 20,
        seed: SEED,
        tolerance: Some(tol),
        ..Default::default()
    };
    run_suite(&cfg).expect("valid suite config")
}

/// "ID k/n (worst 1.2e-35)" per identity, and whether every case passed.
fn summarize(r: &SuiteReport) -> (bool, String) {
    let parts: Vec<String> = r
        .identities
        .iter()
        .map(|s| {
            let worst = s.worst_rel_residual.as_deref().and_then(|w| w.parse::<f64>().ok()).map_or("-".into(), |w| format!("{w:.1e}"));
            format!("{} {} {}/{} (worst {worst})", s.id, s.backend, s.passes, s.samples)
        })
        .collect();
    (r.all_passed() && !r.identities.is_empty(), parts.join("; "))
}

fn within(elapsed: Duration, budget_s: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s <= budget_s, format!("{s:.2}s of {budget_s}s"))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let r = suite(&["JTP"], BackendChoice::Numeric, 500, 1e-22);
    let (ok, d) = summarize(&r);
    let (fast, time) = within(t.elapsed(), 5.0);
    Outcome { pass: ok && fast && r.identities[0].samples == 500, detail: format!("{d}, {time}") }
}

fn c2() -> Outcome {
    let t = Instant::now();
    let num = suite(&["WEIERSTRASS"], BackendChoice::Numeric, 200, 1e-22);
    let formal = suite(&["WEIERSTRASS"], BackendChoice::Formal, 20, 1e-22);
    let (ok_n, dn) = summarize(&num);
    let (ok_f, df) = summarize(&formal);
    let orders_ok = formal.identities[0].cases.iter().all(|c| c.report.formal_order.is_some_and(|o| o >= 20));
    let (fast, time) = within(t.elapsed(), 10.0);
    Outcome { pass: ok_n && ok_f && orders_ok && fast, detail: format!("{dn}; {df} exact mod q^20; {time}") }
}

fn modulus(c: &qsv::harness::Case, expr: impl Fn(&dyn Fn(&str) -> Scalar) -> Scalar) -> f64 {
    let prec = NumericConfig::new(30).prec;
    let get = |k: &str| Scalar::parse(&c.report.params[k], prec).expect("decimal parameter");
    expr(&get).abs_f64()
}

fn c3() -> Outcome {
    let t = Instant::now();
    let r = suite(&["BAILEY_66"], BackendChoice::Numeric, 100, 1e-20);
    let (ok, d) = summarize(&r);
    let worst_ratio = r.identities[0]
        .cases
        .iter()
        .map(|c| {
            modulus(c, |p| {
                let num = &(&p("a") * &p("a")) * &p("q");
                let den = &(&(&p("b") * &p("c")) * &p("d")) * &p("e");
                &num / &den
            })
        })
        .fold(0.0, f64::max);
    let (fast, time) = within(t.elapsed(), 20.0);
    Outcome { pass: ok && worst_ratio <= 0.7 && fast, detail: format!("{d}, max |a^2q/bcde| = {worst_ratio:.3}, {time}") }
}

fn c4() -> Outcome {
    let t = Instant::now();
    let reps = jackson_exact_sweep(SEED, 25).expect("rational sampling");
    let exact = reps.iter().filter(|r| r.pass && r.abs_residual.as_deref() == Some("0")).count();
    let ns: std::collections::BTreeSet<_> = reps.iter().map(|r| r.params["n"].clone()).collect();
    let (fast, time) = within(t.elapsed(), 5.0);
    Outcome {
        pass: exact == reps.len() && reps.len() == 125 && ns.len() == 5 && fast,
        detail: format!("{exact}/{} exactly equal over n = 0..4, {time}", reps.len()),
    }
}

fn c5() -> Outcome {
    let r = suite(&["WEI_8PSI8", "LEMMA_8W7"], BackendChoice::Numeric, 100, 1e-18);
    let det = suite(&["DET_CLOSED_FORM"], BackendChoice::Numeric, 100, 1e-20);
    let (ok, d) = summarize(&r);
    let (ok_d, dd) = summarize(&det);
    Outcome { pass: ok && ok_d, detail: format!("{d}; {dd}") }
}

fn c6() -> Outcome {
    let r = suite(&["THM_I", "THM_II"], BackendChoice::Numeric, 100, 1e-18);
    let (ok, d) = summarize(&r);
    let cfg = NumericConfig::new(30);
    let rt: Vec<_> = (0..25).map(|i| linear_system_roundtrip(SEED, i, &cfg, 1e-18)).collect();
    let rt_ok = rt.iter().filter(|c| c.pass).count();
    Outcome { pass: ok && rt_ok == rt.len(), detail: format!("{d}; linear-system round trip {rt_ok}/{}", rt.len()) }
}

fn c7() -> Outcome {
    let r = suite(&["SLATER_R5", "CONTIG_3PSI8"], BackendChoice::Numeric, 50, 1e-16);
    let (ok, d) = summarize(&r);
    let mags: Vec<String> = r
        .identities
        .iter()
        .map(|s| {
            let m = s
                .cases
                .iter()
                .flat_map(|c| c.report.diagnostics.series.iter())
                .filter_map(|st| st.max_term_mag.as_deref()?.parse::<f64>().ok())
                .fold(0.0, f64::max);
            format!("{} max_term_mag {m:.2e}", s.id)
        })
        .collect();
    Outcome { pass: ok, detail: format!("{d}; {}", mags.join(", ")) }
}

fn c8() -> Outcome {
    let cfg = NumericConfig::new(30);
    let mut parts = Vec::new();
    let mut pass = true;
    for c in Chain::ALL {
        let reps: Vec<_> = (0..25).map(|i| run_chain(c, SEED, i, &cfg, 1e-18)).collect();
        let ok = reps.iter().filter(|r| r.pass).count();
        pass &= ok == reps.len();
        if c == Chain::ThmIiToBailey {
            let term_ok = reps.iter().all(|r| r.steps.iter().any(|s| s.name.contains("terminates after one term") && s.pass));
            pass &= term_ok;
            parts.push(format!("{} {ok}/25 (W8 terms_used = 1: {})", c.name(), if term_ok { "yes" } else { "no" }));
        } else {
            parts.push(format!("{} {ok}/25", c.name()));
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn c9() -> Outcome {
    let r = suite(&["GEN_WEIER", "COR_222", "ROGERS_65", "COR_3NEW", "COR_49", "PROP_A1", "COR_FINAL"], BackendChoice::Numeric, 50, 1e-18);
    let (ok, d) = summarize(&r);
    let coeffs_seen = ["COR_3NEW", "COR_FINAL"].iter().all(|id| {
        r.identities.iter().find(|s| s.id == *id).is_some_and(|s| s.cases.iter().all(|c| !c.report.diagnostics.coefficients.is_empty()))
    });
    Outcome { pass: ok && coeffs_seen, detail: d }
}

fn c10() -> Outcome {
    let mut same = Vec::new();
    for backend in [BackendChoice::Numeric, BackendChoice::Formal] {
        let cfg = SuiteConfig { backend, samples: 1, seed: 42, ..Default::default() };
        let a = emit_report(&run_suite(&cfg).unwrap(), Format::Json).unwrap();
        let b = emit_report(&run_suite(&cfg).unwrap(), Format::Json).unwrap();
        same.push(a == b);
    }
    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_qsv"))
            .args(["suite", "--identities", "BAILEY_66,JACKSON_8W7", "--backend", "both", "--samples", "3", "--seed", "7", "--chains"])
            .env("QSV_THREADS", "2")
            .output()
            .expect("run qsv")
    };
    let serial = Command::new(env!("CARGO_BIN_EXE_qsv"))
        .args(["suite", "--identities", "BAILEY_66,JACKSON_8W7", "--backend", "both", "--samples", "3", "--seed", "7", "--chains"])
        .env("QSV_THREADS", "1")
        .output()
        .expect("run qsv");
    let (x, y) = (cli(), cli());
    let cli_same = x.status.success() && x.stdout == y.stdout && x.stdout == serial.stdout && !x.stdout.is_empty();
    Outcome {
        pass: same.iter().all(|s| *s) && cli_same,
        detail: format!(
            "library numeric/formal reruns identical: {:?}; CLI reruns (2 threads twice, 1 thread) identical: {cli_same}",
            same
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("triple product", c1),
        ("Weierstrass theta identity", c2),
        ("Bailey 6psi6", c3),
        ("Jackson 8W7, exact", c4),
        ("Wei transformation, 8W7 lemma, 1 - kappa1*lambda1", c5),
        ("main transformations and linear system", c6),
        ("Slater r = 5 and contiguous relation", c7),
        ("specialization chains", c8),
        ("remaining corollaries", c9),
        ("determinism", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name} [{:.1}s]: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
