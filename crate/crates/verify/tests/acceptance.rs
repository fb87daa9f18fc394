//! Acceptance suite: one line per criterion.
//!
//! Three criteria fail as printed (closed forms, denominator index sets and
//! the modular notes). They are reported as FAIL; the binary only exits
//! nonzero when an expected-pass criterion fails or when a known failure no
//! longer matches its diagnosis (so a regression cannot hide behind it).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qhr_core::report::{Status, VerificationReport};
use qhr_verify::{ParamValue, Params, Registry};

enum Expect {
    Pass,
    /// Known failure; the closure returns the diagnosis mismatch, if any.
    KnownFail(fn(&[VerificationReport]) -> Option<String>),
}

struct Criterion {
    id: u8,
    title: &'static str,
    runs: Vec<(&'static str, Vec<(&'static str, ParamValue)>)>,
    budget: Duration,
    expect: Expect,
}

fn params(kv: &[(&'static str, ParamValue)]) -> Params {
    Params(kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
}

fn order(n: i64) -> (&'static str, ParamValue) {
    ("order", ParamValue::Int(n))
}

fn text(k: &'static str, v: &str) -> (&'static str, ParamValue) {
    (k, ParamValue::Text(v.into()))
}

fn float(k: &'static str, v: f64) -> (&'static str, ParamValue) {
    (k, ParamValue::Float(v))
}

fn failing_lines(r: &VerificationReport) -> Vec<&str> {
    r.details.iter().map(String::as_str).filter(|d| d.starts_with("FAIL")).collect()
}

/// Closed forms: exactly three items fail, each by the documented rational factor.
fn closed_form_diagnosis(rs: &[VerificationReport]) -> Option<String> {
    let expected: [(&str, &[&str]); 3] = [
        ("b2-theta-long", &[]),
        ("b2-theta-mixed", &["computed = 1/2 × printed"]),
        ("b2-theta-short", &["computed = 2 × printed", "computed = 2 × printed"]),
    ];
    for (r, (name, factors)) in rs.iter().zip(expected) {
        let fails = failing_lines(r);
        let ok = fails.len() == factors.len() && fails.iter().zip(factors).all(|(l, f)| l.contains(f));
        if !ok {
            return Some(format!("{name}: unexpected failing items {fails:?}"));
        }
    }
    None
}

/// Denominator identities: the printed sets fail, the corrected sets and the
/// numerator route pass.
fn denominator_diagnosis(rs: &[VerificationReport]) -> Option<String> {
    let (printed, rest) = rs.split_at(4);
    if let Some(r) = printed.iter().find(|r| r.status != Status::Fail) {
        return Some(format!("{}: printed sets now {}", r.suite, r.status));
    }
    rest.iter().find(|r| r.status != Status::Pass).map(|r| format!("{} (control): {}", r.suite, r.status))
}

/// Modular notes: every T-item passes and each failing item is off by
/// exactly a factor 2 or 1/2.
fn modular_diagnosis(rs: &[VerificationReport]) -> Option<String> {
    for r in rs {
        for l in failing_lines(r) {
            let factor2 = l.contains("lhs/rhs = 2.000000+") || l.contains("lhs/rhs = 2.000000-");
            let half = l.contains("lhs/rhs = 0.500000");
            if l.contains("(τ+1)") || !(factor2 || half) {
                return Some(format!("{}: {l}", r.suite));
            }
        }
    }
    None
}

fn criteria() -> Vec<Criterion> {
    let tau = || text("tau", "0,1;0,2");
    vec![
        Criterion {
            id: 1,
            title: "vanishing numerators (B2 principal q^10, D4 {α1,α3} q^5)",
            runs: vec![("vanish-b2-principal", vec![order(10)]), ("vanish-d4-pair", vec![order(5)])],
            budget: Duration::from_secs(30),
            expect: Expect::Pass,
        },
        Criterion {
            id: 2,
            title: "β-independence (B2 q^6, D4 q^3)",
            runs: vec![("beta-independence", vec![order(6), ("d4_order", ParamValue::Int(3))])],
            budget: Duration::MAX,
            expect: Expect::Pass,
        },
        Criterion {
            id: 3,
            title: "B2 closed forms through q^8",
            runs: vec![
                ("b2-theta-long", vec![order(8)]),
                ("b2-theta-mixed", vec![order(8)]),
                ("b2-theta-short", vec![order(8)]),
            ],
            budget: Duration::from_secs(60),
            expect: Expect::KnownFail(closed_form_diagnosis),
        },
        Criterion {
            id: 4,
            title: "D4 denominator identities ×η³ through q^3",
            runs: vec![
                ("d4-denominator-1", vec![order(3), text("sets", "printed")]),
                ("d4-denominator-2", vec![order(3), text("sets", "printed")]),
                ("d4-denominator-3", vec![order(3), text("sets", "printed")]),
                ("d4-denominator-4", vec![order(3), text("sets", "printed")]),
                ("d4-denominator-1", vec![order(3), text("sets", "corrected")]),
                ("d4-denominator-2", vec![order(3), text("sets", "corrected")]),
                ("d4-denominator-3", vec![order(3), text("sets", "corrected")]),
                ("d4-denominator-4", vec![order(3), text("sets", "corrected")]),
                ("d4-numerator-denominator", vec![order(3)]),
            ],
            budget: Duration::from_secs(300),
            expect: Expect::KnownFail(denominator_diagnosis),
        },
        Criterion {
            id: 5,
            title: "B2 modular notes at τ ∈ {i, 2i}, z = 0.13+0.07i, order 60, abs err < 1e-8",
            runs: vec![
                ("b2-modular-1", vec![order(60), tau(), text("z", "0.13,0.07"), float("tolerance", 1e-8)]),
                ("b2-modular-2", vec![order(60), tau(), text("z", "0.13,0.07"), float("tolerance", 1e-8)]),
            ],
            budget: Duration::MAX,
            expect: Expect::KnownFail(modular_diagnosis),
        },
        Criterion {
            id: 6,
            title: "D4 S-matrices (abs err < 1e-6) and T-phases (< 1e-9)",
            runs: vec![
                ("d4-s-matrix", vec![order(60), tau(), float("tolerance", 1e-6)]),
                ("d4-t-phase", vec![order(3), float("tolerance", 1e-9)]),
            ],
            budget: Duration::MAX,
            expect: Expect::Pass,
        },
        Criterion {
            id: 7,
            title: "f+ asymptotics within 10% at t = 0.1, monotone over t = 0.25, 0.15, 0.1",
            runs: vec![(
                "d4-asymptotics",
                vec![order(150), text("t", "0.25,0.15,0.1"), float("tolerance", 0.1)],
            )],
            budget: Duration::MAX,
            expect: Expect::Pass,
        },
        Criterion {
            id: 8,
            title: "reduction characters = C·f+ with one shared C, rel err < 1e-4",
            runs: vec![(
                "d4-reduction-characters",
                vec![order(3), ("eval_order", ParamValue::Int(60)), float("tolerance", 1e-4)],
            )],
            budget: Duration::MAX,
            expect: Expect::Pass,
        },
        Criterion {
            id: 9,
            title: "root pairs, w0-invariance q^6, numerator paths q^8",
            runs: vec![
                ("root-pairs", vec![]),
                ("w0-invariance", vec![order(6)]),
                ("numerator-paths", vec![order(8)]),
            ],
            budget: Duration::MAX,
            expect: Expect::Pass,
        },
    ]
}

fn main() -> ExitCode {
    let registry = Registry::default();
    let mut unexpected = 0;
    for c in criteria() {
        let start = Instant::now();
        let reports: Vec<VerificationReport> = c
            .runs
            .iter()
            .map(|(name, kv)| registry.run_suite(name, &params(kv)).expect("known suite, valid overrides").0)
            .collect();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let all_pass = reports.iter().all(|r| r.status == Status::Pass);
        let verdict = if all_pass && in_budget { "PASS" } else { "FAIL" };
        let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
        println!(
            "criterion {} {verdict}: {} (max residual {worst:.3e}, {:.2}s)",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        for r in &reports {
            if r.status != Status::Pass {
                for l in failing_lines(r).iter().take(4) {
                    println!("    {}: {l}", r.suite);
                }
                if r.status == Status::Error {
                    println!("    {}: {:?}", r.suite, r.details);
                }
            }
        }
        if !in_budget {
            println!("    over runtime budget of {:?}", c.budget);
        }
        match c.expect {
            Expect::Pass if verdict != "PASS" => unexpected += 1,
            Expect::Pass => {}
            Expect::KnownFail(diagnose) => match (all_pass, diagnose(&reports)) {
                (true, _) => println!("    known failure no longer reproduces; update the diagnosis"),
                (false, Some(why)) => {
                    unexpected += 1;
                    println!("    diagnosis mismatch: {why}");
                }
                (false, None) => println!("    matches the documented diagnosis"),
            },
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviated from expectation");
        ExitCode::FAILURE
    }
}
