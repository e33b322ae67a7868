//! Acceptance battery: one PASS/FAIL line per criterion. Every comparison is
//! exact; a criterion also fails if it runs over its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qgl11::report::Report;
use qgl11::suites::{run_suite, SuiteOptions};

struct Criterion {
    id: u32,
    title: &'static str,
    budget_s: u64,
    suites: &'static [&'static str],
    check: fn(&Report) -> Option<String>,
}

fn no_extra(_: &Report) -> Option<String> {
    None
}

fn has_gauss_currents(r: &Report) -> Option<String> {
    let found = r
        .checks
        .iter()
        .any(|c| c.name.starts_with("rho ") && c.name.ends_with("gauss-currents"));
    (!found).then(|| "no gauss-current check ran for rho".into())
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "Perk-Schultz recovery through z^8",
        budget_s: 10,
        suites: &["perk-schultz"],
        check: no_extra,
    },
    Criterion {
        id: 2,
        title: "specialized R-matrix, (2,3) and (3,5), through z^8",
        budget_s: 20,
        suites: &["specialized"],
        check: no_extra,
    },
    Criterion {
        id: 3,
        title: "intertwining through z^6 on (rho,rho) and (pi_23,pi_57)",
        budget_s: 60,
        suites: &["intertwine"],
        check: no_extra,
    },
    Criterion {
        id: 4,
        title: "quasi-triangularity through z^5 on (pi_1,pi_23,pi_57)",
        budget_s: 60,
        suites: &["quasitriangular"],
        check: no_extra,
    },
    Criterion {
        id: 5,
        title: "closed pairing = oracle (indices <= 3, length <= 3), current series",
        budget_s: 120,
        suites: &["pairing"],
        check: no_extra,
    },
    Criterion {
        id: 6,
        title: "Hopf structure and proof fixtures",
        budget_s: 60,
        suites: &["hopf", "fixtures"],
        check: no_extra,
    },
    Criterion {
        id: 7,
        title: "graded braid relation for the Perk-Schultz matrix",
        budget_s: 10,
        suites: &["braid"],
        check: no_extra,
    },
    Criterion {
        id: 8,
        title: "Baxter polynomiality on [(2,3)] and [(2,3),(3,5)] through z^8",
        budget_s: 120,
        suites: &["baxter"],
        check: no_extra,
    },
    Criterion {
        id: 9,
        title: "Drinfeld new coproduct on window [-4,4]",
        budget_s: 60,
        suites: &["drinfeld-coproduct"],
        check: no_extra,
    },
    Criterion {
        id: 10,
        title: "Gauss currents under rho and rep_check with bound 4",
        budget_s: 30,
        suites: &["representations"],
        check: has_gauss_currents,
    },
    Criterion {
        id: 11,
        title: "parser round trip on 100 seeded elements",
        budget_s: 5,
        suites: &["dsl"],
        check: no_extra,
    },
];

fn main() -> ExitCode {
    // `cargo test -- --list` and filters are not meaningful here.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let options = SuiteOptions::default();
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let mut problems = Vec::new();
        for s in c.suites {
            match run_suite(s, &options) {
                Ok(report) => {
                    for f in report.failures() {
                        problems.push(format!(
                            "{s}: {}: {}",
                            f.name,
                            f.witness.as_deref().unwrap_or("")
                        ));
                    }
                    problems.extend((c.check)(&report));
                }
                Err(e) => problems.push(format!("{s}: {e}")),
            }
        }
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(c.budget_s) {
            problems.push(format!(
                "took {:.1} s, budget {} s",
                elapsed.as_secs_f64(),
                c.budget_s
            ));
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2}: {} ({:.2} s, budget {} s, exact)",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget_s
        );
        for p in &problems {
            println!("     {p}");
        }
        failed += !problems.is_empty() as u32;
    }
    println!(
        "acceptance: {} of {} criteria pass",
        CRITERIA.len() as u32 - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
