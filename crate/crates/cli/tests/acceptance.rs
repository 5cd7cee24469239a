//! Acceptance gate: one line per criterion, PASS, FAIL or RECORDED, with a
//! non-zero exit on any FAIL. A criterion also fails when it overruns its
//! time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mpfam::search::SearchConfig;
use mpfam_cli::{suites, ReproductionReport, Status, SHIFTING_SEED};

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: Box<dyn Fn(&SearchConfig) -> ReproductionReport>,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() -> ExitCode {
    let cfg = SearchConfig::default();
    let criteria = vec![
        Criterion { id: 1, name: "counterexample 35 > 30", budget: secs(1), run: Box::new(|_| suites::counterexample()) },
        Criterion {
            id: 2,
            name: "intersecting optimum equals the star bound",
            budget: secs(120),
            run: Box::new(suites::frankl_grid),
        },
        Criterion {
            id: 3,
            name: "k = 1 closed form, p in {3,4}, n in [2,4]",
            budget: secs(60),
            run: Box::new(|c| suites::k1_table(&[3, 4], 4, c)),
        },
        Criterion { id: 4, name: "single-part non-trivial optimum", budget: secs(60), run: Box::new(suites::hm_table) },
        Criterion {
            id: 5,
            name: "construction sizes match formulas, layer <= 10^4",
            budget: None,
            run: Box::new(|_| suites::coherence(10_000)),
        },
        Criterion {
            id: 6,
            name: "shifting invariants on 1000 random families",
            budget: secs(60),
            run: Box::new(|_| suites::shifting_suite(1000, SHIFTING_SEED)),
        },
        Criterion { id: 7, name: "exact identities", budget: None, run: Box::new(|_| suites::identities()) },
        Criterion {
            id: 8,
            name: "primary engine agrees with the reference solver",
            budget: None,
            run: Box::new(suites::cross_validation),
        },
        Criterion {
            id: 9,
            name: "exact non-trivial optimum at n=(5,5), k=(2,2)",
            budget: None,
            run: Box::new(suites::recorded_optimum),
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let report = (c.run)(&cfg);
        let elapsed = start.elapsed();
        let over = c.budget.is_some_and(|b| elapsed > b);
        let recorded = report.claims.iter().any(|cl| cl.status == Status::Recorded);
        let verdict = if !report.passed() || over {
            failed += 1;
            "FAIL"
        } else if recorded {
            "RECORDED"
        } else {
            "PASS"
        };
        let budget = c.budget.map(|b| format!(" of {} s", b.as_secs())).unwrap_or_default();
        let values: Vec<String> = report
            .claims
            .iter()
            .filter(|cl| cl.status == Status::Recorded)
            .map(|cl| format!("{} = {}", cl.id, cl.computed))
            .collect();
        let extra = if values.is_empty() { String::new() } else { format!(" [{}]", values.join(", ")) };
        println!(
            "{verdict} criterion {}: {} ({} claims, {:.2?}{budget}){extra}",
            c.id,
            c.name,
            report.claims.len(),
            elapsed
        );
        for cl in report.failures() {
            println!("    {}: computed {} expected {}", cl.id, cl.computed, cl.expected);
        }
        if over {
            println!("    over the time budget");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
