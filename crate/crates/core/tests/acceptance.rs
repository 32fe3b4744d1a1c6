//! The nine acceptance criteria, each with its pinned time limit.
//!
//! One PASS/FAIL line per criterion goes straight to stdout, so it shows up
//! even when the harness captures output.

use std::io::Write;
use std::time::Duration;

use abelim::suite::{run_criterion, SuiteConfig, CRITERIA};

fn time_limit(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(5 * 60)),
        2 => Some(Duration::from_secs(30 * 60)),
        4 => Some(Duration::from_secs(2 * 60)),
        8 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let config = SuiteConfig::default();
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (id, _) in CRITERIA {
        let outcome = run_criterion(id, &config).unwrap();
        let late = time_limit(id).filter(|&limit| outcome.elapsed > limit);
        let pass = outcome.pass && late.is_none();
        let mut line = outcome.line();
        if let Some(limit) = late {
            line = format!("FAIL {id} {}: took {:?}, limit {limit:?}", outcome.name, outcome.elapsed);
        }
        writeln!(out, "{line} [{:.2?}]", outcome.elapsed).unwrap();
        for f in outcome.failures.iter().skip(1) {
            writeln!(out, "    {f}").unwrap();
        }
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
