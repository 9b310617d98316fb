//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so
//! the lines appear in order and the exit code reflects the outcome.

use std::time::{Duration, Instant};

use biaswalk::verify::{criterion, criterion_summary};

const SEED: u64 = 42;

/// Wall-clock budgets for criteria that state one.
fn budget(k: u8) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(1)),
        11 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

fn main() {
    let mut failed = Vec::new();
    for k in 1..=14u8 {
        let started = Instant::now();
        let checks = criterion(k, SEED);
        let elapsed = started.elapsed();
        let (mut ok, mut detail) = criterion_summary(&checks, k);
        if let Some(limit) = budget(k) {
            if elapsed > limit {
                ok = false;
                detail = format!("{detail}; over the {}s budget", limit.as_secs());
            }
        }
        for c in checks.iter().filter(|c| c.informational) {
            detail = format!("{detail}; note: {}", c.detail);
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {k:2}: {verdict} ({:.2}s) {detail}", elapsed.as_secs_f64());
        for c in checks.iter().filter(|c| c.failed()) {
            println!("    {}: {}", c.name, c.detail);
        }
        if !ok {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("all 14 criteria pass");
    } else {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
