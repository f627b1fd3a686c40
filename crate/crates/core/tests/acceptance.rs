//! Runs the fourteen acceptance criteria and prints one PASS/FAIL line each.
//! Criteria 1 to 13 run once with eight workers; criterion 14 reruns the
//! whole suite with the same seed on one worker and compares the report
//! JSON byte for byte.
//!
//! `ACCEPTANCE_ONLY=3,5` restricts the run to a subset (criterion 14 is then
//! evaluated on that subset).

use std::process::ExitCode;
use std::time::Instant;

use brenier_core::suite::{criterion_name, determinism_report, run_suite, suite_json, CriterionResult, SuiteConfig};

fn selected() -> Vec<u8> {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(s) if !s.trim().is_empty() => s.split(',').filter_map(|v| v.trim().parse().ok()).collect(),
        _ => (1..=14).collect(),
    }
}

fn summary(r: &CriterionResult) -> String {
    if let Some(e) = &r.error {
        return format!("error: {e}");
    }
    let failed: Vec<String> = r
        .reports
        .iter()
        .filter(|x| !x.passed)
        .map(|x| format!("{} empirical {:.6e} vs {:.6e}·{} + {:.0e}", x.check_id, x.empirical, x.theoretical, x.slack, x.abs_tol))
        .collect();
    if failed.is_empty() {
        let worst = r.reports.iter().map(|x| x.margin()).fold(f64::NEG_INFINITY, f64::max);
        format!("{} reports, worst empirical − theoretical·slack {:.3e}", r.reports.len(), worst)
    } else {
        format!("{} of {} reports failed: {}", failed.len(), r.reports.len(), failed.join("; "))
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let ids = selected();
    let core: Vec<u8> = ids.iter().copied().filter(|&i| i <= 13).collect();
    let mut all_passed = true;

    let start = Instant::now();
    let results = run_suite(&cfg, &core, 8).expect("thread pool");
    let parallel_secs = start.elapsed().as_secs_f64();
    for r in &results {
        all_passed &= r.passed;
        println!("{} criterion {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, summary(r));
    }

    if ids.contains(&14) {
        let start = Instant::now();
        let serial = run_suite(&cfg, &core, 1).expect("thread pool");
        let serial_secs = start.elapsed().as_secs_f64();
        let (a, b) = (suite_json(&results), suite_json(&serial));
        let report = determinism_report(&a, &b, "jobs 8 vs jobs 1");
        all_passed &= report.passed;
        println!(
            "{} criterion 14 {}: second invocation on 1 worker {} the first on 8 ({} bytes)",
            if report.passed { "PASS" } else { "FAIL" },
            criterion_name(14).unwrap_or(""),
            if report.passed { "matches" } else { "differs from" },
            a.len()
        );
        println!("timing: suite {parallel_secs:.1} s with 8 workers, {serial_secs:.1} s with 1");
    } else {
        println!("timing: suite {parallel_secs:.1} s with 8 workers");
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
