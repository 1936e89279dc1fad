//! Acceptance criteria, one line each. Run with
//! `cargo test -p driftlab-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use driftlab::generate::{random_band_limited, weierstrass};
use driftlab::verify::{
    run_suite, smoothing_report, sqg_cosine_report, sqg_random_reports, verify_class_machinery,
    verify_holder_estimators, verify_operator_oracle, verify_semigroup, Outcome, VerificationReport,
};
use driftlab::{GridSpec, Result};

const SEED: u64 = 0;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Result<Vec<VerificationReport>>,
}

fn grid(d: usize, n: usize) -> GridSpec {
    GridSpec::new(d, n).unwrap()
}

fn operator_oracle() -> Result<Vec<VerificationReport>> {
    Ok(vec![verify_operator_oracle(128, 2.0)?])
}

fn semigroup() -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify_semigroup(&random_band_limited(grid(1, 64), 8, SEED)?, 0.5)?,
        verify_semigroup(&random_band_limited(grid(2, 32), 6, SEED)?, 0.5)?,
    ])
}

fn duality() -> Result<Vec<VerificationReport>> {
    run_suite("duality", SEED)
}

fn invariants() -> Result<Vec<VerificationReport>> {
    run_suite("invariants", SEED)
}

/// Both signs, both dual scenarios, and the single-mode closed form.
fn l1() -> Result<Vec<VerificationReport>> {
    run_suite("l1", SEED)
}

fn estimators() -> Result<Vec<VerificationReport>> {
    let g = grid(1, 1024);
    Ok(vec![verify_holder_estimators(&weierstrass(g, 0.3, g.max_level())?, 0.3)?])
}

fn class_machinery() -> Result<Vec<VerificationReport>> {
    Ok(vec![verify_class_machinery(grid(1, 1024), 5)?])
}

fn class_evolution() -> Result<Vec<VerificationReport>> {
    run_suite("class-evolution", SEED)
}

fn sqg() -> Result<Vec<VerificationReport>> {
    let mut out = vec![sqg_cosine_report(64)?];
    out.extend(sqg_random_reports(256, 2.0, 1e-3, SEED)?);
    Ok(out)
}

fn smoothing() -> Result<Vec<VerificationReport>> {
    Ok(vec![smoothing_report(128)?])
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "operator oracle agreement", budget: Duration::from_secs(30), run: operator_oracle },
    Criterion { id: 2, title: "exact semigroup", budget: Duration::from_secs(5), run: semigroup },
    Criterion { id: 3, title: "duality", budget: Duration::from_secs(120), run: duality },
    Criterion { id: 4, title: "maximum principle and mean conservation", budget: Duration::from_secs(300), run: invariants },
    // No runtime is stated for this one; ten minutes keeps it laptop sized.
    Criterion { id: 5, title: "dual L1 contraction", budget: Duration::from_secs(600), run: l1 },
    Criterion { id: 6, title: "Hölder estimators", budget: Duration::from_secs(60), run: estimators },
    Criterion { id: 7, title: "class machinery", budget: Duration::from_secs(60), run: class_machinery },
    Criterion { id: 8, title: "class evolution", budget: Duration::from_secs(180), run: class_evolution },
    Criterion { id: 9, title: "SQG regression", budget: Duration::from_secs(600), run: sqg },
    Criterion { id: 10, title: "smoothing scaling", budget: Duration::from_secs(300), run: smoothing },
];

fn summary(reports: &[VerificationReport]) -> (usize, usize, Vec<String>) {
    let mut pass = 0;
    let mut failures = Vec::new();
    for r in reports {
        for v in &r.verdicts {
            match v.outcome {
                Outcome::Pass => pass += 1,
                Outcome::Fail => failures.push(format!("{} :: {} = {:?} ({})", r.scenario, v.name, v.value, v.detail)),
                Outcome::NotApplicable => {}
            }
        }
    }
    (pass, failures.len(), failures)
}

fn main() -> ExitCode {
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let over_budget = elapsed > c.budget;
        let (ok, detail, extra) = match &result {
            Ok(reports) => {
                let (pass, fail, failures) = summary(reports);
                let ok = fail == 0 && pass > 0 && !over_budget;
                (ok, format!("{pass} verdicts passed, {fail} failed"), failures)
            }
            Err(e) => (false, format!("error: {e}"), Vec::new()),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {:<40} {:>7.1}s / {:>4}s  {}{}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail,
            if over_budget { "  over budget" } else { "" },
        );
        for f in extra {
            println!("      {f}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
