//! Acceptance run: every criterion once under the default validation seed,
//! one report line each, plus negative controls for the busy-cycle check.
//! Exits non-zero when a criterion fails or a control is not rejected.

use std::process::ExitCode;

use proxmatch::exact::LOG_BOUND_GUARD;
use proxmatch::experiments::validate::*;
use proxmatch::experiments::DEFAULT_VALIDATE_SEED;
use proxmatch::line::{busy_cycle_pdf, BusyCycleParams, LineStats, ReferenceSamples};

/// Tolerances the criteria are held to. A change here is a change of the
/// acceptance contract.
fn pinned_tolerances() -> Vec<String> {
    let mut bad = Vec::new();
    let mut pin = |name: &str, ok: bool| {
        if !ok {
            bad.push(name.to_string());
        }
    };
    pin("ALPHA", ALPHA == 0.01);
    pin("SIGMA_SLACK", SIGMA_SLACK == 3.0);
    pin("MIN_LINE_SAMPLES", MIN_LINE_SAMPLES == 100_000);
    pin("ORACLE_INSTANCES", ORACLE_INSTANCES == 100);
    pin("ORACLE_SIZES", ORACLE_SIZES == [2, 4, 6, 8]);
    pin("LOG_BOUND_GUARD", LOG_BOUND_GUARD == 1e-12);
    pin("TREND_TRIALS", TREND_TRIALS == [5000, 5000, 4000, 3000, 3000]);
    pin(
        "BOUND_CASES",
        BOUND_CASES
            == [
                (1.0, 2.0, 20_000.0, 20),
                (1.0, 4.0, 20_000.0, 20),
                (1.0, 10.0, 20_000.0, 20),
                (1.0, 100.0, 4_000.0, 20),
            ],
    );
    bad
}

/// Densities criterion 9 must reject.
fn negative_controls(stats: &LineStats, refs: &ReferenceSamples) -> Vec<(String, bool)> {
    let p = BusyCycleParams::new(stats.lambda, stats.mu).expect("reference rates");
    let (l, m) = (p.lambda(), p.mu());
    let rate = m - l;
    // e^{+(lambda+mu)t} in place of e^{-(lambda+mu)t}.
    let flipped = move |t: f64| {
        let base = busy_cycle_pdf(&p, t.max(f64::MIN_POSITIVE)).unwrap_or(m);
        base * (2.0 * (l + m) * t).min(700.0).exp()
    };
    let exponential = move |t: f64| rate * (-rate * t).exp();
    vec![
        (
            "sign-flipped exponent".to_string(),
            busy_cycle_law(stats, refs, &flipped).passed,
        ),
        (
            format!("exponential with the busy-cycle mean {}", 1.0 / rate),
            busy_cycle_law(stats, refs, &exponential).passed,
        ),
    ]
}

fn main() -> ExitCode {
    let seed = DEFAULT_VALIDATE_SEED;
    println!("acceptance run, seed {seed}");
    let mut ok = true;

    let bad = pinned_tolerances();
    println!(
        "[{}] pinned tolerances{}",
        if bad.is_empty() { "PASS" } else { "FAIL" },
        if bad.is_empty() { String::new() } else { format!(": changed {}", bad.join(", ")) }
    );
    ok &= bad.is_empty();

    let mut report = |c: CriterionOutcome| {
        println!("{}", c.line());
        ok &= c.passed;
    };
    report(exact_worked_example());
    report(measure_normalization());
    report(oracle_equivalence(seed));
    report(mean_and_log_bounds(seed));
    report(stability_and_optimality(seed));
    report(algorithm_i_equivalence(seed));
    report(rural_hospital_and_invariant_distance(seed));
    report(unbalanced_market_bound(seed));
    let line = reference_line_run(seed);
    match &line {
        Ok((stats, refs)) => {
            report(busy_cycle_law_default(stats, refs));
            report(wave_geometry(stats));
            report(sandwich(stats));
        }
        Err(e) => {
            for (id, name) in CRITERIA.iter().filter(|c| (9..=11).contains(&c.0)) {
                report(CriterionOutcome {
                    id: *id,
                    name,
                    passed: false,
                    measured: format!("reference line run failed: {e}"),
                    threshold: "runs without error".into(),
                    seconds: 0.0,
                });
            }
        }
    }
    report(mean_distance_bounds(seed));
    report(hypercube_trends(seed));

    if let Ok((stats, refs)) = &line {
        for (name, accepted) in negative_controls(stats, refs) {
            println!(
                "[{}] negative control, criterion 9 with {name}: {}",
                if accepted { "FAIL" } else { "PASS" },
                if accepted { "accepted" } else { "rejected" }
            );
            ok &= !accepted;
        }
    }

    println!("acceptance {}", if ok { "passed" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
