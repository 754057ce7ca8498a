//! Acceptance gates, one test per criterion.  Each prints a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use multirate::harness::{self, Problem, RunConfig, RunMode};
use multirate::verify::{checks, golden};

fn gate(criterion: &str, detail: String, pass: bool) {
    println!(
        "ACCEPTANCE {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_golden_coefficient_tables() {
    let start = std::time::Instant::now();
    let result = golden::check_golden_tables();
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(count) => gate(
            "1 (golden tables)",
            format!("{count} table generations match exactly in {elapsed:.3}s"),
            elapsed < 1.0,
        ),
        Err(msg) => gate("1 (golden tables)", msg, false),
    }
}

#[test]
fn criterion_2_volume_identity() {
    let result = checks::check_volume_identity(500, 0xC2);
    match result {
        Ok(n) => gate(
            "2 (volume identity)",
            format!("{n} random grids, orders 2-6, exact"),
            true,
        ),
        Err(msg) => gate("2 (volume identity)", msg, false),
    }
}

#[test]
fn criterion_3_consistency_monomials() {
    let result = checks::check_consistency_monomials(500, 0xC3);
    match result {
        Ok(n) => gate(
            "3 (consistency monomials)",
            format!("{n} random grids, all mixed powers below the order, exact"),
            true,
        ),
        Err(msg) => gate("3 (consistency monomials)", msg, false),
    }
}

#[test]
fn criterion_4_conservation_at_roundoff() {
    let mut config = RunConfig::defaults(Problem::Wave);
    config.order = 4;
    config.cfl_threshold = 2f64.powi(-12);
    let start = std::time::Instant::now();
    let out = harness::run_evolution(&config).expect("wave evolution");
    let elapsed = start.elapsed().as_secs_f64();
    let drift = out
        .report
        .max_rel_drift
        .expect("synchronized samples exist");
    gate(
        "4 (conservation)",
        format!(
            "16x10 order-4 wave to t=1/2: relative drift {drift:.3e} over {} samples in {elapsed:.2}s",
            out.report.conservation_trace.len()
        ),
        drift <= 1e-11,
    );
}

#[test]
fn criterion_5_convergence_order() {
    // thresholds span a factor 8; points within 10x of each sweep's
    // smallest error sit on the f64 floor and are excluded from the fit
    let thresholds: Vec<f64> = ["2^-14", "2^-13", "3/16384", "2^-12", "3/8192", "2^-11"]
        .iter()
        .map(|s| harness::parse_threshold(s).unwrap())
        .collect();
    let base = RunConfig::defaults(Problem::Bump);
    let start = std::time::Instant::now();
    let rows = harness::run_convergence(&base, &[4, 5, 6], &thresholds).expect("sweep");
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE 5: sweep of {} runs in {elapsed:.1}s",
        rows.len()
    );
    let mut all_pass = true;
    let mut details = Vec::new();
    for order in [4usize, 5, 6] {
        let slope = rows
            .iter()
            .find(|r| r.order == order)
            .map(|r| r.resolved_slope)
            .unwrap();
        let diverged = rows
            .iter()
            .filter(|r| r.order == order && !r.linf_error.is_finite())
            .count();
        let pass = (slope - order as f64).abs() <= 0.5;
        all_pass &= pass;
        details.push(format!(
            "order {order}: slope {slope:.2}{} ({})",
            if diverged > 0 {
                format!(", {diverged} diverged runs")
            } else {
                String::new()
            },
            if pass { "ok" } else { "out of range" }
        ));
        for r in rows.iter().filter(|r| r.order == order) {
            println!(
                "  order {} threshold {:.3e}: error {:.3e}",
                r.order, r.cfl_threshold, r.linf_error
            );
        }
    }
    // The order-6 gate is expected to fail on this problem in f64: the
    // sixth-order error signal rises above the double-precision floor
    // (about 3e-15 of roundoff accumulation plus spatial truncation)
    // only at steps beyond the sixth-order stability edge of this
    // discretization (measured: about 4e-15 of signal at the 2^-13
    // snapped step, instability from the 2^-12 snapped step), so no
    // factor-8 threshold window exposes an asymptotic sixth-order
    // slope; only the floor and the marginal-stability transition are
    // measurable.
    gate("5 (convergence order)", details.join("; "), all_pass);
}

#[test]
fn criterion_6_step_count_ratio() {
    let mut config = RunConfig::defaults(Problem::Bump);
    config.order = 5;
    config.cfl_threshold = 2f64.powi(-12);
    let start = std::time::Instant::now();
    let cmp = harness::run_speed(&config).expect("speed comparison");
    let elapsed = start.elapsed().as_secs_f64();
    let ratio = cmp.step_ratio_gts_over_lts;
    gate(
        "6 (step-count ratio)",
        format!(
            "order-5 bump at 2^-12: global/local total steps {}/{} = {ratio:.3} in {elapsed:.2}s",
            cmp.gts.total_steps, cmp.lts.total_steps
        ),
        (1.4..=1.8).contains(&ratio),
    );
}

#[test]
fn criterion_7_worked_example() {
    match checks::check_worked_example() {
        Ok(_) => gate(
            "7 (worked example)",
            "2:1 second-order rules exact; scheduler increments match hand assembly to 1e-14"
                .to_string(),
            true,
        ),
        Err(msg) => gate("7 (worked example)", msg, false),
    }
}

#[test]
fn criterion_8_property_suites() {
    let mut detail = Vec::new();
    let mut pass = true;
    let mut run = |name: &str, r: Result<usize, String>| match r {
        Ok(n) => detail.push(format!("{name} x{n}")),
        Err(msg) => {
            pass = false;
            detail.push(format!("{name} FAILED: {msg}"));
        }
    };
    run(
        "partition-of-unity",
        checks::check_partition_of_unity(1000, 0x81),
    );
    run("ab-sum", checks::check_ab_coefficient_sum(1000, 0x82));
    run("beta-entry-sum", checks::check_beta_entry_sum(1000, 0x83));
    run(
        "translation-invariance",
        checks::check_translation_invariance(1000, 0x84),
    );
    run(
        "scaling-covariance",
        checks::check_scaling_covariance(1000, 0x85),
    );
    run(
        "two-set-collapse",
        checks::check_two_set_equivalence(1000, 0x86),
    );
    gate("8 (property suites)", detail.join(", "), pass);
}

#[test]
fn gts_equivalence_surfaced_at_run_level() {
    // supporting invariant: the constant-step local mode and the global
    // mode take identical step sequences and agree to 1e-14 relative
    let mut config = RunConfig::defaults(Problem::Wave);
    config.order = 4;
    config.elements = 8;
    config.nodes_per_element = 6;
    config.cfl_threshold = 2f64.powi(-10);
    config.t_end_rational = (1, 8);
    config.initial_step_exponent = -20;
    config.mode = RunMode::Gts;
    let gts = harness::run_evolution(&config).expect("gts run");
    config.mode = RunMode::LtsConstant;
    let cst = harness::run_evolution(&config).expect("constant-step run");
    assert_eq!(gts.report.steps_per_set, cst.report.steps_per_set);
    for (a, b) in gts
        .final_states
        .iter()
        .flatten()
        .zip(cst.final_states.iter().flatten())
    {
        assert!(
            (a - b).abs() <= 1e-14 * b.abs().max(1.0),
            "trajectories diverged: {a} vs {b}"
        );
    }
}
