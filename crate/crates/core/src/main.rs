//! Command-line front end: coefficient dumps, evolutions, convergence and
//! conservation studies, stepping-cost comparisons, and the verification
//! gates.

use clap::{Args, Parser, Subcommand};
use multirate::coefficients::{accumulate_full_step, BetaTable, Rational};
use multirate::harness::{self, io, Problem, RunConfig};
use multirate::time_grid::{parse_grid, UnionGrid};
use multirate::verify::{checks, golden};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "multirate",
    about = "Conservative local time-stepping Adams-Bashforth integration \
             with a 1D discontinuous Galerkin Burgers solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coupling coefficient tables for a step pattern.
    Coeffs(CoeffsArgs),
    /// Run one evolution and write snapshots, the step log, and a report.
    Evolve(RunArgs),
    /// Sweep CFL thresholds and orders on the bump problem and fit slopes.
    Convergence(ConvergenceArgs),
    /// Evolve the periodic wave and trace the conserved integral.
    Conserve(RunArgs),
    /// Compare step and evaluation counts between stepping modes.
    Speed(RunArgs),
    /// Run the verification gates; exits nonzero on any failure.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    /// Integration order k.
    #[arg(long)]
    order: usize,
    /// Builtin pattern (steady, dec, inc, togts-dec, togts-inc) or a grid
    /// file: `resolution_exponent E` header, one line of ticks per set.
    #[arg(long)]
    pattern: String,
    /// Restrict to one set.
    #[arg(long)]
    set: Option<usize>,
    /// Restrict to steps starting at this tick.
    #[arg(long)]
    start: Option<i64>,
    /// Machine-readable records: step-id, index tuple, numerator, denominator.
    #[arg(long)]
    records: bool,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Key-value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// wave | bump
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    elements: Option<usize>,
    /// Nodes per element.
    #[arg(long)]
    nodes: Option<usize>,
    /// gts | lts | lts-constant
    #[arg(long)]
    mode: Option<String>,
    /// Maximum allowed |u| * dt (accepts 2^-12, fractions, or floats).
    #[arg(long)]
    cfl_threshold: Option<String>,
    #[arg(long)]
    t0: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// Initial step is 2^EXP time units.
    #[arg(long)]
    initial_step_exponent: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated list of orders.
    #[arg(long, default_value = "4,5,6")]
    orders: String,
    /// Comma-separated thresholds (2^-13 style accepted).
    #[arg(long, default_value = "2^-14,2^-13,3/16384,2^-12,3/8192,2^-11")]
    thresholds: String,
}

#[derive(Args)]
struct SelftestArgs {
    /// Reduced case counts for a quick gate.
    #[arg(long)]
    fast: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::Conserve(args) => cmd_conserve(args),
        Command::Speed(args) => cmd_speed(args),
        Command::Selftest(args) => return cmd_selftest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load_pattern(pattern: &str) -> Result<UnionGrid, String> {
    const BUILTINS: [&str; 5] = ["steady", "dec", "inc", "togts-dec", "togts-inc"];
    if BUILTINS.contains(&pattern) {
        return Ok(golden::pattern_grid(pattern));
    }
    let text = std::fs::read_to_string(pattern)
        .map_err(|e| format!("cannot read pattern {pattern:?}: {e}"))?;
    let (sequences, _res) = parse_grid(&text).map_err(|e| e.to_string())?;
    UnionGrid::merge(&sequences).map_err(|e| e.to_string())
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<(), String> {
    if !(1..=8).contains(&args.order) {
        return Err(format!("order {} outside 1..=8", args.order));
    }
    let grid = load_pattern(&args.pattern)?;
    let builtin =
        ["steady", "dec", "inc", "togts-dec", "togts-inc"].contains(&args.pattern.as_str());
    let mut printed = 0;
    for set in 0..grid.num_sets() {
        if args.set.is_some_and(|s| s != set) {
            continue;
        }
        let ticks = grid.set_ticks(set).map_err(|e| e.to_string())?;
        for m in 0..ticks.len().saturating_sub(1) {
            // builtin patterns default to the transition window
            if let Some(start) = args.start {
                if ticks[m] != start {
                    continue;
                }
            } else if builtin && !(0..=5).contains(&ticks[m]) {
                continue;
            }
            let table: Result<BetaTable<Rational>, _> =
                accumulate_full_step(&grid, args.order, set, m);
            let Ok(table) = table else { continue };
            if args.records {
                print!("{}", io::format_beta_records(&table));
            } else if grid.num_sets() == 2 {
                let label = format!(
                    "set {set} step {m}: {} -> {} (order {})",
                    ticks[m],
                    ticks[m + 1],
                    args.order
                );
                println!("{}", io::format_beta_table(&table, &label));
            } else {
                print!("{}", io::format_beta_records(&table));
            }
            printed += 1;
        }
    }
    if printed == 0 {
        return Err("no step with sufficient history matched the filters".into());
    }
    Ok(())
}

fn build_config(args: &RunArgs, default_problem: Problem) -> Result<RunConfig, String> {
    let problem = match args.problem.as_deref() {
        None => default_problem,
        Some("wave") => Problem::Wave,
        Some("bump") => Problem::Bump,
        Some(other) => return Err(format!("unknown problem {other:?}")),
    };
    let mut config = RunConfig::defaults(problem);
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        config = harness::parse_config_text(&text, config).map_err(|e| e.to_string())?;
    }
    let mut map = BTreeMap::new();
    if args.problem.is_some() {
        map.insert(
            "problem".to_string(),
            format!("{:?}", problem).to_lowercase(),
        );
    }
    if let Some(v) = args.order {
        map.insert("order".into(), v.to_string());
    }
    if let Some(v) = args.elements {
        map.insert("elements".into(), v.to_string());
    }
    if let Some(v) = args.nodes {
        map.insert("nodes".into(), v.to_string());
    }
    if let Some(v) = &args.mode {
        map.insert("mode".into(), v.clone());
    }
    if let Some(v) = &args.cfl_threshold {
        map.insert("cfl_threshold".into(), v.clone());
    }
    if let Some(v) = &args.t0 {
        map.insert("t0".into(), v.clone());
    }
    if let Some(v) = &args.t_end {
        map.insert("t_end".into(), v.clone());
    }
    if let Some(v) = args.initial_step_exponent {
        map.insert("initial_step_exponent".into(), v.to_string());
    }
    if let Some(v) = args.seed {
        map.insert("seed".into(), v.to_string());
    }
    if let Some(v) = &args.out {
        map.insert("out_dir".into(), v.display().to_string());
    }
    let mut config = harness::apply_options(config, &map).map_err(|e| e.to_string())?;
    config.record_steps = true;
    Ok(config)
}

fn cmd_evolve(args: RunArgs) -> Result<(), String> {
    let config = build_config(&args, Problem::Wave)?;
    std::fs::create_dir_all(&config.out_dir).map_err(|e| e.to_string())?;
    let out = harness::run_evolution(&config).map_err(|e| e.to_string())?;
    io::write_snapshot_csv(
        &config.out_dir.join("snapshot.csv"),
        &out.mesh,
        &out.final_states,
    )
    .map_err(|e| e.to_string())?;
    io::write_steps_csv(&config.out_dir.join("steps.csv"), &out.step_log)
        .map_err(|e| e.to_string())?;
    io::write_report_txt(&config.out_dir.join("report.txt"), &out).map_err(|e| e.to_string())?;
    let r = &out.report;
    println!(
        "mode {} order {} steps {} volume_evals {} coupling_evals {} wall {:.3}s",
        r.mode, r.order, r.total_steps, r.volume_evals, r.coupling_evals, r.wall_seconds
    );
    if let Some(e) = r.final_linf_error {
        println!("final_linf_error {e:e}");
    }
    if let Some(d) = r.max_rel_drift {
        println!("max_rel_drift {d:e}");
    }
    println!("wrote {}", config.out_dir.display());
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| format!("bad {what}: {p:?}"))
        })
        .collect()
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<(), String> {
    let mut config = build_config(&args.run, Problem::Bump)?;
    config.problem = Problem::Bump;
    let orders: Vec<usize> = parse_list(&args.orders, "order")?;
    let thresholds: Vec<f64> = args
        .thresholds
        .split(',')
        .map(|p| harness::parse_threshold(p).ok_or_else(|| format!("bad threshold {p:?}")))
        .collect::<Result<_, _>>()?;
    std::fs::create_dir_all(&config.out_dir).map_err(|e| e.to_string())?;
    let rows =
        harness::run_convergence(&config, &orders, &thresholds).map_err(|e| e.to_string())?;
    let path = config.out_dir.join("convergence.csv");
    io::write_convergence_csv(&path, &rows).map_err(|e| e.to_string())?;
    println!("order,cfl_threshold,linf_error,fitted_slope,resolved_slope");
    for r in &rows {
        println!(
            "{},{:e},{:e},{:.3},{:.3}",
            r.order, r.cfl_threshold, r.linf_error, r.fitted_slope, r.resolved_slope
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_conserve(args: RunArgs) -> Result<(), String> {
    let mut config = build_config(&args, Problem::Wave)?;
    if config.problem != Problem::Wave {
        return Err("conservation study runs the periodic wave problem".into());
    }
    config.record_steps = true;
    std::fs::create_dir_all(&config.out_dir).map_err(|e| e.to_string())?;
    let out = harness::run_evolution(&config).map_err(|e| e.to_string())?;
    let path = config.out_dir.join("conserve.csv");
    io::write_conservation_csv(&path, &out.report).map_err(|e| e.to_string())?;
    io::write_steps_csv(&config.out_dir.join("steps.csv"), &out.step_log)
        .map_err(|e| e.to_string())?;
    println!(
        "samples {} max_rel_drift {:e}",
        out.report.conservation_trace.len(),
        out.report.max_rel_drift.unwrap_or(0.0)
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_speed(args: RunArgs) -> Result<(), String> {
    let config = build_config(&args, Problem::Bump)?;
    std::fs::create_dir_all(&config.out_dir).map_err(|e| e.to_string())?;
    let cmp = harness::run_speed(&config).map_err(|e| e.to_string())?;
    let path = config.out_dir.join("speed.csv");
    io::write_speed_csv(&path, &cmp).map_err(|e| e.to_string())?;
    println!(
        "total steps: gts {} lts {} lts-constant {}",
        cmp.gts.total_steps, cmp.lts.total_steps, cmp.lts_constant.total_steps
    );
    println!("step ratio gts/lts {:.3}", cmp.step_ratio_gts_over_lts);
    println!("eval ratio gts/lts {:.3}", cmp.eval_ratio_gts_over_lts);
    println!(
        "wall ratio gts/lts {:.3} (informational)",
        cmp.wall_ratio_gts_over_lts
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_selftest(args: SelftestArgs) -> ExitCode {
    let n = |full: usize, fast: usize| if args.fast { fast } else { full };
    let mut failed = false;
    let mut gate = |name: &str, result: Result<usize, String>| match result {
        Ok(count) => println!("PASS {name} ({count} cases)"),
        Err(msg) => {
            failed = true;
            println!("FAIL {name}: {msg}");
        }
    };
    gate("golden-coefficient-tables", golden::check_golden_tables());
    gate(
        "partition-of-unity",
        checks::check_partition_of_unity(n(1000, 100), 11),
    );
    gate(
        "ab-coefficient-sum",
        checks::check_ab_coefficient_sum(n(1000, 100), 12),
    );
    gate(
        "beta-entry-sum",
        checks::check_beta_entry_sum(n(500, 50), 13),
    );
    gate(
        "volume-identity",
        checks::check_volume_identity(n(500, 50), 14),
    );
    gate(
        "consistency-monomials",
        checks::check_consistency_monomials(n(200, 20), 15),
    );
    gate(
        "translation-invariance",
        checks::check_translation_invariance(n(500, 50), 16),
    );
    gate(
        "scaling-covariance",
        checks::check_scaling_covariance(n(500, 50), 17),
    );
    gate(
        "two-set-collapse",
        checks::check_two_set_equivalence(n(500, 50), 18),
    );
    gate("float-vs-rational", checks::check_float_agreement());
    gate("worked-example", checks::check_worked_example());
    gate("wave-conservation", selftest_conservation(args.fast));
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn selftest_conservation(fast: bool) -> Result<usize, String> {
    let mut config = RunConfig::defaults(Problem::Wave);
    if fast {
        config.elements = 8;
        config.nodes_per_element = 6;
        config.order = 3;
        config.cfl_threshold = 2f64.powi(-9);
        config.t_end_rational = (1, 8);
        config.initial_step_exponent = -18;
    } else {
        config.order = 4;
        config.cfl_threshold = 2f64.powi(-12);
    }
    let out = harness::run_evolution(&config).map_err(|e| e.to_string())?;
    let drift = out.report.max_rel_drift.unwrap_or(f64::NAN);
    if drift <= 1e-11 {
        Ok(out.report.conservation_trace.len())
    } else {
        Err(format!("conserved integral drifted by {drift:e}"))
    }
}
