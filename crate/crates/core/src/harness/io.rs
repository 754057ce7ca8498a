//! Plain-text outputs: comma-separated tables with a header row, one file
//! per experiment, plus the step-pattern log format.

use super::{ConvergenceRow, RunOutput, RunReport, SpeedComparison};
use crate::dg_burgers::DgMesh;
use crate::integrator::StepLogEntry;
use std::io::Write;
use std::path::Path;

pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "order,cfl_threshold,linf_error,fitted_slope,resolved_slope"
    )?;
    for r in rows {
        writeln!(
            f,
            "{},{:e},{:e},{},{}",
            r.order, r.cfl_threshold, r.linf_error, r.fitted_slope, r.resolved_slope
        )?;
    }
    Ok(())
}

pub fn write_conservation_csv(path: &Path, report: &RunReport) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "time,integral,rel_drift")?;
    let c0 = report
        .conservation_trace
        .first()
        .map(|&(_, c)| c)
        .unwrap_or(0.0);
    for &(t, c) in &report.conservation_trace {
        writeln!(f, "{:e},{:e},{:e}", t, c, (c - c0).abs() / c0.abs())?;
    }
    Ok(())
}

pub fn write_speed_csv(path: &Path, cmp: &SpeedComparison) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "mode,total_steps,volume_evals,coupling_evals,min_step_ticks,wall_seconds"
    )?;
    for r in [&cmp.gts, &cmp.lts, &cmp.lts_constant] {
        writeln!(
            f,
            "{},{},{},{},{},{:e}",
            r.mode,
            r.total_steps,
            r.volume_evals,
            r.coupling_evals,
            r.min_step_ticks,
            r.wall_seconds
        )?;
    }
    writeln!(
        f,
        "# step_ratio_gts_over_lts,{}",
        cmp.step_ratio_gts_over_lts
    )?;
    writeln!(
        f,
        "# eval_ratio_gts_over_lts,{}",
        cmp.eval_ratio_gts_over_lts
    )?;
    writeln!(
        f,
        "# wall_ratio_gts_over_lts,{}",
        cmp.wall_ratio_gts_over_lts
    )?;
    Ok(())
}

/// Nodal snapshot: one record per (element, node coordinate, value).
pub fn write_snapshot_csv(path: &Path, mesh: &DgMesh, states: &[Vec<f64>]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "element,x,u")?;
    for (e, u) in states.iter().enumerate() {
        for (i, v) in u.iter().enumerate() {
            writeln!(f, "{},{:e},{:e}", e, mesh.node_x(e, i), v)?;
        }
    }
    Ok(())
}

/// Step-pattern log: one record per completed step, in ticks.
pub fn write_steps_csv(path: &Path, log: &[StepLogEntry]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "set,start_ticks,size_ticks")?;
    for e in log {
        writeln!(f, "{},{},{}", e.set, e.start_tick, e.size_ticks)?;
    }
    Ok(())
}

pub fn write_report_txt(path: &Path, out: &RunOutput) -> std::io::Result<()> {
    let r = &out.report;
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "mode {}", r.mode)?;
    writeln!(f, "order {}", r.order)?;
    writeln!(f, "cfl_threshold {:e}", r.cfl_threshold)?;
    if let Some(e) = r.final_linf_error {
        writeln!(f, "final_linf_error {:e}", e)?;
    }
    if let Some(d) = r.max_rel_drift {
        writeln!(f, "max_rel_drift {:e}", d)?;
    }
    writeln!(f, "total_steps {}", r.total_steps)?;
    writeln!(f, "volume_evals {}", r.volume_evals)?;
    writeln!(f, "coupling_evals {}", r.coupling_evals)?;
    writeln!(f, "min_step_ticks {}", r.min_step_ticks)?;
    writeln!(f, "wall_seconds {:e}", r.wall_seconds)?;
    writeln!(f, "steps_per_set {:?}", r.steps_per_set)?;
    Ok(())
}

use crate::coefficients::{format_rational, BetaTable, Rational, TableKind};

/// Render an accumulated table in the two-set layout: rows are the first
/// set's evaluation times, columns the second set's, exact fractions.
pub fn format_beta_table(table: &BetaTable<Rational>, label: &str) -> String {
    assert_eq!(table.num_sets(), 2, "layout is for two-set tables");
    let rows: Vec<i64> = table.windows[0].ticks.iter().rev().copied().collect();
    let cols: Vec<i64> = table.windows[1].ticks.iter().rev().copied().collect();
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header: Vec<String> = vec![String::new()];
    header.extend(cols.iter().map(|c| c.to_string()));
    cells.push(header);
    for &r in &rows {
        let mut line = vec![r.to_string()];
        for &c in &cols {
            let v = table
                .entry_at_ticks(&[r, c])
                .expect("window ticks are indexable");
            line.push(format_rational(&v));
        }
        cells.push(line);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|j| cells.iter().map(|row| row[j].len()).max().unwrap())
        .collect();
    let mut out = format!("# {label}\n");
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// One line per entry: step id, index tuple, numerator, denominator.
pub fn format_beta_records(table: &BetaTable<Rational>) -> String {
    let step_id = match &table.kind {
        TableKind::FullStep { set, step, .. } => format!("{set}.{step}"),
        TableKind::SmallStep { union_index, .. } => format!("u.{union_index}"),
    };
    let mut out = String::new();
    for (q, v) in table.entries() {
        let tuple: Vec<String> = q.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "{step_id} {} {} {}\n",
            tuple.join(","),
            v.numer(),
            v.denom()
        ));
    }
    out
}
