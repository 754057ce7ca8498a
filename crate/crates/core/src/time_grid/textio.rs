//! Line-oriented text format for step-sequence grids.
//!
//! The first line holds the resolution exponent; every following line is one
//! set's evaluation times as whitespace-separated tick counts.  Round trips
//! are bit exact because only integers are written.

use super::{Resolution, StepSequence, TimeGridError};

/// Render sequences in the grid text format.
pub fn write_grid(sequences: &[StepSequence], resolution: Resolution) -> String {
    let mut out = format!("resolution_exponent {}\n", resolution.exponent());
    for seq in sequences {
        let line: Vec<String> = seq
            .times
            .iter()
            .map(|t| {
                let shift = t.resolution().exponent() - resolution.exponent();
                assert!(shift >= 0, "sequence finer than file resolution");
                (t.ticks() << shift as u32).to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the grid text format back into sequences.
pub fn parse_grid(text: &str) -> Result<(Vec<StepSequence>, Resolution), TimeGridError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| TimeGridError::Parse("empty grid file".into()))?;
    let exponent = header
        .strip_prefix("resolution_exponent")
        .and_then(|rest| rest.trim().parse::<i32>().ok())
        .ok_or_else(|| TimeGridError::Parse(format!("bad header line: {header:?}")))?;
    let resolution = Resolution::new(exponent);

    let mut sequences = Vec::new();
    for (set_id, line) in lines.enumerate() {
        let ticks: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse::<i64>).collect();
        let ticks = ticks.map_err(|e| TimeGridError::Parse(format!("set {set_id} line: {e}")))?;
        sequences.push(StepSequence::from_ticks(set_id, &ticks, resolution));
    }
    if sequences.is_empty() {
        return Err(TimeGridError::Parse("no sequences in grid file".into()));
    }
    Ok((sequences, resolution))
}
