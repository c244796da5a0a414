use std::collections::BTreeMap;

use lmmaes::problems::SingleKind;
use serde::{Deserialize, Serialize};

use crate::config::{Mode, ProblemRef};
use crate::error::{CliError, Result};
use crate::records::{LogHeader, RunRecord};

/// Final fitness above which a Rosenbrock run counts as trapped in the local optimum.
pub const ROSENBROCK_TRAPPED_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    Quality,
    Gap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub evaluations: u64,
    pub median: f64,
    /// Runs contributing to this grid point.
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SummaryOptions {
    /// Defaults to the gap in multi mode and to the quality column otherwise.
    pub column: Option<Column>,
    /// Drops single-objective runs whose final value exceeds this. Defaults to
    /// [`ROSENBROCK_TRAPPED_THRESHOLD`] for Rosenbrock and to no filtering otherwise.
    pub trapped_threshold: Option<f64>,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

fn value(record: &RunRecord, column: Column) -> Result<f64> {
    match column {
        Column::Quality => Ok(record.quality),
        Column::Gap => record.gap.ok_or_else(|| CliError::usage("gap column is empty in single-mode logs")),
    }
}

/// Median trajectory over the union of all logged evaluation counts.
///
/// A run contributes from its first record on and holds its last value
/// between and after its records.
pub fn summarize(header: Option<&LogHeader>, records: &[RunRecord], options: SummaryOptions) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(CliError::usage("nothing to summarize"));
    }
    let mode = header.map(|h| h.config.mode);
    let column = options.column.unwrap_or(if mode == Some(Mode::Multi) { Column::Gap } else { Column::Quality });
    let threshold = options.trapped_threshold.or(match header.map(|h| h.config.problem) {
        Some(ProblemRef::Single(SingleKind::Rosenbrock)) => Some(ROSENBROCK_TRAPPED_THRESHOLD),
        _ => None,
    });

    // group by (run, seed); merged files may repeat run ids with different seeds
    let mut runs: BTreeMap<(usize, u64), Vec<(u64, f64)>> = BTreeMap::new();
    for r in records {
        runs.entry((r.run, r.seed)).or_default().push((r.evaluations, value(r, column)?));
    }
    for trace in runs.values_mut() {
        trace.sort_by_key(|&(e, _)| e);
    }
    if let (Some(limit), false) = (threshold, mode == Some(Mode::Multi)) {
        runs.retain(|_, trace| trace.last().is_some_and(|&(_, v)| v <= limit));
        if runs.is_empty() {
            return Err(CliError::usage("every run was filtered as trapped"));
        }
    }
    let mut grid: Vec<u64> = runs.values().flatten().map(|&(e, _)| e).collect();
    grid.sort_unstable();
    grid.dedup();

    let traces: Vec<&Vec<(u64, f64)>> = runs.values().collect();
    let mut cursors = vec![0usize; traces.len()];
    let mut rows = Vec::with_capacity(grid.len());
    let mut current = Vec::with_capacity(traces.len());
    for &e in &grid {
        current.clear();
        for (trace, cursor) in traces.iter().zip(cursors.iter_mut()) {
            while *cursor < trace.len() && trace[*cursor].0 <= e {
                *cursor += 1;
            }
            if *cursor > 0 {
                current.push(trace[*cursor - 1].1);
            }
        }
        rows.push(SummaryRow { evaluations: e, median: median(&mut current), runs: current.len() });
    }
    Ok(rows)
}

pub fn write_summary<W: std::io::Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| CliError::io("summary output", e))?;
    Ok(())
}
