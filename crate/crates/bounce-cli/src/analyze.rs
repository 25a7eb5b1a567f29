//! The `analyze` subcommand: aggregate one or more trace files into a mean
//! best-value curve with the standard error of the mean per evaluation
//! index.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;

use crate::trace::{self, TraceRow};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Trace CSV files produced by `run`.
    #[arg(required = true)]
    pub traces: Vec<PathBuf>,
    /// Summary CSV path (stdout if omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub eval: usize,
    pub runs: usize,
    pub mean_best: f64,
    pub sem: f64,
}

/// Groups rows into runs by (file, seed), verifies each run's best-value
/// column is non-increasing, and aggregates per evaluation index.
pub fn summarize(traces: &[(PathBuf, Vec<TraceRow>)]) -> anyhow::Result<Vec<SummaryRow>> {
    anyhow::ensure!(!traces.is_empty(), "need at least one trace");
    let mut runs: Vec<Vec<f64>> = Vec::new();
    for (path, rows) in traces {
        let mut by_seed: BTreeMap<u64, Vec<&TraceRow>> = BTreeMap::new();
        for row in rows {
            by_seed.entry(row.seed).or_default().push(row);
        }
        for (seed, mut rows) in by_seed {
            rows.sort_by_key(|r| r.eval);
            for (expected, row) in rows.iter().enumerate() {
                anyhow::ensure!(
                    row.eval == expected,
                    "{} seed {seed}: evaluation indices are not contiguous",
                    path.display()
                );
            }
            let best: Vec<f64> = rows.iter().map(|r| r.best_value).collect();
            for pair in best.windows(2) {
                anyhow::ensure!(
                    pair[1] <= pair[0],
                    "{} seed {seed}: best_value increases along the trace",
                    path.display()
                );
            }
            runs.push(best);
        }
    }
    let horizon = runs.iter().map(Vec::len).max().unwrap_or(0);
    let mut summary = Vec::with_capacity(horizon);
    for eval in 0..horizon {
        let values: Vec<f64> = runs.iter().filter_map(|r| r.get(eval).copied()).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sem = if values.len() < 2 {
            0.0
        } else {
            let var =
                values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        };
        summary.push(SummaryRow {
            eval,
            runs: values.len(),
            mean_best: mean,
            sem,
        });
    }
    Ok(summary)
}

pub fn render(summary: &[SummaryRow]) -> String {
    let mut out = String::from("eval,runs,mean_best,sem\n");
    for row in summary {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.eval,
            row.runs,
            trace::format_float(row.mean_best),
            trace::format_float(row.sem)
        ));
    }
    out
}

pub fn execute(args: AnalyzeArgs) -> anyhow::Result<String> {
    let mut traces = Vec::with_capacity(args.traces.len());
    for path in &args.traces {
        let rows = trace::read_trace(path)?;
        traces.push((path.clone(), rows));
    }
    let summary = summarize(&traces)?;
    let rendered = render(&summary);
    if let Some(path) = &args.output {
        std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
        Ok(format!("wrote {}\n", path.display()))
    } else {
        Ok(rendered)
    }
}
