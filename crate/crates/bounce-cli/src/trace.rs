//! Trace CSV schema: one row per evaluation,
//! `seed,eval,batch,stage_dim,value,best_value,L_cont,L_comb,restarts`,
//! RFC-4180 quoting, reals with 17 significant digits.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use bounce::RunRecord;

pub const HEADER: &str = "seed,eval,batch,stage_dim,value,best_value,L_cont,L_comb,restarts";

/// 17 significant digits; round-trips every f64 deterministically.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180: quote fields containing commas, quotes, or line breaks;
/// embedded quotes are doubled.
pub fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') || raw.contains('\r') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

pub fn record_row(r: &RunRecord) -> String {
    let fields = [
        r.seed.to_string(),
        r.eval_index.to_string(),
        r.batch_index.to_string(),
        r.stage_dim.to_string(),
        format_float(r.value),
        format_float(r.best_value),
        format_float(r.l_cont),
        format_float(r.l_comb),
        r.restarts.to_string(),
    ];
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_traces(path: &Path, runs: &[Vec<RunRecord>]) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(file, "{HEADER}")?;
    for run in runs {
        for record in run {
            writeln!(file, "{}", record_row(record))?;
        }
    }
    Ok(())
}

/// A parsed trace row; only the columns `analyze` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub seed: u64,
    pub eval: usize,
    pub best_value: f64,
}

/// Minimal RFC-4180 line splitter (quotes and doubled quotes).
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if field.is_empty() => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut field)),
            _ => field.push(c),
        }
    }
    fields.push(field);
    fields
}

pub fn read_trace(path: &Path) -> anyhow::Result<Vec<TraceRow>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .with_context(|| format!("{}: empty trace", path.display()))?;
    anyhow::ensure!(
        header == HEADER,
        "{}: unexpected schema {header:?}",
        path.display()
    );
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_csv_line(line);
        anyhow::ensure!(
            fields.len() == 9,
            "{} line {}: expected 9 fields, got {}",
            path.display(),
            i + 2,
            fields.len()
        );
        let parse_err = || format!("{} line {}: malformed row", path.display(), i + 2);
        rows.push(TraceRow {
            seed: fields[0].parse().with_context(parse_err)?,
            eval: fields[1].parse().with_context(parse_err)?,
            best_value: fields[5].parse().with_context(parse_err)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_has_17_significant_digits() {
        let s = format_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_quoting_follows_rfc_4180() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn quoted_fields_parse_back() {
        let fields = split_csv_line("1,\"a,b\",\"say \"\"hi\"\"\",2");
        assert_eq!(fields, vec!["1", "a,b", "say \"hi\"", "2"]);
    }
}
