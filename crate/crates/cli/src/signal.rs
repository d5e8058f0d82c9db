use crate::error::{CliError, CliResult};
use fracfilt::fracops::SampledSignal;
use std::io::{Read, Write};
use std::path::Path;

/// Largest relative deviation of a sample step from the mean step.
pub const SPACING_TOLERANCE: f64 = 1e-9;

/// Reads `x, value` rows (header required, further columns ignored).
pub fn parse_columns<R: Read>(reader: R) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Io(format!("line {line}: {e}")))?;
        let field = |k: usize, name: &str| -> CliResult<f64> {
            let s = rec.get(k).ok_or_else(|| CliError::Validation(format!("line {line}: missing {name} column")))?;
            s.parse().map_err(|_| CliError::Validation(format!("line {line}: '{s}' is not a number")))
        };
        rows.push((field(0, "x")?, field(1, "value")?));
    }
    Ok(rows)
}

/// Checks uniform spacing and builds the signal. A single sample needs
/// `delta` from the caller.
pub fn to_signal(rows: &[(f64, f64)], causal: bool, delta: Option<f64>) -> CliResult<SampledSignal> {
    let Some(&(x0, _)) = rows.first() else {
        return Err(CliError::Validation("input signal has no samples".into()));
    };
    if rows.iter().any(|r| !r.0.is_finite()) {
        return Err(CliError::Validation("x column must be finite".into()));
    }
    let step = if rows.len() == 1 {
        delta.ok_or_else(|| CliError::Validation("a single sample needs --delta".into()))?
    } else {
        (rows[rows.len() - 1].0 - x0) / (rows.len() - 1) as f64
    };
    if step.is_nan() || step <= 0.0 {
        return Err(CliError::Validation("x must be strictly increasing".into()));
    }
    for (i, w) in rows.windows(2).enumerate() {
        let d = w[1].0 - w[0].0;
        if (d - step).abs() > SPACING_TOLERANCE * step {
            return Err(CliError::Validation(format!(
                "non-uniform spacing between rows {} and {}: step {d} vs mean {step}",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(SampledSignal::new(x0, step, rows.iter().map(|r| r.1).collect(), causal)?)
}

pub fn read_signal(path: &Path, causal: bool, delta: Option<f64>) -> CliResult<SampledSignal> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
    to_signal(&parse_columns(file)?, causal, delta)
}

/// Filter output row; `value` is `None` at edge samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub value: Option<f64>,
}

/// `x,value,valid` with shortest round-trip formatting; invalid rows carry `NaN`.
pub fn write_rows<W: Write>(rows: &[Row], writer: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["x", "value", "valid"]).map_err(io)?;
    for r in rows {
        let (v, ok) = match r.value {
            Some(v) => (format!("{v}"), "1"),
            None => ("NaN".to_string(), "0"),
        };
        w.write_record([format!("{}", r.x), v, ok.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
