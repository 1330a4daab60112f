//! TrialSummary CSV, report JSON, and the run metadata embedded in both.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use empo_core::model_select::EmpiricalOVerdict;
use empo_core::montecarlo::TrialSummary;
use empo_core::polyfit::{DataPoint, RegressionReport};

pub const CSV_HEADER: [&str; 6] = ["p", "n", "trials", "mean_c", "sd_c", "cv_c"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub generator: String,
    pub master_seed: Option<u64>,
    pub config: serde_json::Value,
    /// Omitted under `--no-timestamp`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<String>,
}

impl RunMetadata {
    pub fn new(master_seed: Option<u64>, config: serde_json::Value, timestamp: bool) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            generator: empo_core::distributions::ALGORITHM_ID.to_string(),
            master_seed,
            config,
            timestamp: timestamp
                .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        }
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# tool_version: {}", self.tool_version),
            format!("# generator: {}", self.generator),
            format!(
                "# master_seed: {}",
                self.master_seed
                    .map_or("none".to_string(), |s| s.to_string())
            ),
            format!("# config: {}", self.config),
        ];
        if let Some(ts) = &self.timestamp {
            lines.push(format!("# timestamp: {ts}"));
        }
        lines
    }
}

pub fn write_csv<W: Write>(
    mut out: W,
    rows: &[TrialSummary],
    metadata: &RunMetadata,
) -> Result<()> {
    for line in metadata.comment_lines() {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{}", CSV_HEADER.join(","))?;
    for r in rows {
        let cv = r.cv_c.map_or(String::new(), |v| v.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.p, r.n, r.trials, r.mean_c, r.sd_c, cv
        )?;
    }
    Ok(())
}

pub fn csv_string(rows: &[TrialSummary], metadata: &RunMetadata) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, metadata).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Reads a TrialSummary CSV. `#` lines are skipped; errors name the line.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialSummary>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().context("reading CSV header")?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        bail!("missing header: expected '{}'", CSV_HEADER.join(","));
    }
    let mut index = [0usize; 6];
    for (slot, name) in index.iter_mut().zip(CSV_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("missing header column '{name}'"))?;
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            anyhow!("line {line}: {e}")
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |k: usize| record.get(index[k]).unwrap_or("");
        let num = |k: usize| -> Result<f64> {
            field(k).parse::<f64>().map_err(|_| {
                anyhow!(
                    "line {line}: column '{}' is not a number: '{}'",
                    CSV_HEADER[k],
                    field(k)
                )
            })
        };
        let int = |k: usize| -> Result<usize> {
            field(k).parse::<usize>().map_err(|_| {
                anyhow!(
                    "line {line}: column '{}' is not an integer: '{}'",
                    CSV_HEADER[k],
                    field(k)
                )
            })
        };
        let cv_c = if field(5).is_empty() {
            None
        } else {
            Some(num(5)?)
        };
        rows.push(TrialSummary {
            p: num(0)?,
            n: int(1)?,
            trials: int(2)?,
            mean_c: num(3)?,
            sd_c: num(4)?,
            cv_c,
        });
    }
    if rows.is_empty() {
        bail!("no data rows");
    }
    Ok(rows)
}

pub fn read_csv_file(path: &std::path::Path) -> Result<Vec<TrialSummary>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_csv(file).with_context(|| format!("reading {}", path.display()))
}

/// `(p, mean_c)` regression points.
pub fn to_points(rows: &[TrialSummary]) -> Vec<DataPoint> {
    rows.iter().map(|r| DataPoint::new(r.p, r.mean_c)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    #[serde(flatten)]
    pub report: RegressionReport,
    pub metadata: RunMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    #[serde(flatten)]
    pub verdict: EmpiricalOVerdict,
    pub metadata: RunMetadata,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}
