//! JSONL reading and merging, CSV export of codimension tables.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{SuiteReport, SCHEMA};
use crate::error::{Error, Result};

/// CSV of the codimension suites: one row per instance with the measured
/// value, the reference window and stability. Other suites give just the
/// index and verdict.
pub fn codim_csv<W: Write>(report: &SuiteReport, w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Resource(format!("csv: {e}"));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["suite", "index", "k", "q", "measured", "gcd_deg", "reference", "stable", "pass"])
        .map_err(io)?;
    for r in &report.records {
        let field = |v: &Value, key: &str| match &v[key] {
            Value::Null => String::new(),
            x => x.to_string(),
        };
        out.write_record([
            report.suite.as_str().to_string(),
            r.index.to_string(),
            field(&r.input, "k"),
            field(&r.input, "q"),
            field(&r.output, "measured"),
            field(&r.output, "gcd_deg"),
            field(&r.output, "reference"),
            field(&r.output, "stable"),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(|e| Error::Resource(format!("csv: {e}")))
}

/// Parses a JSONL report into its lines.
pub fn read_jsonl(path: &Path) -> Result<Vec<Value>> {
    let file = File::open(path).map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
    BufReader::new(file)
        .lines()
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|l| {
            let l = l.map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&l).map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedSuite {
    pub suite: String,
    pub passed: u64,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedSummary {
    pub schema: String,
    pub suites: Vec<MergedSuite>,
    pub passed: u64,
    pub total: u64,
}

impl MergedSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

/// Collects the summary objects of several reports, in input order.
pub fn merge_reports(reports: &[Vec<Value>]) -> Result<MergedSummary> {
    let mut suites = Vec::new();
    for lines in reports {
        for v in lines.iter().filter(|v| v["type"] == "summary") {
            if v["schema"] != SCHEMA {
                return Err(Error::Parameter(format!("unsupported report schema {}", v["schema"])));
            }
            suites.push(MergedSuite {
                suite: v["suite"].as_str().unwrap_or_default().to_string(),
                passed: v["passed"].as_u64().unwrap_or(0),
                total: v["total"].as_u64().unwrap_or(0),
            });
        }
    }
    if suites.is_empty() {
        return Err(Error::Parameter("no summary objects found".into()));
    }
    Ok(MergedSummary {
        schema: SCHEMA.into(),
        passed: suites.iter().map(|s| s.passed).sum(),
        total: suites.iter().map(|s| s.total).sum(),
        suites,
    })
}
