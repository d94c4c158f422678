//! Experiment configuration, deterministic instance generation, suite
//! execution and reporting.
//!
//! Instance i of a run uses a ChaCha8 stream seeded with `seed + i`, so a
//! report can be replayed instance by instance and suites can run in a
//! work pool without changing their output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::Schedule;
use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::check_p_power;

pub mod gen;
mod report;
mod solve;
mod suites;

pub use report::{codim_csv, merge_reports, read_jsonl, MergedSummary};
pub use solve::{solve_g2, solve_hp, G2Deck, G2Solution, HeisDeck, HpDeck, HpSolution};
pub use suites::{generate_instances, Instance};

pub const SCHEMA: &str = "unirigid.suite.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    PropAb,
    IdealWitness,
    CodimFormula,
    FrobeniusMono,
    GcdBounds,
    QsepCount,
    GroupLaws,
    G2Roundtrip,
    HeisRoundtrip,
    HpRoundtrip,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        SuiteName::PropAb,
        SuiteName::IdealWitness,
        SuiteName::CodimFormula,
        SuiteName::FrobeniusMono,
        SuiteName::GcdBounds,
        SuiteName::QsepCount,
        SuiteName::GroupLaws,
        SuiteName::G2Roundtrip,
        SuiteName::HeisRoundtrip,
        SuiteName::HpRoundtrip,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::PropAb => "prop-ab",
            SuiteName::IdealWitness => "ideal-witness",
            SuiteName::CodimFormula => "codim-formula",
            SuiteName::FrobeniusMono => "frobenius-mono",
            SuiteName::GcdBounds => "gcd-bounds",
            SuiteName::QsepCount => "qsep-count",
            SuiteName::GroupLaws => "group-laws",
            SuiteName::G2Roundtrip => "g2-roundtrip",
            SuiteName::HeisRoundtrip => "heis-roundtrip",
            SuiteName::HpRoundtrip => "hp-roundtrip",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = SuiteName::ALL.iter().map(|n| n.as_str()).collect();
            Error::Usage(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Everything a suite run depends on. Serialized verbatim into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub p: u32,
    pub d: u32,
    pub e: u64,
    /// Heisenberg rank for the group suites, maximal degree for qsep-count.
    pub m: usize,
    pub qs: Vec<u64>,
    /// Overrides the per-suite default schedule.
    pub schedule: Option<Schedule>,
    /// Codimensions k cycled through by the tail-model suites.
    pub ks: Vec<usize>,
    /// Constraint depth D; defaults to 2k+1.
    pub depth: Option<usize>,
    /// Frobenius exponents cycled through by frobenius-mono.
    pub ns: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub suites: Vec<SuiteName>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 3,
            d: 1,
            e: 3,
            m: 1,
            qs: vec![3, 9],
            schedule: None,
            ks: vec![0, 1, 2],
            depth: None,
            ns: vec![1, 2],
            trials: 20,
            seed: 1,
            suites: vec![],
        }
    }
}

impl ExperimentConfig {
    pub fn field(&self) -> Result<FqField> {
        FqField::new(self.p, self.d)
    }

    pub fn depth_for(&self, k: usize) -> usize {
        self.depth.unwrap_or(2 * k + 1)
    }

    /// General checks plus the hypotheses of the named suite.
    pub fn check_for(&self, suite: SuiteName) -> Result<()> {
        let f = self.field()?;
        check_p_power(self.e, &f)?;
        for &q in &self.qs {
            check_p_power(q, &f)?;
            if q < 2 {
                return Err(Error::Parameter("every Q must exceed 1".into()));
            }
        }
        if self.ks.is_empty() || self.ns.is_empty() {
            return Err(Error::Parameter("k and n lists must be nonempty".into()));
        }
        let needs_q = matches!(
            suite,
            SuiteName::IdealWitness | SuiteName::CodimFormula | SuiteName::GcdBounds | SuiteName::QsepCount
        );
        if needs_q && self.qs.is_empty() {
            return Err(Error::Parameter(format!("{suite} needs at least one Q")));
        }
        if let Some(s) = &self.schedule {
            s.validate(self.e)?;
        }
        match suite {
            SuiteName::PropAb | SuiteName::G2Roundtrip if self.e <= 2 => {
                Err(Error::Hypothesis(format!("{suite} assumes e > 2, got e = {}", self.e)))
            }
            SuiteName::HeisRoundtrip | SuiteName::HpRoundtrip if self.p == 2 => {
                Err(Error::Hypothesis(format!("{suite} assumes p > 2, got p = 2")))
            }
            SuiteName::HeisRoundtrip | SuiteName::HpRoundtrip if self.m == 0 => {
                Err(Error::Parameter("m must be positive".into()))
            }
            SuiteName::IdealWitness => {
                if self.e < 2 {
                    return Err(Error::Hypothesis("ideal-witness assumes e > 1".into()));
                }
                match self.qs.iter().find(|&&q| q % self.e != 0) {
                    Some(q) => Err(Error::Hypothesis(format!("ideal-witness assumes e | Q, got Q = {q}"))),
                    None => Ok(()),
                }
            }
            SuiteName::CodimFormula => {
                for &q in &self.qs {
                    let mut r = q;
                    while self.e > 1 && r % self.e == 0 {
                        r /= self.e;
                    }
                    if r != 1 {
                        return Err(Error::Hypothesis(format!("codim-formula assumes Q a power of e, got Q = {q}")));
                    }
                }
                Ok(())
            }
            SuiteName::QsepCount if self.m == 0 => Err(Error::Parameter("qsep-count needs m >= 1".into())),
            _ => Ok(()),
        }
    }
}

/// One instance of a suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub seed: u64,
    /// Identity/zero-class instance every suite starts with.
    pub trivial: bool,
    pub input: serde_json::Value,
    pub output: serde_json::Value,
    pub pass: bool,
    pub error: Option<String>,
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: SuiteName,
    pub config: ExperimentConfig,
    pub records: Vec<InstanceRecord>,
    pub passed: usize,
    pub total: usize,
    pub trivial_ok: bool,
    /// Fitted constants, e.g. the empirical C of the gcd bound.
    pub fitted: BTreeMap<String, i64>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total && self.trivial_ok
    }

    pub fn pass_vector(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.pass).collect()
    }

    /// One JSON record per line, then a summary object.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            let mut v = serde_json::to_value(r)?;
            v["type"] = "record".into();
            v["suite"] = self.suite.as_str().into();
            writeln!(w, "{}", serde_json::to_string(&v)?)?;
        }
        let summary = serde_json::json!({
            "type": "summary",
            "schema": self.schema,
            "suite": self.suite,
            "config": self.config,
            "passed": self.passed,
            "total": self.total,
            "trivial_ok": self.trivial_ok,
            "fitted": self.fitted,
            "elapsed_ms": self.elapsed_ms,
        });
        writeln!(w, "{}", serde_json::to_string(&summary)?)
    }
}

/// Runs a suite by name. Instances run in the rayon pool and are collected in
/// index order.
pub fn run_suite(name: &str, config: &ExperimentConfig) -> Result<SuiteReport> {
    let suite: SuiteName = name.parse()?;
    config.check_for(suite)?;
    let start = Instant::now();
    let instances = generate_instances(suite, config, config.seed)?;
    let ctx = suites::Ctx::new(config)?;
    let mut records: Vec<InstanceRecord> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let t = Instant::now();
            let (output, pass, error) = match suites::run_instance(inst, &ctx) {
                Ok((out, pass)) => (out, pass, None),
                Err(e) => (serde_json::Value::Null, false, Some(e.to_string())),
            };
            InstanceRecord {
                index: i,
                seed: config.seed.wrapping_add(i as u64),
                trivial: inst.is_trivial(),
                input: serde_json::to_value(inst).unwrap_or(serde_json::Value::Null),
                output,
                pass,
                error,
                micros: t.elapsed().as_micros() as u64,
            }
        })
        .collect();
    let fitted = suites::post_process(suite, &mut records, &ctx);
    let passed = records.iter().filter(|r| r.pass).count();
    let trivial_ok = records.iter().filter(|r| r.trivial).all(|r| r.pass) && records.iter().any(|r| r.trivial);
    Ok(SuiteReport {
        schema: SCHEMA.into(),
        suite,
        config: config.clone(),
        total: records.len(),
        passed,
        trivial_ok,
        records,
        fitted,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
