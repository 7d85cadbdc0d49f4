//! Check records, the campaign report and its serializations.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{CampaignConfig, Suite};

pub const SCHEMA: &str = "qagt-report/1";

/// How a record affects the campaign outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordClass {
    /// Identity that is proven; a failure is a defect.
    Gated,
    /// Identity that is conjectured; a failure is a finding, still fails the run.
    Conjecture,
    /// Reported only.
    Diagnostic,
}

impl RecordClass {
    pub fn counts_toward_outcome(self) -> bool {
        !matches!(self, RecordClass::Diagnostic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: Suite,
    pub level: usize,
    pub class: RecordClass,
    /// Sampled point, index and check-specific arguments; keys sorted.
    pub inputs: Map<String, Value>,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Record {
    fn sort_key(&self) -> (Suite, usize, String, RecordClass) {
        (self.suite, self.level, Value::Object(self.inputs.clone()).to_string(), self.class)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub records: Vec<Record>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub schema: String,
    pub artifact_version: String,
    pub seed: u64,
    pub config: CampaignConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub environment: Environment,
    pub passed: bool,
    /// Normalization of the norm side fixed at level one, if the agt suite ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    /// Assembles a report; record order is canonical regardless of input order.
    pub fn new(config: &CampaignConfig, mut records: Vec<Record>, normalization: Option<String>) -> Self {
        records.sort_by_key(Record::sort_key);
        let suites: Vec<SuiteReport> = config
            .suites
            .iter()
            .map(|&suite| {
                let records: Vec<Record> = records.iter().filter(|r| r.suite == suite).cloned().collect();
                let passed = records
                    .iter()
                    .all(|r| r.passed || !r.class.counts_toward_outcome());
                SuiteReport { suite, passed, records }
            })
            .collect();
        Self {
            environment: Environment {
                schema: SCHEMA.into(),
                artifact_version: env!("CARGO_PKG_VERSION").into(),
                seed: config.rng_seed,
                config: config.clone(),
            },
            passed: suites.iter().all(|s| s.passed),
            normalization,
            suites,
        }
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.suites.iter().flat_map(|s| s.records.iter())
    }
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)
}

pub const CSV_COLUMNS: [&str; 12] = [
    "suite",
    "level",
    "class",
    "passed",
    "point",
    "q",
    "t",
    "sigma",
    "inputs",
    "expected",
    "actual",
    "runtime_ms",
];

pub fn write_csv<W: Write>(report: &Report, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in report.records() {
        let field = |k: &str| match r.inputs.get(k) {
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
            None => String::new(),
        };
        let rest: Map<String, Value> = r
            .inputs
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "point" | "q" | "t" | "sigma"))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        w.write_record([
            r.suite.name().to_string(),
            r.level.to_string(),
            serde_json::to_value(r.class).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
            r.passed.to_string(),
            field("point"),
            field("q"),
            field("t"),
            field("sigma"),
            Value::Object(rest).to_string(),
            r.expected.clone(),
            r.actual.clone(),
            r.runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text summary: one row per suite and record class.
pub fn summary_table(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:<11} {:>7} {:>7} {:>7}", "suite", "class", "records", "passed", "failed");
    for suite in &report.suites {
        for class in [RecordClass::Gated, RecordClass::Conjecture, RecordClass::Diagnostic] {
            let rows: Vec<&Record> = suite.records.iter().filter(|r| r.class == class).collect();
            if rows.is_empty() {
                continue;
            }
            let passed = rows.iter().filter(|r| r.passed).count();
            let class_name = serde_json::to_value(class).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
            let _ = writeln!(
                s,
                "{:<10} {:<11} {:>7} {:>7} {:>7}",
                suite.suite.name(),
                class_name,
                rows.len(),
                passed,
                rows.len() - passed
            );
        }
    }
    if let Some(n) = &report.normalization {
        let _ = writeln!(s, "normalization: {n}");
    }
    let env = &report.environment;
    let _ = writeln!(
        s,
        "seed {} | max level {} | points {}",
        env.seed, env.config.max_level, env.config.num_param_points
    );
    let _ = writeln!(s, "status: {}", if report.passed { "PASS" } else { "FAIL" });
    s
}

/// Failing non-diagnostic records, with both sides.
pub fn failure_lines(report: &Report) -> Vec<String> {
    report
        .records()
        .filter(|r| !r.passed && r.class.counts_toward_outcome())
        .map(|r| {
            format!(
                "{} level {} {}: expected {} got {}",
                r.suite,
                r.level,
                Value::Object(r.inputs.clone()),
                r.expected,
                r.actual
            )
        })
        .collect()
}
