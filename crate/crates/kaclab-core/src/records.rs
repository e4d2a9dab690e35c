//! Trial records, their CSV persistence, and run summaries.

use crate::error::KaclabError;
use std::fmt::Write as _;
use std::path::Path;

/// One Monte Carlo observation row. `(experiment, n, trial, observable)`
/// identifies a row uniquely within a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub experiment: String,
    pub law: String,
    pub n: u64,
    pub trial: u64,
    pub observable: String,
    pub value: f64,
    pub aux1: Option<f64>,
    pub aux2: Option<f64>,
}

impl TrialRecord {
    pub fn new(
        experiment: &str,
        law: &str,
        n: u64,
        trial: u64,
        observable: impl Into<String>,
        value: f64,
    ) -> Self {
        TrialRecord {
            experiment: experiment.to_string(),
            law: law.to_string(),
            n,
            trial,
            observable: observable.into(),
            value,
            aux1: None,
            aux2: None,
        }
    }

    pub fn with_aux(mut self, aux1: f64) -> Self {
        self.aux1 = Some(aux1);
        self
    }

    pub fn with_aux2(mut self, aux2: f64) -> Self {
        self.aux2 = Some(aux2);
        self
    }
}

pub const CSV_HEADER: &str = "experiment,law,n,trial,observable,value,aux1,aux2";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Render records as CSV, sorted by `(n, trial, observable)` regardless of
/// production order so reruns are byte-identical.
pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (a.n, a.trial, &a.observable)
            .cmp(&(b.n, b.trial, &b.observable))
            .then_with(|| a.aux1.unwrap_or(f64::NEG_INFINITY).total_cmp(&b.aux1.unwrap_or(f64::NEG_INFINITY)))
    });
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.experiment,
            r.law,
            r.n,
            r.trial,
            r.observable,
            r.value,
            fmt_opt(r.aux1),
            fmt_opt(r.aux2)
        );
    }
    out
}

pub fn write_records(records: &[TrialRecord], path: &Path) -> Result<(), KaclabError> {
    std::fs::write(path, records_to_csv(records))?;
    Ok(())
}

/// Lossless inverse of [`records_to_csv`].
pub fn parse_records(text: &str) -> Result<Vec<TrialRecord>, KaclabError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(KaclabError::Records(format!(
                "bad header: {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(KaclabError::Records(format!("line {}: wrong field count", i + 2)));
        }
        let parse_f64 = |s: &str| -> Result<f64, KaclabError> {
            s.parse().map_err(|_| KaclabError::Records(format!("line {}: bad number {s}", i + 2)))
        };
        let opt = |s: &str| -> Result<Option<f64>, KaclabError> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse_f64(s).map(Some)
            }
        };
        out.push(TrialRecord {
            experiment: fields[0].to_string(),
            law: fields[1].to_string(),
            n: fields[2]
                .parse()
                .map_err(|_| KaclabError::Records(format!("line {}: bad n", i + 2)))?,
            trial: fields[3]
                .parse()
                .map_err(|_| KaclabError::Records(format!("line {}: bad trial", i + 2)))?,
            observable: fields[4].to_string(),
            value: parse_f64(fields[5])?,
            aux1: opt(fields[6])?,
            aux2: opt(fields[7])?,
        });
    }
    Ok(out)
}

/// A `key: value` block of the structured-text summary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SummaryBlock {
    pub title: String,
    pub entries: Vec<(String, String)>,
}

impl SummaryBlock {
    pub fn new(title: impl Into<String>) -> Self {
        SummaryBlock { title: title.into(), entries: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl std::fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }
}

/// One pass/fail gate of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Plot-ready table: an x column followed by y columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotData {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Aggregated statistics and pass/fail verdicts for one experiment run.
#[derive(Debug, Clone, Default)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub blocks: Vec<SummaryBlock>,
    pub verdicts: Vec<Verdict>,
    pub plots: Vec<PlotData>,
    /// Trials dropped because the root engine gave up; always reported.
    pub excluded_trials: usize,
    pub total_trials: usize,
}

impl ExperimentSummary {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), pass, detail: detail.into() });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment: {}", self.experiment);
        let _ = writeln!(out, "trials: {}", self.total_trials);
        let _ = writeln!(out, "trials_excluded: {}", self.excluded_trials);
        for block in &self.blocks {
            let _ = writeln!(out, "\n[{}]", block.title);
            for (k, v) in &block.entries {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        let _ = writeln!(out, "\n[verdicts]");
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "{}: {} ({})",
                v.name,
                if v.pass { "PASS" } else { "FAIL" },
                v.detail
            );
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.all_pass() { "PASS" } else { "FAIL" }
        );
        out
    }
}
