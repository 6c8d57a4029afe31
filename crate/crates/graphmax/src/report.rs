//! Pass/fail tables written by `verify`.

use graphmax_core::PExponent;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::round_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub p: Option<PExponent>,
    pub expected: Option<f64>,
    pub computed: f64,
    pub tolerance: f64,
    pub status: Status,
    /// Function behind a notable `info` row, e.g. a candidate counterexample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl Entry {
    /// A checked row: passes iff `|computed - expected| <= tolerance`.
    pub fn check(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        let ok = (computed - expected).abs() <= tolerance;
        Entry {
            name: name.into(),
            family: None,
            n: None,
            p: None,
            expected: Some(expected),
            computed,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
            witness: None,
        }
    }

    /// A checked one-sided bound `computed <= bound`, recorded as the excess
    /// `max(computed - bound, 0)` against an expected 0.
    pub fn at_most(name: impl Into<String>, computed: f64, bound: f64, tolerance: f64) -> Self {
        let excess = if computed.is_nan() {
            f64::INFINITY
        } else {
            (computed - bound).max(0.0)
        };
        Entry::check(name, 0.0, excess, tolerance)
    }

    /// An unchecked row.
    pub fn info(name: impl Into<String>, computed: f64) -> Self {
        Entry {
            name: name.into(),
            family: None,
            n: None,
            p: None,
            expected: None,
            computed,
            tolerance: 0.0,
            status: Status::Info,
            witness: None,
        }
    }

    pub fn on(mut self, family: &str, n: usize) -> Self {
        self.family = Some(family.to_string());
        self.n = Some(n);
        self
    }

    pub fn at_p(mut self, p: PExponent) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_witness(mut self, values: &[f64]) -> Self {
        self.witness = Some(values.to_vec());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch; absent unless requested so that reports
    /// are byte-identical across runs.
    pub timestamp: Option<u64>,
}

impl Metadata {
    pub fn new(seed: u64) -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub metadata: Metadata,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Report {
            entries: Vec::new(),
            metadata: Metadata::new(seed),
        }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// One CSV row per entry; witnesses and metadata are dropped.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "name",
            "family",
            "n",
            "p",
            "expected",
            "computed",
            "tolerance",
            "status",
        ])?;
        let num = |x: f64| round_sig(x).to_string();
        for e in &self.entries {
            w.write_record([
                e.name.clone(),
                e.family.clone().unwrap_or_default(),
                e.n.map(|n| n.to_string()).unwrap_or_default(),
                e.p.map(|p| match p {
                    PExponent::Finite(x) => num(x),
                    PExponent::Infinity => "inf".into(),
                })
                .unwrap_or_default(),
                e.expected.map(num).unwrap_or_default(),
                num(e.computed),
                num(e.tolerance),
                e.status.name().into(),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}
