//! Records, per-suite reports and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

/// One checked grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub theorem: String,
    pub check: String,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub status: Status,
    pub metrics: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Record {
    pub fn new(theorem: &str, check: &str) -> Record {
        Record {
            theorem: theorem.to_string(),
            check: check.to_string(),
            params: Params::default(),
            degree: None,
            status: Status::Pass,
            metrics: BTreeMap::new(),
            witness: None,
            counterexample: None,
        }
    }

    pub fn p(mut self, p: u64) -> Record {
        self.params.p = Some(p);
        self
    }

    pub fn n(mut self, n: u32) -> Record {
        self.params.n = Some(n);
        self
    }

    pub fn m(mut self, m: u32) -> Record {
        self.params.m = Some(m);
        self
    }

    pub fn d(mut self, d: u32) -> Record {
        self.params.d = Some(d);
        self
    }

    pub fn degree(mut self, deg: u32) -> Record {
        self.degree = Some(deg);
        self
    }

    pub fn metric(mut self, key: &str, v: impl Into<Value>) -> Record {
        self.metrics.insert(key.to_string(), v.into());
        self
    }

    pub fn witness(mut self, w: impl Serialize) -> Record {
        self.witness = Some(serde_json::to_value(w).expect("serializable"));
        self
    }

    /// Sets the status; a failing record carries the given counterexample.
    pub fn verdict(mut self, ok: bool, cex: impl FnOnce() -> Value) -> Record {
        self.status = Status::from_bool(ok);
        if !ok {
            self.counterexample = Some(cex());
        }
        self
    }

    fn cell(&self, column: &str) -> String {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        match column {
            "check" => self.check.clone(),
            "status" => self.status.as_str().to_string(),
            "p" => opt(self.params.p),
            "n" => opt(self.params.n.map(u64::from)),
            "m" => opt(self.params.m.map(u64::from)),
            "d" => opt(self.params.d.map(u64::from)),
            "degree" => opt(self.degree.map(u64::from)),
            "counterexample" => self.counterexample.as_ref().map(Value::to_string).unwrap_or_default(),
            key => match self.metrics.get(key) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// The resolved grid, so a report is reproducible on its own.
    pub grid: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(suite: &str, grid: BTreeMap<String, Value>, columns: &[&str], records: Vec<Record>) -> SuiteReport {
        let mut cols = vec!["check".to_string()];
        cols.extend(columns.iter().map(|c| c.to_string()));
        cols.push("status".into());
        cols.push("counterexample".into());
        let mut r = SuiteReport { suite: suite.to_string(), grid, columns: cols, records, summary: Summary { records: 0, passed: 0, failed: 0 } };
        r.resummarize();
        r
    }

    pub fn resummarize(&mut self) {
        let passed = self.records.iter().filter(|r| r.status == Status::Pass).count();
        self.summary = Summary { records: self.records.len(), passed, failed: self.records.len() - passed };
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.records {
            w.write_record(self.columns.iter().map(|c| r.cell(c))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .records
            .iter()
            .map(|r| self.columns.iter().filter(|c| *c != "counterexample").map(|c| r.cell(c)).collect())
            .collect();
        let header: Vec<&String> = self.columns.iter().filter(|c| *c != "counterexample").collect();
        let widths: Vec<usize> = header
            .iter()
            .enumerate()
            .map(|(i, h)| rows.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{c:<w$}");
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = format!("== {} ==\n", self.suite);
        out += &line(header.iter().map(|s| s.as_str()).collect());
        for r in &rows {
            out += &line(r.iter().map(String::as_str).collect());
        }
        for (i, r) in self.records.iter().enumerate() {
            if let Some(c) = &r.counterexample {
                let _ = writeln!(out, "counterexample (row {}): {c}", i + 1);
            }
        }
        let s = &self.summary;
        let _ = writeln!(out, "{}: {} records, {} passed, {} failed", self.suite, s.records, s.passed, s.failed);
        out
    }
}

/// A JSON report document.
#[derive(Clone, Debug, Serialize)]
pub struct Document<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub passed: bool,
    pub suites: Vec<&'a SuiteReport>,
}

impl<'a> Document<'a> {
    pub fn new(suites: Vec<&'a SuiteReport>) -> Document<'a> {
        Document {
            schema_version: SCHEMA_VERSION,
            tool: "verify",
            version: env!("CARGO_PKG_VERSION"),
            passed: suites.iter().all(|s| s.passed()),
            suites,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
