//! One report type behind all three output formats. The table, the JSON object and the CSV
//! rows are rendered from the same values, so they cannot drift apart.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use normred::qseq::{Check, QSequenceReport};
use normred::Result;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// Echo of the resolved configuration, seed included.
    pub inputs: BTreeMap<String, Value>,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub family: String,
    pub params: String,
    /// Named results; the name is the identifier the table and CSV use too.
    pub values: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Sequence>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub id: String,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sequence {
    pub pg: u64,
    pub nr: u32,
    pub br: u32,
    pub q_inf: u64,
    pub rows: Vec<SequenceRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceRow {
    pub n: u32,
    /// `None` at `n = 0`.
    pub l_n: Option<u64>,
    pub q_n: u64,
}

impl Sequence {
    pub fn from_report(r: &QSequenceReport) -> Self {
        let rows = r
            .q
            .iter()
            .enumerate()
            .map(|(n, &q_n)| SequenceRow {
                n: n as u32,
                l_n: (n >= 1).then(|| r.length(n as u32)),
                q_n,
            })
            .collect();
        Sequence {
            pg: r.p_g,
            nr: r.nr,
            br: r.br,
            q_inf: r.q_inf,
            rows,
        }
    }
}

impl Section {
    pub fn new(family: impl Into<String>, params: impl Into<String>) -> Self {
        Section {
            family: family.into(),
            params: params.into(),
            values: Vec::new(),
            sequence: None,
            checks: Vec::new(),
        }
    }

    pub fn value(&mut self, id: &str, value: impl Into<Value>) {
        self.values.push(Entry {
            id: id.to_string(),
            value: value.into(),
        });
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    params: &'a str,
    n: u32,
    #[serde(rename = "L_n")]
    l_n: Option<u64>,
    q_n: u64,
    nr: u32,
    br: u32,
    pg: u64,
    q_inf: u64,
    checks_passed: bool,
    field: &'a str,
    seed: u64,
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            sections: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.sections
            .iter()
            .flat_map(|s| {
                s.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("{} {}: {}", s.family, s.params, c.name))
            })
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={}", show(v))).collect();
        let _ = writeln!(out, "{} [{}]", self.command, inputs.join(" "));
        for s in &self.sections {
            let _ = writeln!(out);
            let _ = writeln!(out, "{} {}", s.family, s.params);
            let width = s.values.iter().map(|e| e.id.chars().count()).max().unwrap_or(0);
            for e in &s.values {
                let pad = width - e.id.chars().count();
                let _ = writeln!(out, "  {}{}  {}", e.id, " ".repeat(pad), show(&e.value));
            }
            if let Some(seq) = &s.sequence {
                let _ = writeln!(out, "  pg={} nr={} br={} q_inf={}", seq.pg, seq.nr, seq.br, seq.q_inf);
                let _ = writeln!(out, "  {:>4} {:>6} {:>6}", "n", "L_n", "q_n");
                for row in &seq.rows {
                    let l = row.l_n.map_or("-".to_string(), |v| v.to_string());
                    let _ = writeln!(out, "  {:>4} {:>6} {:>6}", row.n, l, row.q_n);
                }
            }
            let passed = s.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "  checks {passed}/{}", s.checks.len());
            for c in &s.checks {
                let _ = writeln!(out, "    {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let field = self.inputs.get("field").map(show).unwrap_or_default();
        let seed = self.inputs.get("seed").and_then(Value::as_u64).unwrap_or(0);
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record([
            "family",
            "params",
            "n",
            "L_n",
            "q_n",
            "nr",
            "br",
            "pg",
            "q_inf",
            "checks_passed",
            "field",
            "seed",
        ])
        .map_err(csv_error)?;
        for s in &self.sections {
            let Some(seq) = &s.sequence else { continue };
            for row in &seq.rows {
                w.serialize(CsvRow {
                    family: &s.family,
                    params: &s.params,
                    n: row.n,
                    l_n: row.l_n,
                    q_n: row.q_n,
                    nr: seq.nr,
                    br: seq.br,
                    pg: seq.pg,
                    q_inf: seq.q_inf,
                    checks_passed: s.checks_passed(),
                    field: &field,
                    seed,
                })
                .map_err(csv_error)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| normred::Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Prints the table and writes whichever machine formats were requested.
    pub fn emit(&self, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
        print!("{}", self.to_table());
        if let Some(p) = json {
            std::fs::write(p, self.to_json())?;
        }
        if let Some(p) = csv {
            std::fs::write(p, self.to_csv()?)?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> normred::Error {
    normred::Error::Io(std::io::Error::other(e))
}
