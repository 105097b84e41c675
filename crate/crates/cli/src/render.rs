//! Output in the three formats. Field order is the insertion order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rpart::verifier::{format_rat, SweepReport};

use crate::args::Format;

#[derive(Debug, Clone)]
pub enum Field {
    /// Machine-sized parameter, a JSON number.
    Small(u64),
    /// Arbitrary-precision integer or rational, a JSON string.
    Big(String),
    Text(String),
    Flag(bool),
    Parts(Vec<u64>),
    List(Vec<String>),
    /// Named values in a fixed order.
    Map(Vec<(String, String)>),
    /// Values indexed by degree `j`.
    Profile(BTreeMap<u64, String>),
}

#[derive(Debug, Clone)]
pub struct Output {
    command: &'static str,
    fields: Vec<(&'static str, Field)>,
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

impl Output {
    pub fn new(command: &'static str) -> Self {
        Output {
            command,
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &'static str, value: Field) -> Self {
        self.fields.push((key, value));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Record => self.record(),
            Format::Csv => self.csv(),
        }
    }

    /// One JSON object on one line.
    fn record(&self) -> String {
        let mut out = format!("{{\"command\":{}", json_str(self.command));
        for (key, value) in &self.fields {
            let rendered = match value {
                Field::Small(v) => v.to_string(),
                Field::Big(s) | Field::Text(s) => json_str(s),
                Field::Flag(b) => b.to_string(),
                Field::Parts(p) => format!("[{}]", join(p, ",")),
                Field::List(xs) => {
                    let items: Vec<String> = xs.iter().map(|x| json_str(x)).collect();
                    format!("[{}]", items.join(","))
                }
                Field::Map(entries) => {
                    let items: Vec<String> = entries
                        .iter()
                        .map(|(k, v)| format!("{}:{}", json_str(k), json_str(v)))
                        .collect();
                    format!("{{{}}}", items.join(","))
                }
                Field::Profile(entries) => {
                    let items: Vec<String> = entries
                        .iter()
                        .map(|(j, v)| format!("\"{j}\":{}", json_str(v)))
                        .collect();
                    format!("{{{}}}", items.join(","))
                }
            };
            let _ = write!(out, ",{}:{rendered}", json_str(key));
        }
        out.push_str("}\n");
        out
    }

    /// Flattened `(key, value)` rows shared by the table and CSV forms.
    fn rows(&self) -> Vec<(String, String)> {
        let mut rows = Vec::new();
        for (key, value) in &self.fields {
            match value {
                Field::Small(v) => rows.push((key.to_string(), v.to_string())),
                Field::Big(s) | Field::Text(s) => rows.push((key.to_string(), s.clone())),
                Field::Flag(b) => rows.push((key.to_string(), b.to_string())),
                Field::Parts(p) => rows.push((key.to_string(), join(p, ","))),
                Field::List(xs) => rows.extend(
                    xs.iter()
                        .enumerate()
                        .map(|(i, x)| (format!("{key}[{i}]"), x.clone())),
                ),
                Field::Map(entries) => rows.extend(entries.iter().cloned()),
                Field::Profile(entries) => rows.extend(
                    entries
                        .iter()
                        .map(|(j, v)| (format!("{key}[{j}]"), v.clone())),
                ),
            }
        }
        rows
    }

    fn table(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["field", "value"]);
        for (k, v) in self.rows() {
            let _ = w.write_record([k, v]);
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 input")
    }
}

/// One row per discrepancy record.
pub fn report_csv(report: &SweepReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record([
        "identity",
        "params",
        "formula",
        "oracle",
        "gap",
        "classification",
        "note",
    ]);
    for r in &report.records {
        let _ = w.write_record([
            r.identity.name().to_string(),
            r.params.to_string(),
            format_rat(&r.formula),
            format_rat(&r.oracle),
            format_rat(&r.gap()),
            r.classification.as_str().to_string(),
            r.note.to_string(),
        ]);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 input")
}
