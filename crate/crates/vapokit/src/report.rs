//! Metric tables as Markdown or TSV, with the best and second-best value of
//! each column marked.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::io::read_to_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Md,
    Tsv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

const LABEL_KEYS: [&str; 5] = ["name", "system", "model", "id", "label"];

/// Columns where a larger value is better. Everything else is an error
/// rate or a cost.
pub fn higher_is_better(column: &str) -> bool {
    matches!(
        column,
        "recall" | "total" | "r_format" | "r_ocr" | "r_asr" | "r_va" | "mean_reward"
            | "expected_reward" | "optimal_mass"
    )
}

fn row_from(obj: &Map<String, Value>, fallback: String, columns: &mut Vec<String>) -> (String, Vec<(String, Option<f64>)>) {
    let label = LABEL_KEYS
        .iter()
        .find_map(|k| obj.get(*k).and_then(Value::as_str))
        .map(str::to_string)
        .unwrap_or(fallback);
    let mut cells = Vec::new();
    for (k, v) in obj {
        if LABEL_KEYS.contains(&k.as_str()) {
            continue;
        }
        let num = match v {
            Value::Number(n) => n.as_f64(),
            Value::Null => None,
            _ => continue,
        };
        if !columns.contains(k) {
            columns.push(k.clone());
        }
        cells.push((k.clone(), num));
    }
    (label, cells)
}

/// Builds a table from a JSON value: an array of row objects, a single row
/// object, or the document written by `score` (its samples plus a corpus row).
pub fn table_from_values(values: Vec<Value>) -> Result<Table> {
    let mut objects: Vec<(Map<String, Value>, String)> = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Value::Object(mut m) if m.contains_key("corpus") && m.contains_key("samples") => {
                if let Some(Value::Array(samples)) = m.remove("samples") {
                    for s in samples {
                        if let Value::Object(o) = s {
                            objects.push((o, format!("row {}", objects.len() + 1)));
                        }
                    }
                }
                if let Some(Value::Object(c)) = m.remove("corpus") {
                    objects.push((c, "corpus".into()));
                }
            }
            Value::Object(m) => objects.push((m, format!("row {}", i + 1))),
            Value::Array(items) => {
                for item in items {
                    if let Value::Object(m) = item {
                        objects.push((m, format!("row {}", objects.len() + 1)));
                    }
                }
            }
            _ => {}
        }
    }
    let mut columns = Vec::new();
    let raw: Vec<_> = objects
        .iter()
        .map(|(o, fallback)| row_from(o, fallback.clone(), &mut columns))
        .collect();
    let rows: Vec<(String, Vec<Option<f64>>)> = raw
        .into_iter()
        .map(|(label, cells)| {
            let vals = columns
                .iter()
                .map(|c| cells.iter().find(|(k, _)| k == c).and_then(|(_, v)| *v))
                .collect();
            (label, vals)
        })
        .collect();
    if rows.is_empty() || columns.is_empty() {
        return Err(Error::NoRows);
    }
    Ok(Table { columns, rows })
}

/// Reads a JSON document or a JSON-lines file.
pub fn load_table(path: &Path) -> Result<Table> {
    let text = read_to_string(path)?;
    if text.trim().is_empty() {
        return Err(Error::NoRows);
    }
    let values = match serde_json::from_str::<Value>(&text) {
        Ok(v) => vec![v],
        Err(_) => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| {
                serde_json::from_str(l).map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: n + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<Value>>>()?,
    };
    table_from_values(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rank {
    Best,
    Second,
    Other,
}

/// Per-cell rank within its column. Ties share a rank; the second best is
/// the next distinct value. Nothing is marked when fewer than two rows
/// have a value.
fn ranks(table: &Table) -> Vec<Vec<Rank>> {
    let mut out = vec![vec![Rank::Other; table.columns.len()]; table.rows.len()];
    for (c, name) in table.columns.iter().enumerate() {
        let mut vals: Vec<f64> = table.rows.iter().filter_map(|r| r.1[c]).collect();
        if vals.len() < 2 {
            continue;
        }
        vals.sort_by(|a, b| a.total_cmp(b));
        if higher_is_better(name) {
            vals.reverse();
        }
        vals.dedup();
        for (r, row) in table.rows.iter().enumerate() {
            if let Some(v) = row.1[c] {
                if v == vals[0] {
                    out[r][c] = Rank::Best;
                } else if vals.len() > 1 && v == vals[1] {
                    out[r][c] = Rank::Second;
                }
            }
        }
    }
    out
}

fn cell(v: Option<f64>, rank: Rank, format: Format) -> String {
    let Some(v) = v else {
        return "-".into();
    };
    let s = format!("{v:.4}");
    match (format, rank) {
        (Format::Md, Rank::Best) => format!("**{s}**"),
        (Format::Md, Rank::Second) => format!("<u>{s}</u>"),
        (Format::Tsv, Rank::Best) => format!("{s} (best)"),
        (Format::Tsv, Rank::Second) => format!("{s} (second)"),
        (_, Rank::Other) => s,
    }
}

pub fn render(table: &Table, format: Format) -> String {
    let ranks = ranks(table);
    let mut out = String::new();
    let header: Vec<&str> = std::iter::once("name")
        .chain(table.columns.iter().map(String::as_str))
        .collect();
    match format {
        Format::Md => {
            out += &format!("| {} |\n", header.join(" | "));
            out += &format!("|{}\n", " --- |".repeat(header.len()));
        }
        Format::Tsv => out += &format!("{}\n", header.join("\t")),
    }
    for ((label, vals), rank) in table.rows.iter().zip(&ranks) {
        let cells: Vec<String> = std::iter::once(label.clone())
            .chain(vals.iter().zip(rank).map(|(v, r)| cell(*v, *r, format)))
            .collect();
        match format {
            Format::Md => out += &format!("| {} |\n", cells.join(" | ")),
            Format::Tsv => out += &format!("{}\n", cells.join("\t")),
        }
    }
    out
}
