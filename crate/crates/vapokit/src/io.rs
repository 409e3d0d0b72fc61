//! Line-delimited JSON files: datasets, manifests, hypotheses, rollouts.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use vapokit_core::bench::{manifest_violations, DatasetManifest, ManifestHeader, ManifestViolation};
use vapokit_core::Sample;

use crate::error::{Error, Result};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_to_string(path)?;
    lines(&text)
        .map(|(n, line)| {
            serde_json::from_str(line).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: n,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes one compact JSON value per line.
pub fn write_jsonl<T: Serialize>(path: &Path, records: impl IntoIterator<Item = T>) -> Result<()> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, &r).expect("records serialize");
        out.push(b'\n');
    }
    write_bytes(path, &out)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("value serializes");
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

fn is_header(line: &str) -> bool {
    matches!(
        serde_json::from_str::<serde_json::Value>(line),
        Ok(serde_json::Value::Object(m)) if m.contains_key("samples") && !m.contains_key("id")
    )
}

/// Samples from either a plain sample file or a manifest (header skipped).
pub fn read_dataset(path: &Path) -> Result<Vec<Sample>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (k, (n, line)) in lines(&text).enumerate() {
        if k == 0 && is_header(line) {
            continue;
        }
        out.push(serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: n,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Header line, then one sample per line.
pub fn write_manifest(path: &Path, manifest: &DatasetManifest) -> Result<()> {
    let mut out = serde_json::to_vec(&manifest.header).expect("header serializes");
    out.push(b'\n');
    for s in &manifest.entries {
        serde_json::to_writer(&mut out, s).expect("sample serializes");
        out.push(b'\n');
    }
    write_bytes(path, &out)
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    let parse_err = |message: String| Error::ManifestParse {
        path: path.to_path_buf(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| parse_err(e.to_string()))?;
    let mut it = lines(&text);
    let (_, first) = it.next().ok_or_else(|| parse_err("empty file".into()))?;
    let header: ManifestHeader = serde_json::from_str(first)
        .map_err(|e| parse_err(format!("line 1: header: {e}")))?;
    let entries = it
        .map(|(n, line)| serde_json::from_str(line).map_err(|e| parse_err(format!("line {n}: {e}"))))
        .collect::<Result<Vec<Sample>>>()?;
    Ok(DatasetManifest { header, entries })
}

pub fn validate_manifest(path: &Path) -> Result<Vec<ManifestViolation>> {
    Ok(manifest_violations(&read_manifest(path)?))
}

/// A model transcript for one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: String,
    #[serde(alias = "hyp", alias = "output")]
    pub text: String,
}

/// A raw policy output to be scored. Several rollouts may share an id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rollout {
    pub id: String,
    #[serde(alias = "text")]
    pub output: String,
}

/// Matches items to samples by id. Repeated ids and an empty pairing are
/// always errors. Unknown ids and samples without an item are errors too,
/// unless `allow_partial` is set; then they are returned as leftovers.
pub struct Paired<'a, T> {
    /// Sorted by sample id.
    pub pairs: Vec<(&'a Sample, &'a T)>,
    pub missing: Vec<String>,
    pub unknown: Vec<String>,
}

pub fn pair_by_id<'a, T>(
    samples: &'a [Sample],
    items: &'a [T],
    id: impl Fn(&T) -> &str,
    allow_partial: bool,
) -> Result<Paired<'a, T>> {
    let mut by_id: BTreeMap<&str, &Sample> = BTreeMap::new();
    let mut duplicated = Vec::new();
    for s in samples {
        if by_id.insert(&s.id, s).is_some() {
            duplicated.push(s.id.clone());
        }
    }
    let mut items_by_id: BTreeMap<&str, &T> = BTreeMap::new();
    for it in items {
        if items_by_id.insert(id(it), it).is_some() {
            duplicated.push(id(it).to_string());
        }
    }
    let missing: Vec<String> = by_id
        .keys()
        .filter(|k| !items_by_id.contains_key(*k))
        .map(|k| k.to_string())
        .collect();
    let unknown: Vec<String> = items_by_id
        .keys()
        .filter(|k| !by_id.contains_key(*k))
        .map(|k| k.to_string())
        .collect();
    let pairs: Vec<(&Sample, &T)> = by_id
        .iter()
        .filter_map(|(k, s)| items_by_id.get(k).map(|it| (*s, *it)))
        .collect();
    duplicated.sort();
    duplicated.dedup();
    let unpaired = !missing.is_empty() || !unknown.is_empty();
    if !duplicated.is_empty() || (unpaired && !allow_partial) || pairs.is_empty() {
        return Err(Error::Pairing {
            missing,
            unknown,
            duplicated,
        });
    }
    Ok(Paired {
        pairs,
        missing,
        unknown,
    })
}
