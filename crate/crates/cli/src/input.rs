use std::io::Read;
use std::path::Path;

use altan_core::bec::parse_bec;
use altan_core::graph::{AltanPair, GraphDocument};
use altan_core::patch::{PatchDocument, PlanarPatch};
use altan_core::planar_code::read_planar_code;
use anyhow::{bail, Context, Result};
use serde_json::Value;

/// One input object: a plane patch (altan on its natural attachment set) or
/// a bare graph with an explicit attachment set.
pub enum Instance {
    Patch { id: String, patch: PlanarPatch },
    Pair { id: String, pair: AltanPair },
}

impl Instance {
    pub fn id(&self) -> &str {
        match self {
            Instance::Patch { id, .. } | Instance::Pair { id, .. } => id,
        }
    }

    pub fn pair(&self) -> Result<AltanPair> {
        match self {
            Instance::Patch { id, patch } => patch
                .altan_pair()
                .with_context(|| format!("{id}: no natural attachment set")),
            Instance::Pair { pair, .. } => Ok(pair.clone()),
        }
    }
}

pub struct Loaded {
    pub instances: Vec<Instance>,
    /// Records dropped because they are not patches.
    pub skipped: usize,
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn from_json_value(id: String, v: Value) -> Result<Instance> {
    if v.get("rotation").is_some() {
        let doc: PatchDocument = serde_json::from_value(v).with_context(|| format!("{id}: bad patch document"))?;
        Ok(Instance::Patch {
            patch: doc.patch().with_context(|| format!("{id}: not a patch"))?,
            id,
        })
    } else {
        let doc: GraphDocument = serde_json::from_value(v).with_context(|| format!("{id}: bad graph document"))?;
        Ok(Instance::Pair {
            pair: doc.pair().with_context(|| format!("{id}: graph needs an attachment set"))?,
            id,
        })
    }
}

/// Reads `planar_code`, a JSON document (or array of them), or boundary
/// edge codes one per line. `-` reads standard input.
pub fn load(path: &Path) -> Result<Loaded> {
    let bytes = read_all(path)?;
    if bytes.starts_with(b">>planar_code") {
        let batch = read_planar_code(&bytes)?;
        for (record, err) in &batch.skipped {
            log::warn!("record {record} skipped: {err}");
        }
        return Ok(Loaded {
            skipped: batch.skipped.len(),
            instances: batch
                .patches
                .into_iter()
                .map(|(i, patch)| Instance::Patch { id: i.to_string(), patch })
                .collect(),
        });
    }
    let text = String::from_utf8(bytes).context("input is neither planar_code nor UTF-8 text")?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: Value = serde_json::from_str(trimmed).context("parsing JSON input")?;
        let values = match value {
            Value::Array(items) => items,
            single => vec![single],
        };
        let instances = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| from_json_value(i.to_string(), v))
            .collect::<Result<_>>()?;
        return Ok(Loaded { instances, skipped: 0 });
    }
    let mut instances = Vec::new();
    for line in text.lines().map(str::trim) {
        let Some(code) = line.split_whitespace().next().filter(|c| !c.starts_with('#')) else {
            continue;
        };
        let patch = parse_bec(code).with_context(|| format!("boundary code {code}"))?;
        instances.push(Instance::Patch { id: code.to_string(), patch });
    }
    if instances.is_empty() {
        bail!("{} holds no instances", path.display());
    }
    Ok(Loaded { instances, skipped: 0 })
}
