//! On-disk registry of simple objects.
//!
//! The file is JSON: the orbit-order version, the depth, and for each label
//! its ambient set and idempotent coefficients (rationals as `"p/q"`). A file
//! written under another orbit-order version is refused.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use delannoy_core::karoubi::{Registry, SimpleLabel, AMALGAM_ORDER_VERSION};
use delannoy_core::ordcomb::GSet;
use delannoy_core::permcat::Morphism;
use delannoy_core::{Cat, Q};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "DELANNOY_REGISTRY_CACHE";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    amalgam_order_version: u32,
    depth: usize,
    simples: BTreeMap<String, Entry>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    ambient: GSet,
    coeffs: Vec<Q>,
}

pub fn load(cat: &Cat, path: &Path) -> Result<Registry<Q>, CliError> {
    let text = fs::read_to_string(path)?;
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))?;
    if !Registry::<Q>::compatible(file.amalgam_order_version) {
        return Err(CliError::Cache(format!(
            "{} was written under orbit order version {}, this build uses {}; rebuild it with `registry --build`",
            path.display(),
            file.amalgam_order_version,
            AMALGAM_ORDER_VERSION
        )));
    }
    let mut idempotents = BTreeMap::new();
    for (word, entry) in file.simples {
        let label = SimpleLabel::new(&word)?;
        if label.len() > file.depth || entry.ambient != GSet::line(label.len()) {
            return Err(CliError::Cache(format!("entry {word} has the wrong ambient set")));
        }
        let e = Morphism::from_coeffs(cat, &entry.ambient, &entry.ambient, entry.coeffs)
            .map_err(|e| CliError::Cache(format!("entry {word}: {e}")))?;
        idempotents.insert(label, e);
    }
    if idempotents.len() != (1usize << (file.depth + 1)) - 1 {
        return Err(CliError::Cache(format!("{} lacks labels for depth {}", path.display(), file.depth)));
    }
    Ok(Registry { depth: file.depth, idempotents })
}

pub fn store(reg: &Registry<Q>, path: &Path) -> Result<(), CliError> {
    let file = CacheFile {
        amalgam_order_version: AMALGAM_ORDER_VERSION,
        depth: reg.depth,
        simples: reg
            .idempotents
            .iter()
            .map(|(l, e)| (l.to_string(), Entry { ambient: e.source.clone(), coeffs: e.coeffs.clone() }))
            .collect(),
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| CliError::Cache(e.to_string()))?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// A registry of at least `depth`, read from and written back to the cache
/// when one is configured.
pub fn obtain(cat: &Cat, path: Option<&Path>, depth: usize) -> Result<Registry<Q>, CliError> {
    let mut reg = match path {
        Some(p) if p.exists() => load(cat, p)?,
        _ => Registry::trivial(cat)?,
    };
    if reg.depth < depth {
        reg.extend_to(cat, depth)?;
        if let Some(p) = path {
            store(&reg, p)?;
        }
    }
    Ok(reg)
}
