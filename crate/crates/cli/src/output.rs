//! Artifact publication through a staging directory, so a failed run leaves
//! no partial files behind.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::commands::Artifacts;
use crate::config::RunConfig;

pub const MANIFEST: &str = "manifest.toml";

pub fn manifest(cfg: &RunConfig, subcommand: &str, artifacts: &Artifacts) -> anyhow::Result<String> {
    let mut doc = toml::Table::try_from(cfg.to_raw())?;
    let mut tool = toml::Table::new();
    tool.insert("name".into(), env!("CARGO_PKG_NAME").into());
    tool.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    let mut run = toml::Table::new();
    run.insert("subcommand".into(), subcommand.into());
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    run.insert("timestamp_unix".into(), toml::Value::Integer(now as i64));
    let files: Vec<toml::Value> = artifacts.files.iter().map(|(n, _)| n.as_str().into()).collect();
    run.insert("artifacts".into(), files.into());
    doc.insert("tool".into(), tool.into());
    doc.insert("run".into(), run.into());
    doc.insert("derived".into(), artifacts.derived.clone().into());
    Ok(toml::to_string(&doc)?)
}

/// Writes every file into `dir/.staging-*`, then moves them into `dir`.
/// On failure the staging directory, any files already moved, and `dir`
/// itself (if this call created it and it is empty) are removed.
pub fn publish(dir: &Path, files: &[(String, String)]) -> io::Result<Vec<PathBuf>> {
    let created = !dir.exists();
    fs::create_dir_all(dir)?;
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.subsec_nanos()).unwrap_or(0);
    let staging = dir.join(format!(".staging-{}-{nanos}", std::process::id()));
    let mut moved = Vec::new();
    let result = stage_and_move(&staging, dir, files, &mut moved);
    let _ = fs::remove_dir_all(&staging);
    if result.is_err() {
        for p in &moved {
            let _ = fs::remove_file(p);
        }
        if created {
            let _ = fs::remove_dir(dir);
        }
    }
    result.map(|_| moved)
}

fn stage_and_move(staging: &Path, dir: &Path, files: &[(String, String)], moved: &mut Vec<PathBuf>) -> io::Result<()> {
    fs::create_dir(staging)?;
    for (name, body) in files {
        fs::write(staging.join(name), body)?;
    }
    for (name, _) in files {
        let dest = dir.join(name);
        fs::rename(staging.join(name), &dest)?;
        moved.push(dest);
    }
    Ok(())
}
