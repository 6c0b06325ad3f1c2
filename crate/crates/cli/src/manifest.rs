use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::Ctx;
use crate::CliError;

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a BTreeMap<String, Value>,
    seed: Option<&'a Value>,
    duration_seconds: f64,
    /// Output path to lowercase hex SHA-256.
    outputs: BTreeMap<String, String>,
}

fn digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Writes `<output>.manifest.json` next to the main output, or prints the
/// manifest to stderr when the command wrote only to stdout.
pub fn write(ctx: &Ctx, files: &[PathBuf], duration_seconds: f64) -> Result<(), CliError> {
    let mut outputs = BTreeMap::new();
    for f in files {
        outputs.insert(f.display().to_string(), digest(f)?);
    }
    let manifest = Manifest {
        tool: "fqap",
        version: env!("CARGO_PKG_VERSION"),
        command: ctx.command(),
        config: ctx.resolved(),
        seed: ctx.resolved().get("seed"),
        duration_seconds,
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    match files.first() {
        Some(main) => {
            let mut path = main.as_os_str().to_os_string();
            path.push(".manifest.json");
            std::fs::write(&path, text + "\n")
                .map_err(|e| CliError::io(format!("{}: {e}", PathBuf::from(path).display())))
        }
        None => {
            eprintln!("{text}");
            Ok(())
        }
    }
}
