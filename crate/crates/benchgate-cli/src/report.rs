//! Versioned JSON report envelope shared by all subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "benchgate",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Report envelope: schema version, tool, seed, resolved config, input
/// digests, and the results payload. Re-running with identical inputs and
/// seed reproduces the payload byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub seed: Option<u64>,
    pub config: C,
    pub inputs: Vec<InputDigest>,
    pub results: R,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(seed: Option<u64>, config: C, inputs: Vec<InputDigest>, results: R) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            seed,
            config,
            inputs,
            results,
        }
    }

    /// Write pretty JSON to `out`, or to stdout when no path is given.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        match out {
            Some(path) => {
                let mut f = fs::File::create(path)?;
                writeln!(f, "{json}")?;
            }
            None => println!("{json}"),
        }
        Ok(())
    }
}

/// SHA-256 digest of an input file.
pub fn digest_input(path: &Path) -> Result<InputDigest> {
    let bytes = fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in hash {
        hex.push_str(&format!("{b:02x}"));
    }
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex,
    })
}

/// Resolve the run seed: `--seed` flag, then the BENCHGATE_SEED
/// environment variable, then a generated seed announced on stderr.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Ok(raw) = std::env::var("BENCHGATE_SEED") {
        let seed = raw.trim().parse::<u64>().map_err(|_| {
            crate::error::CliError::Validation(format!(
                "BENCHGATE_SEED = {raw:?} is not a valid unsigned integer"
            ))
        })?;
        return Ok(seed);
    }
    let seed: u64 = rand::random();
    eprintln!("benchgate: no seed supplied; generated seed {seed}");
    Ok(seed)
}

/// Paths referenced by a command, digested in argument order.
pub fn digest_all(paths: &[&PathBuf]) -> Result<Vec<InputDigest>> {
    paths.iter().map(|p| digest_input(p)).collect()
}
