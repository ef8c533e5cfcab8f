//! Run manifest: what each stage read and wrote, by content digest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: &str = "restoreplan.manifest";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Input basename -> sha256.
    pub inputs: BTreeMap<String, String>,
    /// Output path relative to the output directory -> sha256.
    pub outputs: BTreeMap<String, String>,
}

/// No timestamps or absolute paths, so identical runs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub version: u32,
    pub tool: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: Config,
    pub stages: BTreeMap<String, StageRecord>,
}

impl RunManifest {
    pub fn new(seed: u64, config: Config) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA.into(),
            version: MANIFEST_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            config,
            stages: BTreeMap::new(),
        }
    }

    /// Loads the manifest in `dir` if present, then refreshes seed and config.
    pub fn open(dir: &Path, seed: u64, config: Config) -> anyhow::Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let mut m = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str::<RunManifest>(&text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => RunManifest::new(seed, config.clone()),
            Err(e) => return Err(anyhow::anyhow!("{}: {e}", path.display())),
        };
        m.seed = seed;
        m.config = config;
        Ok(m)
    }

    pub fn save(&self, dir: &Path) -> anyhow::Result<()> {
        write_file(&dir.join(MANIFEST_FILE), &(serde_json::to_string_pretty(self)? + "\n"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects input digests and output files for one stage.
pub struct StageLog {
    out_dir: PathBuf,
    record: StageRecord,
}

impl StageLog {
    pub fn new(out_dir: &Path) -> Self {
        StageLog { out_dir: out_dir.to_path_buf(), record: StageRecord { inputs: BTreeMap::new(), outputs: BTreeMap::new() } }
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = fs::read(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        self.record.inputs.insert(name, sha256_hex(&bytes));
        Ok(())
    }

    /// Writes `rel` under the output directory and records its digest.
    pub fn output(&mut self, rel: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.out_dir.join(rel);
        write_file(&path, contents)?;
        self.record.outputs.insert(rel.to_string(), sha256_hex(contents.as_bytes()));
        Ok(path)
    }

    pub fn finish(self, manifest: &mut RunManifest, stage: &str) {
        manifest.stages.insert(stage.to_string(), self.record);
    }
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| anyhow::anyhow!("{}: {e}", parent.display()))?;
    }
    fs::write(path, contents).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}
