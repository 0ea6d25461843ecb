//! Minimal checkpointing for the slow exhaustive searches: the outer
//! loop index plus running tallies, written as JSON after every outer
//! unit so an interrupted run can resume with `--resume FILE` (or via
//! the MDS22_CACHE_DIR convention in the CLI).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::SearchError;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Checkpoint {
    pub case: String,
    /// First outer index not yet processed.
    pub next_outer: u64,
    pub passed_configs: u64,
    pub mds_survivors: u64,
    pub admissible: u64,
    pub min_beta: Option<u32>,
}

impl Checkpoint {
    pub fn fresh(case: &str) -> Checkpoint {
        Checkpoint { case: case.to_string(), ..Default::default() }
    }

    pub fn load(path: &Path, case: &str) -> Result<Checkpoint, SearchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
        let cp: Checkpoint =
            serde_json::from_str(&text).map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
        if cp.case != case {
            return Err(SearchError::CheckpointIo(format!(
                "checkpoint is for case {}, expected {}",
                cp.case, case
            )));
        }
        Ok(cp)
    }

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(path, text).map_err(|e| SearchError::CheckpointIo(e.to_string()))
    }
}

/// Where a search reads and writes its progress.
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub checkpoint_path: Option<PathBuf>,
    /// Resume from the checkpoint file if it exists.
    pub resume: bool,
}

impl SearchOptions {
    pub(crate) fn start(&self, case: &str) -> Result<Checkpoint, SearchError> {
        if self.resume {
            if let Some(path) = &self.checkpoint_path {
                if path.exists() {
                    return Checkpoint::load(path, case);
                }
            }
        }
        Ok(Checkpoint::fresh(case))
    }

    pub(crate) fn persist(&self, cp: &Checkpoint) -> Result<(), SearchError> {
        if let Some(path) = &self.checkpoint_path {
            cp.save(path)?;
        }
        Ok(())
    }
}
