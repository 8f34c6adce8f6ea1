use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "FJAC_CACHE";

/// Precision, size limits and parallelism for a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// p-adic precision `M`.
    pub precision: u32,
    /// ℓ-adic precision `M'`; `None` means `p + 2`.
    pub ell_precision: Option<u32>,
    /// Largest field size `q` any computation may build.
    pub q_limit: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub cache: Option<PathBuf>,
    /// Seed for every randomized sample.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 8,
            ell_precision: None,
            q_limit: 10_000_000,
            jobs: 0,
            cache: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            seed: 0x5eed,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision < 4 {
            return Err(Error::InvalidArgument(format!("precision {} is below 4", self.precision)));
        }
        if self.q_limit == 0 || self.ell_precision == Some(0) {
            return Err(Error::InvalidArgument("limits must be positive".into()));
        }
        Ok(())
    }

    pub fn ell_precision_for(&self, p: u64) -> u32 {
        self.ell_precision.unwrap_or(p as u32 + 2)
    }
}
