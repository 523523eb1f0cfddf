//! Run configuration: one TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::centerbias::{CombinationScheme, SchemeKind};
use crate::error::{Error, Result};
use crate::pipeline::{Algorithm, CenterParams, SaliencyParams, DEFAULT_SIGMA_S2};
use crate::region::PaletteParams;
use crate::segmentation::SegmentParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub scheme: SchemeKind,
    pub w_c: f64,
    pub sigma_s2: f64,
    pub segmentation: SegmentParams,
    pub palette: PaletteParams,
    pub center: CenterParams,
    pub output: Option<PathBuf>,
    /// Worker threads; 0 picks the number of CPUs.
    pub threads: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::LdrcCb,
            scheme: SchemeKind::Convex,
            w_c: 0.5,
            sigma_s2: DEFAULT_SIGMA_S2,
            segmentation: SegmentParams::default(),
            palette: PaletteParams::default(),
            center: CenterParams::default(),
            output: None,
            threads: 0,
            seed: 0,
        }
    }
}

/// The subset of a configuration that determines the maps.
#[derive(Serialize)]
struct HashedFields<'a> {
    algorithm: &'a str,
    scheme: SchemeKind,
    w_c: f64,
    params: SaliencyParams,
    seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        self.scheme()?;
        Ok(())
    }

    pub fn params(&self) -> SaliencyParams {
        SaliencyParams {
            segmentation: self.segmentation,
            palette: self.palette,
            sigma_s2: self.sigma_s2,
            center: self.center,
        }
    }

    pub fn scheme(&self) -> Result<CombinationScheme> {
        CombinationScheme::new(self.scheme, self.w_c)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// SHA-256 over the fields that influence map values. Output location
    /// and thread count are left out, so runs that should agree byte for
    /// byte share a hash.
    pub fn hash(&self) -> String {
        let fields = HashedFields {
            algorithm: self.algorithm.name(),
            scheme: self.scheme,
            w_c: self.w_c,
            params: self.params(),
            seed: self.seed,
        };
        let json = serde_json::to_vec(&fields).expect("configuration serializes");
        hex::encode(Sha256::digest(&json))
    }
}
