use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use salobj::centerbias::SchemeKind;
use salobj::config::RunConfig;
use salobj::pipeline::Algorithm;

/// Configuration file plus per-field overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML run configuration; flags below override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// MSSS, RC, LDRC, CB_P, CB_S, MSSS+CB, RC+CB or LDRC+CB
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// convex, product, min or max
    #[arg(long)]
    pub scheme: Option<SchemeKind>,
    /// Weight of the center prior, in [0, 1]
    #[arg(long)]
    pub wc: Option<f64>,
    /// Spatial weighting strength of region contrast
    #[arg(long)]
    pub sigma_s2: Option<f64>,
    /// Segmentation scale parameter
    #[arg(long)]
    pub seg_k: Option<f64>,
    /// Gaussian pre-smoothing before segmentation
    #[arg(long)]
    pub seg_sigma: Option<f64>,
    /// Smallest segment size in pixels
    #[arg(long)]
    pub seg_min_size: Option<usize>,
    /// Quantization bins per color channel
    #[arg(long)]
    pub bins: Option<u32>,
    /// Fraction of pixels covered by the retained palette colors
    #[arg(long)]
    pub coverage: Option<f64>,
    /// Worker threads (0: one per CPU)
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.algorithm {
            c.algorithm = v;
        }
        if let Some(v) = self.scheme {
            c.scheme = v;
        }
        if let Some(v) = self.wc {
            c.w_c = v;
        }
        if let Some(v) = self.sigma_s2 {
            c.sigma_s2 = v;
        }
        if let Some(v) = self.seg_k {
            c.segmentation.k = v;
        }
        if let Some(v) = self.seg_sigma {
            c.segmentation.sigma = v;
        }
        if let Some(v) = self.seg_min_size {
            c.segmentation.min_size = v;
        }
        if let Some(v) = self.bins {
            c.palette.bins_per_channel = v;
        }
        if let Some(v) = self.coverage {
            c.palette.coverage = v;
        }
        if let Some(v) = self.threads {
            c.threads = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn any_set(&self) -> bool {
        self.config.is_some()
            || self.algorithm.is_some()
            || self.scheme.is_some()
            || self.wc.is_some()
            || self.sigma_s2.is_some()
            || self.seg_k.is_some()
            || self.seg_sigma.is_some()
            || self.seg_min_size.is_some()
            || self.bins.is_some()
            || self.coverage.is_some()
            || self.seed.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct DatasetArgs {
    /// Directory of input images
    #[arg(long)]
    pub images: PathBuf,
    /// Directory of binary ground-truth masks, matched to images by file stem
    #[arg(long)]
    pub masks: PathBuf,
}
