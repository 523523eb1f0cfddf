use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the saliency, evaluation and statistics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("directory not found: {0}")]
    MissingDirectory(PathBuf),

    #[error("failed to decode {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to write {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{image} is {image_dims:?} but mask {mask} is {mask_dims:?}")]
    MaskSizeMismatch {
        image: PathBuf,
        mask: PathBuf,
        image_dims: (u32, u32),
        mask_dims: (u32, u32),
    },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mask has no salient pixels")]
    EmptyMask,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("sample size {n} outside tabulated range {min}..={max}")]
    OutOfTable { n: usize, min: usize, max: usize },

    #[error("probability {0} outside (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
