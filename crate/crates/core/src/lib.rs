//! Salient object detection with an explicit center-bias prior.
//!
//! Two bottom-up detectors are provided: maximum symmetric surround
//! saliency ([`pixel::msss`]) works per pixel, and region contrast
//! ([`region::region_contrast`]) works on a graph-based over-segmentation
//! ([`segmentation::felzenszwalb_segment`]). Region contrast comes in a raw
//! form, whose distance weighting quietly favors central regions, and a
//! locally debiased form that removes this preference. Either can then be
//! merged with a Gaussian prior over object locations
//! ([`centerbias::combine`]).
//!
//! [`evaluation`] scores maps against binary masks and [`stats`] holds the
//! location statistics and significance tests. [`pipeline`] ties the pieces
//! into the eight named algorithms.
//!
//! ```
//! use salobj::dataset::RgbImage;
//! use salobj::pipeline::{compute_map, default_scheme, Algorithm, SaliencyParams};
//!
//! let img = RgbImage::from_fn(32, 24, |x, y| {
//!     if (12..20).contains(&x) && (8..16).contains(&y) { [200, 30, 30] } else { [40, 80, 120] }
//! })?;
//! let map = compute_map(&img, Algorithm::LdrcCb, &SaliencyParams::default(), &default_scheme())?;
//! assert!(map.get(16, 12) > map.get(1, 1));
//! # Ok::<(), salobj::Error>(())
//! ```

pub mod batch;
pub mod centerbias;
pub mod color;
pub mod config;
pub mod dataset;
mod error;
pub mod evaluation;
pub mod map;
pub mod pipeline;
pub mod pixel;
pub mod region;
pub mod segmentation;
pub mod stats;

pub use error::{Error, Result};
pub use map::SaliencyMap;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/segmentation.md")]
    struct Segmentation;
    #[doc = include_str!("../../../book/src/region-contrast.md")]
    struct RegionContrast;
    #[doc = include_str!("../../../book/src/msss.md")]
    struct Msss;
    #[doc = include_str!("../../../book/src/center-bias.md")]
    struct CenterBias;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    struct Evaluation;
    #[doc = include_str!("../../../book/src/statistics.md")]
    struct Statistics;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
