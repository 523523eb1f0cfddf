//! The eight saliency algorithms assembled from their parts.
//!
//! | algorithm | bottom-up map | prior |
//! |-----------|---------------|-------|
//! | `MSSS`    | MSSS          |       |
//! | `RC`      | region contrast, raw weights | |
//! | `LDRC`    | region contrast, debiased weights | |
//! | `CB_P`    |               | pixel-level Gaussian |
//! | `CB_S`    |               | region-level Gaussian |
//! | `MSSS+CB` | MSSS          | pixel-level Gaussian |
//! | `RC+CB`   | RC            | region-level Gaussian |
//! | `LDRC+CB` | LDRC          | region-level Gaussian |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centerbias::{
    combine, gaussian_center_map, region_center_prior, CombinationScheme, GaussianCenterModel, SchemeKind,
    CENTROID_VARIANCE_X, CENTROID_VARIANCE_Y,
};
use crate::dataset::{rgb_to_lab, RgbImage};
use crate::error::{Error, Result};
use crate::map::SaliencyMap;
use crate::pixel::msss;
use crate::region::{build_palette, region_contrast, spatial_weights, PaletteParams};
use crate::segmentation::{felzenszwalb_segment, region_stats, RegionTable, SegmentParams, Segmentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Msss,
    Rc,
    Ldrc,
    CbP,
    CbS,
    MsssCb,
    RcCb,
    LdrcCb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BottomUp {
    Msss,
    Rc,
    Ldrc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prior {
    Pixel,
    Region,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Msss,
        Algorithm::Rc,
        Algorithm::Ldrc,
        Algorithm::CbP,
        Algorithm::CbS,
        Algorithm::MsssCb,
        Algorithm::RcCb,
        Algorithm::LdrcCb,
    ];

    /// Table name, e.g. `LDRC+CB`.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Msss => "MSSS",
            Algorithm::Rc => "RC",
            Algorithm::Ldrc => "LDRC",
            Algorithm::CbP => "CB_P",
            Algorithm::CbS => "CB_S",
            Algorithm::MsssCb => "MSSS+CB",
            Algorithm::RcCb => "RC+CB",
            Algorithm::LdrcCb => "LDRC+CB",
        }
    }

    /// File-name form, e.g. `ldrc-cb`.
    pub fn slug(self) -> &'static str {
        match self {
            Algorithm::Msss => "msss",
            Algorithm::Rc => "rc",
            Algorithm::Ldrc => "ldrc",
            Algorithm::CbP => "cb-p",
            Algorithm::CbS => "cb-s",
            Algorithm::MsssCb => "msss-cb",
            Algorithm::RcCb => "rc-cb",
            Algorithm::LdrcCb => "ldrc-cb",
        }
    }

    pub fn bottom_up(self) -> Option<BottomUp> {
        match self {
            Algorithm::Msss | Algorithm::MsssCb => Some(BottomUp::Msss),
            Algorithm::Rc | Algorithm::RcCb => Some(BottomUp::Rc),
            Algorithm::Ldrc | Algorithm::LdrcCb => Some(BottomUp::Ldrc),
            Algorithm::CbP | Algorithm::CbS => None,
        }
    }

    pub fn prior(self) -> Option<Prior> {
        match self {
            Algorithm::CbP | Algorithm::MsssCb => Some(Prior::Pixel),
            Algorithm::CbS | Algorithm::RcCb | Algorithm::LdrcCb => Some(Prior::Region),
            Algorithm::Msss | Algorithm::Rc | Algorithm::Ldrc => None,
        }
    }

    /// True for the three algorithms that merge a bottom-up map with a prior.
    pub fn is_combined(self) -> bool {
        self.bottom_up().is_some() && self.prior().is_some()
    }

    /// The same algorithm without its prior.
    pub fn unbiased(self) -> Option<Algorithm> {
        self.bottom_up().map(|b| match b {
            BottomUp::Msss => Algorithm::Msss,
            BottomUp::Rc => Algorithm::Rc,
            BottomUp::Ldrc => Algorithm::Ldrc,
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == '+' || c == '_' { '-' } else { c })
            .collect();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.slug() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Standard deviations of the center Gaussian as fractions of the image
/// width and height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CenterParams {
    pub sigma_x_fraction: f64,
    pub sigma_y_fraction: f64,
}

impl Default for CenterParams {
    fn default() -> Self {
        Self {
            sigma_x_fraction: CENTROID_VARIANCE_X.sqrt(),
            sigma_y_fraction: CENTROID_VARIANCE_Y.sqrt(),
        }
    }
}

impl CenterParams {
    pub fn model(&self, width: usize, height: usize) -> Result<GaussianCenterModel> {
        GaussianCenterModel::with_fractions(width, height, self.sigma_x_fraction, self.sigma_y_fraction)
    }
}

pub const DEFAULT_SIGMA_S2: f64 = 0.4;

/// Everything that determines a saliency map besides the image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaliencyParams {
    pub segmentation: SegmentParams,
    pub palette: PaletteParams,
    pub sigma_s2: f64,
    pub center: CenterParams,
}

impl Default for SaliencyParams {
    fn default() -> Self {
        Self {
            segmentation: SegmentParams::default(),
            palette: PaletteParams::default(),
            sigma_s2: DEFAULT_SIGMA_S2,
            center: CenterParams::default(),
        }
    }
}

impl SaliencyParams {
    pub fn validate(&self) -> Result<()> {
        self.segmentation.validate()?;
        self.palette.validate()?;
        if !(self.sigma_s2 > 0.0 && self.sigma_s2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_s2 must be > 0, got {}",
                self.sigma_s2
            )));
        }
        if !(self.center.sigma_x_fraction > 0.0 && self.center.sigma_y_fraction > 0.0) {
            return Err(Error::InvalidParameter("center sigma fractions must be > 0".into()));
        }
        Ok(())
    }
}

/// The bottom-up map and prior of one image, computed once and combined under
/// any scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    pub bottom_up: Option<SaliencyMap>,
    pub prior: Option<SaliencyMap>,
}

impl Components {
    /// Final map. Algorithms without a prior or without a bottom-up part
    /// ignore the scheme.
    pub fn combine(&self, scheme: &CombinationScheme) -> Result<SaliencyMap> {
        match (&self.bottom_up, &self.prior) {
            (Some(b), Some(c)) => combine(c, b, scheme),
            (Some(m), None) | (None, Some(m)) => Ok(m.clone()),
            (None, None) => Err(Error::InvalidParameter("no saliency component computed".into())),
        }
    }
}

fn segment(img: &RgbImage, params: &SaliencyParams) -> Result<Segmentation> {
    felzenszwalb_segment(&rgb_to_lab(img), &params.segmentation)
}

fn region_maps(
    img: &RgbImage,
    params: &SaliencyParams,
    contrast: Option<BottomUp>,
    prior: bool,
) -> Result<(Option<SaliencyMap>, Option<SaliencyMap>)> {
    let seg = segment(img, params)?;
    let (palette, indices) = build_palette(img, &params.palette)?;
    let table: RegionTable = region_stats(&seg, &indices)?;
    let bottom_up = match contrast {
        Some(kind) => {
            let weights = spatial_weights(&table, params.sigma_s2, kind == BottomUp::Ldrc)?;
            Some(region_contrast(&seg, &table, &weights, &palette)?.map)
        }
        None => None,
    };
    let prior = if prior {
        Some(region_center_prior(
            &seg,
            &table,
            &params.center.model(img.width(), img.height())?,
        )?)
    } else {
        None
    };
    Ok((bottom_up, prior))
}

pub fn compute_components(img: &RgbImage, algorithm: Algorithm, params: &SaliencyParams) -> Result<Components> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let region_prior = algorithm.prior() == Some(Prior::Region);
    let (bottom_up, region) = match algorithm.bottom_up() {
        Some(BottomUp::Msss) => (Some(msss(&rgb_to_lab(img))), None),
        Some(kind) => region_maps(img, params, Some(kind), region_prior)?,
        None if region_prior => region_maps(img, params, None, true)?,
        None => (None, None),
    };
    let prior = match algorithm.prior() {
        Some(Prior::Pixel) => Some(gaussian_center_map(&params.center.model(w, h)?)),
        Some(Prior::Region) => region,
        None => None,
    };
    Ok(Components { bottom_up, prior })
}

/// Saliency map of `algorithm` for one image.
pub fn compute_map(
    img: &RgbImage,
    algorithm: Algorithm,
    params: &SaliencyParams,
    scheme: &CombinationScheme,
) -> Result<SaliencyMap> {
    compute_components(img, algorithm, params)?.combine(scheme)
}

/// Convex combination grid `0, step, 2·step, …, 1`.
pub fn weight_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidParameter(format!("step must be in (0, 0.5], got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| (i as f64 * step).min(1.0)).collect();
    if 1.0 - grid[count] > 1e-9 {
        grid.push(1.0);
    } else {
        grid[count] = 1.0;
    }
    Ok(grid)
}

/// The default combination used when none is configured.
pub fn default_scheme() -> CombinationScheme {
    CombinationScheme {
        kind: SchemeKind::Convex,
        w_c: 0.5,
    }
}
