//! Explicit Gaussian center bias and its integration with bottom-up maps.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::SaliencyMap;
use crate::segmentation::{RegionTable, Segmentation};

/// Variance of the normalized salient-object centroid along x measured on the
/// benchmark masks.
pub const CENTROID_VARIANCE_X: f64 = 0.0223;
/// Variance of the normalized centroid along y.
pub const CENTROID_VARIANCE_Y: f64 = 0.0214;

/// Axis-aligned Gaussian centered on the image, in pixel units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCenterModel {
    pub width: usize,
    pub height: usize,
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
}

impl GaussianCenterModel {
    /// Center model whose standard deviations are fixed fractions of the
    /// image width and height.
    pub fn with_fractions(width: usize, height: usize, frac_x: f64, frac_y: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!("empty image {width}x{height}")));
        }
        if !(frac_x > 0.0 && frac_y > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma fractions must be > 0, got ({frac_x}, {frac_y})"
            )));
        }
        Ok(Self {
            width,
            height,
            mu_x: width as f64 / 2.0,
            mu_y: height as f64 / 2.0,
            sigma_x: frac_x * width as f64,
            sigma_y: frac_y * height as f64,
        })
    }

    /// Separable Gaussian density at pixel-space position `(x, y)`.
    pub fn density(&self, x: f64, y: f64) -> f64 {
        gaussian_1d(self.mu_x - x, self.sigma_x) * gaussian_1d(self.mu_y - y, self.sigma_y)
    }

    /// Density relative to the mode, in `(0, 1]`.
    pub fn relative(&self, x: f64, y: f64) -> f64 {
        self.density(x, y) / self.density(self.mu_x, self.mu_y)
    }
}

fn gaussian_1d(d: f64, sigma: f64) -> f64 {
    (-0.5 * (d / sigma).powi(2)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// `μ = (W/2, H/2)`, `σ_x = √0.0223 · W`, `σ_y = √0.0214 · H`.
pub fn default_center_model(width: usize, height: usize) -> Result<GaussianCenterModel> {
    GaussianCenterModel::with_fractions(width, height, CENTROID_VARIANCE_X.sqrt(), CENTROID_VARIANCE_Y.sqrt())
}

/// The center-bias map, evaluated at pixel centers `(x + 0.5, y + 0.5)` and
/// max-normalized.
pub fn gaussian_center_map(model: &GaussianCenterModel) -> SaliencyMap {
    let gx: Vec<f64> = (0..model.width)
        .map(|x| gaussian_1d(model.mu_x - (x as f64 + 0.5), model.sigma_x))
        .collect();
    let gy: Vec<f64> = (0..model.height)
        .map(|y| gaussian_1d(model.mu_y - (y as f64 + 0.5), model.sigma_y))
        .collect();
    let values = gy.iter().flat_map(|vy| gx.iter().map(move |vx| vx * vy)).collect();
    SaliencyMap::normalized(model.width, model.height, values).expect("model dimensions are nonzero")
}

/// Segment-level prior: every region takes the Gaussian evaluated at its
/// centroid (scaled back to pixels), then the map is max-normalized.
pub fn region_center_prior(
    seg: &Segmentation,
    table: &RegionTable,
    model: &GaussianCenterModel,
) -> Result<SaliencyMap> {
    if table.len() != seg.regions() {
        return Err(Error::DimensionMismatch {
            left: (seg.regions(), 1),
            right: (table.len(), 1),
        });
    }
    let (w, h) = (seg.width() as f64, seg.height() as f64);
    let per_region: Vec<f64> = table
        .regions
        .iter()
        .map(|r| model.density(r.centroid.0 * w, r.centroid.1 * h))
        .collect();
    SaliencyMap::normalized(seg.width(), seg.height(), seg.paint(&per_region))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// `w_C·S_C + w_B·S_B`
    Convex,
    /// `S_C ∘ S_B`
    Product,
    /// `min(w_C·S_C, w_B·S_B)`
    Min,
    /// `max(w_C·S_C, w_B·S_B)`
    Max,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Convex,
        SchemeKind::Product,
        SchemeKind::Min,
        SchemeKind::Max,
    ];
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Convex => "convex",
            SchemeKind::Product => "product",
            SchemeKind::Min => "min",
            SchemeKind::Max => "max",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "convex" | "linear" => Ok(SchemeKind::Convex),
            "product" => Ok(SchemeKind::Product),
            "min" => Ok(SchemeKind::Min),
            "max" => Ok(SchemeKind::Max),
            other => Err(Error::InvalidParameter(format!("unknown combination scheme {other:?}"))),
        }
    }
}

/// How the center map and bottom-up map are merged; `w_B = 1 − w_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinationScheme {
    pub kind: SchemeKind,
    pub w_c: f64,
}

impl CombinationScheme {
    pub fn new(kind: SchemeKind, w_c: f64) -> Result<Self> {
        let s = Self { kind, w_c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.w_c) {
            return Err(Error::InvalidParameter(format!(
                "w_C must be in [0, 1], got {}",
                self.w_c
            )));
        }
        Ok(())
    }

    pub fn w_b(&self) -> f64 {
        1.0 - self.w_c
    }

    /// Pointwise combination before renormalization.
    pub fn apply(&self, s_c: f64, s_b: f64) -> f64 {
        let (wc, wb) = (self.w_c, self.w_b());
        match self.kind {
            SchemeKind::Convex => wc * s_c + wb * s_b,
            SchemeKind::Product => s_c * s_b,
            SchemeKind::Min => (wc * s_c).min(wb * s_b),
            SchemeKind::Max => (wc * s_c).max(wb * s_b),
        }
    }
}

/// Combines a center map and a bottom-up map pixel by pixel and
/// max-normalizes the result.
pub fn combine(s_c: &SaliencyMap, s_b: &SaliencyMap, scheme: &CombinationScheme) -> Result<SaliencyMap> {
    if s_c.dims() != s_b.dims() {
        return Err(Error::DimensionMismatch {
            left: s_c.dims(),
            right: s_b.dims(),
        });
    }
    scheme.validate()?;
    let values = s_c
        .values()
        .iter()
        .zip(s_b.values())
        .map(|(&c, &b)| scheme.apply(c, b))
        .collect();
    SaliencyMap::normalized(s_c.width(), s_c.height(), values)
}
