//! Statistics of object locations and significance tests on scores.
//!
//! Object centroids are summarized by their mean and covariance and mapped to
//! polar coordinates around the image center. Angles are compared with a
//! uniform distribution on `(−π, π)`, radii with a half-Gaussian, and signed
//! radii (angles folded onto `[0, π]`) with a Gaussian, each through the
//! correlation of a quantile-quantile plot.

mod critical;
#[rustfmt::skip]
mod critical_table;
mod special;
mod ttest;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use critical::{ppcc_critical_value, ppcc_test, table_provenance, table_range, TABULATED_ALPHAS};
pub use special::{inverse_normal_cdf, normal_cdf, normal_pdf, student_t_tail};
pub use ttest::{correlation_t_test, two_sample_t_test, Hypothesis, SampleMode, Tails, TestResult, DEFAULT_ALPHA};

use crate::dataset::GroundTruthMask;
use crate::error::{Error, Result};
use crate::map::SaliencyMap;

/// Mean pixel-center coordinate of the object, normalized to `[0, 1]²`.
pub fn mask_centroid(gt: &GroundTruthMask) -> Result<(f64, f64)> {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            if gt.get(x, y) {
                sx += x as f64 + 0.5;
                sy += y as f64 + 0.5;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok((
        sx / (n as f64 * gt.width() as f64),
        sy / (n as f64 * gt.height() as f64),
    ))
}

/// Sample mean and covariance (`n − 1` denominator) of 2-D points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentroidSummary {
    pub n: usize,
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
}

pub fn centroid_summary(points: &[(f64, f64)]) -> Result<CentroidSummary> {
    if points.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let d = n - 1.0;
    Ok(CentroidSummary {
        n: points.len(),
        mean: [mx, my],
        covariance: [[sxx / d, sxy / d], [sxy / d, syy / d]],
    })
}

/// A location in polar coordinates with its pole at `(0.5, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarSample {
    /// Angle in `[−π, π]`.
    pub theta: f64,
    /// Distance from the pole.
    pub r: f64,
}

impl PolarSample {
    /// The same point with a nonnegative angle: angles in `[−π, 0)` move to
    /// `θ + π` and the radius changes sign.
    pub fn signed(&self) -> (f64, f64) {
        if self.theta < 0.0 {
            (self.theta + PI, -self.r)
        } else {
            (self.theta, self.r)
        }
    }
}

pub fn to_polar((x, y): (f64, f64)) -> PolarSample {
    let (dx, dy) = (x - 0.5, y - 0.5);
    let r = dx.hypot(dy);
    let theta = if r == 0.0 { 0.0 } else { dy.atan2(dx) };
    PolarSample { theta, r }
}

/// Reference distribution of a Q-Q comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    /// Uniform on `(−π, π)`.
    Uniform,
    /// Standard normal.
    Gaussian,
    /// `|Z|` for standard normal `Z`.
    HalfGaussian,
}

impl Reference {
    pub const ALL: [Reference; 3] = [Reference::Uniform, Reference::Gaussian, Reference::HalfGaussian];

    /// Quantile function at `m ∈ (0, 1)`.
    pub fn quantile(self, m: f64) -> Result<f64> {
        match self {
            Reference::Uniform => {
                if !(0.0..=1.0).contains(&m) {
                    return Err(Error::ProbabilityOutOfRange(m));
                }
                Ok(-PI + 2.0 * PI * m)
            }
            Reference::Gaussian => inverse_normal_cdf(m),
            Reference::HalfGaussian => {
                if !(m > 0.0 && m < 1.0) {
                    return Err(Error::ProbabilityOutOfRange(m));
                }
                inverse_normal_cdf((1.0 + m) / 2.0)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Reference::Uniform => rng.random_range(-PI..PI),
            Reference::Gaussian => StandardNormal.sample(rng),
            Reference::HalfGaussian => {
                let z: f64 = StandardNormal.sample(rng);
                z.abs()
            }
        }
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reference::Uniform => "uniform",
            Reference::Gaussian => "gaussian",
            Reference::HalfGaussian => "half-gaussian",
        })
    }
}

impl FromStr for Reference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Reference::Uniform),
            "gaussian" | "normal" => Ok(Reference::Gaussian),
            "half-gaussian" | "half-normal" | "halfgaussian" => Ok(Reference::HalfGaussian),
            _ => Err(Error::InvalidParameter(format!("unknown reference distribution `{s}`"))),
        }
    }
}

/// Order-statistic medians of `n` uniform samples:
/// `m_n = 0.5^(1/n)`, `m_1 = 1 − m_n`, `m_i = (i − 0.3175)/(n + 0.365)`.
pub fn filliben_medians(n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let last = 0.5f64.powf(1.0 / n as f64);
    let nf = n as f64;
    Ok((1..=n)
        .map(|i| match i {
            1 => 1.0 - last,
            i if i == n => last,
            i => (i as f64 - 0.3175) / (nf + 0.365),
        })
        .collect())
}

/// Paired quantiles, both ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQData {
    pub reference: Reference,
    pub theoretical: Vec<f64>,
    pub sample: Vec<f64>,
}

impl QQData {
    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    pub fn write_csv(&self, mut out: impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "theoretical,sample")?;
        for (t, s) in self.theoretical.iter().zip(&self.sample) {
            writeln!(out, "{t:.10},{s:.10}")?;
        }
        Ok(())
    }
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Sorted samples paired with the reference quantiles at the order-statistic
/// medians.
pub fn qq_pairs(samples: &[f64], reference: Reference) -> Result<QQData> {
    let theoretical = filliben_medians(samples.len())?
        .into_iter()
        .map(|m| reference.quantile(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(QQData {
        reference,
        theoretical,
        sample: sorted(samples),
    })
}

/// Sorted samples paired with a sorted random draw of the same size from the
/// reference distribution.
pub fn qq_pairs_random<R: Rng + ?Sized>(samples: &[f64], reference: Reference, rng: &mut R) -> Result<QQData> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let draw: Vec<f64> = (0..samples.len()).map(|_| reference.sample(rng)).collect();
    Ok(QQData {
        reference,
        theoretical: sorted(&draw),
        sample: sorted(samples),
    })
}

/// Pearson correlation of two equally long sequences.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: (x.len(), 1),
            right: (y.len(), 1),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("theoretical quantiles"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("sample"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Probability plot correlation coefficient.
pub fn ppcc(qq: &QQData) -> Result<f64> {
    if qq.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: qq.len(),
        });
    }
    pearson(&qq.theoretical, &qq.sample)
}

/// Mean PPCC over `runs` random reference draws.
pub fn random_reference_ppcc<R: Rng + ?Sized>(
    samples: &[f64],
    reference: Reference,
    runs: usize,
    rng: &mut R,
) -> Result<f64> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be positive".into()));
    }
    let mut total = 0.0;
    for _ in 0..runs {
        total += ppcc(&qq_pairs_random(samples, reference, rng)?)?;
    }
    Ok(total / runs as f64)
}

/// Goodness of fit of one sample against one reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub reference: Reference,
    pub ppcc: f64,
    /// Table decision; absent when `n` lies outside the table.
    pub ppcc_test: Option<TestResult>,
    pub correlation_test: TestResult,
}

pub fn fit_report(samples: &[f64], reference: Reference, alpha: f64) -> Result<FitReport> {
    let qq = qq_pairs(samples, reference)?;
    let r = ppcc(&qq)?;
    Ok(FitReport {
        reference,
        ppcc: r,
        ppcc_test: ppcc_test(r, samples.len(), reference, alpha).ok(),
        correlation_test: correlation_t_test(r, samples.len(), alpha)?,
    })
}

/// Location statistics of a set of object centroids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionAnalysis {
    pub summary: CentroidSummary,
    /// Angles against the uniform distribution.
    pub angle: Option<FitReport>,
    /// Radii against the half-Gaussian.
    pub radius: Option<FitReport>,
    /// Signed radii against the Gaussian.
    pub signed_radius: Option<FitReport>,
    /// Reasons fits could not be computed, e.g. all radii zero.
    pub degenerate: Vec<String>,
}

pub fn analyze_centroids(centroids: &[(f64, f64)], alpha: f64) -> Result<DistributionAnalysis> {
    let summary = centroid_summary(centroids)?;
    let polar: Vec<PolarSample> = centroids.iter().map(|&c| to_polar(c)).collect();
    let angles: Vec<f64> = polar.iter().map(|p| p.theta).collect();
    let radii: Vec<f64> = polar.iter().map(|p| p.r).collect();
    let signed: Vec<f64> = polar.iter().map(|p| p.signed().1).collect();
    let mut degenerate = Vec::new();
    let mut fit = |name: &str, samples: &[f64], reference| match fit_report(samples, reference, alpha) {
        Ok(f) => Some(f),
        Err(e) => {
            degenerate.push(format!("{name}: {e}"));
            None
        }
    };
    let angle = fit("angle", &angles, Reference::Uniform);
    let radius = fit("radius", &radii, Reference::HalfGaussian);
    let signed_radius = fit("signed radius", &signed, Reference::Gaussian);
    Ok(DistributionAnalysis {
        summary,
        angle,
        radius,
        signed_radius,
        degenerate,
    })
}

/// Pixelwise mean of masks resampled to a common grid.
#[derive(Debug, Clone)]
pub struct MeanMask {
    width: usize,
    height: usize,
    sum: Vec<f64>,
    count: usize,
}

impl MeanMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            sum: vec![0.0; width * height],
            count: 0,
        }
    }

    /// Adds a mask by nearest-neighbor sampling at grid cell centers.
    pub fn add(&mut self, gt: &GroundTruthMask) {
        for y in 0..self.height {
            let sy = (((y as f64 + 0.5) / self.height as f64 * gt.height() as f64) as usize).min(gt.height() - 1);
            for x in 0..self.width {
                let sx = (((x as f64 + 0.5) / self.width as f64 * gt.width() as f64) as usize).min(gt.width() - 1);
                if gt.get(sx, sy) {
                    self.sum[y * self.width + x] += 1.0;
                }
            }
        }
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Fraction of masks covering each cell.
    pub fn finish(&self) -> Result<SaliencyMap> {
        let c = self.count.max(1) as f64;
        SaliencyMap::from_raw(self.width, self.height, self.sum.iter().map(|s| s / c).collect())
    }
}
