//! Region contrast saliency: color quantization, histogram color distance,
//! spatial weighting (raw or locally debiased) and the contrast sum itself.
//!
//! The saliency of region `k` is
//!
//! ```text
//! S(k) = Σ_{i≠k} W(k,i) · |r_i| · D_r(k,i)
//! ```
//!
//! where `D_r` is the histogram-weighted mean Lab distance between the two
//! regions' colors and `W(k,i) = exp(-‖C(k) − C(i)‖ / σ_s²)` on normalized
//! centroids. With raw weights, regions near the image center collect more
//! weight simply because their neighbors are closer on average. Dividing
//! every row of `W` by its off-diagonal sum removes that effect.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::color::{srgb_f64_to_lab, Lab};
use crate::dataset::RgbImage;
use crate::error::{Error, Result};
use crate::map::SaliencyMap;
use crate::segmentation::{RegionTable, Segmentation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaletteParams {
    pub bins_per_channel: u32,
    pub coverage: f64,
}

impl Default for PaletteParams {
    fn default() -> Self {
        Self {
            bins_per_channel: 12,
            coverage: 0.95,
        }
    }
}

impl PaletteParams {
    pub fn validate(&self) -> Result<()> {
        if !(2..=256).contains(&self.bins_per_channel) {
            return Err(Error::InvalidParameter(format!(
                "bins per channel must be in 2..=256, got {}",
                self.bins_per_channel
            )));
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "coverage must be in (0, 1], got {}",
                self.coverage
            )));
        }
        Ok(())
    }
}

/// Uniform bin of one 8-bit channel: `floor(v * bins / 256)`.
pub fn channel_bin(v: u8, bins: u32) -> u32 {
    u32::from(v) * bins / 256
}

/// Quantized colors retained for an image, with a pairwise Lab distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorPalette {
    colors: Vec<Lab>,
    /// Quantized sRGB key -> palette index, for every key seen in the image.
    map: BTreeMap<u32, u32>,
    distances: Vec<f64>,
}

impl ColorPalette {
    pub fn from_colors(colors: Vec<Lab>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::InvalidParameter("palette must not be empty".into()));
        }
        let n = colors.len();
        let mut distances = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                distances[i * n + j] = colors[i].distance(colors[j]);
            }
        }
        Ok(Self {
            colors,
            map: BTreeMap::new(),
            distances,
        })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Lab] {
        &self.colors
    }

    pub fn index_of_key(&self, key: u32) -> Option<u32> {
        self.map.get(&key).copied()
    }

    /// Euclidean Lab distance between two palette entries.
    pub fn color_distance(&self, i: u32, j: u32) -> f64 {
        self.distances[i as usize * self.colors.len() + j as usize]
    }

    fn row(&self, i: u32) -> &[f64] {
        let n = self.colors.len();
        &self.distances[i as usize * n..(i as usize + 1) * n]
    }
}

/// Per-pixel palette indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorIndexImage {
    width: usize,
    height: usize,
    indices: Vec<u32>,
}

impl ColorIndexImage {
    pub fn new(width: usize, height: usize, indices: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 || width * height != indices.len() {
            return Err(Error::InvalidParameter(format!(
                "{} indices do not fill a {width}x{height} raster",
                indices.len()
            )));
        }
        Ok(Self { width, height, indices })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }
}

/// Quantizes each sRGB channel into `bins_per_channel` uniform bins, keeps
/// the most frequent quantized colors until they cover `coverage` of the
/// pixels, and reassigns the rest to the nearest kept color in Lab.
///
/// Palette colors are the Lab values of each bin's mean member.
pub fn build_palette(img: &RgbImage, params: &PaletteParams) -> Result<(ColorPalette, ColorIndexImage)> {
    params.validate()?;
    let bins = params.bins_per_channel;
    let key_of =
        |p: [u8; 3]| (channel_bin(p[0], bins) * bins + channel_bin(p[1], bins)) * bins + channel_bin(p[2], bins);

    let mut stats: BTreeMap<u32, (usize, [f64; 3])> = BTreeMap::new();
    for &p in img.pixels() {
        let e = stats.entry(key_of(p)).or_insert((0, [0.0; 3]));
        e.0 += 1;
        for c in 0..3 {
            e.1[c] += f64::from(p[c]);
        }
    }
    let mean_lab = |&(n, sum): &(usize, [f64; 3])| {
        let n = n as f64;
        srgb_f64_to_lab([sum[0] / n / 255.0, sum[1] / n / 255.0, sum[2] / n / 255.0])
    };

    let mut by_freq: Vec<(u32, usize)> = stats.iter().map(|(&k, s)| (k, s.0)).collect();
    by_freq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let total = img.pixels().len() as f64;
    let target = params.coverage * total * (1.0 - 1e-12);
    let mut kept = 0;
    let mut covered = 0usize;
    while kept < by_freq.len() && (kept == 0 || (covered as f64) < target) {
        covered += by_freq[kept].1;
        kept += 1;
    }

    let colors: Vec<Lab> = by_freq[..kept].iter().map(|(k, _)| mean_lab(&stats[k])).collect();
    let mut palette = ColorPalette::from_colors(colors)?;
    for (i, (k, _)) in by_freq[..kept].iter().enumerate() {
        palette.map.insert(*k, i as u32);
    }
    for (k, _) in &by_freq[kept..] {
        let lab = mean_lab(&stats[k]);
        let nearest = palette
            .colors
            .iter()
            .enumerate()
            .min_by(|a, b| lab.distance_squared(*a.1).total_cmp(&lab.distance_squared(*b.1)))
            .map(|(i, _)| i as u32)
            .expect("palette is not empty");
        palette.map.insert(*k, nearest);
    }

    let indices = img.pixels().iter().map(|&p| palette.map[&key_of(p)]).collect();
    let index_img = ColorIndexImage::new(img.width(), img.height(), indices)?;
    Ok((palette, index_img))
}

/// `D_r(r1, r2) = Σ_i Σ_j f1(c_i) f2(c_j) D(c_i, c_j)` for sparse histograms.
pub fn region_color_distance(h1: &[(u32, f64)], h2: &[(u32, f64)], palette: &ColorPalette) -> f64 {
    h1.iter()
        .map(|&(ci, fi)| {
            fi * h2
                .iter()
                .map(|&(cj, fj)| fj * palette.color_distance(ci, cj))
                .sum::<f64>()
        })
        .sum()
}

/// Region-to-region spatial weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialWeights {
    n: usize,
    values: Vec<f64>,
    pub debiased: bool,
    pub sigma_s2: f64,
}

impl SpatialWeights {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Weight of region `i` in the contrast sum of region `k`. The diagonal
    /// is 1 for raw weights and 0 for debiased weights; it never enters the
    /// contrast sum.
    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.n + i]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.n..(k + 1) * self.n]
    }
}

/// `exp(-‖C(k) − C(i)‖ / σ_s²)` on normalized centroids; with `debiased`,
/// each row is divided by its off-diagonal sum so it sums to one.
pub fn spatial_weights(table: &RegionTable, sigma_s2: f64, debiased: bool) -> Result<SpatialWeights> {
    if !(sigma_s2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma_s^2 must be > 0, got {sigma_s2}"
        )));
    }
    if table.is_empty() {
        return Err(Error::InvalidParameter("region table is empty".into()));
    }
    let n = table.len();
    let mut values = vec![0.0; n * n];
    for k in 0..n {
        let (xk, yk) = table.regions[k].centroid;
        for i in 0..n {
            let (xi, yi) = table.regions[i].centroid;
            values[k * n + i] = (-((xk - xi).hypot(yk - yi)) / sigma_s2).exp();
        }
    }
    if debiased {
        for k in 0..n {
            let row = &mut values[k * n..(k + 1) * n];
            row[k] = 0.0;
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                row.iter_mut().for_each(|v| *v /= sum);
            }
        }
    }
    Ok(SpatialWeights {
        n,
        values,
        debiased,
        sigma_s2,
    })
}

/// Per-region scores plus the painted, max-normalized map.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSaliency {
    /// Raw `S(k)` before normalization.
    pub scores: Vec<f64>,
    pub map: SaliencyMap,
    /// Set when the image has a single region, so every score is zero.
    pub single_region: bool,
}

/// Raw region-contrast scores.
pub fn region_contrast_scores(
    table: &RegionTable,
    weights: &SpatialWeights,
    palette: &ColorPalette,
) -> Result<Vec<f64>> {
    let n = table.len();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            left: (n, n),
            right: (weights.len(), weights.len()),
        });
    }
    let p = palette.len();
    // expected[k][c]: mean distance from region k's colors to palette color c
    let expected: Vec<Vec<f64>> = table
        .regions
        .iter()
        .map(|r| {
            let mut acc = vec![0.0; p];
            for &(c, f) in &r.histogram {
                for (a, d) in acc.iter_mut().zip(palette.row(c)) {
                    *a += f * d;
                }
            }
            acc
        })
        .collect();

    Ok((0..n)
        .map(|k| {
            (0..n)
                .filter(|&i| i != k)
                .map(|i| {
                    let region = &table.regions[i];
                    let color: f64 = region.histogram.iter().map(|&(c, f)| f * expected[k][c as usize]).sum();
                    weights.get(k, i) * region.size as f64 * color
                })
                .sum()
        })
        .collect())
}

/// Computes region contrast and paints it. Debiased weights give the locally
/// debiased variant; raw weights give the original one.
pub fn region_contrast(
    seg: &Segmentation,
    table: &RegionTable,
    weights: &SpatialWeights,
    palette: &ColorPalette,
) -> Result<RegionSaliency> {
    if table.len() != seg.regions() {
        return Err(Error::DimensionMismatch {
            left: (seg.regions(), 1),
            right: (table.len(), 1),
        });
    }
    let scores = region_contrast_scores(table, weights, palette)?;
    let single_region = scores.len() == 1;
    if single_region {
        log::warn!("single-region image; region contrast is zero everywhere");
    }
    let map = SaliencyMap::normalized(seg.width(), seg.height(), seg.paint(&scores))?;
    Ok(RegionSaliency {
        scores,
        map,
        single_region,
    })
}

/// A scalar field on a regular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// One CSV line per grid row.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        for row in self.values.chunks(self.width) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.12}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(file)?;
        Ok(())
    }
}

/// For each cell `k` of a regular grid with positions normalized to
/// `[0, 1]²`, the raw weight sum `Σ_{i≠k} exp(-‖p_k − p_i‖ / σ_s²)`.
pub fn weight_sum_field(grid_w: usize, grid_h: usize, sigma_s2: f64) -> Result<ScalarField> {
    if grid_w < 2 || grid_h < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid must be at least 2x2, got {grid_w}x{grid_h}"
        )));
    }
    if !(sigma_s2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma_s^2 must be > 0, got {sigma_s2}"
        )));
    }
    let pos: Vec<(f64, f64)> = (0..grid_h)
        .flat_map(|y| (0..grid_w).map(move |x| (x as f64 / (grid_w - 1) as f64, y as f64 / (grid_h - 1) as f64)))
        .collect();
    let values = pos
        .iter()
        .enumerate()
        .map(|(k, pk)| {
            pos.iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, pi)| (-(pk.0 - pi.0).hypot(pk.1 - pi.1) / sigma_s2).exp())
                .sum()
        })
        .collect();
    Ok(ScalarField {
        width: grid_w,
        height: grid_h,
        values,
    })
}
