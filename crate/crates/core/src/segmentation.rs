//! Graph-based image segmentation (Felzenszwalb–Huttenlocher) on Lab images
//! and the per-region statistics consumed by region contrast.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::color::Lab;
use crate::dataset::LabImage;
use crate::error::{Error, Result};
use crate::region::ColorIndexImage;

/// Segmentation parameters. `k` scales the adaptive merge threshold
/// `k / |C|`, `sigma` is the pre-smoothing stddev in pixels and components
/// smaller than `min_size` pixels are merged into a neighbor afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentParams {
    pub k: f64,
    pub sigma: f64,
    pub min_size: usize,
}

impl Default for SegmentParams {
    fn default() -> Self {
        Self {
            k: 50.0,
            sigma: 0.5,
            min_size: 50,
        }
    }
}

impl SegmentParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "segmentation k must be > 0, got {}",
                self.k
            )));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "segmentation sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        if self.min_size == 0 {
            return Err(Error::InvalidParameter("segmentation min_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-pixel region labels, contiguous in `0..regions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    regions: usize,
}

impl Segmentation {
    /// Builds a segmentation from arbitrary labels, renumbering them by first
    /// appearance in raster order.
    pub fn from_labels(width: usize, height: usize, labels: &[u32]) -> Result<Self> {
        if width == 0 || height == 0 || width * height != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels do not fill a {width}x{height} raster",
                labels.len()
            )));
        }
        let mut remap = std::collections::HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = remap.len() as u32;
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Ok(Self {
            width,
            height,
            labels,
            regions: remap.len(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn regions(&self) -> usize {
        self.regions
    }

    /// Paints one value per region into a row-major raster.
    pub fn paint(&self, per_region: &[f64]) -> Vec<f64> {
        self.labels.iter().map(|&l| per_region[l as usize]).collect()
    }

    /// Writes a color-coded label map; colors derive from a hash of the label.
    pub fn save_debug_png(&self, path: &Path) -> Result<()> {
        let mut img = image::RgbImage::new(self.width as u32, self.height as u32);
        for (p, &l) in img.pixels_mut().zip(&self.labels) {
            let h = splitmix64(u64::from(l));
            p.0 = [h as u8, (h >> 8) as u8, (h >> 16) as u8];
        }
        img.save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Encode {
                path: path.to_path_buf(),
                source,
            })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Separable Gaussian smoothing with kernel radius `ceil(3 sigma)` and
/// clamped borders. `sigma == 0` returns the input unchanged.
pub fn gaussian_smooth(img: &LabImage, sigma: f64) -> LabImage {
    if sigma <= 0.0 {
        return img.clone();
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut kernel: Vec<f64> = (-radius..=radius)
        .map(|i| (-0.5 * (i as f64 / sigma).powi(2)).exp())
        .collect();
    let sum: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|v| *v /= sum);
    convolve_separable(img, &kernel)
}

/// Convolves rows then columns with a symmetric odd-length kernel, clamping
/// coordinates at the borders.
pub(crate) fn convolve_separable(img: &LabImage, kernel: &[f64]) -> LabImage {
    let (w, h) = (img.width(), img.height());
    let radius = (kernel.len() / 2) as isize;
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;

    let horizontal: Vec<Lab> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| {
            kernel.iter().enumerate().fold(Lab::default(), |acc, (i, &kv)| {
                acc + img.get(clamp(x as isize + i as isize - radius, w), y) * kv
            })
        })
        .collect();

    let pixels = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| {
            kernel.iter().enumerate().fold(Lab::default(), |acc, (i, &kv)| {
                acc + horizontal[clamp(y as isize + i as isize - radius, h) * w + x] * kv
            })
        })
        .collect();
    LabImage::new(w, h, pixels).expect("same dimensions")
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: u32,
    b: u32,
    weight: f64,
}

/// 8-connected grid edges weighted by Lab distance, sorted by weight with
/// ties broken by generation order.
fn sorted_edges(img: &LabImage) -> Vec<Edge> {
    let (w, h) = (img.width(), img.height());
    let mut edges = Vec::with_capacity(4 * w * h);
    let mut push = |x0: usize, y0: usize, x1: usize, y1: usize| {
        edges.push(Edge {
            a: (y0 * w + x0) as u32,
            b: (y1 * w + x1) as u32,
            weight: img.get(x0, y0).distance(img.get(x1, y1)),
        });
    };
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                push(x, y, x + 1, y);
            }
            if y + 1 < h {
                push(x, y, x, y + 1);
            }
            if x + 1 < w && y + 1 < h {
                push(x, y, x + 1, y + 1);
            }
            if x + 1 < w && y > 0 {
                push(x, y, x + 1, y - 1);
            }
        }
    }
    // Stable sort keeps generation order among equal weights.
    edges.sort_by(|l, r| l.weight.total_cmp(&r.weight));
    edges
}

struct Forest {
    parent: Vec<u32>,
    rank: Vec<u8>,
    size: Vec<u32>,
    components: usize,
}

impl Forest {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            size: vec![1; n],
            components: n,
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Joins two roots and returns the new root.
    fn join(&mut self, a: u32, b: u32) -> u32 {
        let (a, b) = if self.rank[a as usize] < self.rank[b as usize] {
            (b, a)
        } else {
            (a, b)
        };
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        if self.rank[a as usize] == self.rank[b as usize] {
            self.rank[a as usize] += 1;
        }
        self.components -= 1;
        a
    }

    fn size(&self, root: u32) -> usize {
        self.size[root as usize] as usize
    }
}

/// Runs the adaptive-threshold merge pass over pre-sorted edges.
fn merge_pass(n: usize, edges: &[Edge], k: f64) -> Forest {
    let mut forest = Forest::new(n);
    let mut threshold = vec![k; n];
    for e in edges {
        let a = forest.find(e.a);
        let b = forest.find(e.b);
        if a != b && e.weight <= threshold[a as usize] && e.weight <= threshold[b as usize] {
            let root = forest.join(a, b);
            threshold[root as usize] = e.weight + k / forest.size(root) as f64;
        }
    }
    forest
}

/// Number of components after the threshold pass, before small components
/// are merged away.
pub fn pre_merge_components(img: &LabImage, k: f64, sigma: f64) -> usize {
    let smoothed = gaussian_smooth(img, sigma);
    let edges = sorted_edges(&smoothed);
    merge_pass(img.pixels().len(), &edges, k).components
}

/// Segments a Lab image into regions.
pub fn felzenszwalb_segment(img: &LabImage, params: &SegmentParams) -> Result<Segmentation> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let n = w * h;
    let smoothed = gaussian_smooth(img, params.sigma);
    let edges = sorted_edges(&smoothed);
    let mut forest = merge_pass(n, &edges, params.k);

    for e in &edges {
        let a = forest.find(e.a);
        let b = forest.find(e.b);
        if a != b && (forest.size(a) < params.min_size || forest.size(b) < params.min_size) {
            forest.join(a, b);
        }
    }

    let roots: Vec<u32> = (0..n as u32).map(|p| forest.find(p)).collect();
    Segmentation::from_labels(w, h, &roots)
}

/// Size, centroid and color histogram of one region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionInfo {
    /// Pixel count.
    pub size: usize,
    /// Mean pixel-center position, normalized to `[0, 1]²`.
    pub centroid: (f64, f64),
    /// Sparse color distribution `(palette index, probability)`, sorted by
    /// index; probabilities sum to 1.
    pub histogram: Vec<(u32, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    pub width: usize,
    pub height: usize,
    pub regions: Vec<RegionInfo>,
}

impl RegionTable {
    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

/// Collects per-region sizes, normalized centroids and palette histograms.
pub fn region_stats(seg: &Segmentation, colors: &ColorIndexImage) -> Result<RegionTable> {
    let (w, h) = (seg.width(), seg.height());
    if (colors.width(), colors.height()) != (w, h) {
        return Err(Error::DimensionMismatch {
            left: (w, h),
            right: (colors.width(), colors.height()),
        });
    }
    let r = seg.regions();
    let mut sizes = vec![0usize; r];
    let mut sums = vec![(0u64, 0u64); r];
    let mut counts: Vec<std::collections::BTreeMap<u32, usize>> = vec![Default::default(); r];

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let l = seg.labels()[i] as usize;
            sizes[l] += 1;
            // doubled pixel-center coordinates, exact in integers
            sums[l].0 += 2 * x as u64 + 1;
            sums[l].1 += 2 * y as u64 + 1;
            *counts[l].entry(colors.indices()[i]).or_default() += 1;
        }
    }

    let regions = (0..r)
        .map(|l| {
            let n = sizes[l] as f64;
            RegionInfo {
                size: sizes[l],
                centroid: (
                    sums[l].0 as f64 / (2.0 * n * w as f64),
                    sums[l].1 as f64 / (2.0 * n * h as f64),
                ),
                histogram: counts[l].iter().map(|(&c, &k)| (c, k as f64 / n)).collect(),
            }
        })
        .collect();
    Ok(RegionTable {
        width: w,
        height: h,
        regions,
    })
}
