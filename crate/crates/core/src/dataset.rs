//! Benchmark ingestion: image/mask pairing, decoding and color conversion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::color::{srgb_to_lab, Lab};
use crate::error::{Error, Result};

/// An 8-bit sRGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> [u8; 3]) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

/// A Lab raster with the same layout as its source [`RgbImage`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage {
    width: usize,
    height: usize,
    pixels: Vec<Lab>,
}

impl LabImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Lab>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> Lab) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Lab] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Lab {
        self.pixels[y * self.width + x]
    }
}

/// Binary salient-object mask; `true` marks the object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl GroundTruthMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(width, height, bits.len())?;
        Ok(Self { width, height, bits })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let bits = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, bits)
    }

    /// Binarizes 8-bit gray values: salient iff `value >= 128`.
    pub fn from_gray(width: usize, height: usize, gray: &[u8]) -> Result<Self> {
        Self::new(width, height, gray.iter().map(|&v| v >= MASK_THRESHOLD).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn positives(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// All-true and all-false masks are legal but cannot support every measure.
    pub fn is_degenerate(&self) -> bool {
        let p = self.positives();
        p == 0 || p == self.bits.len()
    }
}

pub const MASK_THRESHOLD: u8 = 128;

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!("empty raster {width}x{height}")));
    }
    if width * height != len {
        return Err(Error::InvalidParameter(format!(
            "{len} pixels do not fill a {width}x{height} raster"
        )));
    }
    Ok(())
}

/// Per-pixel sRGB -> linear RGB -> XYZ (D65) -> Lab.
pub fn rgb_to_lab(img: &RgbImage) -> LabImage {
    LabImage {
        width: img.width,
        height: img.height,
        pixels: img.pixels.iter().map(|&p| srgb_to_lab(p)).collect(),
    }
}

/// One image/mask pair of the benchmark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub stem: String,
    pub image: PathBuf,
    pub mask: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetIndex {
    pub entries: Vec<DatasetEntry>,
    /// Images that had no mask with the same stem (or duplicated a stem).
    pub skipped: Vec<PathBuf>,
}

impl DatasetIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn warnings(&self) -> usize {
        self.skipped.len()
    }
}

const RASTER_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "bmp"];

fn is_raster(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| RASTER_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        .unwrap_or(false)
}

/// Lists raster files in `dir` keyed by file stem. Later duplicates of a stem
/// (in path order) are returned separately.
pub fn rasters_by_stem(dir: &Path) -> Result<(BTreeMap<String, PathBuf>, Vec<PathBuf>)> {
    if !dir.is_dir() {
        return Err(Error::MissingDirectory(dir.to_path_buf()));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_raster(p))
        .collect();
    paths.sort();

    let mut by_stem = BTreeMap::new();
    let mut duplicates = Vec::new();
    for path in paths {
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            duplicates.push(path);
            continue;
        };
        if by_stem.contains_key(&stem) {
            duplicates.push(path);
        } else {
            by_stem.insert(stem, path);
        }
    }
    Ok((by_stem, duplicates))
}

/// Pairs every image in `image_dir` with the mask of the same stem in
/// `mask_dir`. Entries are sorted by stem.
pub fn index_dataset(image_dir: &Path, mask_dir: &Path) -> Result<DatasetIndex> {
    let (images, mut skipped) = rasters_by_stem(image_dir)?;
    let (masks, _) = rasters_by_stem(mask_dir)?;

    let mut entries = Vec::with_capacity(images.len());
    for (stem, image) in images {
        match masks.get(&stem) {
            Some(mask) => entries.push(DatasetEntry {
                stem,
                image,
                mask: mask.clone(),
            }),
            None => {
                log::warn!("no mask for {}", image.display());
                skipped.push(image);
            }
        }
    }
    Ok(DatasetIndex { entries, skipped })
}

fn open(path: &Path) -> Result<image::DynamicImage> {
    image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let rgb = open(path)?.into_rgb8();
    let (w, h) = rgb.dimensions();
    let pixels = rgb.pixels().map(|p| p.0).collect();
    RgbImage::new(w as usize, h as usize, pixels)
}

/// Gray level of a mask pixel: `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn mask_gray(rgb: [u8; 3]) -> u8 {
    let v = 0.299 * f64::from(rgb[0]) + 0.587 * f64::from(rgb[1]) + 0.114 * f64::from(rgb[2]);
    v.round().clamp(0.0, 255.0) as u8
}

pub fn load_mask(path: &Path) -> Result<GroundTruthMask> {
    let img = open(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let gray: Vec<u8> = match img {
        image::DynamicImage::ImageLuma8(g) => g.into_raw(),
        image::DynamicImage::ImageLumaA8(g) => g.pixels().map(|p| p.0[0]).collect(),
        other => other.into_rgb8().pixels().map(|p| mask_gray(p.0)).collect(),
    };
    GroundTruthMask::from_gray(w, h, &gray)
}

/// Loads and validates one image/mask pair.
pub fn load_pair(entry: &DatasetEntry) -> Result<(RgbImage, GroundTruthMask)> {
    let image = load_rgb(&entry.image)?;
    let mask = load_mask(&entry.mask)?;
    if (image.width, image.height) != (mask.width, mask.height) {
        return Err(Error::MaskSizeMismatch {
            image: entry.image.clone(),
            mask: entry.mask.clone(),
            image_dims: (image.width as u32, image.height as u32),
            mask_dims: (mask.width as u32, mask.height as u32),
        });
    }
    Ok((image, mask))
}
