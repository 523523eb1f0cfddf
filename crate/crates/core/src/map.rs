//! The common saliency-map raster.

use std::path::Path;

use crate::error::{Error, Result};

/// W×H saliency values in `[0, 1]`, row-major.
///
/// Maps produced by this crate are max-normalized: the largest value is
/// exactly 1 unless the map is identically 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl SaliencyMap {
    /// Wraps raw values without normalizing them.
    pub fn from_raw(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || width * height != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values do not fill a {width}x{height} map",
                values.len()
            )));
        }
        Ok(Self { width, height, values })
    }

    /// Wraps non-negative raw scores and max-normalizes them.
    pub fn normalized(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let mut map = Self::from_raw(width, height, values)?;
        map.normalize();
        Ok(map)
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let values = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::from_raw(width, height, values)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::from_raw(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Divides by the maximum; an all-zero map stays all-zero.
    pub fn normalize(&mut self) {
        let max = self.max();
        if max > 0.0 {
            for v in &mut self.values {
                *v /= max;
            }
        }
    }

    /// 8-bit level of every pixel, `round(255 * s)`.
    pub fn quantized(&self) -> Vec<u8> {
        self.values.iter().map(|&s| quantize(s)).collect()
    }

    pub fn from_gray8(width: usize, height: usize, gray: &[u8]) -> Result<Self> {
        Self::from_raw(width, height, gray.iter().map(|&v| f64::from(v) / 255.0).collect())
    }

    /// Writes the map as an 8-bit grayscale PNG.
    pub fn save_png(&self, path: &Path) -> Result<()> {
        let img = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.quantized())
            .expect("buffer matches dimensions");
        img.save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Encode {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path)
            .map_err(|source| Error::Decode {
                path: path.to_path_buf(),
                source,
            })?
            .into_luma8();
        let (w, h) = img.dimensions();
        Self::from_gray8(w as usize, h as usize, img.as_raw())
    }
}

/// Maps a saliency value in `[0, 1]` to its 8-bit level.
pub fn quantize(s: f64) -> u8 {
    (255.0 * s).round().clamp(0.0, 255.0) as u8
}
