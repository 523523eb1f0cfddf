//! Maximum symmetric surround saliency.
//!
//! Each pixel is compared against the mean Lab color of the largest
//! rectangle centered on it that still fits in the image. Near the border
//! the surround shrinks, so border pixels are only compared with their
//! immediate neighborhood.

use crate::color::Lab;
use crate::dataset::LabImage;
use crate::map::SaliencyMap;
use crate::segmentation::convolve_separable;

/// Summed-area table of a Lab image: entry `(x, y)` holds the sum over
/// `[0, x) × [0, y)`, so the first row and column are zero.
#[derive(Debug, Clone)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    sums: Vec<Lab>,
}

impl IntegralImage {
    pub fn new(img: &LabImage) -> Self {
        let (w, h) = (img.width(), img.height());
        let stride = w + 1;
        let mut sums = vec![Lab::default(); stride * (h + 1)];
        for y in 0..h {
            let mut row = Lab::default();
            for x in 0..w {
                row = row + img.get(x, y);
                sums[(y + 1) * stride + x + 1] = sums[y * stride + x + 1] + row;
            }
        }
        Self {
            width: w,
            height: h,
            sums,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Entry `(x, y)` with `x <= width`, `y <= height`.
    pub fn at(&self, x: usize, y: usize) -> Lab {
        self.sums[y * (self.width + 1) + x]
    }

    /// Sum over the half-open rectangle `[x0, x1) × [y0, y1)`.
    pub fn rect_sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> Lab {
        self.at(x1, y1) - self.at(x0, y1) - self.at(x1, y0) + self.at(x0, y0)
    }
}

/// Mean Lab over `[x − x₀, x + x₀] × [y − y₀, y + y₀]` with
/// `x₀ = min(x, W−1−x)` and `y₀ = min(y, H−1−y)`.
pub fn symmetric_surround_mean(integral: &IntegralImage, x: usize, y: usize) -> Lab {
    let (w, h) = (integral.width(), integral.height());
    let x0 = x.min(w - 1 - x);
    let y0 = y.min(h - 1 - y);
    let area = ((2 * x0 + 1) * (2 * y0 + 1)) as f64;
    integral.rect_sum(x - x0, y - y0, x + x0 + 1, y + y0 + 1) * (1.0 / area)
}

const BINOMIAL_5: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Squared Lab distance between each pixel's symmetric surround mean and its
/// binomially blurred value, max-normalized.
pub fn msss(img: &LabImage) -> SaliencyMap {
    let (w, h) = (img.width(), img.height());
    // offsets from the channel minima keep flat areas exactly zero and do
    // not depend on pixel order
    let origin = img
        .pixels()
        .iter()
        .fold(Lab::new(f64::INFINITY, f64::INFINITY, f64::INFINITY), |m, p| {
            Lab::new(m.l.min(p.l), m.a.min(p.a), m.b.min(p.b))
        });
    let centered = LabImage::from_fn(w, h, |x, y| img.get(x, y) - origin).expect("same dimensions");
    let blurred = convolve_separable(&centered, &BINOMIAL_5);
    let integral = IntegralImage::new(&centered);
    let values = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| symmetric_surround_mean(&integral, x, y).distance_squared(blurred.get(x, y)))
        .collect();
    SaliencyMap::normalized(w, h, values).expect("dimensions come from a valid image")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random_image(w: usize, h: usize, seed: u64) -> LabImage {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let pixels = (0..w * h)
            .map(|_| Lab::new(100.0 * next(), 200.0 * next() - 100.0, 200.0 * next() - 100.0))
            .collect();
        LabImage::new(w, h, pixels).unwrap()
    }

    #[test]
    fn corner_surround_is_the_pixel() {
        let img = pseudo_random_image(6, 4, 3);
        let ii = IntegralImage::new(&img);
        let m = symmetric_surround_mean(&ii, 0, 0);
        assert!(m.distance(img.get(0, 0)) < 1e-12);
        let m = symmetric_surround_mean(&ii, 5, 3);
        assert!(m.distance(img.get(5, 3)) < 1e-12);
    }

    #[test]
    fn center_surround_is_the_whole_image() {
        let img = pseudo_random_image(7, 5, 11);
        let ii = IntegralImage::new(&img);
        let mean = img.pixels().iter().fold(Lab::default(), |a, &p| a + p) * (1.0 / 35.0);
        assert!(symmetric_surround_mean(&ii, 3, 2).distance(mean) < 1e-9);
    }

    #[test]
    fn surround_matches_brute_force() {
        let img = pseudo_random_image(5, 5, 42);
        let ii = IntegralImage::new(&img);
        // pixel (1, 2): x0 = 1, y0 = 2 -> columns 0..=2, rows 0..=4
        let mut sum = Lab::default();
        for y in 0..=4 {
            for x in 0..=2 {
                sum = sum + img.get(x, y);
            }
        }
        let brute = sum * (1.0 / 15.0);
        assert!(symmetric_surround_mean(&ii, 1, 2).distance(brute) < 1e-9);
    }

    #[test]
    fn integral_border_is_zero() {
        let ii = IntegralImage::new(&pseudo_random_image(4, 3, 5));
        for x in 0..=4 {
            assert_eq!(ii.at(x, 0), Lab::default());
        }
        for y in 0..=3 {
            assert_eq!(ii.at(0, y), Lab::default());
        }
    }

    #[test]
    fn constant_image_has_zero_saliency() {
        let img = LabImage::from_fn(9, 7, |_, _| Lab::new(33.0, -12.0, 8.0)).unwrap();
        assert!(msss(&img).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bright_dot_is_the_maximum() {
        let img = LabImage::from_fn(33, 33, |x, y| {
            if (x, y) == (16, 16) {
                Lab::new(100.0, 0.0, 0.0)
            } else {
                Lab::default()
            }
        })
        .unwrap();
        let s = msss(&img);
        assert_eq!(s.get(16, 16), 1.0);
        let others = s.values().iter().enumerate().filter(|&(i, _)| i != 16 * 33 + 16);
        assert!(others.into_iter().all(|(_, &v)| v < 1.0));
    }

    #[test]
    fn output_is_normalized() {
        let s = msss(&pseudo_random_image(12, 9, 7));
        assert!(s.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert_eq!(s.max(), 1.0);
    }
}
