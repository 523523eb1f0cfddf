//! sRGB to CIE Lab conversion (D65 white point, 2° observer).

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// D65 reference white in XYZ, Y normalized to 1.
const WHITE_X: f64 = 0.950_47;
const WHITE_Y: f64 = 1.0;
const WHITE_Z: f64 = 1.088_83;

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

/// A CIE Lab triple. `l` lies in `[0, 100]`; `a` and `b` are unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }

    pub fn distance_squared(self, other: Lab) -> f64 {
        let d = self - other;
        d.l * d.l + d.a * d.a + d.b * d.b
    }

    /// Euclidean distance in Lab.
    pub fn distance(self, other: Lab) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

impl Add for Lab {
    type Output = Lab;
    fn add(self, rhs: Lab) -> Lab {
        Lab::new(self.l + rhs.l, self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Lab {
    type Output = Lab;
    fn sub(self, rhs: Lab) -> Lab {
        Lab::new(self.l - rhs.l, self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul<f64> for Lab {
    type Output = Lab;
    fn mul(self, rhs: f64) -> Lab {
        Lab::new(self.l * rhs, self.a * rhs, self.b * rhs)
    }
}

/// Gamma-decodes one sRGB channel given as a fraction in `[0, 1]`.
fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.040_45 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

/// Converts an sRGB color with channels in `[0, 1]` to Lab.
pub fn srgb_f64_to_lab(rgb: [f64; 3]) -> Lab {
    let r = srgb_to_linear(rgb[0]);
    let g = srgb_to_linear(rgb[1]);
    let b = srgb_to_linear(rgb[2]);

    let x = 0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = 0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b;

    let fx = lab_f(x / WHITE_X);
    let fy = lab_f(y / WHITE_Y);
    let fz = lab_f(z / WHITE_Z);

    Lab::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Converts an 8-bit sRGB triple to Lab.
pub fn srgb_to_lab(rgb: [u8; 3]) -> Lab {
    srgb_f64_to_lab([
        f64::from(rgb[0]) / 255.0,
        f64::from(rgb[1]) / 255.0,
        f64::from(rgb[2]) / 255.0,
    ])
}
