use std::f64::consts::PI;

use crate::error::{PolarError, Result};
use crate::tensor::PolarTensor;

/// A real-valued raster indexed `(x, y)` with `x` the column, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(PolarError::InvalidShape("empty image".into()));
        }
        if data.len() != width * height {
            return Err(PolarError::InvalidShape(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Geometric center of the pixel grid.
    pub fn center(&self) -> (f64, f64) {
        ((self.width as f64 - 1.0) / 2.0, (self.height as f64 - 1.0) / 2.0)
    }

    /// Exact rotation by +90 degrees about the grid center, in the frame where
    /// angles run from +x towards +y. Square images only.
    pub fn rotate_quarter_turn(&self) -> Result<Image> {
        if self.width != self.height {
            return Err(PolarError::InvalidShape("quarter-turn rotation needs a square image".into()));
        }
        let n = self.width;
        // rotated(p) = original(c + R^{-1}(p - c)), R^{-1}(dx, dy) = (dy, -dx)
        Image::from_fn(n, n, |x, y| self.get(y, n - 1 - x))
    }

    /// Bilinear sample; points outside the pixel grid read as zero.
    pub fn bilinear(&self, x: f64, y: f64) -> f64 {
        let (w, h) = (self.width as f64, self.height as f64);
        if !(x >= 0.0 && y >= 0.0 && x <= w - 1.0 && y <= h - 1.0) {
            return 0.0;
        }
        let x0 = (x.floor() as usize).min(self.width.saturating_sub(2));
        let y0 = (y.floor() as usize).min(self.height.saturating_sub(2));
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }
}

/// Sampling grid of the Cartesian-to-polar resampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGridSpec {
    pub radial: usize,
    pub angular: usize,
    pub r_max: f64,
    pub center: (f64, f64),
}

impl PolarGridSpec {
    pub fn new(radial: usize, angular: usize, r_max: f64, center: (f64, f64)) -> Result<Self> {
        let spec = Self {
            radial,
            angular,
            r_max,
            center,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid centered on `img` reaching its inscribed circle.
    pub fn centered(img: &Image, radial: usize, angular: usize) -> Result<Self> {
        let c = img.center();
        Self::new(radial, angular, c.0.min(c.1), c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial == 0 || self.angular == 0 || !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(PolarError::InvalidParameter(format!(
                "degenerate polar grid: R = {}, T = {}, r_max = {}",
                self.radial, self.angular, self.r_max
            )));
        }
        Ok(())
    }

    /// `rho_i = (i + 1/2) r_max / R`; the center itself is never sampled.
    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.r_max / self.radial as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angular as f64
    }
}

/// Bilinear resampling of `img` onto an `R x T` polar grid.
pub fn cartesian_to_polar(img: &Image, spec: &PolarGridSpec) -> Result<PolarTensor> {
    spec.validate()?;
    let (cx, cy) = spec.center;
    let dirs: Vec<(f64, f64)> = (0..spec.angular).map(|j| spec.angle(j).sin_cos()).collect();
    let values: Vec<f64> = (0..spec.radial)
        .flat_map(|i| {
            let rho = spec.radius(i);
            dirs.iter().map(move |&(s, c)| img.bilinear(cx + rho * c, cy + rho * s))
        })
        .collect();
    PolarTensor::from_real(vec![spec.radial, spec.angular], vec![1], &values)
}
