//! Sampled complex transverse amplitude at a single beamline plane.

use num_complex::Complex;

use crate::error::{Result, SimError};

pub type C64 = Complex<f64>;

/// Complex wave amplitude on a uniform transverse grid.
///
/// The grid convention everywhere in this crate is the symmetric half-offset
/// grid: with even `n`, samples sit at x = (j + ½ − n/2)·dx, so no sample
/// falls on x = 0 and mask edges that land on integer multiples of dx sit
/// exactly midway between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub samples: Vec<C64>,
    pub x_min: f64,
    pub dx: f64,
    pub wavelength: f64,
}

impl WaveField {
    pub fn new(samples: Vec<C64>, x_min: f64, dx: f64, wavelength: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(SimError::domain("samples", "must be non-empty"));
        }
        if !(dx > 0.0) {
            return Err(SimError::domain("dx", format!("must be > 0 m, got {dx}")));
        }
        if !(wavelength > 0.0) {
            return Err(SimError::domain(
                "wavelength",
                format!("must be > 0 m, got {wavelength}"),
            ));
        }
        Ok(WaveField {
            samples,
            x_min,
            dx,
            wavelength,
        })
    }

    /// Zero field on a grid symmetric about x = 0.
    pub fn zeros_symmetric(n: usize, dx: f64, wavelength: f64) -> Result<Self> {
        let x_min = (0.5 - n as f64 / 2.0) * dx;
        Self::new(vec![C64::new(0.0, 0.0); n], x_min, dx, wavelength)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample abscissa.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len() - 1)
    }

    /// Full window width n·dx (one cell wider than x_max − x_min).
    pub fn span(&self) -> f64 {
        self.len() as f64 * self.dx
    }

    /// ∫|ψ|² dx by the rectangle rule, which is exact for the periodic grid.
    pub fn total_probability(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dx
    }

    /// |ψ|² per sample.
    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Relative L2 distance ‖a − b‖/‖a‖ between two fields on the same grid.
    pub fn relative_l2_distance(&self, other: &WaveField) -> f64 {
        assert_eq!(self.len(), other.len(), "grids must match");
        let num: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = self.samples.iter().map(|c| c.norm_sqr()).sum();
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_grid_has_no_sample_at_zero() {
        let f = WaveField::zeros_symmetric(8, 1.0, 1e-11).unwrap();
        assert_relative_eq!(f.x(0), -3.5);
        assert_relative_eq!(f.x(7), 3.5);
        assert_relative_eq!(f.x(3), -0.5);
        assert_relative_eq!(f.x(4), 0.5);
        assert_relative_eq!(f.x(0) + f.x_max(), 0.0);
    }

    #[test]
    fn constructor_validates() {
        assert!(WaveField::new(vec![], 0.0, 1.0, 1e-11).is_err());
        assert!(WaveField::new(vec![C64::new(1.0, 0.0)], 0.0, 0.0, 1e-11).is_err());
        assert!(WaveField::new(vec![C64::new(1.0, 0.0)], 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn total_probability_of_unit_samples() {
        let f = WaveField::new(vec![C64::new(1.0, 0.0); 10], 0.0, 0.5, 1e-11).unwrap();
        assert_relative_eq!(f.total_probability(), 5.0);
    }
}
