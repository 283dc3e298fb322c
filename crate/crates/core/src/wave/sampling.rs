//! Grid construction and per-leg sampling certification.
//!
//! The quadratic Fresnel phase is the dominant failure mode of fixed-grid
//! propagators: an undersampled chirp aliases silently and scatters beam
//! energy to wrong positions. Every leg is therefore certified against the
//! Nyquist bound dx ≤ λ·L / (2·X), where X is the half-extent of the field
//! at the leg's departure plane (the masking element bounds it exactly).

use crate::error::{LegName, Result, SimError};
use crate::model::{GeometrySpec, DEFAULT_GRID_HALF_WIDTH};

/// Default grid spacing: 20 samples per 100 nm grating period.
pub const DEFAULT_DX: f64 = 5e-9;

/// Fraction of the window cosine-tapered on each side before every leg.
pub const APODIZATION_FRACTION: f64 = 0.05;

/// Minimum number of samples per grating period.
pub const SAMPLES_PER_PERIOD_MIN: f64 = 20.0;

/// Certification record for one free-flight leg.
#[derive(Debug, Clone, Copy)]
pub struct LegCheck {
    pub leg: LegName,
    pub distance: f64,
    /// Beam half-extent at the departure plane.
    pub source_half_extent: f64,
    /// Nyquist bound on dx for this leg: λ·L / (2·X).
    pub dx_bound: f64,
    /// `dx_bound / dx`; certified iff ≥ 1.
    pub margin: f64,
    pub certified: bool,
}

/// A certified (grid, legs) pair. The grid is shared by all planes.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    pub dx: f64,
    pub n: usize,
    pub grid_half_width: f64,
    pub wavelength: f64,
    pub legs: Vec<LegCheck>,
    /// True when every masking element fits inside the untapered grid
    /// interior.
    pub extent_ok: bool,
    /// Human-readable notes on failed checks.
    pub notes: Vec<String>,
}

impl SamplingPlan {
    /// Plan with the default grid (dx = 5 nm or finer for sub-100 nm
    /// gratings, half-width 120 µm).
    pub fn for_geometry(geometry: &GeometrySpec) -> Result<SamplingPlan> {
        let dx = DEFAULT_DX.min(geometry.gratings[0].period / SAMPLES_PER_PERIOD_MIN);
        Self::with_grid(geometry, dx, DEFAULT_GRID_HALF_WIDTH)
    }

    /// Plan with an explicit grid. Certification failures are recorded, not
    /// errors; call [`SamplingPlan::require_certified`] to enforce them.
    pub fn with_grid(geometry: &GeometrySpec, dx: f64, half_width: f64) -> Result<SamplingPlan> {
        if !(dx > 0.0) {
            return Err(SimError::domain("dx", format!("must be > 0 m, got {dx}")));
        }
        if !(half_width > dx) {
            return Err(SimError::domain(
                "window_half_width",
                format!("must exceed dx, got {half_width}"),
            ));
        }
        let mut n = (2.0 * half_width / dx).ceil() as usize;
        n += n % 2; // even grid keeps the half-offset symmetry
        let grid_half_width = 0.5 * n as f64 * dx;
        let wavelength = geometry.beam.wavelength();

        let src_half = 0.5 * geometry.source.width;
        let col_half = 0.5 * geometry.collimator.width;
        let extents = [
            // The source leg is evaluated analytically; its chirp must be
            // resolvable wherever the collimator transmits.
            (LegName::SourceToCollimator, src_half + col_half),
            (LegName::CollimatorToG1, col_half),
            (LegName::G1ToG2, geometry.gratings[0].window_half_width()),
            (LegName::G2ToG3, geometry.gratings[1].window_half_width()),
            (LegName::G3ToDetector, geometry.gratings[2].window_half_width()),
        ];
        let distances = geometry.leg_distances();

        let mut legs = Vec::with_capacity(5);
        let mut notes = Vec::new();
        for ((leg, extent), distance) in extents.into_iter().zip(distances) {
            let dx_bound = if distance > 0.0 && extent > 0.0 {
                wavelength * distance / (2.0 * extent)
            } else {
                0.0
            };
            let margin = dx_bound / dx;
            let certified = distance > 0.0 && dx <= dx_bound * (1.0 + 1e-12);
            if !certified {
                notes.push(format!(
                    "{leg} leg uncertified: dx = {dx:.3e} m, bound = {dx_bound:.3e} m"
                ));
            }
            legs.push(LegCheck {
                leg,
                distance,
                source_half_extent: extent,
                dx_bound,
                margin,
                certified,
            });
        }

        let usable = (1.0 - APODIZATION_FRACTION) * grid_half_width;
        let mut extent_ok = true;
        for (name, half_extent) in [
            ("collimator slit", col_half + geometry.collimator.center.abs()),
            ("G1 window", geometry.gratings[0].window_half_width()),
            ("G2 window", geometry.gratings[1].window_half_width()),
            ("G3 window", geometry.gratings[2].window_half_width()),
        ] {
            if half_extent > usable {
                extent_ok = false;
                notes.push(format!(
                    "{name} half-extent {half_extent:.3e} m exceeds the untapered grid interior {usable:.3e} m"
                ));
            }
        }

        Ok(SamplingPlan {
            dx,
            n,
            grid_half_width,
            wavelength,
            legs,
            extent_ok,
            notes,
        })
    }

    pub fn leg(&self, name: LegName) -> &LegCheck {
        self.legs
            .iter()
            .find(|l| l.leg == name)
            .expect("all five legs are always present")
    }

    /// True when every leg certifies and all elements fit the grid.
    pub fn certified(&self) -> bool {
        self.extent_ok && self.legs.iter().all(|l| l.certified)
    }

    /// Error naming the first failing leg (or the extent failure).
    pub fn require_certified(&self) -> Result<()> {
        if let Some(bad) = self.legs.iter().find(|l| !l.certified) {
            return Err(SimError::SamplingViolation {
                leg: bad.leg,
                dx: self.dx,
                bound: bad.dx_bound,
            });
        }
        if !self.extent_ok {
            return Err(SimError::domain(
                "window_half_width",
                self.notes.join("; "),
            ));
        }
        Ok(())
    }

    /// Same check for a single leg, used before each propagation.
    pub fn require_leg(&self, name: LegName) -> Result<()> {
        let leg = self.leg(name);
        if !leg.certified {
            return Err(SimError::SamplingViolation {
                leg: leg.leg,
                dx: self.dx,
                bound: leg.dx_bound,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BeamSpec, GeometryBuilder};

    fn paper_geometry(energy_ev: f64) -> GeometrySpec {
        GeometryBuilder::default()
            .build(BeamSpec::monoenergetic(energy_ev).unwrap())
            .unwrap()
    }

    #[test]
    fn paper_defaults_certify_all_legs() {
        for energy in [6_000.0, 8_000.0, 10_000.0] {
            let plan = SamplingPlan::for_geometry(&paper_geometry(energy)).unwrap();
            assert!(
                plan.certified(),
                "{energy} eV failed: {:?}",
                plan.notes
            );
            assert!(plan.require_certified().is_ok());
            assert_eq!(plan.legs.len(), 5);
            assert_eq!(plan.n % 2, 0);
        }
    }

    #[test]
    fn coarse_grid_fails_the_detector_leg() {
        let g = paper_geometry(10_000.0);
        let plan = SamplingPlan::with_grid(&g, 50e-9, DEFAULT_GRID_HALF_WIDTH).unwrap();
        let detector_leg = plan.leg(LegName::G3ToDetector);
        assert!(!detector_leg.certified);
        match plan.require_certified() {
            Err(SimError::SamplingViolation { leg, .. }) => {
                assert!(!plan.leg(leg).certified);
            }
            other => panic!("expected a sampling violation, got {other:?}"),
        }
    }

    #[test]
    fn margins_are_reported_per_leg() {
        let plan = SamplingPlan::for_geometry(&paper_geometry(10_000.0)).unwrap();
        for leg in &plan.legs {
            assert!(leg.margin >= 1.0, "{}: margin {}", leg.leg, leg.margin);
            assert!(leg.dx_bound > 0.0);
        }
        // The G2→G3 leg is the tightest one in this geometry.
        let tightest = plan
            .legs
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
            .unwrap();
        assert_eq!(tightest.leg, LegName::G2ToG3);
    }

    #[test]
    fn invalid_grid_inputs_error() {
        let g = paper_geometry(10_000.0);
        assert!(SamplingPlan::with_grid(&g, 0.0, 1e-4).is_err());
        assert!(SamplingPlan::with_grid(&g, 5e-9, 1e-9).is_err());
    }
}
