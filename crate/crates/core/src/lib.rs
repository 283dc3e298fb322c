//! Simulation engines for a three-grating electron interferometer.
//!
//! Two engines share one beamline description:
//!
//! * [`wave`] — scalar Fresnel (path-integral) propagation of the electron
//!   wave through two collimation slits and three binary amplitude gratings,
//!   with partial coherence by incoherent averaging over source points.
//! * [`classical`] — the straight-line Moiré deflectometer over the identical
//!   geometry, the classical null hypothesis.
//!
//! [`analysis`] turns detector patterns and middle-grating scans into fringe
//! fits, contrast maps, drift/noise degradations, and Talbot diagnostics.

pub mod analysis;
pub mod classical;
pub mod consts;
pub mod error;
pub mod model;
pub mod wave;

pub use analysis::{
    apply_drift, apply_poisson_noise, contrast_vs_detector, default_period_bounds,
    dominant_spatial_period, fit_fringes, pearson_correlation, talbot_carpet, talbot_carpet_with,
    talbot_report, DriftModel, Engine, FringeFit, FringeScan, IntensityProfile, ScanMetadata,
    TalbotReport,
};
pub use classical::{
    moire_contrast_map, moire_flux, moire_flux_masked, moire_flux_monte_carlo, moire_scan,
    Quadrature, RayBundleSpec,
};
pub use error::{LegName, Result, SimError};
pub use model::{
    mach_zehnder_criterion, talbot_length, wavelength_from_energy, ApertureSpec, BeamSpec,
    GeometryBuilder, GeometrySpec, GratingSpec, MachZehnderReport, DEFAULT_GRID_HALF_WIDTH,
};
pub use wave::{
    apply_mask, default_scan_shifts, detector_flux, detector_pattern, detector_pattern_converged,
    fresnel_propagate, fresnel_propagate_direct, propagate_point_source,
    propagate_point_source_masked, scan_middle_grating, scan_profiles, CoherenceSpec, Mask,
    SamplingPlan, WaveField,
};
