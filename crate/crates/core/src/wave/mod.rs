//! The quantum engine: scalar Fresnel propagation of the electron wave
//! through the beamline, with partial coherence by incoherent averaging.

mod field;
mod fresnel;
mod pipeline;
mod sampling;

pub use field::{C64, WaveField};
pub use fresnel::{apodize, fresnel_propagate, fresnel_propagate_direct};
pub(crate) use pipeline::check_scan_preconditions;
pub use pipeline::{
    apply_mask, default_scan_shifts, detector_flux, detector_pattern, detector_pattern_converged,
    detector_pattern_with_plan, propagate_point_source, propagate_point_source_masked,
    scan_middle_grating, scan_profiles, scan_profiles_with_plan, source_points, CoherenceSpec,
    Mask,
};
pub use sampling::{LegCheck, SamplingPlan, APODIZATION_FRACTION, DEFAULT_DX};
