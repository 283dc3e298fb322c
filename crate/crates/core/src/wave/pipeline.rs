//! End-to-end wave propagation through the beamline.
//!
//! A run launches one paraxial point-source wave per incoherent source point
//! (the analytic Fresnel image of a delta emitter, masked by the collimation
//! slit), then alternates apodize → propagate → mask through the three
//! gratings and drifts to the detector plane. Partial coherence is an
//! incoherent average of |ψ|² over source points spanning the source slit,
//! optionally over a Gaussian energy distribution.
//!
//! Source and shift loops may run on worker threads, but every reduction
//! happens in a fixed index order, so results are bit-identical regardless
//! of worker count.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::analysis::{Engine, FringeScan, IntensityProfile, ScanMetadata};
use crate::error::{LegName, Result, SimError};
use crate::model::{ApertureSpec, BeamSpec, GeometrySpec, GratingSpec};
use crate::wave::field::{C64, WaveField};
use crate::wave::fresnel::{apodize, fresnel_propagate};
use crate::wave::sampling::{SamplingPlan, APODIZATION_FRACTION};

/// How partial coherence is discretized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSpec {
    /// Incoherent emitters spanning the source slit.
    pub n_source_points: u32,
    /// Gaussian energy samples; 1 means monoenergetic.
    pub n_energy_samples: u32,
    /// Relative change threshold for the source-point doubling test.
    pub convergence_tol: f64,
}

impl Default for CoherenceSpec {
    fn default() -> Self {
        CoherenceSpec {
            n_source_points: 32,
            n_energy_samples: 1,
            convergence_tol: 1e-3,
        }
    }
}

impl CoherenceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_source_points < 1 {
            return Err(SimError::domain("n_source_points", "must be >= 1"));
        }
        if self.n_energy_samples < 1 {
            return Err(SimError::domain("n_energy_samples", "must be >= 1"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(SimError::domain("convergence_tol", "must be > 0"));
        }
        Ok(())
    }
}

/// A masking element at a beamline plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mask {
    Grating(GratingSpec),
    Slit(ApertureSpec),
    /// Transmits everything; stands in for a removed element.
    Open,
}

impl Mask {
    pub fn transmits(&self, x: f64) -> bool {
        match self {
            Mask::Grating(g) => g.transmits(x),
            Mask::Slit(a) => a.contains(x),
            Mask::Open => true,
        }
    }
}

/// Pointwise multiply the field by the element's binary transmission.
pub fn apply_mask(field: &WaveField, mask: &Mask) -> WaveField {
    let mut out = field.clone();
    apply_mask_in_place(&mut out, mask);
    out
}

pub(crate) fn apply_mask_in_place(field: &mut WaveField, mask: &Mask) {
    if matches!(mask, Mask::Open) {
        return;
    }
    for j in 0..field.len() {
        if !mask.transmits(field.x(j)) {
            field.samples[j] = C64::new(0.0, 0.0);
        }
    }
}

/// Top-hat integral of the intensity over the slit, trapezoidal rule with
/// linear interpolation at the slit edges.
pub fn detector_flux(profile: &IntensityProfile, slit: &ApertureSpec) -> Result<f64> {
    let x_min = profile.x_min;
    let x_max = profile.x_max();
    let tol = 1e-6 * profile.dx;
    if slit.lo() < x_min - tol || slit.hi() > x_max + tol {
        return Err(SimError::SlitOutsideWindow {
            lo: slit.lo(),
            hi: slit.hi(),
            min: x_min,
            max: x_max,
        });
    }
    let lo = slit.lo().max(x_min);
    let hi = slit.hi().min(x_max);
    Ok(integrate_linear(profile, lo, hi))
}

/// ∫ of the piecewise-linear interpolant of `profile` over [lo, hi].
fn integrate_linear(profile: &IntensityProfile, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let n = profile.values.len();
    let dx = profile.dx;
    let cell = |x: f64| (((x - profile.x_min) / dx).floor() as isize).clamp(0, n as isize - 2) as usize;
    let value_at = |x: f64| {
        let j = cell(x);
        let t = (x - profile.x(j)) / dx;
        profile.values[j] * (1.0 - t) + profile.values[j + 1] * t
    };

    let j_lo = cell(lo);
    let j_hi = cell(hi);
    if j_lo == j_hi {
        return 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
    }

    // Partial cell at each end plus full trapezoids between.
    let mut total = 0.5 * (value_at(lo) + profile.values[j_lo + 1]) * (profile.x(j_lo + 1) - lo);
    for j in (j_lo + 1)..j_hi {
        total += 0.5 * (profile.values[j] + profile.values[j + 1]) * dx;
    }
    total += 0.5 * (profile.values[j_hi] + value_at(hi)) * (hi - profile.x(j_hi));
    total
}

/// Midpoint sample positions of `n` incoherent emitters across a slit.
pub fn source_points(slit: &ApertureSpec, n: u32) -> Vec<f64> {
    let w = slit.width;
    (0..n)
        .map(|k| slit.lo() + (k as f64 + 0.5) * w / n as f64)
        .collect()
}

/// Energy sample list (energy in eV, normalized weight). Midpoint samples of
/// a ±3σ Gaussian window; degenerates to the nominal energy for σ = 0 or a
/// single sample.
fn energy_samples(beam: &BeamSpec, n: u32) -> Result<Vec<(f64, f64)>> {
    let e0 = beam.kinetic_energy_ev();
    let sigma = beam.energy_spread_sigma_ev();
    if n == 1 || sigma == 0.0 {
        return Ok(vec![(e0, 1.0)]);
    }
    let lo = e0 - 3.0 * sigma;
    if lo <= 0.0 {
        return Err(SimError::domain(
            "energy_spread_sigma",
            format!("E − 3σ = {lo} eV must stay positive"),
        ));
    }
    let step = 6.0 * sigma / n as f64;
    let mut samples: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let e = lo + (k as f64 + 0.5) * step;
            let z = (e - e0) / sigma;
            (e, (-0.5 * z * z).exp())
        })
        .collect();
    let norm: f64 = samples.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut samples {
        *w /= norm;
    }
    Ok(samples)
}

struct Stage {
    leg: LegName,
    distance: f64,
    mask: Mask,
}

/// Paraxial point-source wave arriving at the collimator plane, masked by
/// the collimation slit and scaled to unit transmitted probability.
fn launch_at_collimator(
    geometry: &GeometrySpec,
    source_x: f64,
    wavelength: f64,
    plan: &SamplingPlan,
) -> Result<WaveField> {
    if !geometry.source.contains(source_x) {
        return Err(SimError::domain(
            "source_x",
            format!(
                "{source_x} m lies outside the source slit [{:.4e}, {:.4e}] m",
                geometry.source.lo(),
                geometry.source.hi()
            ),
        ));
    }
    let l1 = geometry.collimator.z_position - geometry.source.z_position;
    if !(l1 > 0.0) {
        return Err(SimError::DegenerateGeometry(
            "source and collimator planes coincide".into(),
        ));
    }
    plan.require_leg(LegName::SourceToCollimator)?;

    let mut field = WaveField::zeros_symmetric(plan.n, plan.dx, wavelength)?;
    let amplitude = 1.0 / geometry.collimator.width.sqrt();
    for j in 0..field.len() {
        let x = field.x(j);
        if geometry.collimator.contains(x) {
            let u = x - source_x;
            field.samples[j] = C64::from_polar(amplitude, PI * u * u / (wavelength * l1));
        }
    }
    Ok(field)
}

fn run_stage(field: &mut WaveField, stage: &Stage, plan: &SamplingPlan) -> Result<()> {
    plan.require_leg(stage.leg)?;
    apodize(field, APODIZATION_FRACTION);
    *field = fresnel_propagate(field, stage.distance)?;
    apply_mask_in_place(field, &stage.mask);
    Ok(())
}

fn grating_stages(geometry: &GeometrySpec, masks: &[Mask; 3]) -> [Stage; 4] {
    let d = geometry.leg_distances();
    [
        Stage {
            leg: LegName::CollimatorToG1,
            distance: d[1],
            mask: masks[0],
        },
        Stage {
            leg: LegName::G1ToG2,
            distance: d[2],
            mask: masks[1],
        },
        Stage {
            leg: LegName::G2ToG3,
            distance: d[3],
            mask: masks[2],
        },
        Stage {
            leg: LegName::G3ToDetector,
            distance: d[4],
            mask: Mask::Open,
        },
    ]
}

/// One coherent term of the quantum calculation: detector-plane |ψ|² for a
/// single point emitter at `source_x`, with the gratings replaced by the
/// given masks. Not normalized; the launch carries unit probability through
/// the collimator.
pub fn propagate_point_source_masked(
    geometry: &GeometrySpec,
    source_x: f64,
    wavelength: f64,
    plan: &SamplingPlan,
    masks: &[Mask; 3],
) -> Result<IntensityProfile> {
    let mut field = launch_at_collimator(geometry, source_x, wavelength, plan)?;
    for stage in grating_stages(geometry, masks) {
        run_stage(&mut field, &stage, plan)?;
    }
    Ok(IntensityProfile::new(
        field.x_min,
        field.dx,
        field.intensity(),
    ))
}

/// [`propagate_point_source_masked`] with the geometry's own gratings.
pub fn propagate_point_source(
    geometry: &GeometrySpec,
    source_x: f64,
    wavelength: f64,
    plan: &SamplingPlan,
) -> Result<IntensityProfile> {
    let masks = [
        Mask::Grating(geometry.gratings[0]),
        Mask::Grating(geometry.gratings[1]),
        Mask::Grating(geometry.gratings[2]),
    ];
    propagate_point_source_masked(geometry, source_x, wavelength, plan, &masks)
}

fn weighted_incoherent_sum(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
    plan: &SamplingPlan,
) -> Result<IntensityProfile> {
    coherence.validate()?;
    let energies = energy_samples(&geometry.beam, coherence.n_energy_samples)?;
    let sources = source_points(&geometry.source, coherence.n_source_points);
    let src_weight = 1.0 / sources.len() as f64;

    let mut acc = vec![0.0; plan.n];
    let mut grid: Option<(f64, f64)> = None;
    for (energy_ev, weight) in energies {
        let wavelength = crate::model::wavelength_from_energy(energy_ev)?;
        let profiles: Vec<Result<IntensityProfile>> = sources
            .par_iter()
            .map(|&sx| propagate_point_source(geometry, sx, wavelength, plan))
            .collect();
        for profile in profiles {
            let profile = profile?;
            grid.get_or_insert((profile.x_min, profile.dx));
            for (a, v) in acc.iter_mut().zip(&profile.values) {
                *a += weight * src_weight * v;
            }
        }
    }
    let (x_min, dx) = grid.expect("at least one source point");
    Ok(IntensityProfile::new(x_min, dx, acc))
}

/// Incoherent detector-plane pattern, normalized to unit total.
pub fn detector_pattern(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
) -> Result<IntensityProfile> {
    let plan = SamplingPlan::for_geometry(geometry)?;
    detector_pattern_with_plan(geometry, coherence, &plan)
}

/// [`detector_pattern`] on a caller-provided sampling plan.
pub fn detector_pattern_with_plan(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
    plan: &SamplingPlan,
) -> Result<IntensityProfile> {
    let mut profile = weighted_incoherent_sum(geometry, coherence, plan)?;
    profile.normalize_total();
    Ok(profile)
}

/// Doubles the source-point count until no detector-slit flux (the slit at
/// any center across the window) changes by more than `convergence_tol`
/// relative to the largest flux. Returns the converged pattern and count.
pub fn detector_pattern_converged(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
) -> Result<(IntensityProfile, u32)> {
    const MAX_SOURCE_POINTS: u32 = 1024;
    let plan = SamplingPlan::for_geometry(geometry)?;
    let mut coh = *coherence;
    let mut current = detector_pattern_with_plan(geometry, &coh, &plan)?;
    loop {
        let doubled = CoherenceSpec {
            n_source_points: coh.n_source_points * 2,
            ..coh
        };
        let next = detector_pattern_with_plan(geometry, &doubled, &plan)?;
        if max_slit_flux_change(&current, &next, geometry.detector_slit.width)
            < coherence.convergence_tol
        {
            return Ok((next, doubled.n_source_points));
        }
        if doubled.n_source_points >= MAX_SOURCE_POINTS {
            return Err(SimError::domain(
                "n_source_points",
                format!(
                    "source average not converged to {} at {} points",
                    coherence.convergence_tol, doubled.n_source_points
                ),
            ));
        }
        coh = doubled;
        current = next;
    }
}

/// max over slit centers of |Δflux|, relative to the largest flux seen.
pub(crate) fn max_slit_flux_change(a: &IntensityProfile, b: &IntensityProfile, width: f64) -> f64 {
    assert_eq!(a.values.len(), b.values.len());
    let n = a.values.len();
    let half = 0.5 * width;
    let stride = ((0.1 * width / a.dx) as usize).max(1);
    let mut max_delta: f64 = 0.0;
    let mut max_flux: f64 = 0.0;
    let mut j = 0;
    while j < n {
        let c = a.x(j);
        if c - half >= a.x_min && c + half <= a.x_max() {
            let fa = integrate_linear(a, c - half, c + half);
            let fb = integrate_linear(b, c - half, c + half);
            max_delta = max_delta.max((fa - fb).abs());
            max_flux = max_flux.max(fa.max(fb));
        }
        j += stride;
    }
    if max_flux > 0.0 {
        max_delta / max_flux
    } else {
        0.0
    }
}

/// Default middle-grating scan: three expected fringe periods in steps of
/// one twentieth of the grating period (grid-commensurate).
pub fn default_scan_shifts(period: f64) -> Vec<f64> {
    (0..=30).map(|k| k as f64 * period / 20.0).collect()
}

pub(crate) fn check_scan_preconditions(shifts: &[f64], period: f64) -> Result<()> {
    if shifts.len() < 2 {
        return Err(SimError::ScanPrecondition(
            "need at least two shift values".into(),
        ));
    }
    if shifts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::ScanPrecondition(
            "shifts must be strictly increasing".into(),
        ));
    }
    let span = shifts[shifts.len() - 1] - shifts[0];
    let expected_period = 0.5 * period;
    if span < 1.5 * expected_period {
        return Err(SimError::ScanPrecondition(format!(
            "shift span {span:.3e} m covers less than 1.5 expected fringe periods ({:.3e} m)",
            1.5 * expected_period
        )));
    }
    Ok(())
}

/// Detector-plane profiles for every middle-grating shift, with all other
/// parameters frozen. The field up to the middle grating is computed once
/// per (energy, source point) and reused across shifts.
pub fn scan_profiles(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
    shifts: &[f64],
) -> Result<Vec<IntensityProfile>> {
    let plan = SamplingPlan::for_geometry(geometry)?;
    scan_profiles_with_plan(geometry, coherence, shifts, &plan)
}

pub fn scan_profiles_with_plan(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
    shifts: &[f64],
    plan: &SamplingPlan,
) -> Result<Vec<IntensityProfile>> {
    coherence.validate()?;
    check_scan_preconditions(shifts, geometry.gratings[1].period)?;

    let energies = energy_samples(&geometry.beam, coherence.n_energy_samples)?;
    let sources = source_points(&geometry.source, coherence.n_source_points);
    let src_weight = 1.0 / sources.len() as f64;
    let legs = geometry.leg_distances();
    let g2_base = geometry.gratings[1].lateral_shift;

    // Cache ψ at the middle-grating plane (before its mask) per
    // (energy, source point).
    let mut cached: Vec<(f64, Vec<WaveField>)> = Vec::new();
    for (energy_ev, weight) in &energies {
        let wavelength = crate::model::wavelength_from_energy(*energy_ev)?;
        let fields: Vec<Result<WaveField>> = sources
            .par_iter()
            .map(|&sx| {
                let mut field = launch_at_collimator(geometry, sx, wavelength, plan)?;
                run_stage(
                    &mut field,
                    &Stage {
                        leg: LegName::CollimatorToG1,
                        distance: legs[1],
                        mask: Mask::Grating(geometry.gratings[0]),
                    },
                    plan,
                )?;
                run_stage(
                    &mut field,
                    &Stage {
                        leg: LegName::G1ToG2,
                        distance: legs[2],
                        mask: Mask::Open,
                    },
                    plan,
                )?;
                Ok(field)
            })
            .collect();
        let fields = fields.into_iter().collect::<Result<Vec<_>>>()?;
        cached.push((*weight, fields));
    }

    let profiles: Vec<Result<IntensityProfile>> = shifts
        .par_iter()
        .map(|&shift| {
            let g2 = geometry.gratings[1].with_shift(g2_base + shift);
            let mut acc = vec![0.0; plan.n];
            let mut grid: Option<(f64, f64)> = None;
            for (weight, fields) in &cached {
                for upstream in fields {
                    let mut field = upstream.clone();
                    apply_mask_in_place(&mut field, &Mask::Grating(g2));
                    run_stage(
                        &mut field,
                        &Stage {
                            leg: LegName::G2ToG3,
                            distance: legs[3],
                            mask: Mask::Grating(geometry.gratings[2]),
                        },
                        plan,
                    )?;
                    run_stage(
                        &mut field,
                        &Stage {
                            leg: LegName::G3ToDetector,
                            distance: legs[4],
                            mask: Mask::Open,
                        },
                        plan,
                    )?;
                    grid.get_or_insert((field.x_min, field.dx));
                    for (a, s) in acc.iter_mut().zip(&field.samples) {
                        *a += weight * src_weight * s.norm_sqr();
                    }
                }
            }
            let (x_min, dx) = grid.expect("at least one source point");
            Ok(IntensityProfile::new(x_min, dx, acc))
        })
        .collect();
    profiles.into_iter().collect()
}

/// The central experiment: detector-slit flux versus middle-grating
/// displacement. Fluxes are probabilities per collimated electron.
pub fn scan_middle_grating(
    geometry: &GeometrySpec,
    coherence: &CoherenceSpec,
    shifts: &[f64],
    detector_slit: &ApertureSpec,
) -> Result<FringeScan> {
    let profiles = scan_profiles(geometry, coherence, shifts)?;
    let fluxes = profiles
        .iter()
        .map(|p| detector_flux(p, detector_slit))
        .collect::<Result<Vec<_>>>()?;
    FringeScan::new(
        shifts.to_vec(),
        fluxes,
        ScanMetadata {
            energy_ev: geometry.beam.kinetic_energy_ev(),
            port_center: detector_slit.center,
            engine: Engine::Quantum,
        },
    )
}
