//! Classical straight-line Moiré deflectometer over the identical geometry.
//!
//! A ray is the straight line through one point in the source slit and one
//! point in the collimator slit; it reaches the detector iff its transverse
//! position at every grating plane falls in an open slot and its
//! detector-plane position falls inside the detector slit. No wavelength,
//! no deflection of any kind enters; this is the null hypothesis the
//! quantum contrast must beat.

use rayon::prelude::*;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{fit_fringes, default_period_bounds, Engine, FringeFit, FringeScan, ScanMetadata};
use crate::error::{Result, SimError};
use crate::model::{ApertureSpec, GeometrySpec};
use crate::wave::{default_scan_shifts, Mask};

/// Quadrature rule for the (source, collimator) ray bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// Tensor trapezoid grid over the two slits; reproducible and
    /// convergence-testable.
    DeterministicGrid,
    /// Seeded uniform sampling, the cross-check estimator.
    MonteCarlo { seed: u64 },
}

/// Discretization of the classical ray bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayBundleSpec {
    pub n_source_samples: u32,
    pub n_collimator_samples: u32,
    pub quadrature: Quadrature,
}

impl Default for RayBundleSpec {
    fn default() -> Self {
        RayBundleSpec {
            n_source_samples: 501,
            n_collimator_samples: 501,
            quadrature: Quadrature::DeterministicGrid,
        }
    }
}

impl RayBundleSpec {
    pub fn validate(&self) -> Result<()> {
        if matches!(self.quadrature, Quadrature::DeterministicGrid)
            && (self.n_source_samples < 2 || self.n_collimator_samples < 2)
        {
            return Err(SimError::domain(
                "ray_bundle",
                "deterministic grid needs at least 2 samples per slit",
            ));
        }
        if self.n_source_samples < 1 || self.n_collimator_samples < 1 {
            return Err(SimError::domain("ray_bundle", "sample counts must be >= 1"));
        }
        Ok(())
    }
}

/// Weighted detector-plane hit positions of all rays that clear the three
/// grating masks, plus the total bundle weight.
fn trace_hits(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    masks: &[Mask; 3],
) -> Result<(Vec<(f64, f64)>, f64)> {
    bundle.validate()?;
    let z_s = geometry.source.z_position;
    let z_c = geometry.collimator.z_position;
    if !(z_c - z_s > 0.0) {
        return Err(SimError::DegenerateGeometry(
            "source and collimator planes coincide".into(),
        ));
    }
    let grating_z = [
        geometry.gratings[0].z_position,
        geometry.gratings[1].z_position,
        geometry.gratings[2].z_position,
    ];
    let z_d = geometry.detector_slit.z_position;
    let inv_l = 1.0 / (z_c - z_s);

    let trace = |s: f64, c: f64| -> Option<f64> {
        let slope = (c - s) * inv_l;
        for (mask, z) in masks.iter().zip(grating_z) {
            if !mask.transmits(s + slope * (z - z_s)) {
                return None;
            }
        }
        Some(s + slope * (z_d - z_s))
    };

    match bundle.quadrature {
        Quadrature::DeterministicGrid => {
            let ns = bundle.n_source_samples as usize;
            let nc = bundle.n_collimator_samples as usize;
            let hs = geometry.source.width / (ns - 1) as f64;
            let hc = geometry.collimator.width / (nc - 1) as f64;
            let s_lo = geometry.source.lo();
            let c_lo = geometry.collimator.lo();
            let w_end = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };

            let rows: Vec<(Vec<(f64, f64)>, f64)> = (0..ns)
                .into_par_iter()
                .map(|i| {
                    let s = s_lo + i as f64 * hs;
                    let wi = w_end(i, ns) * hs;
                    let mut hits = Vec::new();
                    let mut total = 0.0;
                    for j in 0..nc {
                        let c = c_lo + j as f64 * hc;
                        let w = wi * w_end(j, nc) * hc;
                        total += w;
                        if let Some(x_d) = trace(s, c) {
                            hits.push((x_d, w));
                        }
                    }
                    (hits, total)
                })
                .collect();

            let mut hits = Vec::new();
            let mut total = 0.0;
            for (row_hits, row_total) in rows {
                hits.extend(row_hits);
                total += row_total;
            }
            Ok((hits, total))
        }
        Quadrature::MonteCarlo { seed } => {
            let n = bundle.n_source_samples as u64 * bundle.n_collimator_samples as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = Vec::new();
            for _ in 0..n {
                let s = geometry.source.lo() + rng.gen::<f64>() * geometry.source.width;
                let c = geometry.collimator.lo() + rng.gen::<f64>() * geometry.collimator.width;
                if let Some(x_d) = trace(s, c) {
                    hits.push((x_d, 1.0));
                }
            }
            Ok((hits, n as f64))
        }
    }
}

fn grating_masks(geometry: &GeometrySpec) -> [Mask; 3] {
    [
        Mask::Grating(geometry.gratings[0]),
        Mask::Grating(geometry.gratings[1]),
        Mask::Grating(geometry.gratings[2]),
    ]
}

/// Fraction of the ray bundle reaching the detector slit, with the gratings
/// replaced by the given masks.
pub fn moire_flux_masked(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    detector_slit: &ApertureSpec,
    masks: &[Mask; 3],
) -> Result<f64> {
    let (hits, total) = trace_hits(geometry, bundle, masks)?;
    let accepted: f64 = hits
        .iter()
        .filter(|(x, _)| detector_slit.contains(*x))
        .map(|(_, w)| w)
        .sum();
    Ok(accepted / total)
}

/// Fraction of the ray bundle reaching the detector slit through the
/// as-built beamline (both collimation slits, all three gratings).
pub fn moire_flux(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    detector_slit: &ApertureSpec,
) -> Result<f64> {
    moire_flux_masked(geometry, bundle, detector_slit, &grating_masks(geometry))
}

/// Monte Carlo flux with its binomial standard error, for
/// estimator-equivalence checks against the deterministic grid.
pub fn moire_flux_monte_carlo(
    geometry: &GeometrySpec,
    n_samples: u64,
    seed: u64,
    detector_slit: &ApertureSpec,
) -> Result<(f64, f64)> {
    let side = (n_samples as f64).sqrt().ceil() as u32;
    let bundle = RayBundleSpec {
        n_source_samples: side,
        n_collimator_samples: side,
        quadrature: Quadrature::MonteCarlo { seed },
    };
    let p = moire_flux(geometry, &bundle, detector_slit)?;
    let n = side as f64 * side as f64;
    let se = (p * (1.0 - p) / n).sqrt();
    Ok((p, se))
}

/// Classical analog of the middle-grating scan.
pub fn moire_scan(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    shifts: &[f64],
    detector_slit: &ApertureSpec,
) -> Result<FringeScan> {
    crate::wave::check_scan_preconditions(shifts, geometry.gratings[1].period)?;
    let g2_base = geometry.gratings[1].lateral_shift;
    let fluxes: Vec<Result<f64>> = shifts
        .par_iter()
        .map(|&shift| {
            let mut masks = grating_masks(geometry);
            masks[1] = Mask::Grating(geometry.gratings[1].with_shift(g2_base + shift));
            // Keep the inner loops serial; parallelism lives at the shift level.
            let serial = RayBundleSpec { ..*bundle };
            moire_flux_masked_serial(geometry, &serial, detector_slit, &masks)
        })
        .collect();
    let fluxes = fluxes.into_iter().collect::<Result<Vec<_>>>()?;
    FringeScan::new(
        shifts.to_vec(),
        fluxes,
        ScanMetadata {
            energy_ev: geometry.beam.kinetic_energy_ev(),
            port_center: detector_slit.center,
            engine: Engine::Classical,
        },
    )
}

/// Serial flux used inside already-parallel shift loops.
fn moire_flux_masked_serial(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    detector_slit: &ApertureSpec,
    masks: &[Mask; 3],
) -> Result<f64> {
    bundle.validate()?;
    let z_s = geometry.source.z_position;
    let z_c = geometry.collimator.z_position;
    if !(z_c - z_s > 0.0) {
        return Err(SimError::DegenerateGeometry(
            "source and collimator planes coincide".into(),
        ));
    }
    let grating_z = [
        geometry.gratings[0].z_position,
        geometry.gratings[1].z_position,
        geometry.gratings[2].z_position,
    ];
    let z_d = geometry.detector_slit.z_position;
    let inv_l = 1.0 / (z_c - z_s);

    match bundle.quadrature {
        Quadrature::DeterministicGrid => {
            let ns = bundle.n_source_samples as usize;
            let nc = bundle.n_collimator_samples as usize;
            let hs = geometry.source.width / (ns - 1) as f64;
            let hc = geometry.collimator.width / (nc - 1) as f64;
            let w_end = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            let mut accepted = 0.0;
            let mut total = 0.0;
            for i in 0..ns {
                let s = geometry.source.lo() + i as f64 * hs;
                let wi = w_end(i, ns) * hs;
                'rays: for j in 0..nc {
                    let c = geometry.collimator.lo() + j as f64 * hc;
                    let w = wi * w_end(j, nc) * hc;
                    total += w;
                    let slope = (c - s) * inv_l;
                    for (mask, z) in masks.iter().zip(grating_z) {
                        if !mask.transmits(s + slope * (z - z_s)) {
                            continue 'rays;
                        }
                    }
                    if detector_slit.contains(s + slope * (z_d - z_s)) {
                        accepted += w;
                    }
                }
            }
            Ok(accepted / total)
        }
        Quadrature::MonteCarlo { seed } => {
            let n = bundle.n_source_samples as u64 * bundle.n_collimator_samples as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut accepted = 0u64;
            'mc: for _ in 0..n {
                let s = geometry.source.lo() + rng.gen::<f64>() * geometry.source.width;
                let c = geometry.collimator.lo() + rng.gen::<f64>() * geometry.collimator.width;
                let slope = (c - s) * inv_l;
                for (mask, z) in masks.iter().zip(grating_z) {
                    if !mask.transmits(s + slope * (z - z_s)) {
                        continue 'mc;
                    }
                }
                if detector_slit.contains(s + slope * (z_d - z_s)) {
                    accepted += 1;
                }
            }
            Ok(accepted as f64 / n as f64)
        }
    }
}

/// Classical fringe contrast versus detector-slit position. Rays are traced
/// once per shift; each position re-tests the stored detector hits.
pub fn moire_contrast_map(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    detector_positions: &[f64],
) -> Result<Vec<(f64, FringeFit)>> {
    let shifts = default_scan_shifts(geometry.gratings[1].period);
    let g2_base = geometry.gratings[1].lateral_shift;

    let per_shift: Vec<Result<Vec<f64>>> = shifts
        .par_iter()
        .map(|&shift| {
            let mut masks = grating_masks(geometry);
            masks[1] = Mask::Grating(geometry.gratings[1].with_shift(g2_base + shift));
            let serial_bundle = RayBundleSpec { ..*bundle };
            let (hits, total) = trace_hits_serial(geometry, &serial_bundle, &masks)?;
            Ok(detector_positions
                .iter()
                .map(|&pos| {
                    let slit = geometry.detector_slit.with_center(pos);
                    hits.iter()
                        .filter(|(x, _)| slit.contains(*x))
                        .map(|(_, w)| w)
                        .sum::<f64>()
                        / total
                })
                .collect())
        })
        .collect();
    let per_shift = per_shift.into_iter().collect::<Result<Vec<_>>>()?;

    let bounds = default_period_bounds(geometry.gratings[1].period);
    detector_positions
        .iter()
        .enumerate()
        .map(|(pi, &pos)| {
            let fluxes: Vec<f64> = per_shift.iter().map(|row| row[pi]).collect();
            let scan = FringeScan::new(
                shifts.clone(),
                fluxes,
                ScanMetadata {
                    energy_ev: geometry.beam.kinetic_energy_ev(),
                    port_center: pos,
                    engine: Engine::Classical,
                },
            )?;
            Ok((pos, fit_fringes(&scan, bounds)?))
        })
        .collect()
}

/// Serial version of [`trace_hits`] for use inside parallel shift loops.
fn trace_hits_serial(
    geometry: &GeometrySpec,
    bundle: &RayBundleSpec,
    masks: &[Mask; 3],
) -> Result<(Vec<(f64, f64)>, f64)> {
    bundle.validate()?;
    let z_s = geometry.source.z_position;
    let z_c = geometry.collimator.z_position;
    if !(z_c - z_s > 0.0) {
        return Err(SimError::DegenerateGeometry(
            "source and collimator planes coincide".into(),
        ));
    }
    let grating_z = [
        geometry.gratings[0].z_position,
        geometry.gratings[1].z_position,
        geometry.gratings[2].z_position,
    ];
    let z_d = geometry.detector_slit.z_position;
    let inv_l = 1.0 / (z_c - z_s);

    let ns = bundle.n_source_samples as usize;
    let nc = bundle.n_collimator_samples as usize;
    match bundle.quadrature {
        Quadrature::DeterministicGrid => {
            let hs = geometry.source.width / (ns - 1) as f64;
            let hc = geometry.collimator.width / (nc - 1) as f64;
            let w_end = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            let mut hits = Vec::new();
            let mut total = 0.0;
            for i in 0..ns {
                let s = geometry.source.lo() + i as f64 * hs;
                let wi = w_end(i, ns) * hs;
                'rays: for j in 0..nc {
                    let c = geometry.collimator.lo() + j as f64 * hc;
                    let w = wi * w_end(j, nc) * hc;
                    total += w;
                    let slope = (c - s) * inv_l;
                    for (mask, z) in masks.iter().zip(grating_z) {
                        if !mask.transmits(s + slope * (z - z_s)) {
                            continue 'rays;
                        }
                    }
                    hits.push((s + slope * (z_d - z_s), w));
                }
            }
            Ok((hits, total))
        }
        Quadrature::MonteCarlo { seed } => {
            let n = ns as u64 * nc as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = Vec::new();
            'mc: for _ in 0..n {
                let s = geometry.source.lo() + rng.gen::<f64>() * geometry.source.width;
                let c = geometry.collimator.lo() + rng.gen::<f64>() * geometry.collimator.width;
                let slope = (c - s) * inv_l;
                for (mask, z) in masks.iter().zip(grating_z) {
                    if !mask.transmits(s + slope * (z - z_s)) {
                        continue 'mc;
                    }
                }
                hits.push((s + slope * (z_d - z_s), 1.0));
            }
            Ok((hits, n as f64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BeamSpec, GeometryBuilder};
    use approx::assert_relative_eq;

    fn paper_geometry(energy_ev: f64) -> GeometrySpec {
        GeometryBuilder::default()
            .build(BeamSpec::monoenergetic(energy_ev).unwrap())
            .unwrap()
    }

    fn small_bundle() -> RayBundleSpec {
        RayBundleSpec {
            n_source_samples: 201,
            n_collimator_samples: 201,
            quadrature: Quadrature::DeterministicGrid,
        }
    }

    /// Exact acceptance of the two-slit system into a detector interval:
    /// the area fraction of the strip lo ≤ α·s + β·c ≤ hi inside the
    /// (source × collimator) rectangle, integrated analytically between the
    /// breakpoints of the piecewise-linear overlap.
    fn two_slit_acceptance_oracle(
        geometry: &GeometrySpec,
        detector_lo: f64,
        detector_hi: f64,
    ) -> f64 {
        let z_s = geometry.source.z_position;
        let z_c = geometry.collimator.z_position;
        let z_d = geometry.detector_slit.z_position;
        let m = (z_d - z_s) / (z_c - z_s);
        let (alpha, beta) = (1.0 - m, m);
        let (s_lo, s_hi) = (geometry.source.lo(), geometry.source.hi());
        let (c_lo, c_hi) = (geometry.collimator.lo(), geometry.collimator.hi());

        // For fixed s, c ranges over [max(c_lo, (lo−αs)/β), min(c_hi, (hi−αs)/β)].
        let len = |s: f64| -> f64 {
            let a = ((detector_lo - alpha * s) / beta).max(c_lo);
            let b = ((detector_hi - alpha * s) / beta).min(c_hi);
            (b - a).max(0.0)
        };
        // Breakpoints where either bound crosses a rectangle edge.
        let mut breaks = vec![s_lo, s_hi];
        for target in [detector_lo, detector_hi] {
            for edge in [c_lo, c_hi] {
                if alpha != 0.0 {
                    let s = (target - beta * edge) / alpha;
                    if s > s_lo && s < s_hi {
                        breaks.push(s);
                    }
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        let mut area = 0.0;
        for pair in breaks.windows(2) {
            area += 0.5 * (len(pair[0]) + len(pair[1])) * (pair[1] - pair[0]);
        }
        area / (geometry.source.width * geometry.collimator.width)
    }

    #[test]
    fn open_gratings_reproduce_the_two_slit_acceptance() {
        let g = paper_geometry(10_000.0);
        let open = [Mask::Open; 3];
        // Wide detector slit covering the full geometric beam: acceptance 1.
        let wide = ApertureSpec::new(20e-6, 0.0, g.detector_slit.z_position).unwrap();
        let flux = moire_flux_masked(&g, &small_bundle(), &wide, &open).unwrap();
        assert_relative_eq!(flux, 1.0, max_relative = 1e-12);

        // 5 µm detector slit on axis: exact strip-in-rectangle area.
        let slit = ApertureSpec::new(5e-6, 0.0, g.detector_slit.z_position).unwrap();
        let flux = moire_flux_masked(&g, &small_bundle(), &slit, &open).unwrap();
        let oracle = two_slit_acceptance_oracle(&g, slit.lo(), slit.hi());
        assert_relative_eq!(flux, oracle, max_relative = 5e-3);

        // Off-axis slit, partially clipping the beam edge.
        let slit = ApertureSpec::new(5e-6, 3e-6, g.detector_slit.z_position).unwrap();
        let flux = moire_flux_masked(&g, &small_bundle(), &slit, &open).unwrap();
        let oracle = two_slit_acceptance_oracle(&g, slit.lo(), slit.hi());
        assert_relative_eq!(flux, oracle, max_relative = 2e-2);
    }

    #[test]
    fn blocked_plane_kills_the_flux() {
        let g = paper_geometry(10_000.0);
        let mut masks = [
            Mask::Grating(g.gratings[0]),
            // A slit displaced beyond the beam: no ray passes.
            Mask::Slit(ApertureSpec::new(1e-6, 50e-6, g.gratings[1].z_position).unwrap()),
            Mask::Grating(g.gratings[2]),
        ];
        let flux = moire_flux_masked(&g, &small_bundle(), &g.detector_slit, &mut masks).unwrap();
        assert_eq!(flux, 0.0);
    }

    #[test]
    fn flux_is_wavelength_independent() {
        let slit = ApertureSpec::new(5e-6, 0.0, 0.5908).unwrap();
        let a = moire_flux(&paper_geometry(10_000.0), &small_bundle(), &slit).unwrap();
        let b = moire_flux(&paper_geometry(2_000.0), &small_bundle(), &slit).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flux_bounds_and_monotonicity_in_slit_width() {
        let g = paper_geometry(10_000.0);
        let z = g.detector_slit.z_position;
        let mut last = 0.0;
        for width in [0.5e-6, 2e-6, 5e-6, 12e-6] {
            let slit = ApertureSpec::new(width, 0.0, z).unwrap();
            let flux = moire_flux(&g, &small_bundle(), &slit).unwrap();
            assert!((0.0..=1.0).contains(&flux));
            assert!(flux >= last, "flux not monotone in slit width");
            last = flux;
        }
    }

    #[test]
    fn deterministic_and_monte_carlo_estimators_agree() {
        let g = paper_geometry(10_000.0);
        let slit = ApertureSpec::new(5e-6, 0.0, g.detector_slit.z_position).unwrap();
        let grid = moire_flux(&g, &small_bundle(), &slit).unwrap();
        let (mc, se) = moire_flux_monte_carlo(&g, 600 * 600, 12345, &slit).unwrap();
        assert!(
            (grid - mc).abs() < 3.0 * se,
            "grid {grid} vs MC {mc} ± {se}"
        );
    }

    #[test]
    fn degenerate_geometry_is_rejected() {
        let mut builder = GeometryBuilder::default();
        builder.source_to_collimator = 0.0;
        assert!(builder
            .build(BeamSpec::monoenergetic(10_000.0).unwrap())
            .is_err());
    }

    #[test]
    fn scan_is_periodic_in_one_grating_period() {
        let g = paper_geometry(10_000.0);
        let bundle = small_bundle();
        let d = g.gratings[1].period;
        let shifts: Vec<f64> = (0..=12).map(|k| k as f64 * d / 12.0).collect();
        let scan = moire_scan(&g, &bundle, &shifts, &g.detector_slit).unwrap();
        // Shift by exactly d gives the identical mask.
        let displaced: Vec<f64> = shifts.iter().map(|s| s + d).collect();
        let scan2 = moire_scan(&g, &bundle, &displaced, &g.detector_slit).unwrap();
        for (a, b) in scan.fluxes.iter().zip(&scan2.fluxes) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-15);
        }
    }

    #[test]
    fn scan_period_is_half_the_grating_period() {
        // The d/2 periodicity is the lever-arm factor 2: moving G2 by δ
        // moves the G1 shadow across G3 by 2δ. The echo rides on the second
        // grating harmonic, so it is probed off the 50% duty cycle where
        // that harmonic vanishes (see the complement-null test below).
        let mut builder = GeometryBuilder::default();
        builder.open_fraction = 0.45;
        let g = builder
            .build(BeamSpec::monoenergetic(10_000.0).unwrap())
            .unwrap();
        // The classical beam only fills the geometric shadow (±5.5 µm at the
        // detector), so the slit sits on the beam axis here.
        let slit = g.detector_slit.with_center(0.0);
        let shifts = default_scan_shifts(g.gratings[1].period);
        let scan = moire_scan(&g, &small_bundle(), &shifts, &slit).unwrap();
        let fit = fit_fringes(&scan, default_period_bounds(g.gratings[1].period)).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.period, 50e-9, max_relative = 0.01);
    }

    #[test]
    fn half_open_grating_nulls_the_even_harmonics() {
        // At exactly 50% open fraction, shifting G2 by d/2 produces the
        // complementary mask, so flux(s) + flux(s + d/2) is constant and the
        // scan carries no d/2-periodic component at all.
        let g = paper_geometry(10_000.0);
        let slit = g.detector_slit.with_center(0.0);
        let d = g.gratings[1].period;
        let shifts: Vec<f64> = (0..=20).map(|k| k as f64 * d / 20.0).collect();
        let scan = moire_scan(&g, &small_bundle(), &shifts, &slit).unwrap();
        let open_13 = {
            let masks = [
                Mask::Grating(g.gratings[0]),
                Mask::Open,
                Mask::Grating(g.gratings[2]),
            ];
            moire_flux_masked(&g, &small_bundle(), &slit, &masks).unwrap()
        };
        for k in 0..10 {
            let sum = scan.fluxes[k] + scan.fluxes[k + 10];
            assert_relative_eq!(sum, open_13, max_relative = 5e-3);
        }
    }

    #[test]
    fn contrast_map_is_even_in_detector_position() {
        // Mirror-symmetric geometry: center the grating slots on the axis.
        let mut g = paper_geometry(10_000.0);
        for gr in &mut g.gratings {
            *gr = gr.with_shift(-0.25 * gr.period);
        }
        let positions = [-4e-6, -2e-6, 2e-6, 4e-6];
        let map = moire_contrast_map(&g, &small_bundle(), &positions).unwrap();
        let c = |i: usize| map[i].1.contrast;
        assert!((c(0) - c(3)).abs() < 2e-2, "{} vs {}", c(0), c(3));
        assert!((c(1) - c(2)).abs() < 2e-2, "{} vs {}", c(1), c(2));
    }
}
