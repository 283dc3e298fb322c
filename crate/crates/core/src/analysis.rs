//! From raw patterns and scans to the discriminating observables: fringe
//! fits, contrast-vs-detector-position maps, drift and counting-noise
//! degradation, and Talbot self-imaging diagnostics.

use std::f64::consts::PI;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Result, SimError};
use crate::model::{self, GeometrySpec, GratingSpec};
use crate::wave;

/// Sampled non-negative intensity (flux density) on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    pub x_min: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl IntensityProfile {
    pub fn new(x_min: f64, dx: f64, values: Vec<f64>) -> Self {
        debug_assert!(dx > 0.0 && !values.is_empty());
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        IntensityProfile { x_min, dx, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    /// Trapezoidal integral over the full window.
    pub fn trapezoid_total(&self) -> f64 {
        let sum: f64 = self.values.iter().sum();
        (sum - 0.5 * (self.values[0] + self.values[self.values.len() - 1])) * self.dx
    }

    /// Rescale so the trapezoidal total equals one.
    pub fn normalize_total(&mut self) {
        let total = self.trapezoid_total();
        if total > 0.0 {
            for v in &mut self.values {
                *v /= total;
            }
        }
    }
}

/// Which engine produced a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Quantum,
    Classical,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Quantum => "quantum",
            Engine::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMetadata {
    pub energy_ev: f64,
    pub port_center: f64,
    pub engine: Engine,
}

/// Detector flux versus middle-grating displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub shifts: Vec<f64>,
    pub fluxes: Vec<f64>,
    pub meta: ScanMetadata,
}

impl FringeScan {
    pub fn new(shifts: Vec<f64>, fluxes: Vec<f64>, meta: ScanMetadata) -> Result<Self> {
        if shifts.len() != fluxes.len() {
            return Err(SimError::domain(
                "scan",
                "shifts and fluxes must have equal lengths",
            ));
        }
        if shifts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::domain(
                "scan",
                "shifts must be strictly increasing",
            ));
        }
        if fluxes.iter().any(|f| *f < 0.0 || !f.is_finite()) {
            return Err(SimError::domain("scan", "fluxes must be finite and >= 0"));
        }
        Ok(FringeScan {
            shifts,
            fluxes,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }
}

/// Fitted sinusoid I(x) = A + B·cos(2πx/p + φ); contrast C = B/A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub offset: f64,
    pub amplitude: f64,
    pub period: f64,
    pub phase: f64,
    pub contrast: f64,
    pub residual_rms: f64,
    pub converged: bool,
    /// False when the scan carries no oscillation (B = 0).
    pub phase_defined: bool,
}

/// Grid resolution of the period search before golden-section refinement.
const PERIOD_GRID_STEP: f64 = 0.5e-9;
const GOLDEN_ITERATIONS: usize = 100;

/// Least squares on {1, cos(2πx/p), sin(2πx/p)} at a fixed candidate period.
/// Returns (ssr, a0, b_cos, b_sin), or None when the normal matrix is
/// numerically singular.
fn linear_fit_at_period(shifts: &[f64], fluxes: &[f64], period: f64) -> Option<(f64, f64, f64, f64)> {
    let n = shifts.len();
    let omega = 2.0 * PI / period;
    let (mut sc, mut ss, mut scc, mut sss, mut scs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut syc, mut sys) = (0.0, 0.0, 0.0);
    for (&x, &y) in shifts.iter().zip(fluxes) {
        let (s, c) = (omega * x).sin_cos();
        sc += c;
        ss += s;
        scc += c * c;
        sss += s * s;
        scs += c * s;
        sy += y;
        syc += y * c;
        sys += y * s;
    }
    let m = [
        [n as f64, sc, ss],
        [sc, scc, scs],
        [ss, scs, sss],
    ];
    let rhs = [sy, syc, sys];
    let sol = solve3(m, rhs)?;
    let (a0, bc, bs) = (sol[0], sol[1], sol[2]);
    let mut ssr = 0.0;
    for (&x, &y) in shifts.iter().zip(fluxes) {
        let (s, c) = (omega * x).sin_cos();
        let r = y - (a0 + bc * c + bs * s);
        ssr += r * r;
    }
    Some((ssr, a0, bc, bs))
}

/// 3×3 Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
        if !x[row].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Fit the sinusoid by grid search over the period (0.5 nm resolution,
/// ties towards smaller residual then smaller period) followed by
/// golden-section refinement of the residual.
pub fn fit_fringes(scan: &FringeScan, period_bounds: (f64, f64)) -> Result<FringeFit> {
    let (p_lo, p_hi) = period_bounds;
    if !(p_lo > 0.0 && p_hi > p_lo) {
        return Err(SimError::domain(
            "period_bounds",
            format!("need 0 < lo < hi, got ({p_lo}, {p_hi})"),
        ));
    }
    let n = scan.len();
    if n < 8 {
        return Err(SimError::FitPrecondition(format!(
            "need at least 8 samples, got {n}"
        )));
    }
    let span = scan.shifts[n - 1] - scan.shifts[0];
    if span < 1.5 * p_lo {
        return Err(SimError::FitPrecondition(format!(
            "span {span:.3e} m covers less than 1.5 periods of the lower bound {p_lo:.3e} m"
        )));
    }

    let f_max = scan.fluxes.iter().cloned().fold(f64::MIN, f64::max);
    let f_min = scan.fluxes.iter().cloned().fold(f64::MAX, f64::min);
    if f_max == f_min {
        // No oscillation at all: offset-only fit, phase undefined.
        return Ok(FringeFit {
            offset: f_max,
            amplitude: 0.0,
            period: (p_lo * p_hi).sqrt(),
            phase: 0.0,
            contrast: 0.0,
            residual_rms: 0.0,
            converged: f_max > 0.0,
            phase_defined: false,
        });
    }

    let step = PERIOD_GRID_STEP.max((p_hi - p_lo) / 100_000.0);
    let ssr_at = |p: f64| -> f64 {
        linear_fit_at_period(&scan.shifts, &scan.fluxes, p)
            .map(|(ssr, ..)| ssr)
            .unwrap_or(f64::INFINITY)
    };

    let mut best_p = p_lo;
    let mut best_ssr = f64::INFINITY;
    let mut p = p_lo;
    while p <= p_hi + 0.5 * step {
        let candidate = p.min(p_hi);
        let ssr = ssr_at(candidate);
        if ssr < best_ssr {
            best_ssr = ssr;
            best_p = candidate;
        }
        p += step;
    }

    // Golden-section refinement around the best grid candidate.
    let gr = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut a = (best_p - step).max(p_lo);
    let mut b = (best_p + step).min(p_hi);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let (mut fc, mut fd) = (ssr_at(c), ssr_at(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = ssr_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = ssr_at(d);
        }
    }
    let p_star = if fc < fd { c } else { d };
    let p_star = if ssr_at(p_star) < best_ssr || best_ssr.is_infinite() {
        p_star
    } else {
        best_p
    };

    let (ssr, a0, bc, bs) = linear_fit_at_period(&scan.shifts, &scan.fluxes, p_star)
        .ok_or_else(|| SimError::FitPrecondition("singular normal equations".into()))?;
    let amplitude = bc.hypot(bs);
    let phase = (-bs).atan2(bc);
    let converged = a0 > 0.0 && a0.is_finite() && amplitude.is_finite();
    let contrast = if converged {
        (amplitude / a0).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(FringeFit {
        offset: a0,
        amplitude,
        period: p_star,
        phase,
        contrast,
        residual_rms: (ssr / n as f64).sqrt(),
        converged,
        phase_defined: amplitude > 0.0,
    })
}

/// Default period search bounds for a grating of period d: [d/4, 2d].
pub fn default_period_bounds(period: f64) -> (f64, f64) {
    (0.25 * period, 2.0 * period)
}

/// Quantum contrast map: one middle-grating scan (profiles computed once),
/// re-integrated through the detector slit at each position and fitted.
pub fn contrast_vs_detector(
    geometry: &GeometrySpec,
    coherence: &wave::CoherenceSpec,
    detector_positions: &[f64],
    shifts: &[f64],
) -> Result<Vec<(f64, FringeFit)>> {
    let profiles = wave::scan_profiles(geometry, coherence, shifts)?;
    let bounds = default_period_bounds(geometry.gratings[1].period);
    detector_positions
        .iter()
        .map(|&pos| {
            let slit = geometry.detector_slit.with_center(pos);
            let fluxes = profiles
                .iter()
                .map(|p| wave::detector_flux(p, &slit))
                .collect::<Result<Vec<_>>>()?;
            let scan = FringeScan::new(
                shifts.to_vec(),
                fluxes,
                ScanMetadata {
                    energy_ev: geometry.beam.kinetic_energy_ev(),
                    port_center: pos,
                    engine: Engine::Quantum,
                },
            )?;
            Ok((pos, fit_fringes(&scan, bounds)?))
        })
        .collect()
}

/// Mechanical drift models applied analytically to a fitted fringe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftModel {
    /// Uniform phase ramp of total spatial extent `total`; multiplies the
    /// oscillation amplitude by sinc(π·total/p).
    Linear { total: f64 },
    /// Gaussian position jitter of width σ; multiplies the amplitude by
    /// exp(−2π²σ²/p²).
    GaussianJitter { sigma: f64 },
}

impl DriftModel {
    /// Amplitude attenuation factor for a fringe of period `period`.
    pub fn amplitude_factor(&self, period: f64) -> f64 {
        match *self {
            DriftModel::Linear { total } => {
                if total == 0.0 {
                    1.0
                } else {
                    let u = PI * total / period;
                    u.sin() / u
                }
            }
            DriftModel::GaussianJitter { sigma } => {
                (-2.0 * PI * PI * sigma * sigma / (period * period)).exp()
            }
        }
    }
}

/// Scale the oscillating part of the scan about the fitted offset by the
/// drift attenuation factor. Zero drift returns the scan unchanged.
pub fn apply_drift(scan: &FringeScan, model: DriftModel, ideal_fit: &FringeFit) -> FringeScan {
    let factor = model.amplitude_factor(ideal_fit.period);
    if factor == 1.0 {
        return scan.clone();
    }
    let a = ideal_fit.offset;
    let fluxes = scan
        .fluxes
        .iter()
        .map(|&f| (a + factor * (f - a)).max(0.0))
        .collect();
    FringeScan {
        shifts: scan.shifts.clone(),
        fluxes,
        meta: scan.meta,
    }
}

/// Replace fluxes by seeded Poisson counts with mean
/// flux/⟨flux⟩ · rate · dwell, i.e. `rate` is the scan-average count rate.
pub fn apply_poisson_noise(
    scan: &FringeScan,
    rate: f64,
    dwell: f64,
    seed: u64,
) -> Result<FringeScan> {
    if !(rate > 0.0) {
        return Err(SimError::domain("rate", "must be > 0 counts/s"));
    }
    if !(dwell > 0.0) {
        return Err(SimError::domain("dwell", "must be > 0 s"));
    }
    let mean_flux = scan.fluxes.iter().sum::<f64>() / scan.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fluxes = scan
        .fluxes
        .iter()
        .map(|&f| {
            let mean = if mean_flux > 0.0 {
                f / mean_flux * rate * dwell
            } else {
                0.0
            };
            if mean > 0.0 {
                Poisson::new(mean).expect("positive mean").sample(&mut rng)
            } else {
                0.0
            }
        })
        .collect();
    FringeScan::new(scan.shifts.clone(), fluxes, scan.meta)
}

/// Intensity slices behind a plane-wave-illuminated grating at
/// `n_planes` equally spaced depths in (0, z_max]. The grating is treated
/// as ideally periodic (its finite window is ignored), so the periodic grid
/// propagation is exact.
pub fn talbot_carpet(
    grating: &GratingSpec,
    wavelength: f64,
    z_max: f64,
    n_planes: usize,
) -> Result<Vec<IntensityProfile>> {
    talbot_carpet_with(grating, wavelength, z_max, n_planes, 8, 64)
}

pub fn talbot_carpet_with(
    grating: &GratingSpec,
    wavelength: f64,
    z_max: f64,
    n_planes: usize,
    window_periods: usize,
    samples_per_period: usize,
) -> Result<Vec<IntensityProfile>> {
    if !(z_max > 0.0) {
        return Err(SimError::domain("z_max", "must be > 0 m"));
    }
    if n_planes < 1 {
        return Err(SimError::domain("n_planes", "must be >= 1"));
    }
    let field = grating_exit_field(grating, wavelength, window_periods, samples_per_period)?;
    (1..=n_planes)
        .map(|k| {
            let z = z_max * k as f64 / n_planes as f64;
            let out = wave::fresnel_propagate(&field, z)?;
            Ok(IntensityProfile::new(out.x_min, out.dx, out.intensity()))
        })
        .collect()
}

/// Plane wave masked by the ideally periodic grating.
pub fn grating_exit_field(
    grating: &GratingSpec,
    wavelength: f64,
    window_periods: usize,
    samples_per_period: usize,
) -> Result<wave::WaveField> {
    let n = window_periods * samples_per_period;
    let dx = grating.period / samples_per_period as f64;
    let mut field = wave::WaveField::zeros_symmetric(n, dx, wavelength)?;
    for j in 0..n {
        if grating.transmits_periodic(field.x(j)) {
            field.samples[j] = wave::C64::new(1.0, 0.0);
        }
    }
    Ok(field)
}

/// Talbot-regime summary for a grating spacing: how many Talbot lengths fit
/// between adjacent gratings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotReport {
    pub talbot_length: f64,
    pub grating_spacing: f64,
    /// spacing / talbot_length.
    pub ratio: f64,
    pub nearest_integer: i64,
    /// |ratio − nearest integer|.
    pub integer_mismatch: f64,
}

pub fn talbot_report(period: f64, wavelength: f64, spacing: f64) -> Result<TalbotReport> {
    let lt = model::talbot_length(period, wavelength)?;
    let ratio = spacing / lt;
    let nearest = ratio.round();
    Ok(TalbotReport {
        talbot_length: lt,
        grating_spacing: spacing,
        ratio,
        nearest_integer: nearest as i64,
        integer_mismatch: (ratio - nearest).abs(),
    })
}

/// Pearson correlation of two equally long sequences.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}

/// Period of the strongest non-DC Fourier component, by naive DFT.
pub fn dominant_spatial_period(values: &[f64], dx: f64) -> Option<f64> {
    let n = values.len();
    if n < 4 {
        return None;
    }
    let span = n as f64 * dx;
    let mut best_k = 0;
    let mut best_power = 0.0;
    for k in 1..=n / 2 {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        let power = re * re + im * im;
        if power > best_power {
            best_power = power;
            best_k = k;
        }
    }
    if best_k == 0 {
        None
    } else {
        Some(span / best_k as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn meta() -> ScanMetadata {
        ScanMetadata {
            energy_ev: 10_000.0,
            port_center: 0.0,
            engine: Engine::Quantum,
        }
    }

    fn synthetic_scan(
        a: f64,
        b: f64,
        period: f64,
        phase: f64,
        n: usize,
        span: f64,
    ) -> FringeScan {
        let shifts: Vec<f64> = (0..n).map(|k| k as f64 * span / (n - 1) as f64).collect();
        let fluxes = shifts
            .iter()
            .map(|&x| a + b * (2.0 * PI * x / period + phase).cos())
            .collect();
        FringeScan::new(shifts, fluxes, meta()).unwrap()
    }

    #[test]
    fn synthetic_round_trip_is_exact() {
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.3, 40, 200e-9);
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        assert!(fit.converged);
        assert!(fit.phase_defined);
        assert_relative_eq!(fit.contrast, 0.25, max_relative = 1e-6);
        assert_relative_eq!(fit.period, 50e-9, max_relative = 1e-6);
        assert_relative_eq!(fit.phase, 0.3, max_relative = 1e-6);
        assert_relative_eq!(fit.offset, 1.0, max_relative = 1e-6);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn constant_scan_has_zero_contrast_and_undefined_phase() {
        let shifts: Vec<f64> = (0..20).map(|k| k as f64 * 10e-9).collect();
        let fluxes = vec![0.7; 20];
        let scan = FringeScan::new(shifts, fluxes, meta()).unwrap();
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        assert!(fit.converged);
        assert!(!fit.phase_defined);
        assert_eq!(fit.contrast, 0.0);
        assert_eq!(fit.amplitude, 0.0);
    }

    #[test]
    fn all_zero_scan_does_not_converge() {
        let shifts: Vec<f64> = (0..20).map(|k| k as f64 * 10e-9).collect();
        let scan = FringeScan::new(shifts, vec![0.0; 20], meta()).unwrap();
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.contrast, 0.0);
    }

    #[test]
    fn fit_preconditions_are_enforced() {
        let scan = synthetic_scan(1.0, 0.2, 50e-9, 0.0, 6, 200e-9);
        assert!(matches!(
            fit_fringes(&scan, (25e-9, 200e-9)),
            Err(SimError::FitPrecondition(_))
        ));
        // Span shorter than 1.5 lower-bound periods.
        let scan = synthetic_scan(1.0, 0.2, 50e-9, 0.0, 12, 30e-9);
        assert!(matches!(
            fit_fringes(&scan, (25e-9, 200e-9)),
            Err(SimError::FitPrecondition(_))
        ));
        assert!(fit_fringes(&synthetic_scan(1.0, 0.2, 50e-9, 0.0, 12, 300e-9), (0.0, 1.0)).is_err());
    }

    #[test]
    fn phase_wraps_linearly_under_shift_displacement() {
        let scan = synthetic_scan(2.0, 0.5, 50e-9, 0.7, 48, 240e-9);
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        let delta = 13e-9;
        let displaced = FringeScan::new(
            scan.shifts.iter().map(|s| s + delta).collect(),
            scan.fluxes.clone(),
            meta(),
        )
        .unwrap();
        let fit2 = fit_fringes(&displaced, (25e-9, 200e-9)).unwrap();
        let expected = fit.phase - 2.0 * PI * delta / fit.period;
        let wrapped = (fit2.phase - expected + PI).rem_euclid(2.0 * PI) - PI;
        assert!(wrapped.abs() < 1e-5, "phase mismatch {wrapped}");
    }

    proptest! {
        #[test]
        fn fit_is_invariant_under_flux_rescaling(k in 1e-6f64..1e6) {
            let scan = synthetic_scan(1.0, 0.3, 50e-9, -0.9, 32, 200e-9);
            let scaled = FringeScan::new(
                scan.shifts.clone(),
                scan.fluxes.iter().map(|f| f * k).collect(),
                meta(),
            ).unwrap();
            let a = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
            let b = fit_fringes(&scaled, (25e-9, 200e-9)).unwrap();
            prop_assert!((a.contrast - b.contrast).abs() < 1e-9);
            prop_assert!((a.period - b.period).abs() / a.period < 1e-9);
            prop_assert!((a.phase - b.phase).abs() < 1e-6);
        }

        #[test]
        fn drift_shrinks_amplitude_keeps_period_and_phase(
            total in 1e-9f64..30e-9,
        ) {
            let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.4, 40, 200e-9);
            let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
            let degraded = apply_drift(&scan, DriftModel::Linear { total }, &fit);
            let refit = fit_fringes(&degraded, (25e-9, 200e-9)).unwrap();
            prop_assert!(refit.amplitude < fit.amplitude);
            prop_assert!((refit.period - fit.period).abs() / fit.period < 1e-6);
            prop_assert!((refit.phase - fit.phase).abs() < 1e-4);
        }
    }

    #[test]
    fn drift_factors_match_closed_forms() {
        // sinc(π·10/50) and exp(−2π²(10/50)²), frozen from direct evaluation.
        let linear = DriftModel::Linear { total: 10e-9 }.amplitude_factor(50e-9);
        assert_relative_eq!(linear, 0.9354892837886390, max_relative = 1e-12);
        let gauss = DriftModel::GaussianJitter { sigma: 10e-9 }.amplitude_factor(50e-9);
        assert_relative_eq!(gauss, 0.4540407387272450, max_relative = 1e-12);
    }

    #[test]
    fn zero_drift_is_identity() {
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.0, 40, 200e-9);
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        let same = apply_drift(&scan, DriftModel::Linear { total: 0.0 }, &fit);
        assert_eq!(scan.fluxes, same.fluxes);
    }

    #[test]
    fn drift_reduces_contrast_by_the_stated_factor() {
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.1, 40, 200e-9);
        let fit = fit_fringes(&scan, (25e-9, 200e-9)).unwrap();
        let degraded = apply_drift(&scan, DriftModel::GaussianJitter { sigma: 10e-9 }, &fit);
        let refit = fit_fringes(&degraded, (25e-9, 200e-9)).unwrap();
        assert_relative_eq!(refit.contrast, 0.25 * 0.4540407387272450, max_relative = 1e-6);
    }

    #[test]
    fn poisson_noise_is_seeded_and_reproducible() {
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.0, 50, 245e-9);
        let a = apply_poisson_noise(&scan, 200.0, 1.0, 42).unwrap();
        let b = apply_poisson_noise(&scan, 200.0, 1.0, 42).unwrap();
        assert_eq!(a.fluxes, b.fluxes);
        let c = apply_poisson_noise(&scan, 200.0, 1.0, 43).unwrap();
        assert_ne!(a.fluxes, c.fluxes);
        // Counts are integers.
        assert!(a.fluxes.iter().all(|f| f.fract() == 0.0));
        assert!(apply_poisson_noise(&scan, 0.0, 1.0, 1).is_err());
        assert!(apply_poisson_noise(&scan, 200.0, 0.0, 1).is_err());
    }

    #[test]
    fn poisson_noise_converges_to_noiseless_fit() {
        // ~10⁶ mean counts per point.
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.2, 40, 200e-9);
        let noisy = apply_poisson_noise(&scan, 1e6, 1.0, 7).unwrap();
        let fit = fit_fringes(&noisy, (25e-9, 200e-9)).unwrap();
        assert_relative_eq!(fit.contrast, 0.25, max_relative = 0.01);
    }

    #[test]
    fn fit_recovers_period_at_experimental_statistics() {
        // 200 counts/s, 1 s dwell, 50 points, 20 summed sweeps, C = 0.25:
        // the fit must find the 50 nm period within 5% in ≥ 95% of trials.
        let scan = synthetic_scan(1.0, 0.25, 50e-9, 0.0, 50, 245e-9);
        let mut hits = 0;
        for seed in 0..100 {
            let noisy = apply_poisson_noise(&scan, 200.0, 20.0, seed).unwrap();
            let fit = fit_fringes(&noisy, (25e-9, 200e-9)).unwrap();
            if (fit.period - 50e-9).abs() / 50e-9 < 0.05 {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 trials recovered the period");
    }

    #[test]
    fn talbot_report_matches_the_apparatus_regime() {
        let lambda = model::wavelength_from_energy(10_000.0).unwrap();
        let report = talbot_report(100e-9, lambda, 0.0254).unwrap();
        assert_relative_eq!(report.talbot_length, 0.82e-3, max_relative = 0.01);
        assert_eq!(report.nearest_integer, 31);
        assert!((report.ratio - 31.0).abs() <= 1.0);
    }

    #[test]
    fn talbot_self_imaging_with_half_period_shift() {
        // At L_T = d²/λ the intensity is the grating pattern displaced by
        // d/2; the undisplaced revival sits at 2·L_T. For a 50% grating the
        // displaced image is the complement of the original.
        let lambda = model::wavelength_from_energy(10_000.0).unwrap();
        let g = GratingSpec::new(100e-9, 0.5, 0.0, 0.0, 8).unwrap();
        let lt = model::talbot_length(g.period, lambda).unwrap();
        let spp = 64usize;
        let slices = talbot_carpet_with(&g, lambda, 2.0 * lt, 2, 8, spp).unwrap();

        let source = grating_exit_field(&g, lambda, 8, spp).unwrap();
        let mask: Vec<f64> = source.samples.iter().map(|c| c.norm_sqr()).collect();
        let n = mask.len();
        let shifted: Vec<f64> = (0..n).map(|j| mask[(j + spp / 2) % n]).collect();

        let corr_shifted = pearson_correlation(&slices[0].values, &shifted);
        assert!(corr_shifted > 0.95, "shifted self-image corr {corr_shifted}");
        let corr_unshifted = pearson_correlation(&slices[0].values, &mask);
        assert!(
            corr_unshifted < -0.9,
            "a 50% grating self-image at L_T is the complement, corr {corr_unshifted}"
        );
        let corr_revival = pearson_correlation(&slices[1].values, &mask);
        assert!(corr_revival > 0.95, "revival corr {corr_revival}");

        let period = dominant_spatial_period(&slices[0].values, slices[0].dx).unwrap();
        assert_relative_eq!(period, g.period, max_relative = 0.01);
    }

    #[test]
    fn half_talbot_plane_is_flat_for_a_half_open_grating() {
        let lambda = model::wavelength_from_energy(10_000.0).unwrap();
        let g = GratingSpec::new(100e-9, 0.5, 0.0, 0.0, 8).unwrap();
        let lt = model::talbot_length(g.period, lambda).unwrap();
        let slices = talbot_carpet_with(&g, lambda, 0.5 * lt, 1, 8, 64).unwrap();
        let v = &slices[0].values;
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let rms = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64).sqrt();
        assert!(
            rms / mean < 0.05,
            "expected a flat half-Talbot plane, got rms/mean {}",
            rms / mean
        );
    }

    #[test]
    fn scan_constructor_rejects_bad_inputs() {
        assert!(FringeScan::new(vec![0.0, 1.0], vec![1.0], meta()).is_err());
        assert!(FringeScan::new(vec![0.0, 0.0], vec![1.0, 1.0], meta()).is_err());
        assert!(FringeScan::new(vec![1.0, 0.0], vec![1.0, 1.0], meta()).is_err());
        assert!(FringeScan::new(vec![0.0, 1.0], vec![1.0, -1.0], meta()).is_err());
    }
}
