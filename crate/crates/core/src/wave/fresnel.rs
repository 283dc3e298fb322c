//! Free-space Fresnel propagation between beamline planes.
//!
//! The primary path is the spectral transfer-function method: the field's
//! discrete spectrum is multiplied by H(f) = exp(−iπλLf²), the 1D paraxial
//! transfer function of the kernel K(x′−x; L) = (iλL)^(−1/2)·exp(iπ(x′−x)²/(λL)).
//! On the periodic grid this is the exact Fresnel propagation of the
//! periodized field, so |H| ≡ 1 makes the step exactly unitary.
//!
//! [`fresnel_propagate_direct`] evaluates the same sampled plane-wave
//! decomposition of the kernel by direct O(N²) summation with no FFT and no
//! grid-size constraints; it exists as an independent oracle for the
//! spectral path (frequency layout, normalization, transform direction).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SimError};
use crate::wave::field::{C64, WaveField};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> PlanPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// Spatial frequency of FFT bin `k` on a grid of `n` samples spanning `span`.
#[inline]
fn fft_frequency(k: usize, n: usize, span: f64) -> f64 {
    let m = if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    };
    m / span
}

fn check_distance(distance: f64) -> Result<()> {
    if !(distance > 0.0) {
        return Err(SimError::domain(
            "distance",
            format!("propagation distance must be > 0 m, got {distance}"),
        ));
    }
    Ok(())
}

/// Propagate `field` by `distance` with the spectral transfer-function
/// method. The grid is unchanged; the step is unitary up to rounding.
pub fn fresnel_propagate(field: &WaveField, distance: f64) -> Result<WaveField> {
    check_distance(distance)?;
    let n = field.len();
    let span = field.span();
    let lam = field.wavelength;

    let mut buf = field.samples.clone();
    let (fwd, inv) = plans(n);
    fwd.process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let f = fft_frequency(k, n, span);
        *v *= C64::from_polar(1.0, -PI * lam * distance * f * f);
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in &mut buf {
        *v *= scale;
    }

    Ok(WaveField {
        samples: buf,
        ..*field
    })
}

/// Same discrete propagator as [`fresnel_propagate`], evaluated by direct
/// O(N²) quadrature of the kernel's plane-wave decomposition
/// K(u; L) = ∫ exp(−iπλLf²)·exp(2πifu) df sampled on the grid's frequency
/// comb. Intended for N ≲ 8192.
pub fn fresnel_propagate_direct(field: &WaveField, distance: f64) -> Result<WaveField> {
    check_distance(distance)?;
    let n = field.len();
    let span = field.span();
    let lam = field.wavelength;

    // Index products are reduced modulo n before the angle is formed, so j·k
    // stays exactly representable.
    let twiddle: Vec<C64> = (0..n)
        .map(|r| C64::from_polar(1.0, -2.0 * PI * r as f64 / n as f64))
        .collect();

    // Forward projection onto the frequency comb, one naive sum per bin.
    let mut spectrum = vec![C64::new(0.0, 0.0); n];
    for (k, s) in spectrum.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &v) in field.samples.iter().enumerate() {
            acc += v * twiddle[(j * k) % n];
        }
        let f = fft_frequency(k, n, span);
        *s = acc * C64::from_polar(1.0, -PI * lam * distance * f * f);
    }

    let mut out = vec![C64::new(0.0, 0.0); n];
    for (m, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &s) in spectrum.iter().enumerate() {
            acc += s * twiddle[(m * k) % n].conj();
        }
        *o = acc / n as f64;
    }

    Ok(WaveField {
        samples: out,
        ..*field
    })
}

/// Cosine-taper the outer `fraction` of the window on each side, in place.
/// Suppresses wrap-around of the periodic spectral method.
pub fn apodize(field: &mut WaveField, fraction: f64) {
    debug_assert!(fraction > 0.0 && fraction < 0.5);
    let n = field.len();
    let half = 0.5 * field.span();
    let x_center = 0.5 * (field.x_min + field.x_max());
    let flat = (1.0 - fraction) * half;
    for j in 0..n {
        let t = ((field.x(j) - x_center).abs() - flat) / (fraction * half);
        if t > 0.0 {
            let w = (0.5 * PI * t.min(1.0)).cos();
            field.samples[j] *= w * w;
        }
    }
}
