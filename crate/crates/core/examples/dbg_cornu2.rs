use emzi_core::*;
use num_complex::Complex;
type C64 = Complex<f64>;

const GL_NODES: [f64; 8] = [
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975362,
];
const GL_WEIGHTS: [f64; 8] = [
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
];

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    GL_NODES.iter().zip(GL_WEIGHTS).map(|(n, w)| h * w * f(mid + h * n)).sum()
}

/// ladder of cumulative integrals of `f` from 0 to z0 + k*step
fn ladder<F: Fn(f64) -> f64>(f: F, z0: f64, step: f64, count: usize, panels_per_unit_phase: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let n0 = ((8.0 + z0.abs() * panels_per_unit_phase * z0.abs()).ceil() as usize).max(8);
    for p in 0..n0 {
        acc += gl_panel(&f, z0 * p as f64 / n0 as f64, z0 * (p + 1) as f64 / n0 as f64);
    }
    let mut out = Vec::with_capacity(count);
    out.push(acc);
    let mut z = z0;
    for _ in 1..count {
        let zn = z + step;
        let sub = ((1.0 + z.abs().max(zn.abs()) * step * panels_per_unit_phase).ceil() as usize).max(1);
        for q in 0..sub {
            acc += gl_panel(&f, z + step * q as f64 / sub as f64, z + step * (q + 1) as f64 / sub as f64);
        }
        z = zn;
        out.push(acc);
    }
    out
}

fn main() {
    let lambda = wavelength_from_energy(10_000.0).unwrap();
    let w = 1.5e-6;
    let l = 0.03;
    let n = 32_768usize;
    let dx = 2e-9;

    // band-limited slit: s(x) = (1/pi)[Si(pi(x+w/2)/dx) - Si(pi(x-w/2)/dx)]
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    let x0 = (0.5 - n as f64 / 2.0) * dx;
    let si_hi = ladder(sinc, (x0 + 0.5 * w) * std::f64::consts::PI / dx, std::f64::consts::PI, n, 0.2);
    let si_lo = ladder(sinc, (x0 - 0.5 * w) * std::f64::consts::PI / dx, std::f64::consts::PI, n, 0.2);

    let mut field = WaveField::zeros_symmetric(n, dx, lambda).unwrap();
    for j in 0..n {
        field.samples[j] = C64::new((si_hi[j] - si_lo[j]) / std::f64::consts::PI, 0.0);
    }
    let out = fresnel_propagate(&field, l).unwrap();

    // oracle: Cornu of the true slit
    let kappa = (2.0 / (lambda * l)).sqrt();
    let cosint = |t: f64| (0.5 * std::f64::consts::PI * t * t).cos();
    let sinint = |t: f64| (0.5 * std::f64::consts::PI * t * t).sin();
    let step = dx * kappa;
    let c_hi = ladder(cosint, (x0 + 0.5 * w) * kappa, step, n, 1.0);
    let s_hi = ladder(sinint, (x0 + 0.5 * w) * kappa, step, n, 1.0);
    let c_lo = ladder(cosint, (x0 - 0.5 * w) * kappa, step, n, 1.0);
    let s_lo = ladder(sinint, (x0 - 0.5 * w) * kappa, step, n, 1.0);

    for xcut in [32.8e-6, 9.0e-6, 6.0e-6] {
        let (mut d2, mut o2) = (0.0, 0.0);
        for j in 0..n {
            let x = out.x(j);
            if x.abs() > xcut { continue; }
            let sim = out.samples[j].norm_sqr();
            let (dc, ds) = (c_hi[j] - c_lo[j], s_hi[j] - s_lo[j]);
            let oracle = 0.5 * (dc * dc + ds * ds);
            d2 += (sim - oracle) * (sim - oracle);
            o2 += oracle * oracle;
        }
        println!("bandlimited input, |x|<={:.1}um: rel L2 = {:.3e}", xcut * 1e6, (d2 / o2).sqrt());
    }
}
