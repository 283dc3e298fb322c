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

fn cs_panel(a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (mut c, mut s) = (0.0, 0.0);
    for (n, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let t = mid + h * n;
        let p = 0.5 * std::f64::consts::PI * t * t;
        c += h * w * p.cos();
        s += h * w * p.sin();
    }
    (c, s)
}

/// C,S at z0 + k*step for k in 0..count, built incrementally.
fn cs_ladder(z0: f64, step: f64, count: usize) -> Vec<(f64, f64)> {
    // from 0 to z0 in |z0|-scaled panels
    let n0 = (8.0 + z0.abs() * z0.abs()).ceil() as usize;
    let (mut c, mut s) = (0.0, 0.0);
    for p in 0..n0 {
        let a = z0 * p as f64 / n0 as f64;
        let b = z0 * (p + 1) as f64 / n0 as f64;
        let (dc, ds) = cs_panel(a, b);
        c += dc; s += ds;
    }
    let mut out = Vec::with_capacity(count);
    out.push((c, s));
    let mut z = z0;
    for _ in 1..count {
        // split each grid step so panel phase stays small
        let zn = z + step;
        let sub = (1.0 + (z.abs().max(zn.abs()) * step)).ceil() as usize;
        for q in 0..sub {
            let a = z + step * q as f64 / sub as f64;
            let b = z + step * (q + 1) as f64 / sub as f64;
            let (dc, ds) = cs_panel(a, b);
            c += dc; s += ds;
        }
        z = zn;
        out.push((c, s));
    }
    out
}

fn main() {
    let lambda = wavelength_from_energy(10_000.0).unwrap();
    let w = 1.5e-6;
    let l = 0.03;
    let n = 32_768usize;
    let dx = 2e-9;

    let mut field = WaveField::zeros_symmetric(n, dx, lambda).unwrap();
    let slit = ApertureSpec::new(w, 0.0, 0.0).unwrap();
    for j in 0..n {
        if slit.contains(field.x(j)) {
            field.samples[j] = C64::new(1.0, 0.0);
        }
    }
    let out = fresnel_propagate(&field, l).unwrap();
    let kappa = (2.0 / (lambda * l)).sqrt();

    let hi = cs_ladder((out.x(0) + 0.5 * w) * kappa, dx * kappa, n);
    let lo = cs_ladder((out.x(0) - 0.5 * w) * kappa, dx * kappa, n);

    let mut zones = vec![(0.0f64, 0.0f64); 8];
    let mut max_err = (0.0f64, 0.0f64);
    let mut oracle_v = vec![0.0; n];
    for j in 0..n {
        let x = out.x(j);
        let sim = out.samples[j].norm_sqr();
        let (dc, ds) = (hi[j].0 - lo[j].0, hi[j].1 - lo[j].1);
        let oracle = 0.5 * (dc * dc + ds * ds);
        oracle_v[j] = oracle;
        let zone = ((x.abs() / 4.1e-6) as usize).min(7);
        zones[zone].0 += (sim - oracle) * (sim - oracle);
        zones[zone].1 += oracle * oracle;
        if (sim - oracle).abs() > max_err.0 {
            max_err = ((sim - oracle).abs(), x);
        }
    }
    let total_o: f64 = zones.iter().map(|z| z.1).sum();
    for (i, (d2, o2)) in zones.iter().enumerate() {
        println!("zone |x| in [{:4.1},{:4.1}]um: err_contrib={:.3e} oracle_weight={:.3e}",
            i as f64 * 4.1, (i + 1) as f64 * 4.1, (d2 / total_o).sqrt(), (o2 / total_o).sqrt());
    }
    println!("max pointwise err {:.3e} at x={:.3}um", max_err.0, max_err.1 * 1e6);
    for &xu in &[0.0, 0.3e-6, 0.7488e-6, 0.7512e-6, 1.2e-6, 3.0e-6] {
        let j = ((xu - out.x_min) / dx).round() as usize;
        println!("x={:+.4}um sim={:.8} oracle={:.8} diff={:+.2e}",
            out.x(j) * 1e6, out.samples[j].norm_sqr(), oracle_v[j], out.samples[j].norm_sqr() - oracle_v[j]);
    }
}
