use emzi_core::*;
use std::f64::consts::PI;

const GL_NODES: [f64; 8] = [
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975362,
];
const GL_WEIGHTS: [f64; 8] = [
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
];
fn gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + (b - a) * p as f64 / panels as f64;
        let hi = a + (b - a) * (p + 1) as f64 / panels as f64;
        let mid = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        for (n, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += h * w * f(mid + h * n);
        }
    }
    acc
}
fn cs(z: f64) -> (f64, f64) {
    let az = z.abs();
    let panels = (8.0 + az * az).ceil() as usize;
    let c = gl(&|t: f64| (0.5 * PI * t * t).cos(), 0.0, az, panels);
    let s = gl(&|t: f64| (0.5 * PI * t * t).sin(), 0.0, az, panels);
    (c * z.signum(), s * z.signum())
}

fn main() {
    let beam = BeamSpec::monoenergetic(10_000.0).unwrap();
    let geometry = GeometryBuilder::default().build(beam).unwrap();
    let plan = SamplingPlan::for_geometry(&geometry).unwrap();
    let lambda = beam.wavelength();

    let source_x = 0.0;
    let profile = propagate_point_source_masked(&geometry, source_x, lambda, &plan,
        &[Mask::Open, Mask::Open, Mask::Open]).unwrap();

    let legs = geometry.leg_distances();
    let l1 = legs[0];
    let l2: f64 = legs[1..].iter().sum();
    let w = geometry.collimator.width;
    let kappa = (2.0 * (l1 + l2) / (lambda * l1 * l2)).sqrt();

    let n = profile.values.len();
    let oracle_at = |x: f64| -> f64 {
        let x0 = (source_x * l2 + x * l1) / (l1 + l2);
        let (chi, shi) = cs((0.5 * w - x0) * kappa);
        let (clo, slo) = cs((-0.5 * w - x0) * kappa);
        (chi - clo).powi(2) + (shi - slo).powi(2)
    };

    // slit-convolved comparison over |x| <= 40um, 0.5um steps, 5um box
    let z_det = geometry.detector_slit.z_position;
    let mut sim_f = Vec::new();
    let mut ora_f = Vec::new();
    let mut pos = -40e-6f64;
    // oracle flux by GL over the slit (box integral)
    while pos <= 40e-6 {
        let slit = ApertureSpec::new(5e-6, pos, z_det).unwrap();
        sim_f.push(detector_flux(&profile, &slit).unwrap());
        ora_f.push(gl(&oracle_at, pos - 2.5e-6, pos + 2.5e-6, 40));
        pos += 0.5e-6;
    }
    let ss: f64 = sim_f.iter().sum();
    let os: f64 = ora_f.iter().sum();
    let (mut d2, mut o2) = (0.0, 0.0);
    let mut max_rel = 0.0f64;
    for (s, o) in sim_f.iter().zip(&ora_f) {
        let (s, o) = (s / ss, o / os);
        d2 += (s - o) * (s - o);
        o2 += o * o;
        if o > 1e-4 { max_rel = max_rel.max((s - o).abs() / o); }
    }
    println!("slit-convolved rel L2 = {:.3e}, max rel (where flux>1e-4) = {:.3e}", (d2 / o2).sqrt(), max_rel);

    // raw profile comparison for reference
    let mut sim = profile.values.clone();
    let mut ora: Vec<f64> = (0..n).map(|j| {
        let x = profile.x(j);
        if x.abs() < 60e-6 { oracle_at(x) } else { 0.0 }
    }).collect();
    let (ssum, osum) = (sim.iter().sum::<f64>(), ora.iter().sum::<f64>());
    sim.iter_mut().for_each(|v| *v /= ssum);
    ora.iter_mut().for_each(|v| *v /= osum);
    let (mut d2, mut o2) = (0.0, 0.0);
    for j in 0..n {
        if profile.x(j).abs() < 60e-6 {
            d2 += (sim[j] - ora[j]) * (sim[j] - ora[j]);
            o2 += ora[j] * ora[j];
        }
    }
    println!("raw profile rel L2 (|x|<60um) = {:.3e}", (d2 / o2).sqrt());
}
