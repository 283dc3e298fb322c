use emzi_core::*;

fn main() {
    let beam = BeamSpec::monoenergetic(10_000.0).unwrap();
    let g = GeometryBuilder::default().build(beam).unwrap();
    for n in [201u32, 501, 1001, 2001] {
        let bundle = RayBundleSpec {
            n_source_samples: n,
            n_collimator_samples: n,
            quadrature: Quadrature::DeterministicGrid,
        };
        let positions: Vec<f64> = (-7..=7).map(|k| k as f64 * 1e-6).collect();
        let map = moire_contrast_map(&g, &bundle, &positions).unwrap();
        print!("n={:5}: ", n);
        for (p, fit) in &map {
            if p.abs() <= 7.1e-6 {
                print!("{:.3}@{:+.0} ", fit.contrast, p * 1e6);
            }
        }
        println!();
    }
    // open fraction 0.4: the echo case
    let mut builder = GeometryBuilder::default();
    builder.open_fraction = 0.4;
    let g2 = builder.build(BeamSpec::monoenergetic(10_000.0).unwrap()).unwrap();
    let bundle = RayBundleSpec { n_source_samples: 1001, n_collimator_samples: 1001, quadrature: Quadrature::DeterministicGrid };
    let slit = g2.detector_slit.with_center(0.0);
    let shifts = default_scan_shifts(g2.gratings[1].period);
    let scan = moire_scan(&g2, &bundle, &shifts, &slit).unwrap();
    let fit = fit_fringes(&scan, default_period_bounds(100e-9)).unwrap();
    println!("f=0.4 on-axis: p={:.2}nm C={:.4}", fit.period * 1e9, fit.contrast);
    let positions: Vec<f64> = (-6..=6).map(|k| k as f64 * 1e-6).collect();
    let map = moire_contrast_map(&g2, &bundle, &positions).unwrap();
    for (p, fit) in &map {
        println!("  f=0.4 pos {:+.1} um  C={:.4} p={:.1}nm A={:.3e}", p * 1e6, fit.contrast, fit.period * 1e9, fit.offset);
    }
}
