use emzi_core::*;

fn main() {
    let beam = BeamSpec::monoenergetic(10_000.0).unwrap();
    let g = GeometryBuilder::default().build(beam).unwrap();
    let bundle = RayBundleSpec {
        n_source_samples: 201,
        n_collimator_samples: 201,
        quadrature: Quadrature::DeterministicGrid,
    };
    let slit = g.detector_slit.with_center(0.0);
    let shifts = default_scan_shifts(g.gratings[1].period);
    let scan = moire_scan(&g, &bundle, &shifts, &slit).unwrap();
    for (s, f) in scan.shifts.iter().zip(&scan.fluxes) {
        println!("{:.1} nm  {:.6}", s * 1e9, f);
    }
    let fit = fit_fringes(&scan, default_period_bounds(100e-9)).unwrap();
    println!("fit: A={:.6} B={:.6} p={:.2}nm C={:.4} conv={} rms={:.3e}",
        fit.offset, fit.amplitude, fit.period * 1e9, fit.contrast, fit.converged, fit.residual_rms);

    // contrast across positions
    let positions: Vec<f64> = (-8..=8).map(|k| k as f64 * 1e-6).collect();
    let map = moire_contrast_map(&g, &bundle, &positions).unwrap();
    for (p, fit) in &map {
        println!("pos {:+.1} um  C={:.4} p={:.1}nm A={:.3e} conv={}",
            p * 1e6, fit.contrast, fit.period * 1e9, fit.offset, fit.converged);
    }
}
