use emzi_core::*;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let beam = BeamSpec::monoenergetic(10_000.0).unwrap();
    let g = GeometryBuilder::default().build(beam).unwrap();
    let coh = CoherenceSpec::default();
    let shifts = default_scan_shifts(g.gratings[1].period);

    // around order 0 and port 1
    let mut positions: Vec<f64> = (-6..=6).map(|k| k as f64 * 2e-6).collect();
    positions.extend((14..=26).map(|k| k as f64 * 2.5e-6 / 1.0));
    let positions: Vec<f64> = positions.into_iter().map(|p| p as f64).collect();
    let pos_m: Vec<f64> = positions.iter().map(|p| p * 1.0).collect();
    let map = contrast_vs_detector(&g, &coh, &pos_m, &shifts).unwrap();
    for (p, fit) in &map {
        println!("pos {:+6.1} um  C={:.4} p={:6.2}nm A={:.3e} conv={}",
            p * 1e6, fit.contrast, fit.period * 1e9, fit.offset, fit.converged);
    }
    println!("map t={:.2?}", t0.elapsed());

    // 6 and 8 keV period check at port 1 (per-energy port center)
    for e in [6000.0, 8000.0] {
        let beam = BeamSpec::monoenergetic(e).unwrap();
        let g = GeometryBuilder::default().build(beam).unwrap();
        let scan = scan_middle_grating(&g, &coh, &shifts, &g.detector_slit).unwrap();
        let fit = fit_fringes(&scan, default_period_bounds(100e-9)).unwrap();
        println!("{:.0} keV: p={:.3}nm C={:.4} port={:.1}um", e / 1e3, fit.period * 1e9, fit.contrast, g.detector_slit.center * 1e6);
    }

    // source-point convergence 32 -> 64 at port 1, 10 keV
    let scan32 = scan_middle_grating(&g, &coh, &shifts, &g.detector_slit).unwrap();
    let coh64 = CoherenceSpec { n_source_points: 64, ..coh };
    let scan64 = scan_middle_grating(&g, &coh64, &shifts, &g.detector_slit).unwrap();
    let fit32 = fit_fringes(&scan32, default_period_bounds(100e-9)).unwrap();
    let fit64 = fit_fringes(&scan64, default_period_bounds(100e-9)).unwrap();
    println!("C(32)={:.5} C(64)={:.5} dC={:.2e}", fit32.contrast, fit64.contrast, (fit32.contrast - fit64.contrast).abs());
    println!("total t={:.2?}", t0.elapsed());
}
