use emzi_core::*;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let beam = BeamSpec::monoenergetic(10_000.0).unwrap();
    let g = GeometryBuilder::default().build(beam).unwrap();
    let plan = SamplingPlan::for_geometry(&g).unwrap();
    println!("grid: n={} dx={:.2}nm half={:.1}um", plan.n, plan.dx * 1e9, plan.grid_half_width * 1e6);
    for leg in &plan.legs {
        println!("  {:<22} L={:.4} X={:.2}um bound={:.2}nm margin={:.3} cert={}",
            leg.leg.to_string(), leg.distance, leg.source_half_extent * 1e6,
            leg.dx_bound * 1e9, leg.margin, leg.certified);
    }
    println!("windows: {:?} periods", [g.gratings[0].n_periods_window, g.gratings[1].n_periods_window, g.gratings[2].n_periods_window]);

    let coh = CoherenceSpec::default();
    let pattern = detector_pattern(&g, &coh).unwrap();
    println!("pattern done t={:.2?}", t0.elapsed());

    // locate order groups: integrate 8um windows around 0, +-39.15um, report flux
    let sep = g.order_separation_at_detector();
    println!("expected order separation {:.3} um", sep * 1e6);
    for c in [-2.0 * sep, -sep, 0.0, sep, 2.0 * sep] {
        let slit = ApertureSpec::new(8e-6, c, g.detector_slit.z_position).unwrap();
        let f = detector_flux(&pattern, &slit).unwrap();
        println!("  flux in 8um at {:+.1} um: {:.4}", c * 1e6, f);
    }
    // dark region between orders
    let dark = ApertureSpec::new(5e-6, 0.5 * sep, g.detector_slit.z_position).unwrap();
    let port1 = ApertureSpec::new(5e-6, sep, g.detector_slit.z_position).unwrap();
    println!("  port1(5um)={:.4}  dark(5um)={:.4} ratio={:.1}",
        detector_flux(&pattern, &port1).unwrap(), detector_flux(&pattern, &dark).unwrap(),
        detector_flux(&pattern, &port1).unwrap() / detector_flux(&pattern, &dark).unwrap());

    // peak positions: coarse max near sep
    let imax = (0..pattern.values.len()).max_by(|&a, &b| pattern.values[a].total_cmp(&pattern.values[b])).unwrap();
    println!("global peak at {:.2} um", pattern.x(imax) * 1e6);

    // fringe scan at port 1
    let t1 = Instant::now();
    let shifts = default_scan_shifts(g.gratings[1].period);
    let scan = scan_middle_grating(&g, &coh, &shifts, &g.detector_slit).unwrap();
    println!("scan ({} pts) t={:.2?}", shifts.len(), t1.elapsed());
    for (s, f) in scan.shifts.iter().zip(&scan.fluxes) {
        println!("  {:5.1} nm  {:.6}", s * 1e9, f);
    }
    let fit = fit_fringes(&scan, default_period_bounds(100e-9)).unwrap();
    println!("port-1 fit: p={:.3}nm C={:.4} A={:.4e} conv={}", fit.period * 1e9, fit.contrast, fit.offset, fit.converged);
    println!("total t={:.2?}", t0.elapsed());
}
