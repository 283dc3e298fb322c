use emzi_core::*;

fn main() {
    let shifts = default_scan_shifts(100e-9);
    for f in [0.5, 0.48, 0.47, 0.45] {
        let mut builder = GeometryBuilder::default();
        builder.open_fraction = f;
        let g = builder.build(BeamSpec::monoenergetic(10_000.0).unwrap()).unwrap();
        let coh = CoherenceSpec::default();

        // quantum max near port 1
        let qpos: Vec<f64> = (0..=8).map(|k| g.detector_slit.center - 10e-6 + k as f64 * 2.5e-6).collect();
        let qmap = contrast_vs_detector(&g, &coh, &qpos, &shifts).unwrap();
        let qmax = qmap.iter().map(|(_, fit)| fit.contrast).fold(0.0f64, f64::max);
        let q_at_port = qmap.iter().min_by(|a, b| (a.0 - g.detector_slit.center).abs().total_cmp(&(b.0 - g.detector_slit.center).abs())).unwrap().1;

        // classical map across the beam
        let bundle = RayBundleSpec::default();
        let cpos: Vec<f64> = (-10..=10).map(|k| k as f64 * 0.5e-6).collect();
        let cmap = moire_contrast_map(&g, &bundle, &cpos).unwrap();
        let cmax = cmap.iter().map(|(_, fit)| fit.contrast).fold(0.0f64, f64::max);
        let c_period = cmap[10].1.period; // on axis
        println!("f={:.2}: quantum max={:.4} (port-C={:.4} p={:.2}nm) | classical max(|x|<=5um)={:.4} p_axis={:.2}nm",
            f, qmax, q_at_port.contrast, q_at_port.period * 1e9, cmax, c_period * 1e9);
        let ratio = qmax / cmax;
        println!("        ratio={:.2}", ratio);
    }
}
