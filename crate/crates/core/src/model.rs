//! Domain types and closed-form beam/geometry relations.
//!
//! Everything downstream (wave engine, classical engine, analysis) consumes
//! these types. All quantities are strict SI (meters, seconds, joules);
//! energies cross the API boundary in electron-volts and are converted here.

use crate::consts;
use crate::error::{Result, SimError};

/// Default transverse half-width of the computation window. ±120 µm holds the
/// zero and first diffraction-order groups at the detector plane with margin.
pub const DEFAULT_GRID_HALF_WIDTH: f64 = 120e-6;

/// Diffraction orders the grating windows are sized to pass.
const WINDOW_ORDERS: f64 = 2.0;

/// Safety factor applied on top of the geometric beam footprint when sizing
/// grating windows.
const WINDOW_MARGIN: f64 = 4.0;

/// Grating windows never extend into the apodized rim of the grid.
const WINDOW_CAP_FRACTION: f64 = 0.90;

/// Relativistic de Broglie wavelength of an electron with the given kinetic
/// energy in eV: λ = h·c / sqrt(E·(E + 2·m_e·c²)).
///
/// The relativistic form matters: at 10 keV it differs from h/sqrt(2mE) by
/// about 0.5%, which is visible in the Talbot length.
pub fn wavelength_from_energy(kinetic_energy_ev: f64) -> Result<f64> {
    if !(kinetic_energy_ev > 0.0) {
        return Err(SimError::domain(
            "kinetic_energy",
            format!("must be > 0 eV, got {kinetic_energy_ev}"),
        ));
    }
    let e_j = kinetic_energy_ev * consts::ELEMENTARY_CHARGE;
    let pc = (e_j * (e_j + 2.0 * consts::ELECTRON_REST_ENERGY_J)).sqrt();
    Ok(consts::PLANCK * consts::SPEED_OF_LIGHT / pc)
}

/// Self-imaging distance of a grating of the given period: L_T = d²/λ.
pub fn talbot_length(grating_period: f64, wavelength: f64) -> Result<f64> {
    if !(grating_period > 0.0) {
        return Err(SimError::domain(
            "grating_period",
            format!("must be > 0 m, got {grating_period}"),
        ));
    }
    if !(wavelength > 0.0) {
        return Err(SimError::domain(
            "wavelength",
            format!("must be > 0 m, got {wavelength}"),
        ));
    }
    Ok(grating_period * grating_period / wavelength)
}

/// Electron beam: kinetic energy, optional Gaussian energy spread, cached
/// de Broglie wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    kinetic_energy_ev: f64,
    energy_spread_sigma_ev: f64,
    wavelength: f64,
}

impl BeamSpec {
    pub fn new(kinetic_energy_ev: f64, energy_spread_sigma_ev: f64) -> Result<Self> {
        if !(energy_spread_sigma_ev >= 0.0) {
            return Err(SimError::domain(
                "energy_spread_sigma",
                format!("must be >= 0 eV, got {energy_spread_sigma_ev}"),
            ));
        }
        let wavelength = wavelength_from_energy(kinetic_energy_ev)?;
        Ok(BeamSpec {
            kinetic_energy_ev,
            energy_spread_sigma_ev,
            wavelength,
        })
    }

    /// Beam with zero energy spread.
    pub fn monoenergetic(kinetic_energy_ev: f64) -> Result<Self> {
        Self::new(kinetic_energy_ev, 0.0)
    }

    pub fn kinetic_energy_ev(&self) -> f64 {
        self.kinetic_energy_ev
    }

    pub fn energy_spread_sigma_ev(&self) -> f64 {
        self.energy_spread_sigma_ev
    }

    /// Cached relativistic de Broglie wavelength in meters.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
}

/// Binary amplitude grating: infinitely thin perfect absorber bars, open
/// slots of width `open_fraction·period`, modeled over a finite window of
/// `n_periods_window` periods centered on the beam axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingSpec {
    pub period: f64,
    pub open_fraction: f64,
    pub lateral_shift: f64,
    pub z_position: f64,
    pub n_periods_window: u32,
}

impl GratingSpec {
    pub fn new(
        period: f64,
        open_fraction: f64,
        lateral_shift: f64,
        z_position: f64,
        n_periods_window: u32,
    ) -> Result<Self> {
        if !(period > 0.0) {
            return Err(SimError::domain(
                "period",
                format!("must be > 0 m, got {period}"),
            ));
        }
        if !(open_fraction > 0.0 && open_fraction < 1.0) {
            return Err(SimError::domain(
                "open_fraction",
                format!("must lie in (0, 1), got {open_fraction}"),
            ));
        }
        if n_periods_window < 1 {
            return Err(SimError::domain("n_periods_window", "must be >= 1"));
        }
        Ok(GratingSpec {
            period,
            open_fraction,
            lateral_shift,
            z_position,
            n_periods_window,
        })
    }

    /// Half-extent of the modeled grating window.
    pub fn window_half_width(&self) -> f64 {
        0.5 * self.period * self.n_periods_window as f64
    }

    /// Binary transmission ignoring the finite window: 1 iff
    /// frac((x − lateral_shift)/period) < open_fraction.
    pub fn transmits_periodic(&self, x: f64) -> bool {
        let t = (x - self.lateral_shift) / self.period;
        t - t.floor() < self.open_fraction
    }

    /// Binary transmission of the windowed grating.
    pub fn transmits(&self, x: f64) -> bool {
        x.abs() <= self.window_half_width() && self.transmits_periodic(x)
    }

    /// Copy with the lateral shift replaced.
    pub fn with_shift(&self, lateral_shift: f64) -> Self {
        GratingSpec {
            lateral_shift,
            ..*self
        }
    }
}

/// Ideal absorbing slit: transmits on [center − width/2, center + width/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureSpec {
    pub width: f64,
    pub center: f64,
    pub z_position: f64,
}

impl ApertureSpec {
    pub fn new(width: f64, center: f64, z_position: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(SimError::domain(
                "width",
                format!("must be > 0 m, got {width}"),
            ));
        }
        Ok(ApertureSpec {
            width,
            center,
            z_position,
        })
    }

    pub fn lo(&self) -> f64 {
        self.center - 0.5 * self.width
    }

    pub fn hi(&self) -> f64 {
        self.center + 0.5 * self.width
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo() && x <= self.hi()
    }

    pub fn with_center(&self, center: f64) -> Self {
        ApertureSpec { center, ..*self }
    }
}

/// The full beamline: extended incoherent source slit, collimation slit,
/// three gratings, detector slit selecting one output port.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec {
    pub source: ApertureSpec,
    pub collimator: ApertureSpec,
    pub gratings: [GratingSpec; 3],
    pub detector_slit: ApertureSpec,
    pub beam: BeamSpec,
    /// The five free-flight distances in beam order, kept verbatim from the
    /// configuration so they survive bit-exactly (z positions are sums).
    leg_lengths: [f64; 5],
}

impl GeometrySpec {
    /// The five free-flight distances in beam order.
    pub fn leg_distances(&self) -> [f64; 5] {
        self.leg_lengths
    }

    /// Transverse separation of adjacent diffraction-order groups at the
    /// detector plane, using the G1→detector lever arm.
    pub fn order_separation_at_detector(&self) -> f64 {
        let lever = self.detector_slit.z_position - self.gratings[0].z_position;
        self.beam.wavelength() / self.gratings[0].period * lever
    }
}

/// Builds a [`GeometrySpec`] from beamline distances and element sizes.
/// Defaults are the apparatus values: 5 µm and 1.5 µm collimation slits
/// 0.24 m apart, 0.03 m to the first of three 100 nm gratings spaced
/// 0.0254 m, and 0.27 m to a 5 µm detector slit.
#[derive(Debug, Clone)]
pub struct GeometryBuilder {
    pub source_width: f64,
    pub source_center: f64,
    pub collimator_width: f64,
    pub collimator_center: f64,
    pub source_to_collimator: f64,
    pub collimator_to_g1: f64,
    pub g1_to_g2: f64,
    pub g2_to_g3: f64,
    pub g3_to_detector: f64,
    pub grating_period: f64,
    pub open_fraction: f64,
    pub detector_slit_width: f64,
    /// Detector slit center; `None` places it on the first-order group
    /// (output port 1).
    pub detector_slit_center: Option<f64>,
    /// Per-grating window override in periods; computed from the beam
    /// footprint when `None`.
    pub n_periods_window: [Option<u32>; 3],
}

impl Default for GeometryBuilder {
    fn default() -> Self {
        GeometryBuilder {
            source_width: 5e-6,
            source_center: 0.0,
            collimator_width: 1.5e-6,
            collimator_center: 0.0,
            source_to_collimator: 0.24,
            collimator_to_g1: 0.03,
            g1_to_g2: 0.0254,
            g2_to_g3: 0.0254,
            g3_to_detector: 0.27,
            grating_period: 100e-9,
            open_fraction: 0.5,
            detector_slit_width: 5e-6,
            detector_slit_center: None,
            n_periods_window: [None; 3],
        }
    }
}

impl GeometryBuilder {
    pub fn build(&self, beam: BeamSpec) -> Result<GeometrySpec> {
        for (name, v) in [
            ("source_to_collimator", self.source_to_collimator),
            ("collimator_to_g1", self.collimator_to_g1),
            ("g3_to_detector", self.g3_to_detector),
        ] {
            if !(v > 0.0) {
                return Err(SimError::domain("distance", format!("{name} must be > 0 m")));
            }
        }
        // Coincident gratings are permitted so degenerate configurations can
        // still be analyzed; the engines reject them where they matter.
        for (name, v) in [("g1_to_g2", self.g1_to_g2), ("g2_to_g3", self.g2_to_g3)] {
            if !(v >= 0.0) {
                return Err(SimError::domain("distance", format!("{name} must be >= 0 m")));
            }
        }

        let z_source = 0.0;
        let z_collimator = z_source + self.source_to_collimator;
        let z_g1 = z_collimator + self.collimator_to_g1;
        let z_g2 = z_g1 + self.g1_to_g2;
        let z_g3 = z_g2 + self.g2_to_g3;
        let z_detector = z_g3 + self.g3_to_detector;

        let source = ApertureSpec::new(self.source_width, self.source_center, z_source)?;
        let collimator =
            ApertureSpec::new(self.collimator_width, self.collimator_center, z_collimator)?;

        let lambda = beam.wavelength();
        let d = self.grating_period;
        let mut gratings = [GratingSpec::new(d, self.open_fraction, 0.0, z_g1, 1)?; 3];
        for (i, z) in [z_g1, z_g2, z_g3].into_iter().enumerate() {
            let n_periods = match self.n_periods_window[i] {
                Some(n) => n,
                None => self.computed_window_periods(z, z_collimator, z_g1, lambda),
            };
            gratings[i] = GratingSpec::new(d, self.open_fraction, 0.0, z, n_periods)?;
        }

        let port1 = lambda / d * (z_detector - z_g1);
        let detector_center = self.detector_slit_center.unwrap_or(port1);
        let detector_slit =
            ApertureSpec::new(self.detector_slit_width, detector_center, z_detector)?;

        Ok(GeometrySpec {
            source,
            collimator,
            gratings,
            detector_slit,
            beam,
            leg_lengths: [
                self.source_to_collimator,
                self.collimator_to_g1,
                self.g1_to_g2,
                self.g2_to_g3,
                self.g3_to_detector,
            ],
        })
    }

    /// Window size in periods: geometric beam envelope (collimator image plus
    /// source penumbra) plus the first `WINDOW_ORDERS` diffraction orders,
    /// with a `WINDOW_MARGIN` safety factor, capped inside the grid rim.
    fn computed_window_periods(&self, z: f64, z_collimator: f64, z_g1: f64, lambda: f64) -> u32 {
        let penumbra_slope =
            (0.5 * self.source_width + 0.5 * self.collimator_width) / self.source_to_collimator;
        let envelope = 0.5 * self.collimator_width + penumbra_slope * (z - z_collimator);
        let orders = WINDOW_ORDERS * lambda / self.grating_period * (z - z_g1).max(0.0);
        let half = ((envelope + orders) * WINDOW_MARGIN)
            .min(WINDOW_CAP_FRACTION * DEFAULT_GRID_HALF_WIDTH);
        (2.0 * half / self.grating_period).ceil().max(1.0) as u32
    }
}

/// Beam width vs. diffraction-order separation at the middle grating.
/// The device operates as a separated-beam (Mach-Zehnder style)
/// interferometer when the ratio is near one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachZehnderReport {
    pub beam_width_at_g2: f64,
    pub order_separation_at_g2: f64,
    pub ratio: f64,
}

/// Order separation (λ/d)·L₁₂ against the geometric collimator image grown
/// by single-slit diffraction, w + 2λL/w.
pub fn mach_zehnder_criterion(geometry: &GeometrySpec) -> MachZehnderReport {
    let lambda = geometry.beam.wavelength();
    let d = geometry.gratings[0].period;
    let l12 = geometry.gratings[1].z_position - geometry.gratings[0].z_position;
    let order_separation = lambda / d * l12;

    let l_c_g2 = geometry.gratings[1].z_position - geometry.collimator.z_position;
    let w = geometry.collimator.width;
    let beam_width = w + 2.0 * lambda * l_c_g2 / w;

    MachZehnderReport {
        beam_width_at_g2: beam_width,
        order_separation_at_g2: order_separation,
        ratio: order_separation / beam_width,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn paper_geometry(energy_ev: f64) -> GeometrySpec {
        GeometryBuilder::default()
            .build(BeamSpec::monoenergetic(energy_ev).unwrap())
            .unwrap()
    }

    #[test]
    fn wavelength_matches_relativistic_formula() {
        // Frozen from an independent high-precision evaluation of
        // hc/sqrt(E(E+2mc²)) with the same constants.
        assert_relative_eq!(
            wavelength_from_energy(10_000.0).unwrap(),
            1.2204695032257905e-11,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            wavelength_from_energy(6_000.0).unwrap(),
            1.5786817909419089e-11,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            wavelength_from_energy(8_000.0).unwrap(),
            1.3658505299625033e-11,
            max_relative = 1e-12
        );
    }

    #[test]
    fn wavelength_rejects_nonpositive_energy() {
        assert!(wavelength_from_energy(0.0).is_err());
        assert!(wavelength_from_energy(-5.0).is_err());
        assert!(wavelength_from_energy(f64::NAN).is_err());
    }

    #[test]
    fn wavelength_limiting_forms() {
        // Below 100 eV the non-relativistic h/sqrt(2mE) agrees to 0.1%.
        for e in [100.0, 50.0, 10.0] {
            let rel = wavelength_from_energy(e).unwrap();
            let e_j = e * consts::ELEMENTARY_CHARGE;
            let nonrel = consts::PLANCK / (2.0 * consts::ELECTRON_MASS * e_j).sqrt();
            assert_relative_eq!(rel, nonrel, max_relative = 1e-3);
        }
        // Ultra-relativistic limit: λ → hc/E.
        let e = 1e12;
        let rel = wavelength_from_energy(e).unwrap();
        let hc_over_e =
            consts::PLANCK * consts::SPEED_OF_LIGHT / (e * consts::ELEMENTARY_CHARGE);
        assert_relative_eq!(rel, hc_over_e, max_relative = 1e-6);
    }

    #[test]
    fn wavelength_is_strictly_decreasing_in_energy() {
        let energies = [10.0, 100.0, 1e3, 6e3, 8e3, 1e4, 1e5, 1e7];
        for pair in energies.windows(2) {
            let lo = wavelength_from_energy(pair[0]).unwrap();
            let hi = wavelength_from_energy(pair[1]).unwrap();
            assert!(hi < lo, "λ({}) = {lo} !> λ({}) = {hi}", pair[0], pair[1]);
        }
    }

    #[test]
    fn talbot_length_at_10_kev_is_0_82_mm() {
        let lambda = wavelength_from_energy(10_000.0).unwrap();
        let lt = talbot_length(100e-9, lambda).unwrap();
        assert_relative_eq!(lt, 0.82e-3, max_relative = 0.01);
        // Grating spacing over-shoots the Talbot length by a factor ~31.
        assert_relative_eq!(0.0254 / lt, 31.0, max_relative = 1.0 / 31.0);
    }

    #[test]
    fn talbot_length_algebraic_identity() {
        // λ chosen so d²/λ = d returns d exactly (dyadic d, so d² and the
        // quotient are both exact in binary floating point).
        let d = 2.0_f64.powi(-23); // ≈ 119 nm
        assert_eq!(talbot_length(d, d).unwrap(), d);
        // A decimal period still satisfies the identity to one ulp.
        assert_relative_eq!(talbot_length(100e-9, 100e-9).unwrap(), 100e-9, max_relative = 1e-15);
    }

    #[test]
    fn talbot_length_scaling() {
        let d = 100e-9;
        let lambda = 1e-11;
        let base = talbot_length(d, lambda).unwrap();
        assert_relative_eq!(
            talbot_length(2.0 * d, lambda).unwrap(),
            4.0 * base,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            talbot_length(d, 2.0 * lambda).unwrap(),
            0.5 * base,
            max_relative = 1e-15
        );
    }

    #[test]
    fn talbot_length_rejects_nonpositive_inputs() {
        assert!(talbot_length(0.0, 1e-11).is_err());
        assert!(talbot_length(100e-9, -1e-11).is_err());
    }

    #[test]
    fn paper_default_distances() {
        let g = paper_geometry(10_000.0);
        let legs = g.leg_distances();
        assert_eq!(legs, [0.24, 0.03, 0.0254, 0.0254, 0.27]);
        // z strictly increasing along the beam.
        let zs = [
            g.source.z_position,
            g.collimator.z_position,
            g.gratings[0].z_position,
            g.gratings[1].z_position,
            g.gratings[2].z_position,
            g.detector_slit.z_position,
        ];
        for pair in zs.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn beam_spec_caches_wavelength() {
        let beam = BeamSpec::new(10_000.0, 2.0).unwrap();
        assert_relative_eq!(
            beam.wavelength(),
            wavelength_from_energy(10_000.0).unwrap(),
            max_relative = 1e-12
        );
        assert!(BeamSpec::new(10_000.0, -1.0).is_err());
        assert!(BeamSpec::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn grating_transmission_is_binary_and_periodic() {
        let g = GratingSpec::new(100e-9, 0.5, 0.0, 0.0, 10).unwrap();
        // Open on [0, 50 nm) modulo the period, inside the window.
        assert!(g.transmits(10e-9));
        assert!(!g.transmits(60e-9));
        assert!(g.transmits(110e-9));
        assert!(!g.transmits(-10e-9)); // frac(-0.1) = 0.9 ≥ 0.5
        assert!(g.transmits(-90e-9));
        // Zero outside the window (10 periods → ±500 nm).
        assert!(!g.transmits(510e-9));
        assert!(!g.transmits(-600e-9));
        // Shift by one period is the identity.
        let shifted = g.with_shift(100e-9);
        for i in -50..50 {
            let x = i as f64 * 7.3e-9;
            assert_eq!(g.transmits(x), shifted.transmits(x), "x = {x}");
        }
    }

    #[test]
    fn grating_spec_validation() {
        assert!(GratingSpec::new(0.0, 0.5, 0.0, 0.0, 1).is_err());
        assert!(GratingSpec::new(100e-9, 0.0, 0.0, 0.0, 1).is_err());
        assert!(GratingSpec::new(100e-9, 1.0, 0.0, 0.0, 1).is_err());
        assert!(GratingSpec::new(100e-9, 0.5, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn aperture_contains_its_interval() {
        let a = ApertureSpec::new(5e-6, 1e-6, 0.0).unwrap();
        assert!(a.contains(1e-6));
        assert!(a.contains(-1.5e-6));
        assert!(a.contains(3.5e-6));
        assert!(!a.contains(3.6e-6));
        assert!(ApertureSpec::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mach_zehnder_criterion_at_paper_defaults() {
        let report = mach_zehnder_criterion(&paper_geometry(10_000.0));
        // (λ/d)·0.0254 — frozen from the wavelength above.
        assert_relative_eq!(
            report.order_separation_at_g2,
            3.1e-6,
            max_relative = 2e-3
        );
        assert!(
            report.ratio >= 0.5 && report.ratio <= 2.0,
            "separation/width ratio {} outside the near-equality band",
            report.ratio
        );
    }

    #[test]
    fn mach_zehnder_criterion_zero_distance() {
        let mut builder = GeometryBuilder::default();
        builder.g1_to_g2 = 0.0;
        let g = builder
            .build(BeamSpec::monoenergetic(10_000.0).unwrap())
            .unwrap();
        let report = mach_zehnder_criterion(&g);
        assert_eq!(report.order_separation_at_g2, 0.0);
        assert_eq!(report.ratio, 0.0);
    }

    #[test]
    fn grating_windows_cover_footprint() {
        let g = paper_geometry(10_000.0);
        // The G2 window must pass both interferometer arms (±1 orders at
        // ±3.1 µm) plus the collimated envelope.
        assert!(g.gratings[1].window_half_width() > 8e-6);
        // And never extend into the apodized rim of the grid.
        for gr in &g.gratings {
            assert!(gr.window_half_width() <= 0.9 * DEFAULT_GRID_HALF_WIDTH);
        }
    }

    #[test]
    fn detector_slit_defaults_to_port_one() {
        let g = paper_geometry(10_000.0);
        assert_relative_eq!(
            g.detector_slit.center,
            g.order_separation_at_detector(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            g.order_separation_at_detector(),
            3.9153e-5,
            max_relative = 1e-4
        );
    }
}
