//! Physical constants (SI 2019 exact values and CODATA 2018 electron mass).

/// Planck constant, J s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_7015e-31;

/// Electron rest energy, J.
pub const ELECTRON_REST_ENERGY_J: f64 = ELECTRON_MASS * SPEED_OF_LIGHT * SPEED_OF_LIGHT;

/// Electron rest energy, eV (~511.0 keV).
pub const ELECTRON_REST_ENERGY_EV: f64 = ELECTRON_REST_ENERGY_J / ELEMENTARY_CHARGE;
