//! Error types shared across the engines.

use std::fmt;

use thiserror::Error;

/// One free-flight leg of the beamline, in beam order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegName {
    SourceToCollimator,
    CollimatorToG1,
    G1ToG2,
    G2ToG3,
    G3ToDetector,
}

impl LegName {
    pub const ALL: [LegName; 5] = [
        LegName::SourceToCollimator,
        LegName::CollimatorToG1,
        LegName::G1ToG2,
        LegName::G2ToG3,
        LegName::G3ToDetector,
    ];
}

impl fmt::Display for LegName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LegName::SourceToCollimator => "source-collimator",
            LegName::CollimatorToG1 => "collimator-G1",
            LegName::G1ToG2 => "G1-G2",
            LegName::G2ToG3 => "G2-G3",
            LegName::G3ToDetector => "G3-detector",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("invalid {quantity}: {message}")]
    Domain {
        quantity: &'static str,
        message: String,
    },

    #[error("sampling violation on {leg} leg: dx = {dx:.4e} m exceeds the Nyquist bound {bound:.4e} m")]
    SamplingViolation { leg: LegName, dx: f64, bound: f64 },

    #[error("slit [{lo:.4e}, {hi:.4e}] m lies outside the computed window [{min:.4e}, {max:.4e}] m")]
    SlitOutsideWindow { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("scan precondition violated: {0}")]
    ScanPrecondition(String),

    #[error("fringe fit precondition violated: {0}")]
    FitPrecondition(String),
}

impl SimError {
    pub fn domain(quantity: &'static str, message: impl Into<String>) -> Self {
        SimError::Domain {
            quantity,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
