//! Rotation-induced phase between the counter-propagating beams of a loop.
//!
//! Positive rotation rates are counter-clockwise and give a positive
//! `delta_phi = phi_ccw - phi_cw`. The phase is generated by the optical
//! wavelength of the light; the shortened fringe wavelength of the cavity
//! only enters through the achievable phase resolution.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::interferometer::PhaseSetting;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Sidereal rotation rate of the Earth, rad/s.
pub const EARTH_ROTATION_RATE: f64 = 7.292e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SagnacGeometry {
    /// Enclosed loop area, m^2.
    area: f64,
    /// Optical wavelength, m.
    wavelength: f64,
    /// Rotation rate, rad/s.
    rotation_rate: f64,
}

impl SagnacGeometry {
    pub fn new(area: f64, wavelength: f64, rotation_rate: f64) -> Result<Self> {
        if !(area > 0.0 && area.is_finite()) {
            return Err(domain(format!("loop area must be positive, got {area}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(domain(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !rotation_rate.is_finite() {
            return Err(domain(format!(
                "rotation rate must be finite, got {rotation_rate}"
            )));
        }
        Ok(Self {
            area,
            wavelength,
            rotation_rate,
        })
    }

    pub fn with_rotation_rate(self, rotation_rate: f64) -> Result<Self> {
        Self::new(self.area, self.wavelength, rotation_rate)
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn rotation_rate(&self) -> f64 {
        self.rotation_rate
    }

    pub fn light_speed(&self) -> f64 {
        SPEED_OF_LIGHT
    }
}

/// `4 A Omega / c^2`, seconds.
pub fn sagnac_time_delay(g: &SagnacGeometry) -> f64 {
    4.0 * g.area * g.rotation_rate / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// `delta_phi = 8 pi A Omega / (c lambda)`, radians.
pub fn sagnac_phase(g: &SagnacGeometry) -> f64 {
    8.0 * PI * g.area * g.rotation_rate / (SPEED_OF_LIGHT * g.wavelength)
}

/// Phase seen by each arm, half of [`sagnac_phase`].
pub fn per_arm_phase(g: &SagnacGeometry) -> f64 {
    0.5 * sagnac_phase(g)
}

/// Antiphase setting produced by rotation on top of a fixed preset `bias`.
pub fn antiphase_setting(g: &SagnacGeometry, bias: f64) -> Result<PhaseSetting> {
    PhaseSetting::antiphase(bias + per_arm_phase(g))
}

/// Smallest rotation rate whose Sagnac phase equals `phase_resolution`.
pub fn min_detectable_rotation(g: &SagnacGeometry, phase_resolution: f64) -> Result<f64> {
    if !(phase_resolution > 0.0 && phase_resolution.is_finite()) {
        return Err(domain(format!(
            "phase resolution must be positive, got {phase_resolution}"
        )));
    }
    Ok(phase_resolution * SPEED_OF_LIGHT * g.wavelength / (8.0 * PI * g.area))
}

/// Cavity phase resolution `classical / (2 n)` for effective order `n`.
pub fn pbsi_resolution(classical_resolution: f64, effective_order: usize) -> Result<f64> {
    if effective_order < 1 {
        return Err(usage("effective order starts at 1"));
    }
    Ok(classical_resolution / (2.0 * effective_order as f64))
}
