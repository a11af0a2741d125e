//! Physical constants, frozen so every figure is bit-reproducible.
//!
//! Values are CODATA / IAU nominal. All three can be overridden through the
//! run configuration (see [`crate::cli`]), which is occasionally useful for
//! checking that dimensionless results really are constant-independent.

use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Newtonian constant of gravitation (m³ kg⁻¹ s⁻²).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

/// Solar mass (kg).
pub const SOLAR_MASS: f64 = 1.988_92e30;

/// The constants record used by every SI-unit computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Speed of light (m/s).
    pub c: f64,
    /// Gravitational constant (m³ kg⁻¹ s⁻²).
    pub g: f64,
    /// Solar mass (kg), used only to resolve `sun`-suffixed mass literals.
    pub m_sun: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c: SPEED_OF_LIGHT,
            g: GRAVITATIONAL_CONSTANT,
            m_sun: SOLAR_MASS,
        }
    }
}

impl Constants {
    /// Validate that all constants are finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("g", self.g), ("m_sun", self.m_sun)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!(
                    "constant {name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Constants::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive() {
        let c = Constants {
            c: 0.0,
            ..Constants::default()
        };
        assert!(c.validate().is_err());
    }
}
