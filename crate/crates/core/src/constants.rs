//! Physical constants (CODATA 2018, SI units).
//!
//! The Coulomb constant is `1/(4 pi eps0)` for vacuum.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Coulomb constant 1/(4 pi eps0) (N m^2 / C^2).
pub const K_COULOMB: f64 = 8.987_551_792_3e9;

/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub e_charge: f64,
    pub k_coulomb: f64,
    pub c_light: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            e_charge: E_CHARGE,
            k_coulomb: K_COULOMB,
            c_light: C_LIGHT,
        }
    }
}

impl PhysicalConstants {
    /// Names of any constants that are not strictly positive and finite.
    pub fn invalid_fields(&self) -> Vec<&'static str> {
        [
            ("hbar", self.hbar),
            ("e_charge", self.e_charge),
            ("k_coulomb", self.k_coulomb),
            ("c_light", self.c_light),
        ]
        .into_iter()
        .filter(|(_, v)| !(v.is_finite() && *v > 0.0))
        .map(|(name, _)| name)
        .collect()
    }
}
