//! Physical constants in SI units.
//!
//! Source: CODATA 2018 — Tiesinga et al., Rev. Mod. Phys. 93, 025010 (2021).
//! The 2019 SI redefinition makes `c`, `h`, and `e` exact; `mu0`, `G`, and
//! `m_e` carry experimental uncertainty.  Derived members (`eps0`, `alpha_e`,
//! `kappa_einstein`) are computed from the stored inputs so that the defining
//! identities hold to machine precision.

use std::f64::consts::PI;

/// Immutable bundle of the SI constants used throughout the crate.
///
/// All internal computation is done in SI; electron-volts appear only at
/// presentation boundaries via [`PhysicalConstants::joule_to_ev`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum and in zero gravitational potential (m/s, exact).
    pub c: f64,
    /// Newtonian gravitational constant (m^3 kg^-1 s^-2).
    pub g: f64,
    /// Reduced Planck constant (J s, from exact h).
    pub hbar: f64,
    /// Elementary charge (C, exact).
    pub e: f64,
    /// Vacuum permittivity (F/m), derived as 1/(mu0 c^2).
    pub eps0: f64,
    /// Vacuum permeability (H/m).
    pub mu0: f64,
    /// Electron mass (kg).
    pub m_e: f64,
    /// Fine-structure constant, derived as e^2/(4 pi eps0 hbar c).
    pub alpha_e: f64,
    /// Einstein's constant 8 pi G / c^4 (s^2 kg^-1 m^-1).
    pub kappa_einstein: f64,
}

impl PhysicalConstants {
    /// CODATA-2018 constants.  Deterministic; the same bit pattern every call.
    pub fn codata2018() -> Self {
        let c = 299_792_458.0_f64;
        let g = 6.674_30e-11_f64;
        let h = 6.626_070_15e-34_f64;
        let hbar = h / (2.0 * PI);
        let e = 1.602_176_634e-19_f64;
        let mu0 = 1.256_637_062_12e-6_f64;
        let eps0 = 1.0 / (mu0 * c * c);
        let m_e = 9.109_383_701_5e-31_f64;
        let alpha_e = e * e / (4.0 * PI * eps0 * hbar * c);
        let kappa_einstein = 8.0 * PI * g / (c * c * c * c);
        Self {
            c,
            g,
            hbar,
            e,
            eps0,
            mu0,
            m_e,
            alpha_e,
            kappa_einstein,
        }
    }

    /// Electron rest energy m_e c^2 (J).
    pub fn electron_rest_energy(&self) -> f64 {
        self.m_e * self.c * self.c
    }

    /// Bohr radius hbar / (m_e c alpha_e) (m).
    pub fn bohr_radius(&self) -> f64 {
        self.hbar / (self.m_e * self.c * self.alpha_e)
    }

    /// Convert an energy from joules to electron-volts.
    pub fn joule_to_ev(&self, energy_j: f64) -> f64 {
        energy_j / self.e
    }

    /// Convert an energy from electron-volts to joules.
    pub fn ev_to_joule(&self, energy_ev: f64) -> f64 {
        energy_ev * self.e
    }
}

/// CODATA-2018 constants (convenience constructor).
pub fn codata_constants() -> PhysicalConstants {
    PhysicalConstants::codata2018()
}
