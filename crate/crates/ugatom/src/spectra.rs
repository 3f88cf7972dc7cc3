//! Transition frequencies and gravitational redshift, exact and as the
//! low-compactness series, for both the gauge-field result and the
//! general-relativistic isotropic-coordinate result.

use crate::atom::{energy_flat, QuantumNumbers};
use crate::error::{Error, Result};
use crate::gravity::GravityEnvironment;
use crate::physcon::PhysicalConstants;
use serde::Serialize;
use std::f64::consts::PI;

/// Angular frequency (rad/s) of the photon emitted in the transition
/// `upper -> lower` at zero gravitational potential.
pub fn transition_omega(
    upper: &QuantumNumbers,
    lower: &QuantumNumbers,
    z: u32,
    pc: &PhysicalConstants,
) -> Result<f64> {
    let e_upper = energy_flat(upper, z, pc)?;
    let e_lower = energy_flat(lower, z, pc)?;
    if e_upper <= e_lower {
        return Err(Error::NonEmissive);
    }
    Ok((e_upper - e_lower) / pc.hbar)
}

/// One spectral line: emitted frequency at zero potential and the frequency
/// emitted by the same transition inside a gravitational environment.
/// Frequencies do not change in transit, so `omega_r` is also what a
/// receiver at zero potential measures.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralLine {
    pub upper: String,
    pub lower: String,
    pub z: u32,
    /// Emitted at zero potential (rad/s).
    pub omega_e: f64,
    /// Emitted at the environment potential (rad/s).
    pub omega_r: f64,
    /// 2 pi c / omega_e (m).
    pub wavelength_e: f64,
    /// 2 pi c / omega_r (m).
    pub wavelength_r: f64,
}

/// Build a line and evaluate it inside `env`.
pub fn line_at_env(
    upper: &QuantumNumbers,
    lower: &QuantumNumbers,
    z: u32,
    env: &GravityEnvironment,
) -> Result<SpectralLine> {
    let pc = env.constants();
    let omega_e = transition_omega(upper, lower, z, &pc)?;
    let omega_r = env.c1() * omega_e;
    Ok(SpectralLine {
        upper: upper.label(),
        lower: lower.label(),
        z,
        omega_e,
        omega_r,
        wavelength_e: 2.0 * PI * pc.c / omega_e,
        wavelength_r: 2.0 * PI * pc.c / omega_r,
    })
}

/// Redshift of a photon emitted at compactness u and received at zero
/// potential, together with the isotropic-Schwarzschild result of GR and
/// the two-term series of both.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RedshiftReport {
    pub u: f64,
    pub z_ug_exact: f64,
    pub z_ug_series2: f64,
    pub z_gr_exact: f64,
    pub z_gr_series2: f64,
    /// z_gr_exact - z_ug_exact.
    pub delta_z: f64,
}

/// Gauge-field redshift: z = 1/C1 - 1 = u/(1+u); series u - u^2.
/// The u/(1+u) form of the identity is used, which stays accurate at
/// solar-scale compactness where 1/C1 - 1 would lose digits.
pub fn redshift_ug(env: &GravityEnvironment) -> (f64, f64) {
    let u = env.compactness();
    (u / (1.0 + u), u - u * u)
}

/// GR redshift from the isotropic Schwarzschild g00 at the emitter with the
/// receiver at infinity: z = (1+u/2)/(1-u/2) - 1 = u/(1-u/2);
/// series u + u^2/2.  The isotropic form has a pole at u = 2.
pub fn redshift_gr(env: &GravityEnvironment) -> Result<(f64, f64)> {
    let u = env.compactness();
    if u >= 2.0 {
        return Err(Error::Domain(format!(
            "isotropic-coordinate g00 is singular at u = 2 (got u = {u})"
        )));
    }
    Ok((u / (1.0 - 0.5 * u), u + 0.5 * u * u))
}

/// Both theories plus their difference.
pub fn redshift_report(env: &GravityEnvironment) -> Result<RedshiftReport> {
    let (z_ug_exact, z_ug_series2) = redshift_ug(env);
    let (z_gr_exact, z_gr_series2) = redshift_gr(env)?;
    Ok(RedshiftReport {
        u: env.compactness(),
        z_ug_exact,
        z_ug_series2,
        z_gr_exact,
        z_gr_series2,
        delta_z: z_gr_exact - z_ug_exact,
    })
}

/// General two-point gauge-field redshift: emitter at compactness `u_emit`,
/// receiver at `u_recv`.  Reduces to [`redshift_ug`] for `u_recv` = 0.
pub fn redshift_ug_between(u_emit: f64, u_recv: f64) -> f64 {
    let c1 = |u: f64| (1.0 + u) / (1.0 + 2.0 * u);
    c1(u_recv) / c1(u_emit) - 1.0
}

/// General two-point GR redshift in isotropic coordinates.
pub fn redshift_gr_between(u_emit: f64, u_recv: f64) -> Result<f64> {
    if u_emit >= 2.0 || u_recv >= 2.0 {
        return Err(Error::Domain("isotropic g00 singular at u = 2".into()));
    }
    let sq = |u: f64| (1.0 - 0.5 * u) / (1.0 + 0.5 * u);
    Ok(sq(u_recv) / sq(u_emit) - 1.0)
}
