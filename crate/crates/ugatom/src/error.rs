use thiserror::Error;

/// Errors produced by the numerical and physical routines of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// Z alpha_e >= |kappa_r|: the point-nucleus Dirac solution ceases to exist.
    #[error("supercritical charge: Z*alpha_e = {z_alpha:.6} >= |kappa_r| = {kappa_abs}")]
    SupercriticalCharge { z_alpha: f64, kappa_abs: u32 },

    /// Quantum-number combination violates the Dirac labelling rules.
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    /// Requested transition does not emit (upper level not above lower level).
    #[error("non-emissive transition: E_upper <= E_lower")]
    NonEmissive,

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Eigenvalue bracket does not contain a sign change of the match defect.
    #[error("no sign change of the matching defect in bracket [{lo:.12e}, {hi:.12e}] J")]
    NoSignChange { lo: f64, hi: f64 },

    /// The shooting integration produced an unusable solution.
    #[error("shooting failure: {0}")]
    Shooting(String),
}

pub type Result<T> = std::result::Result<T, Error>;
