//! Minkowski tensor algebra and coefficient-level verification that the
//! general field equations reduce to the concrete equations the rest of the
//! crate implements.
//!
//! The reduction checks build both sides of the operator identities as
//! numeric coefficient matrices over a fixed symbol basis and compare them
//! entrywise, which turns an operator identity into a finite, exact check.

use crate::gravity::GravityEnvironment;
use num_complex::Complex64;

/// 4x4 complex matrix, row-major.
pub type CMat4 = [[Complex64; 4]; 4];

/// Diagonal Minkowski metric with signature (+, -, -, -).
#[derive(Debug, Clone, Copy, Default)]
pub struct Metric;

impl Metric {
    /// eta^{mu nu} = eta_{mu nu}: +1 for (0,0), -1 for equal spatial
    /// indices, 0 otherwise.
    pub fn eta(mu: usize, nu: usize) -> f64 {
        if mu != nu {
            0.0
        } else if mu == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn components() -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Self::eta(i, i);
        }
        m
    }
}

fn eta(mu: usize, nu: usize) -> f64 {
    Metric::eta(mu, nu)
}

pub fn cmat_zero() -> CMat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn cmat_identity() -> CMat4 {
    let mut m = cmat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmat_mul(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn cmat_add(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn cmat_sub(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn cmat_scale(s: f64, a: &CMat4) -> CMat4 {
    let mut out = *a;
    for row in &mut out {
        for v in row {
            *v *= s;
        }
    }
    out
}

pub fn cmat_max_abs(a: &CMat4) -> f64 {
    a.iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max)
}

/// Dirac gamma matrices in the Dirac representation, plus the derived
/// alpha and beta matrices.
#[derive(Debug, Clone)]
pub struct GammaMatrices {
    pub gamma: [CMat4; 4],
}

impl GammaMatrices {
    pub fn dirac() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let gamma0 = [
            [one, o, o, o],
            [o, one, o, o],
            [o, o, -one, o],
            [o, o, o, -one],
        ];
        let gamma1 = [
            [o, o, o, one],
            [o, o, one, o],
            [o, -one, o, o],
            [-one, o, o, o],
        ];
        let gamma2 = [
            [o, o, o, -i],
            [o, o, i, o],
            [o, i, o, o],
            [-i, o, o, o],
        ];
        let gamma3 = [
            [o, o, one, o],
            [o, o, o, -one],
            [-one, o, o, o],
            [o, one, o, o],
        ];
        Self {
            gamma: [gamma0, gamma1, gamma2, gamma3],
        }
    }

    /// beta = gamma^0.
    pub fn beta(&self) -> CMat4 {
        self.gamma[0]
    }

    /// alpha^k = gamma^0 gamma^k, k in {1, 2, 3}.
    pub fn alpha(&self, k: usize) -> CMat4 {
        assert!((1..=3).contains(&k));
        cmat_mul(&self.gamma[0], &self.gamma[k])
    }

    /// Covariant gamma_mu = eta_{mu mu} gamma^mu.
    pub fn gamma_lower(&self, mu: usize) -> CMat4 {
        cmat_scale(eta(mu, mu), &self.gamma[mu])
    }
}

/// P^{mu nu, rho sigma} = (eta^{mu sigma} eta^{rho nu}
///                        + eta^{mu rho} eta^{nu sigma}
///                        - eta^{mu nu} eta^{rho sigma}) / 2.
pub fn p4(mu: usize, nu: usize, rho: usize, sigma: usize) -> f64 {
    0.5 * (eta(mu, sigma) * eta(rho, nu) + eta(mu, rho) * eta(nu, sigma)
        - eta(mu, nu) * eta(rho, sigma))
}

/// Ten-term coefficient tensor P^{mu nu, rho sigma, eta lambda} of the
/// gauge-field term in the four-potential equation.
pub fn p6(mu: usize, nu: usize, rho: usize, sigma: usize, et: usize, la: usize) -> f64 {
    eta(et, sigma) * eta(la, mu) * eta(nu, rho) - eta(et, mu) * eta(la, sigma) * eta(nu, rho)
        - eta(et, rho) * eta(la, mu) * eta(nu, sigma)
        + eta(et, mu) * eta(la, rho) * eta(nu, sigma)
        - eta(mu, sigma) * eta(nu, la) * eta(rho, et)
        + eta(mu, sigma) * eta(nu, et) * eta(rho, la)
        + eta(mu, rho) * eta(nu, la) * eta(sigma, et)
        - eta(mu, rho) * eta(nu, et) * eta(sigma, la)
        - eta(mu, nu) * eta(et, sigma) * eta(la, rho)
        + eta(mu, nu) * eta(et, rho) * eta(la, sigma)
}

/// Contraction of p4 with a gauge field H_{mu nu} = h * diag(1,1,1,1):
/// returns the exact integer sum over the diagonal, to be scaled by h.
/// Summing the integers first keeps exact zeros exact.
pub fn p4_diag_contraction(rho: usize, sigma: usize) -> f64 {
    (0..4).map(|mu| p4(mu, mu, rho, sigma)).sum()
}

/// Same as [`p4_diag_contraction`] for the six-index tensor.
pub fn p6_diag_contraction(rho: usize, sigma: usize, et: usize, la: usize) -> f64 {
    (0..4).map(|mu| p6(mu, mu, rho, sigma, et, la)).sum()
}

/// Coefficients of an operator acting on the Dirac field, expanded over the
/// symbol basis {i hbar d/dt, i hbar c d/dx_k, m_e c^2, e phi_e}; the matrix
/// entries are dimensionless.
#[derive(Debug, Clone)]
pub struct OperatorCoefficients {
    pub dt: CMat4,
    pub dx: [CMat4; 3],
    pub mass: CMat4,
    pub potential: CMat4,
}

impl OperatorCoefficients {
    pub fn zero() -> Self {
        Self {
            dt: cmat_zero(),
            dx: [cmat_zero(); 3],
            mass: cmat_zero(),
            potential: cmat_zero(),
        }
    }

    /// Largest entrywise absolute difference across all basis symbols.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = cmat_max_abs(&cmat_sub(&self.dt, &other.dt));
        for k in 0..3 {
            worst = worst.max(cmat_max_abs(&cmat_sub(&self.dx[k], &other.dx[k])));
        }
        worst = worst.max(cmat_max_abs(&cmat_sub(&self.mass, &other.mass)));
        worst.max(cmat_max_abs(&cmat_sub(&self.potential, &other.potential)))
    }

    fn left_multiply(&self, m: &CMat4) -> Self {
        Self {
            dt: cmat_mul(m, &self.dt),
            dx: [
                cmat_mul(m, &self.dx[0]),
                cmat_mul(m, &self.dx[1]),
                cmat_mul(m, &self.dx[2]),
            ],
            mass: cmat_mul(m, &self.mass),
            potential: cmat_mul(m, &self.potential),
        }
    }
}

/// Builds the covariant Dirac equation in the constant gauge field
/// H_{mu nu} = (Phi0/c^2) diag(1,1,1,1) with A^mu = (phi_e/c, 0, 0, 0) by
/// full index contraction, and compares it with the Hamiltonian-form
/// coefficients (C1, C2).  Returns the largest entrywise mismatch.
pub fn dirac_reduction_check(env: &GravityEnvironment) -> f64 {
    let g = GammaMatrices::dirac();
    let pc = env.constants();
    let h = env.phi0() / (pc.c * pc.c);

    // ---- side A: the covariant equation, collected term by term ----
    // i hbar c gamma^rho d_rho psi - m c^2 psi
    //   = -e c gamma^rho psi A_rho
    //   + P^{mu nu, rho sigma} (i hbar c gamma_sigma d_rho
    //                           - (m c^2 / 2) eta_{rho sigma}
    //                           + e c gamma_sigma A_rho) H_{mu nu}
    // (the d_rho H term vanishes for constant H)
    let mut side_a = OperatorCoefficients::zero();

    // left-hand side
    side_a.dt = g.gamma[0]; // i hbar c gamma^0 (1/c) d_t
    for k in 0..3 {
        side_a.dx[k] = g.gamma[k + 1];
    }
    side_a.mass = cmat_scale(-1.0, &cmat_identity());

    // minus the right-hand side; covariant A_rho = delta_rho0 phi_e / c
    side_a.potential = cmat_add(&side_a.potential, &g.gamma[0]); // -(-e c gamma^0 phi_e/c)

    for mu in 0..4 {
        for nu in 0..4 {
            // H_{mu nu} = h on the diagonal
            if mu != nu {
                continue;
            }
            for rho in 0..4 {
                for sigma in 0..4 {
                    let w = p4(mu, nu, rho, sigma) * h;
                    if w == 0.0 {
                        continue;
                    }
                    let gs = g.gamma_lower(sigma);
                    // kinetic piece
                    if rho == 0 {
                        side_a.dt = cmat_sub(&side_a.dt, &cmat_scale(w, &gs));
                    } else {
                        side_a.dx[rho - 1] = cmat_sub(&side_a.dx[rho - 1], &cmat_scale(w, &gs));
                    }
                    // mass piece: -(m c^2 / 2) eta_{rho sigma}
                    let em = eta(rho, sigma);
                    if em != 0.0 {
                        side_a.mass = cmat_sub(
                            &side_a.mass,
                            &cmat_scale(-0.5 * em * w, &cmat_identity()),
                        );
                    }
                    // potential piece: +e c gamma_sigma A_rho
                    if rho == 0 {
                        side_a.potential = cmat_sub(&side_a.potential, &cmat_scale(w, &gs));
                    }
                }
            }
        }
    }

    // Hamiltonian form is reached by multiplying by -gamma^0 on the left.
    let minus_beta = cmat_scale(-1.0, &g.beta());
    let side_a = side_a.left_multiply(&minus_beta);

    // ---- side B: the Hamiltonian-form equation as implemented ----
    // (1 - h) m c^2 beta + c alpha.p - (1 - 2h) e phi_e - i hbar (1 - 2h) d_t = 0
    let mut side_b = OperatorCoefficients::zero();
    side_b.dt = cmat_scale(-(1.0 - 2.0 * h), &cmat_identity());
    for k in 0..3 {
        side_b.dx[k] = cmat_scale(-1.0, &g.alpha(k + 1)); // c alpha.(-i hbar grad)
    }
    side_b.mass = cmat_scale(1.0 - h, &g.beta());
    side_b.potential = cmat_scale(-(1.0 - 2.0 * h), &cmat_identity());

    side_a.max_abs_diff(&side_b)
}

/// How the four-potential test derivatives are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Closed-form derivatives of the Gaussian test potential.
    Analytic,
    /// Central finite differences (truncation-limited).
    FiniteDifference,
}

/// Result of [`maxwell_reduction_check`].
#[derive(Debug, Clone, Copy)]
pub struct MaxwellReduction {
    /// Relative residual of the sigma = 0 component against the scalar
    /// Poisson form, normalized to the Laplacian scale of the test field.
    pub time_component_rel: f64,
    /// Largest spatial-component magnitude on the same scale (identically
    /// zero for the diagonal gauge field).
    pub spatial_max_rel: f64,
}

const GAUSS_CENTER: [f64; 3] = [0.1, -0.2, 0.3];
const GAUSS_WIDTH: f64 = 1.0;

fn gaussian(r: [f64; 3]) -> f64 {
    let d2 = (0..3).map(|k| (r[k] - GAUSS_CENTER[k]).powi(2)).sum::<f64>();
    (-d2 / (2.0 * GAUSS_WIDTH * GAUSS_WIDTH)).exp()
}

fn gaussian_hessian_analytic(r: [f64; 3]) -> [[f64; 3]; 3] {
    let s2 = GAUSS_WIDTH * GAUSS_WIDTH;
    let v = gaussian(r);
    let d: Vec<f64> = (0..3).map(|k| r[k] - GAUSS_CENTER[k]).collect();
    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            hess[i][j] = v * (d[i] * d[j] / (s2 * s2) - delta / s2);
        }
    }
    hess
}

fn gaussian_hessian_fd(r: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    let mut hess = [[0.0; 3]; 3];
    let f0 = gaussian(r);
    for i in 0..3 {
        for j in i..3 {
            let v = if i == j {
                let mut rp = r;
                let mut rm = r;
                rp[i] += h;
                rm[i] -= h;
                (gaussian(rp) - 2.0 * f0 + gaussian(rm)) / (h * h)
            } else {
                let mut rpp = r;
                let mut rpm = r;
                let mut rmp = r;
                let mut rmm = r;
                rpp[i] += h;
                rpp[j] += h;
                rpm[i] += h;
                rpm[j] -= h;
                rmp[i] -= h;
                rmp[j] += h;
                rmm[i] -= h;
                rmm[j] -= h;
                (gaussian(rpp) - gaussian(rpm) - gaussian(rmp) + gaussian(rmm)) / (4.0 * h * h)
            };
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

/// Applies the four-potential equation of the gauge theory, with the
/// potential frozen at Phi0, to a Gaussian test field and compares the
/// sigma = 0 component with the reduced scalar equation
/// (1 - 2 Phi0/c^2) lap(phi_e).  Spatial components must vanish identically.
pub fn maxwell_reduction_check(env: &GravityEnvironment, mode: DerivativeMode) -> MaxwellReduction {
    let pc = env.constants();
    let h = env.phi0() / (pc.c * pc.c);

    let sample_points: [[f64; 3]; 8] = [
        [0.3, 0.2, -0.4],
        [-0.7, 0.5, 0.1],
        [0.9, -0.9, 0.6],
        [0.05, 0.0, -0.1],
        [-1.2, 0.4, 0.8],
        [0.6, 1.1, -0.3],
        [-0.2, -0.6, -0.9],
        [1.4, 0.3, 0.2],
    ];

    let mut worst_time = 0.0_f64;
    let mut worst_spatial = 0.0_f64;
    let mut lap_scale = 0.0_f64;
    let mut diffs = Vec::new();

    for &r in &sample_points {
        let hess = match mode {
            DerivativeMode::Analytic => gaussian_hessian_analytic(r),
            DerivativeMode::FiniteDifference => gaussian_hessian_fd(r, 1e-4),
        };
        let lap: f64 = hess[0][0] + hess[1][1] + hess[2][2];
        lap_scale = lap_scale.max(lap.abs());

        for sigma in 0..4 {
            // sum over spacetime (rho, eta); static field kills time derivatives
            let mut contraction = 0.0;
            for rho in 1..4usize {
                for et in 1..4usize {
                    let coeff = h * p6_diag_contraction(rho, sigma, et, 0);
                    contraction += coeff * hess[rho - 1][et - 1];
                }
            }
            if sigma == 0 {
                // -c * (d^2 A^0 + contraction / c) vs (1 - 2h) lap(phi)
                let candidate = lap - contraction;
                let target = (1.0 - 2.0 * h) * lap;
                diffs.push((candidate - target).abs());
            } else {
                // d^2 A^k = 0; the whole component is the contraction
                worst_spatial = worst_spatial.max(contraction.abs());
            }
        }
    }

    for d in diffs {
        worst_time = worst_time.max(d);
    }
    let scale = lap_scale.max(f64::MIN_POSITIVE);
    MaxwellReduction {
        time_component_rel: worst_time / scale,
        spatial_max_rel: worst_spatial / scale,
    }
}
