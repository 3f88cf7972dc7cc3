//! First-order degenerate perturbation theory for the gradient-induced
//! correction to the nuclear potential.
//!
//! With the quantization axis aligned with the gradient vector a, the
//! perturbing potential is K (cos theta' + 1) with
//! K = Z e |a| / (8 pi eps0 (1 - 2 Phi0/c^2)): a uniform shift plus an
//! axially symmetric cos theta' term that conserves m and couples states of
//! opposite parity inside each degenerate energy group.

use crate::atom::{manifold, QuantumNumbers, RadialSolution};
use crate::error::{Error, Result};
use crate::gravity::GravityEnvironment;
use crate::oracle::{integrate, QuadratureSpec};
use crate::specfun::clebsch_gordan;
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Amplitude K = Z e |a| / (8 pi eps0 (1 - 2 Phi0/c^2)) of the perturbing
/// potential (V).
pub fn gradient_amplitude(env: &GravityEnvironment, z: u32) -> f64 {
    let pc = env.constants();
    let a = env.gradient_vector();
    let a_norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    z as f64 * pc.e * a_norm * env.c2() / (8.0 * PI * pc.eps0)
}

/// The gradient correction to the nuclear electric potential at `r_rel`
/// relative to the nucleus (V):
/// delta phi_e = K (cos theta' + 1), theta' measured from the direction
/// of a.  Constant in |r_rel|; the error at r_rel = 0 is reserved for the
/// undefined angle.
pub fn delta_potential(env: &GravityEnvironment, z: u32, r_rel: [f64; 3]) -> Result<f64> {
    if z < 1 {
        return Err(Error::Domain("atomic number must be >= 1".into()));
    }
    let r = (r_rel[0] * r_rel[0] + r_rel[1] * r_rel[1] + r_rel[2] * r_rel[2]).sqrt();
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Domain(
            "direction undefined at r_rel = 0 (delta potential is bounded but angle-dependent)"
                .into(),
        ));
    }
    let a = env.gradient_vector();
    let a_norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    if a_norm == 0.0 {
        return Ok(0.0);
    }
    let cos_theta = (a[0] * r_rel[0] + a[1] * r_rel[1] + a[2] * r_rel[2]) / (a_norm * r);
    Ok(gradient_amplitude(env, z) * (cos_theta + 1.0))
}

/// <Y_{l,m} | cos theta | Y_{l+1,m}> = sqrt(((l+1)^2 - m^2) /
/// ((2l+1)(2l+3))).
fn y_costheta_raising(l: u32, ml: i32) -> f64 {
    let lf = l as f64;
    let mf = ml as f64;
    (((lf + 1.0) * (lf + 1.0) - mf * mf) / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0))).sqrt()
}

fn y_costheta(l1: u32, l2: u32, ml: i32) -> f64 {
    if ml.unsigned_abs() > l1.min(l2) {
        return 0.0;
    }
    if l1 == l2 + 1 {
        y_costheta_raising(l2, ml)
    } else if l2 == l1 + 1 {
        y_costheta_raising(l1, ml)
    } else {
        0.0
    }
}

/// <Omega_{j1,l1,m} | cos theta | Omega_{j2,l2,m}> by Clebsch-Gordan
/// algebra (real; vanishes unless l1 and l2 differ by one).
pub fn spinor_costheta(
    j1_twice: i32,
    l1: u32,
    j2_twice: i32,
    l2: u32,
    m_twice: i32,
) -> Result<f64> {
    let mut total = 0.0;
    for q_twice in [-1, 1] {
        let ml = (m_twice - q_twice) / 2;
        if ml.unsigned_abs() > l1 || ml.unsigned_abs() > l2 {
            continue;
        }
        let c1 = clebsch_gordan(l1, ml, q_twice, j1_twice, m_twice)?;
        let c2 = clebsch_gordan(l2, ml, q_twice, j2_twice, m_twice)?;
        total += c1 * c2 * y_costheta(l1, l2, ml);
    }
    Ok(total)
}

/// Radial-angular part of <i | cos theta' | j>: zero by an exact selection
/// rule for m_i != m_j or when no opposite-parity coupling exists; otherwise
/// the radial quadrature weighted by the spinor angular factors.
pub fn costheta_element(
    qn_i: &QuantumNumbers,
    qn_j: &QuantumNumbers,
    z: u32,
    env: &GravityEnvironment,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if qn_i.m_twice() != qn_j.m_twice() {
        return Ok(0.0);
    }
    let m = qn_i.m_twice();
    let ang_up = spinor_costheta(qn_i.j_twice(), qn_i.l_upper(), qn_j.j_twice(), qn_j.l_upper(), m)?;
    let ang_low =
        spinor_costheta(qn_i.j_twice(), qn_i.l_lower(), qn_j.j_twice(), qn_j.l_lower(), m)?;
    if ang_up == 0.0 && ang_low == 0.0 {
        return Ok(0.0);
    }
    let sol_i = RadialSolution::new(qn_i, z, env)?;
    let sol_j = RadialSolution::new(qn_j, z, env)?;
    let lambda = sol_i.lambda().min(sol_j.lambda());
    let upper = 40.0 / lambda;
    let r_ff = integrate(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            let (fi, _) = sol_i.eval(r).unwrap_or((0.0, 0.0));
            let (fj, _) = sol_j.eval(r).unwrap_or((0.0, 0.0));
            fi * fj * r * r
        },
        0.0,
        upper,
        quad,
    )?;
    let r_gg = integrate(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            let (_, gi) = sol_i.eval(r).unwrap_or((0.0, 0.0));
            let (_, gj) = sol_j.eval(r).unwrap_or((0.0, 0.0));
            gi * gj * r * r
        },
        0.0,
        upper,
        quad,
    )?;
    Ok(ang_up * r_ff + ang_low * r_gg)
}

/// Matrix element <psi_i | (-e) delta phi_e | psi_j> (J).
pub fn matrix_element(
    qn_i: &QuantumNumbers,
    qn_j: &QuantumNumbers,
    z: u32,
    env: &GravityEnvironment,
) -> Result<Complex64> {
    matrix_element_with(qn_i, qn_j, z, env, &QuadratureSpec::default())
}

/// [`matrix_element`] with an explicit quadrature specification.
pub fn matrix_element_with(
    qn_i: &QuantumNumbers,
    qn_j: &QuantumNumbers,
    z: u32,
    env: &GravityEnvironment,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let pc = env.constants();
    let k = gradient_amplitude(env, z);
    if k == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let overlap = if qn_i == qn_j { 1.0 } else { 0.0 };
    let cos_part = costheta_element(qn_i, qn_j, z, env, quad)?;
    Ok(Complex64::new(-pc.e * k * (overlap + cos_part), 0.0))
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order with matching eigenvectors
/// (each inner Vec is one eigenvector).
#[allow(clippy::needless_range_loop)] // simultaneous two-column updates
pub fn hermitian_eigen(matrix: &[Vec<Complex64>]) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    let scale: f64 = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p][q].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p][q];
                if g.norm() <= 1e-300 {
                    continue;
                }
                let phase = g / g.norm();
                let alpha = a[p][p].re;
                let beta = a[q][q].re;
                let theta = 0.5 * (2.0 * g.norm()).atan2(alpha - beta);
                let (c, s) = (theta.cos(), theta.sin());
                let s_phase = s * phase;
                let s_phase_conj = s * phase.conj();

                // A <- U^dagger A U with U embedded at (p, q)
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp + s_phase_conj * akq;
                    a[k][q] = -s_phase * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk + s_phase * aqk;
                    a[q][k] = -s_phase_conj * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp + s_phase_conj * vkq;
                    v[k][q] = -s_phase * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i].re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

/// One diagonalized degenerate block at fixed m.
#[derive(Debug, Clone)]
pub struct PerturbationBlock {
    /// Unperturbed energy of the group (J, includes the rest energy).
    pub group_energy: f64,
    /// Conserved projection, doubled.
    pub m_twice: i32,
    pub basis: Vec<QuantumNumbers>,
    /// Full perturbation matrix <i|dH|j> (J), uniform part included.
    pub matrix: Vec<Vec<Complex64>>,
    /// Common shift -e K shared by every state (J).
    pub uniform_shift: f64,
    /// First-order energy shifts (J), ascending.
    pub eigenvalues: Vec<f64>,
    /// Mixing coefficients; eigenvectors[k] matches eigenvalues[k].
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// False when the predicted splitting exceeds the unperturbed gap
    /// between neighboring groups, where first order is unreliable.
    pub first_order_ok: bool,
}

/// First-order splitting of the whole n-manifold: one block per
/// (energy group, m).
pub fn split_manifold(n: u32, z: u32, env: &GravityEnvironment) -> Result<Vec<PerturbationBlock>> {
    split_manifold_with(n, z, env, &QuadratureSpec::default())
}

/// [`split_manifold`] with an explicit quadrature specification.
pub fn split_manifold_with(
    n: u32,
    z: u32,
    env: &GravityEnvironment,
    quad: &QuadratureSpec,
) -> Result<Vec<PerturbationBlock>> {
    let pc = env.constants();
    let groups = manifold(n, z, env)?;
    let min_gap = groups
        .windows(2)
        .map(|w| (w[1].energy - w[0].energy).abs())
        .fold(f64::INFINITY, f64::min);
    let uniform_shift = -pc.e * gradient_amplitude(env, z);

    let mut blocks = Vec::new();
    for group in &groups {
        let m_values: BTreeSet<i32> = group.states.iter().map(|q| q.m_twice()).collect();
        for &m in &m_values {
            let mut basis: Vec<QuantumNumbers> = group
                .states
                .iter()
                .filter(|q| q.m_twice() == m)
                .copied()
                .collect();
            basis.sort_by_key(|q| q.kappa_r());
            let dim = basis.len();
            let mut matrix = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                for j in i..dim {
                    let v = matrix_element_with(&basis[i], &basis[j], z, env, quad)?;
                    matrix[i][j] = v;
                    matrix[j][i] = v.conj();
                }
            }
            let (eigenvalues, eigenvectors) = hermitian_eigen(&matrix);
            let max_dev = eigenvalues
                .iter()
                .map(|e| (e - uniform_shift).abs())
                .fold(0.0_f64, f64::max);
            blocks.push(PerturbationBlock {
                group_energy: group.energy,
                m_twice: m,
                basis,
                matrix,
                uniform_shift,
                eigenvalues,
                eigenvectors,
                first_order_ok: 2.0 * max_dev <= min_gap,
            });
        }
    }
    Ok(blocks)
}
