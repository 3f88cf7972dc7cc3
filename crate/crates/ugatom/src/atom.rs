//! Analytic Dirac eigenstates of hydrogen-like atoms in the gravitational
//! environment: quantum numbers, energies, radial functions, and full
//! four-component spinor wavefunctions.
//!
//! The solution in the gravitational potential is the conventional
//! Dirac-Coulomb one with m_e replaced by (C1/C2^2) m_e and c by C2 c;
//! energies pick up the overall factor C1 only.

use crate::error::{Error, Result};
use crate::gravity::GravityEnvironment;
use crate::oracle::{integrate, QuadratureSpec};
use crate::physcon::PhysicalConstants;
use crate::specfun::{factorial, gamma_fn, kummer_terminating, spinor_harmonic};
use num_complex::Complex64;

/// Dirac quantum numbers (n_r, kappa_r, m), with m stored doubled.
///
/// kappa_r = +-(j + 1/2) is nonzero; n_r >= 0 for kappa_r < 0 and
/// n_r >= 1 for kappa_r > 0.  The principal quantum number is
/// n = n_r + j + 1/2 = n_r + |kappa_r|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    n_r: u32,
    kappa_r: i32,
    m_twice: i32,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, kappa_r: i32, m_twice: i32) -> Result<Self> {
        if kappa_r == 0 {
            return Err(Error::InvalidQuantumNumbers("kappa_r must be nonzero".into()));
        }
        if kappa_r > 0 && n_r == 0 {
            return Err(Error::InvalidQuantumNumbers(
                "n_r >= 1 is required when kappa_r > 0".into(),
            ));
        }
        let j_twice = 2 * kappa_r.unsigned_abs() as i32 - 1;
        if m_twice.abs() > j_twice || m_twice.rem_euclid(2) == 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "2m = {m_twice} invalid for 2j = {j_twice}"
            )));
        }
        Ok(Self {
            n_r,
            kappa_r,
            m_twice,
        })
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn kappa_r(&self) -> i32 {
        self.kappa_r
    }

    /// Doubled total angular momentum, 2j = 2|kappa_r| - 1.
    pub fn j_twice(&self) -> i32 {
        2 * self.kappa_r.unsigned_abs() as i32 - 1
    }

    /// Doubled projection 2m.
    pub fn m_twice(&self) -> i32 {
        self.m_twice
    }

    /// Principal quantum number n = n_r + |kappa_r|.
    pub fn n(&self) -> u32 {
        self.n_r + self.kappa_r.unsigned_abs()
    }

    /// Orbital quantum number of the upper two-spinor:
    /// l = kappa_r for kappa_r > 0, -kappa_r - 1 for kappa_r < 0.
    pub fn l_upper(&self) -> u32 {
        if self.kappa_r > 0 {
            self.kappa_r as u32
        } else {
            (-self.kappa_r - 1) as u32
        }
    }

    /// Orbital quantum number of the lower two-spinor (that of -kappa_r).
    pub fn l_lower(&self) -> u32 {
        if self.kappa_r > 0 {
            (self.kappa_r - 1) as u32
        } else {
            (-self.kappa_r) as u32
        }
    }

    /// Spectroscopic label such as `2p1/2`.
    pub fn label(&self) -> String {
        const LETTERS: [char; 8] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k'];
        let l = self.l_upper() as usize;
        let letter = LETTERS.get(l).copied().unwrap_or('?');
        format!("{}{}{}/2", self.n(), letter, self.j_twice())
    }
}

fn gamma_aux_checked(kappa_r: i32, z: u32, pc: &PhysicalConstants) -> Result<f64> {
    let z_alpha = z as f64 * pc.alpha_e;
    let kappa_abs = kappa_r.unsigned_abs();
    if z_alpha >= kappa_abs as f64 {
        return Err(Error::SupercriticalCharge {
            z_alpha,
            kappa_abs,
        });
    }
    Ok(((kappa_abs as f64).powi(2) - z_alpha * z_alpha).sqrt())
}

/// Flat-space Dirac energy (J), including the rest energy:
/// E0 = m_e c^2 (1 + (Z alpha)^2 / (n_r + gamma)^2)^(-1/2).
pub fn energy_flat(qn: &QuantumNumbers, z: u32, pc: &PhysicalConstants) -> Result<f64> {
    let gamma = gamma_aux_checked(qn.kappa_r, z, pc)?;
    let z_alpha = z as f64 * pc.alpha_e;
    let denom = qn.n_r as f64 + gamma;
    Ok(pc.electron_rest_energy() / (1.0 + (z_alpha / denom).powi(2)).sqrt())
}

/// Energy in the gravitational environment: E = C1 E0 (J).
pub fn energy(qn: &QuantumNumbers, z: u32, env: &GravityEnvironment) -> Result<f64> {
    Ok(env.c1() * energy_flat(qn, z, &env.constants())?)
}

/// Closed-form radial solution for one state: auxiliary quantities and the
/// normalized radial amplitudes f, g (units m^(-3/2)).
#[derive(Debug, Clone, Copy)]
pub struct RadialSolution {
    qn: QuantumNumbers,
    z: u32,
    lambda: f64,
    gamma_aux: f64,
    energy: f64,
    energy_flat: f64,
    c1: f64,
    c2: f64,
    kummer_b: f64,
    kummer_t: f64,
    norm_f: f64,
    norm_g: f64,
}

impl RadialSolution {
    pub fn new(qn: &QuantumNumbers, z: u32, env: &GravityEnvironment) -> Result<Self> {
        if z < 1 {
            return Err(Error::Domain("bound states require Z >= 1".into()));
        }
        let pc = env.constants();
        let gamma = gamma_aux_checked(qn.kappa_r, z, &pc)?;
        let e0 = energy_flat(qn, z, &pc)?;
        let (c1, c2) = (env.c1(), env.c2());
        let e = c1 * e0;
        let mec2 = pc.electron_rest_energy();
        let hbar_c = pc.hbar * pc.c;
        let lambda = ((c1 * mec2).powi(2) - e * e).sqrt() / (c2 * hbar_c);
        let z_alpha = z as f64 * pc.alpha_e;
        let t = c1 * z_alpha * mec2 / (c2 * lambda * hbar_c);
        let kappa = qn.kappa_r as f64;
        let b = 2.0 * gamma + 1.0;
        let common = gamma_fn(2.0 * gamma + qn.n_r as f64 + 1.0)?
            / (4.0 * c1 * mec2 * t * (t - kappa) * factorial(qn.n_r));
        let amp = (2.0 * lambda).powf(1.5) / gamma_fn(b)?;
        let norm_f = amp * ((c1 * mec2 + e) * common).sqrt();
        let norm_g = -amp * ((c1 * mec2 - e) * common).sqrt();
        Ok(Self {
            qn: *qn,
            z,
            lambda,
            gamma_aux: gamma,
            energy: e,
            energy_flat: e0,
            c1,
            c2,
            kummer_b: b,
            kummer_t: t,
            norm_f,
            norm_g,
        })
    }

    pub fn qn(&self) -> QuantumNumbers {
        self.qn
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    /// Inverse decay length lambda (1/m).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// gamma = sqrt(kappa_r^2 - (Z alpha)^2).
    pub fn gamma_aux(&self) -> f64 {
        self.gamma_aux
    }

    /// Total energy C1 E0 (J).
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Flat-space energy E0 (J).
    pub fn energy_flat(&self) -> f64 {
        self.energy_flat
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Radial amplitudes (f, g) at radius r > 0 (m^(-3/2)).
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::Domain(format!("radial_fg requires r > 0, got {r}")));
        }
        let s = 2.0 * self.lambda * r;
        let n_r = self.qn.n_r as i32;
        let m1 = kummer_terminating(-n_r, self.kummer_b, s)?;
        let m2 = if n_r >= 1 {
            kummer_terminating(1 - n_r, self.kummer_b, s)?
        } else {
            0.0
        };
        let tk = self.kummer_t - self.qn.kappa_r as f64;
        let shape = s.powf(self.gamma_aux - 1.0) * (-0.5 * s).exp();
        let f = self.norm_f * shape * (tk * m1 - n_r as f64 * m2);
        let g = self.norm_g * shape * (tk * m1 + n_r as f64 * m2);
        Ok((f, g))
    }
}

/// Convenience wrapper for [`RadialSolution::eval`].
pub fn radial_fg(qn: &QuantumNumbers, z: u32, env: &GravityEnvironment, r: f64) -> Result<(f64, f64)> {
    RadialSolution::new(qn, z, env)?.eval(r)
}

/// Overlap integral of two radial solutions,
/// int (f_a f_b + g_a g_b) r^2 dr, by adaptive quadrature.
pub fn radial_overlap(
    a: &RadialSolution,
    b: &RadialSolution,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let lambda = a.lambda.min(b.lambda);
    let upper = 40.0 / lambda;
    integrate(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            let (fa, ga) = a.eval(r).unwrap_or((0.0, 0.0));
            let (fb, gb) = b.eval(r).unwrap_or((0.0, 0.0));
            (fa * fb + ga * gb) * r * r
        },
        0.0,
        upper,
        quad,
    )
}

/// Orthonormal frame whose z-axis is aligned with the gradient vector of
/// the environment (global axes when the gradient vanishes).
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    e1: [f64; 3],
    e2: [f64; 3],
    e3: [f64; 3],
}

impl Frame {
    pub fn for_env(env: &GravityEnvironment) -> Self {
        let a = env.gradient_vector();
        let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        if norm == 0.0 {
            return Self {
                e1: [1.0, 0.0, 0.0],
                e2: [0.0, 1.0, 0.0],
                e3: [0.0, 0.0, 1.0],
            };
        }
        let e3 = [a[0] / norm, a[1] / norm, a[2] / norm];
        // helper axis least aligned with e3
        let helper = if e3[0].abs() <= e3[1].abs() && e3[0].abs() <= e3[2].abs() {
            [1.0, 0.0, 0.0]
        } else if e3[1].abs() <= e3[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let d = helper[0] * e3[0] + helper[1] * e3[1] + helper[2] * e3[2];
        let mut e1 = [helper[0] - d * e3[0], helper[1] - d * e3[1], helper[2] - d * e3[2]];
        let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let e2 = [
            e3[1] * e1[2] - e3[2] * e1[1],
            e3[2] * e1[0] - e3[0] * e1[2],
            e3[0] * e1[1] - e3[1] * e1[0],
        ];
        Self { e1, e2, e3 }
    }

    /// Spherical angles of `v` in this frame.
    pub fn angles(&self, v: [f64; 3]) -> (f64, f64) {
        let x = v[0] * self.e1[0] + v[1] * self.e1[1] + v[2] * self.e1[2];
        let y = v[0] * self.e2[0] + v[1] * self.e2[1] + v[2] * self.e2[2];
        let z = v[0] * self.e3[0] + v[1] * self.e3[1] + v[2] * self.e3[2];
        let r = (x * x + y * y + z * z).sqrt();
        let theta = if r == 0.0 { 0.0 } else { (z / r).clamp(-1.0, 1.0).acos() };
        (theta, y.atan2(x))
    }
}

/// One Dirac eigenstate, evaluable as a four-component spinor field.
#[derive(Debug, Clone, Copy)]
pub struct Eigenstate {
    radial: RadialSolution,
    frame: Frame,
    hbar: f64,
}

impl Eigenstate {
    pub fn new(qn: &QuantumNumbers, z: u32, env: &GravityEnvironment) -> Result<Self> {
        Ok(Self {
            radial: RadialSolution::new(qn, z, env)?,
            frame: Frame::for_env(env),
            hbar: env.constants().hbar,
        })
    }

    pub fn radial(&self) -> &RadialSolution {
        &self.radial
    }

    /// psi(t, r_rel): the four components at time `t` (s) and position
    /// `r_rel` (m) relative to the nucleus.
    pub fn eval(&self, t: f64, r_rel: [f64; 3]) -> Result<[Complex64; 4]> {
        let r = (r_rel[0] * r_rel[0] + r_rel[1] * r_rel[1] + r_rel[2] * r_rel[2]).sqrt();
        let (f, g) = self.radial.eval(r)?;
        let (theta, phi) = self.frame.angles(r_rel);
        let qn = self.radial.qn();
        let up = spinor_harmonic(qn.j_twice(), qn.l_upper(), qn.m_twice(), theta, phi)?;
        let low = spinor_harmonic(qn.j_twice(), qn.l_lower(), qn.m_twice(), theta, phi)?;
        let phase = Complex64::from_polar(1.0, -self.radial.energy() * t / self.hbar);
        let i = Complex64::new(0.0, 1.0);
        Ok([
            phase * f * up.upper,
            phase * f * up.lower,
            phase * i * g * low.upper,
            phase * i * g * low.lower,
        ])
    }
}

/// Builds the eigenstate and evaluates it once.
pub fn eigenstate_eval(
    qn: &QuantumNumbers,
    z: u32,
    env: &GravityEnvironment,
    t: f64,
    r_rel: [f64; 3],
) -> Result<[Complex64; 4]> {
    Eigenstate::new(qn, z, env)?.eval(t, r_rel)
}

/// A set of states sharing one energy.
#[derive(Debug, Clone)]
pub struct EnergyGroup {
    pub energy_flat: f64,
    pub energy: f64,
    pub states: Vec<QuantumNumbers>,
}

/// All states with principal quantum number `n`, grouped by energy.
/// States are grouped when their energies agree within 1e-12 m_e c^2.
pub fn manifold(n: u32, z: u32, env: &GravityEnvironment) -> Result<Vec<EnergyGroup>> {
    if n < 1 {
        return Err(Error::Domain("principal quantum number must be >= 1".into()));
    }
    let pc = env.constants();
    let tol = 1e-12 * pc.electron_rest_energy();
    let mut groups: Vec<EnergyGroup> = Vec::new();
    for kappa_abs in 1..=n {
        let n_r = n - kappa_abs;
        let mut kappas = vec![-(kappa_abs as i32)];
        if n_r >= 1 {
            kappas.push(kappa_abs as i32);
        }
        for kappa_r in kappas {
            let j_twice = 2 * kappa_abs as i32 - 1;
            for m_twice in (-j_twice..=j_twice).step_by(2) {
                let qn = QuantumNumbers::new(n_r, kappa_r, m_twice)?;
                let e0 = energy_flat(&qn, z, &pc)?;
                let e = env.c1() * e0;
                match groups.iter_mut().find(|g| (g.energy_flat - e0).abs() < tol) {
                    Some(g) => g.states.push(qn),
                    None => groups.push(EnergyGroup {
                        energy_flat: e0,
                        energy: e,
                        states: vec![qn],
                    }),
                }
            }
        }
    }
    groups.sort_by(|a, b| a.energy_flat.total_cmp(&b.energy_flat));
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sphere_integrate_default;
    use crate::physcon::codata_constants;

    fn flat_env() -> GravityEnvironment {
        GravityEnvironment::from_compactness(0.0, codata_constants()).unwrap()
    }

    #[test]
    fn quantum_number_validation() {
        let ground = QuantumNumbers::new(0, -1, 1).unwrap();
        assert_eq!(ground.n(), 1);
        assert_eq!(ground.j_twice(), 1);
        assert_eq!(ground.l_upper(), 0);
        assert_eq!(ground.l_lower(), 1);
        assert_eq!(ground.label(), "1s1/2");

        assert!(QuantumNumbers::new(0, 1, 1).is_err());
        assert!(QuantumNumbers::new(1, 0, 1).is_err());
        assert!(QuantumNumbers::new(0, -1, 3).is_err());
        assert!(QuantumNumbers::new(0, -1, 0).is_err());

        let d = QuantumNumbers::new(1, -2, -3).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.j_twice(), 3);
        assert_eq!(d.label(), "3p3/2");

        let p = QuantumNumbers::new(1, 1, -1).unwrap();
        assert_eq!(p.l_upper(), 1);
        assert_eq!(p.l_lower(), 0);
        assert_eq!(p.label(), "2p1/2");
    }

    #[test]
    fn energy_zero_coupling() {
        let pc = codata_constants();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        assert_eq!(energy_flat(&qn, 0, &pc).unwrap(), pc.electron_rest_energy());
    }

    #[test]
    fn hydrogen_ground_state_binding() {
        let pc = codata_constants();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let binding_ev = pc.joule_to_ev(energy_flat(&qn, 1, &pc).unwrap() - pc.electron_rest_energy());
        // direct evaluation with CODATA constants: m c^2 (sqrt(1-alpha^2) - 1)
        let direct = pc.joule_to_ev(
            pc.electron_rest_energy() * ((1.0 - pc.alpha_e * pc.alpha_e).sqrt() - 1.0),
        );
        assert!((binding_ev - direct).abs() < 1e-10);
        assert!(
            (binding_ev - (-13.605_874_258_104_535)).abs() < 1e-9,
            "binding = {binding_ev}"
        );
    }

    #[test]
    fn kappa_sign_degeneracy() {
        let pc = codata_constants();
        let a = QuantumNumbers::new(1, -1, 1).unwrap();
        let b = QuantumNumbers::new(1, 1, 1).unwrap();
        assert_eq!(
            energy_flat(&a, 1, &pc).unwrap(),
            energy_flat(&b, 1, &pc).unwrap()
        );
    }

    #[test]
    fn supercritical_rejected() {
        let pc = codata_constants();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        assert!(matches!(
            energy_flat(&qn, 200, &pc),
            Err(Error::SupercriticalCharge { .. })
        ));
    }

    #[test]
    fn gravitational_scaling_is_exact_product() {
        let pc = codata_constants();
        let env = GravityEnvironment::from_compactness(0.01, pc).unwrap();
        for (n_r, kappa_r) in [(0, -1), (1, -1), (1, 1), (0, -2), (2, 1)] {
            let qn = QuantumNumbers::new(n_r, kappa_r, 1).unwrap();
            let e0 = energy_flat(&qn, 1, &pc).unwrap();
            let e = energy(&qn, 1, &env).unwrap();
            assert_eq!(e, env.c1() * e0, "bitwise product for {}", qn.label());
        }
    }

    #[test]
    fn nonrelativistic_limit() {
        let pc = codata_constants();
        let mec2 = pc.electron_rest_energy();
        for (n_r, kappa_r) in [(0, -1), (1, -1), (0, -2), (2, -1), (1, 2), (0, -3)] {
            let qn = QuantumNumbers::new(n_r, kappa_r, 1).unwrap();
            let n = qn.n() as f64;
            let binding = energy_flat(&qn, 1, &pc).unwrap() - mec2;
            let bohr = -pc.alpha_e * pc.alpha_e * mec2 / (2.0 * n * n);
            assert!(
                (binding / bohr - 1.0).abs() <= 2e-4,
                "{}: rel deviation {:e}",
                qn.label(),
                (binding / bohr - 1.0).abs()
            );
        }
    }

    #[test]
    fn radial_normalization() {
        let quad = QuadratureSpec::default();
        let env = flat_env();
        for (n_r, kappa_r, z) in [(0, -1, 1), (1, -1, 1), (1, 1, 1), (0, -2, 80), (2, 1, 80)] {
            let qn = QuantumNumbers::new(n_r, kappa_r, 1).unwrap();
            let sol = RadialSolution::new(&qn, z, &env).unwrap();
            let norm = radial_overlap(&sol, &sol, &quad).unwrap();
            assert!(
                (norm - 1.0).abs() < 1e-8,
                "Z={z} {}: norm = {norm}",
                qn.label()
            );
        }
    }

    #[test]
    fn ground_state_component_ratio() {
        // n_r = 0 collapses both Kummer sums; g/f = -sqrt((1-gamma)/(1+gamma))
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let sol = RadialSolution::new(&qn, 1, &env).unwrap();
        let want = -((1.0 - sol.gamma_aux()) / (1.0 + sol.gamma_aux())).sqrt();
        for r in [1e-11, 5e-11, 2e-10] {
            let (f, g) = sol.eval(r).unwrap();
            assert!(
                (g / f - want).abs() < 1e-12 * want.abs(),
                "g/f = {} at r = {r}",
                g / f
            );
        }
    }

    #[test]
    fn ground_state_nonrelativistic_shape() {
        // f approximates 2 a0^(-3/2) exp(-r/a0) to O(alpha^2) at Z = 1
        let pc = codata_constants();
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let sol = RadialSolution::new(&qn, 1, &env).unwrap();
        let a0 = pc.bohr_radius();
        for r in [0.5, 1.0, 2.0, 5.0] {
            let (f, _) = sol.eval(r * a0).unwrap();
            let schroedinger = 2.0 * a0.powf(-1.5) * (-r).exp();
            assert!(
                (f / schroedinger - 1.0).abs() < 1e-3,
                "f/R_1s = {} at r = {r} a0",
                f / schroedinger
            );
        }
    }

    #[test]
    fn radial_rejects_bad_input() {
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let sol = RadialSolution::new(&qn, 1, &env).unwrap();
        assert!(sol.eval(0.0).is_err());
        assert!(sol.eval(-1.0).is_err());
        assert!(RadialSolution::new(&qn, 0, &env).is_err());
    }

    #[test]
    fn eigenstate_time_evolution_is_pure_phase() {
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let state = Eigenstate::new(&qn, 1, &env).unwrap();
        let r = [3e-11, -2e-11, 4e-11];
        let at0 = state.eval(0.0, r).unwrap();
        let at1 = state.eval(1e-15, r).unwrap();
        for (a, b) in at0.iter().zip(&at1) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn ground_state_spin_up_structure() {
        // 1s1/2 with m = +1/2: the spin-down upper component vanishes
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -1, 1).unwrap();
        let state = Eigenstate::new(&qn, 1, &env).unwrap();
        for r in [[1e-11, 2e-11, 3e-11], [-4e-11, 1e-11, -2e-11]] {
            let psi = state.eval(0.0, r).unwrap();
            assert_eq!(psi[1], Complex64::new(0.0, 0.0));
            assert!(psi[0].norm() > 0.0);
        }
    }

    #[test]
    fn eigenstate_normalized_in_3d() {
        // int psi^dagger psi d^3 r via radial x angular quadrature of the
        // assembled four-component state
        let env = flat_env();
        let qn = QuantumNumbers::new(0, -2, 1).unwrap(); // 2p3/2
        let state = Eigenstate::new(&qn, 1, &env).unwrap();
        let quad = QuadratureSpec {
            rel_tol: 1e-9,
            ..Default::default()
        };
        let lambda = state.radial().lambda();
        let norm = integrate(
            |r| {
                if r <= 0.0 {
                    return 0.0;
                }
                let density = sphere_integrate_default(|theta, phi| {
                    let v = [
                        r * theta.sin() * phi.cos(),
                        r * theta.sin() * phi.sin(),
                        r * theta.cos(),
                    ];
                    state
                        .eval(0.0, v)
                        .unwrap()
                        .iter()
                        .map(|c| c.norm_sqr())
                        .sum::<f64>()
                });
                density * r * r
            },
            0.0,
            40.0 / lambda,
            &quad,
        )
        .unwrap();
        assert!((norm - 1.0).abs() < 1e-7, "3D norm = {norm}");
    }

    #[test]
    fn orthogonality_1s_2s() {
        let env = flat_env();
        let quad = QuadratureSpec::default();
        let a = RadialSolution::new(&QuantumNumbers::new(0, -1, 1).unwrap(), 1, &env).unwrap();
        let b = RadialSolution::new(&QuantumNumbers::new(1, -1, 1).unwrap(), 1, &env).unwrap();
        let overlap = radial_overlap(&a, &b, &quad).unwrap();
        assert!(overlap.abs() < 1e-9, "1s.2s = {overlap:e}");
    }

    #[test]
    fn manifold_structure() {
        let env = flat_env();

        let m1 = manifold(1, 1, &env).unwrap();
        assert_eq!(m1.len(), 1);
        assert_eq!(m1[0].states.len(), 2);

        let m2 = manifold(2, 1, &env).unwrap();
        assert_eq!(m2.len(), 2);
        let total: usize = m2.iter().map(|g| g.states.len()).sum();
        assert_eq!(total, 8);
        // the lower group holds {2s1/2, 2p1/2}, the upper {2p3/2}
        assert_eq!(m2[0].states.len(), 4);
        assert_eq!(m2[1].states.len(), 4);
        assert!(m2[0].energy_flat < m2[1].energy_flat);
        assert!(m2[0]
            .states
            .iter()
            .any(|q| q.kappa_r() == -1 && q.n_r() == 1));
        assert!(m2[0].states.iter().any(|q| q.kappa_r() == 1));
        assert!(m2[1].states.iter().all(|q| q.kappa_r() == -2));

        let m3 = manifold(3, 1, &env).unwrap();
        assert_eq!(m3.len(), 3);
        assert!(manifold(0, 1, &env).is_err());
    }
}
