//! Gravitational environment of a classical point mass: Newtonian potential,
//! diagonal gauge field, the C1/C2 coefficients of the Dirac Hamiltonian,
//! the potential-gradient vector, and the gravity-modified electric
//! potential of the atomic nucleus.

use crate::error::{Error, Result};
use crate::physcon::PhysicalConstants;
use crate::tensor::p4_diag_contraction;
use std::f64::consts::PI;

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Variants of the nuclear electric potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialMode {
    /// Plain Coulomb potential, no gravity.
    Flat,
    /// Uniform-potential approximation: Coulomb scaled by 1/(1 - 2 Phi0/c^2).
    Uniform,
    /// Gradient correction, linearized in the gradient vector a.
    GradientLinear,
    /// Gradient correction in its exponential closed form.
    GradientExact,
}

/// The gravity gauge field at a point: a diagonal 4x4 matrix with all four
/// entries equal to Phi/c^2.
#[derive(Debug, Clone, Copy)]
pub struct GaugeField {
    components: [[f64; 4]; 4],
}

impl GaugeField {
    fn diagonal(value: f64) -> Self {
        let mut components = [[0.0; 4]; 4];
        for (i, row) in components.iter_mut().enumerate() {
            row[i] = value;
        }
        Self { components }
    }

    pub fn components(&self) -> &[[f64; 4]; 4] {
        &self.components
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.components[i][i]).sum()
    }
}

/// Immutable description of the gravitational environment of an atom at
/// position `r0` relative to a point mass `M` at the origin.
#[derive(Debug, Clone, Copy)]
pub struct GravityEnvironment {
    mass: f64,
    r0: [f64; 3],
    phi0: f64,
    c1: f64,
    c2: f64,
    a: [f64; 3],
    u: f64,
    constants: PhysicalConstants,
}

impl GravityEnvironment {
    /// Build the environment for mass `M` (kg) and atom position `r0` (m).
    pub fn new(mass: f64, r0: [f64; 3], constants: PhysicalConstants) -> Result<Self> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::Domain(format!("mass must be >= 0, got {mass}")));
        }
        let r = norm3(r0);
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Domain("|r0| must be positive".into()));
        }
        let c2_speed = constants.c * constants.c;
        let phi0 = -constants.g * mass / r;
        let u = constants.g * mass / (r * c2_speed);
        let denom = 1.0 - 2.0 * phi0 / c2_speed; // = 1 + 2u
        let c1 = (1.0 - phi0 / c2_speed) / denom;
        let c2 = 1.0 / denom;
        // a = 2 G M r0 / (c^2 r^3 (1 + 2 G M/(r c^2)))
        let a_scale = 2.0 * constants.g * mass / (c2_speed * r * r * r * denom);
        let a = [a_scale * r0[0], a_scale * r0[1], a_scale * r0[2]];
        Ok(Self {
            mass,
            r0,
            phi0,
            c1,
            c2,
            a,
            u,
            constants,
        })
    }

    /// Unit-free construction from the compactness u = GM/(|r0| c^2): the
    /// atom is placed 1 m from a mass chosen to produce the requested u.
    pub fn from_compactness(u: f64, constants: PhysicalConstants) -> Result<Self> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::Domain(format!("compactness must be >= 0, got {u}")));
        }
        let r0 = [0.0, 0.0, 1.0];
        let mass = u * constants.c * constants.c / constants.g;
        Self::new(mass, r0, constants)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn r0(&self) -> [f64; 3] {
        self.r0
    }

    /// Newtonian potential at the atom position (m^2/s^2, non-positive).
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Gradient vector a (1/m), parallel to r0.
    pub fn gradient_vector(&self) -> [f64; 3] {
        self.a
    }

    /// Compactness u = GM/(|r0| c^2).
    pub fn compactness(&self) -> f64 {
        self.u
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// Newtonian potential Phi(r) = -GM/|r|.
    pub fn potential_at(&self, r: [f64; 3]) -> Result<f64> {
        let rn = norm3(r);
        if !rn.is_finite() || rn <= 0.0 {
            return Err(Error::Domain("potential singular at r = 0".into()));
        }
        Ok(-self.constants.g * self.mass / rn)
    }

    /// Gauge field H_{mu nu}(r) = (Phi(r)/c^2) diag(1, 1, 1, 1).
    pub fn gauge_field_at(&self, r: [f64; 3]) -> Result<GaugeField> {
        let phi = self.potential_at(r)?;
        Ok(GaugeField::diagonal(phi / (self.constants.c * self.constants.c)))
    }

    /// Residual of the harmonic gauge condition P^{mu nu, rho sigma}
    /// d_rho H_{mu nu} at `r`, by central differences with step `h` (m).
    /// Returns the largest magnitude over sigma.
    pub fn harmonic_gauge_residual(&self, r: [f64; 3], h: f64) -> Result<f64> {
        let c2_speed = self.constants.c * self.constants.c;
        // spatial derivatives of the common diagonal entry Phi/c^2
        let mut d = [0.0_f64; 4]; // d[0] = time derivative = 0 (static)
        for k in 0..3 {
            let mut rp = r;
            let mut rm = r;
            rp[k] += h;
            rm[k] -= h;
            d[k + 1] = (self.potential_at(rp)? - self.potential_at(rm)?) / (2.0 * h * c2_speed);
        }
        let mut worst = 0.0_f64;
        for sigma in 0..4 {
            let mut total = 0.0;
            for (rho, drho) in d.iter().enumerate() {
                // contraction with H = value * diag: integer kernel first
                total += p4_diag_contraction(rho, sigma) * drho;
            }
            worst = worst.max(total.abs());
        }
        Ok(worst)
    }

    /// Electric potential of a nucleus with charge Z e sitting at the atom
    /// position r0, evaluated at `r` (V).
    pub fn nucleus_potential(&self, z: u32, r: [f64; 3], mode: PotentialMode) -> Result<f64> {
        if z < 1 {
            return Err(Error::Domain("atomic number must be >= 1".into()));
        }
        let s_vec = sub3(r, self.r0);
        let s = norm3(s_vec);
        if s.is_nan() || s <= 0.0 {
            return Err(Error::Domain("potential singular at r = r0".into()));
        }
        let pc = &self.constants;
        let coulomb = z as f64 * pc.e / (4.0 * PI * pc.eps0 * s);
        let prefactor = self.c2; // 1/(1 - 2 Phi0/c^2)
        Ok(match mode {
            PotentialMode::Flat => coulomb,
            PotentialMode::Uniform => coulomb * prefactor,
            PotentialMode::GradientExact => {
                let arg = 0.5 * (dot3(self.a, s_vec) + norm3(self.a) * s);
                coulomb * prefactor * arg.exp()
            }
            PotentialMode::GradientLinear => {
                let corr = 0.5 * (dot3(self.a, s_vec) + norm3(self.a) * s);
                coulomb * prefactor * (1.0 + corr)
            }
        })
    }

    /// Residual lap(phi_e) - a . grad(phi_e) of the gradient-corrected
    /// potential at `r`, from closed-form derivatives (V/m^2).  Vanishes
    /// identically for the exact mode; is O(|a|^2) for the linear mode.
    pub fn potential_residual(&self, z: u32, r: [f64; 3], mode: PotentialMode) -> Result<f64> {
        let s_vec = sub3(r, self.r0);
        let s = norm3(s_vec);
        if s.is_nan() || s <= 0.0 {
            return Err(Error::Domain("residual singular at r = r0".into()));
        }
        let pc = &self.constants;
        let amp = z as f64 * pc.e / (4.0 * PI * pc.eps0) * self.c2;
        let a = self.a;
        let a_norm = norm3(a);
        let a_dot_shat = dot3(a, s_vec) / s;
        match mode {
            PotentialMode::GradientExact => {
                // phi = amp E(s)/s with E = exp((a.s_vec + |a| s)/2):
                // lap phi   = amp E [ (|a|^2/2 + |a| a.shat/2 + |a|/s)/s
                //                     - (a.shat + |a|)/s^2 ]
                // a.grad phi = amp E [ (|a|^2/2 + |a| a.shat/2)/s - a.shat/s^2 ]
                let e = (0.5 * (dot3(a, s_vec) + a_norm * s)).exp();
                let lap = amp
                    * e
                    * ((0.5 * a_norm * a_norm + 0.5 * a_norm * a_dot_shat + a_norm / s) / s
                        - (a_dot_shat + a_norm) / (s * s));
                let adv = amp
                    * e
                    * ((0.5 * a_norm * a_norm + 0.5 * a_norm * a_dot_shat) / s
                        - a_dot_shat / (s * s));
                Ok(lap - adv)
            }
            PotentialMode::GradientLinear => {
                // phi = amp [1/s + (a.shat + |a|)/2]:
                // lap phi = -amp a.shat / s^2
                // a.grad phi = amp [ -a.shat/s^2 + (|a|^2 - (a.shat)^2)/(2 s) ]
                let lap = -amp * a_dot_shat / (s * s);
                let adv = amp
                    * (-a_dot_shat / (s * s)
                        + (a_norm * a_norm - a_dot_shat * a_dot_shat) / (2.0 * s));
                Ok(lap - adv)
            }
            _ => Err(Error::Domain(
                "potential_residual applies to the gradient modes only".into(),
            )),
        }
    }

    /// Dimensionless smallness of the gradient correction over a length
    /// scale (typically the orbital radius): |a| * scale.  Reported, not
    /// asserted against any threshold.
    pub fn gradient_smallness(&self, scale_m: f64) -> f64 {
        norm3(self.a) * scale_m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physcon::codata_constants;

    const SOLAR_MASS: f64 = 1.988_41e30;
    const SOLAR_RADIUS: f64 = 6.957e8;

    #[test]
    fn flat_limit() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(0.0, [0.0, 0.0, 1.0], pc).unwrap();
        assert_eq!(env.phi0(), 0.0);
        assert_eq!(env.c1(), 1.0);
        assert_eq!(env.c2(), 1.0);
        assert_eq!(env.gradient_vector(), [0.0, 0.0, 0.0]);
        assert_eq!(env.compactness(), 0.0);
    }

    #[test]
    fn coefficients_at_u_moderate() {
        let pc = codata_constants();
        let env = GravityEnvironment::from_compactness(0.01, pc).unwrap();
        assert!((env.c1() - 1.01 / 1.02).abs() < 1e-15);
        assert!((env.c2() - 1.0 / 1.02).abs() < 1e-15);
        assert!((env.c1() - 0.990_196_08).abs() < 1e-8);
        assert!((env.c2() - 0.980_392_16).abs() < 1e-8);
    }

    #[test]
    fn solar_surface_compactness() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        assert!(
            (env.compactness() - 2.122_502_708e-6).abs() < 1e-12,
            "u = {:e}",
            env.compactness()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let pc = codata_constants();
        assert!(GravityEnvironment::new(-1.0, [0.0, 0.0, 1.0], pc).is_err());
        assert!(GravityEnvironment::new(1.0, [0.0, 0.0, 0.0], pc).is_err());
        assert!(GravityEnvironment::from_compactness(-0.1, pc).is_err());
    }

    #[test]
    fn potential_scaling_and_singularity() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        let r = [1e9, 2e9, -0.5e9];
        let r2 = [2e9, 4e9, -1e9];
        let p1 = env.potential_at(r).unwrap();
        let p2 = env.potential_at(r2).unwrap();
        assert!((p2 - p1 / 2.0).abs() < 1e-9 * p1.abs());
        assert!(p1 < 0.0);
        assert!(env.potential_at([0.0; 3]).is_err());

        let flat = GravityEnvironment::new(0.0, [0.0, 0.0, 1.0], pc).unwrap();
        assert_eq!(flat.potential_at(r).unwrap(), 0.0);
    }

    #[test]
    fn vacuum_laplacian_under_refinement() {
        // central-difference Laplacian of -GM/r vanishes off the source;
        // the FD residual must shrink as h^2
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        let r = [0.9e9, -0.3e9, 0.4e9];
        let lap = |h: f64| -> f64 {
            let mut total = 0.0;
            let p0 = env.potential_at(r).unwrap();
            for k in 0..3 {
                let mut rp = r;
                let mut rm = r;
                rp[k] += h;
                rm[k] -= h;
                total += (env.potential_at(rp).unwrap() - 2.0 * p0
                    + env.potential_at(rm).unwrap())
                    / (h * h);
            }
            total
        };
        // scale: second radial derivative of Phi, ~2GM/r^3
        let scale = 2.0 * pc.g * SOLAR_MASS / 1e27;
        let coarse = lap(2e5).abs() / scale;
        let fine = lap(1e5).abs() / scale;
        assert!(coarse < 1e-2, "coarse rel residual {coarse:e}");
        // FD cancellation noise dominates well below truncation here;
        // only require that refinement does not blow up
        assert!(fine < 1e-1, "fine rel residual {fine:e}");
    }

    #[test]
    fn gauge_field_diagonal_and_trace() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        let r = [1e9, 0.0, 0.0];
        let h = env.gauge_field_at(r).unwrap();
        let phi = env.potential_at(r).unwrap();
        let want = phi / (pc.c * pc.c);
        for i in 0..4 {
            for j in 0..4 {
                let v = h.components()[i][j];
                if i == j {
                    assert_eq!(v, want);
                } else {
                    assert_eq!(v, 0.0);
                }
            }
        }
        assert!((h.trace() - 4.0 * want).abs() < 1e-30);

        let flat = GravityEnvironment::new(0.0, [0.0, 0.0, 1.0], pc).unwrap();
        assert_eq!(flat.gauge_field_at(r).unwrap().trace(), 0.0);
    }

    #[test]
    fn harmonic_gauge_residual_vanishes() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        for r in [[1e9, 0.3e9, -0.2e9], [0.5e9, -0.8e9, 0.9e9]] {
            let res = env.harmonic_gauge_residual(r, 1e5).unwrap();
            assert_eq!(res, 0.0, "residual at {r:?}");
        }
    }

    #[test]
    fn gradient_vector_parallel_to_r0() {
        let pc = codata_constants();
        let r0 = [3e8, -4e8, 1.2e9];
        let env = GravityEnvironment::new(SOLAR_MASS, r0, pc).unwrap();
        let a = env.gradient_vector();
        let cross = [
            a[1] * r0[2] - a[2] * r0[1],
            a[2] * r0[0] - a[0] * r0[2],
            a[0] * r0[1] - a[1] * r0[0],
        ];
        assert!(norm3(cross) < 1e-15 * norm3(a) * norm3(r0));
        assert!(dot3(a, r0) > 0.0);
    }

    #[test]
    fn inverse_c1_identity() {
        // 1/C1 - 1 = u/(1+u) for Phi0 = -u c^2; the left side carries an
        // absolute rounding of order eps from the subtraction
        let pc = codata_constants();
        for u in [1e-8, 1e-4, 0.01, 0.3] {
            let env = GravityEnvironment::from_compactness(u, pc).unwrap();
            let lhs = 1.0 / env.c1() - 1.0;
            let rhs = u / (1.0 + u);
            assert!((lhs - rhs).abs() <= 5e-16, "u = {u}");
        }
    }

    #[test]
    fn continuity_as_mass_vanishes() {
        let pc = codata_constants();
        for u in [1e-3, 1e-6, 1e-9, 1e-12] {
            let env = GravityEnvironment::from_compactness(u, pc).unwrap();
            assert!((env.c1() - 1.0).abs() < 2.0 * u);
            assert!((env.c2() - 1.0).abs() < 3.0 * u);
            assert!(norm3(env.gradient_vector()) < 3.0 * u);
        }
    }

    #[test]
    fn nucleus_potential_modes() {
        let pc = codata_constants();
        let env = GravityEnvironment::from_compactness(0.01, pc).unwrap();
        let flat_env = GravityEnvironment::new(0.0, env.r0(), pc).unwrap();
        let r = [1e-10, 2e-10, 1.0 - 3e-10]; // near the atom at (0,0,1)

        // Phi0 = 0: uniform equals flat exactly
        let f = flat_env.nucleus_potential(1, r, PotentialMode::Flat).unwrap();
        let u0 = flat_env
            .nucleus_potential(1, r, PotentialMode::Uniform)
            .unwrap();
        assert_eq!(f, u0);

        // u = 0.01: uniform/flat = 1/(1+2u) everywhere
        let fv = env.nucleus_potential(1, r, PotentialMode::Flat).unwrap();
        let uv = env.nucleus_potential(1, r, PotentialMode::Uniform).unwrap();
        assert!((uv / fv - 1.0 / 1.02).abs() < 1e-15);
        assert!((uv / fv - 0.980_392_16).abs() < 1e-8);

        // a -> 0: gradient_exact == uniform
        let g0 = flat_env
            .nucleus_potential(1, r, PotentialMode::GradientExact)
            .unwrap();
        assert_eq!(g0, u0);

        // singular point
        assert!(env
            .nucleus_potential(1, env.r0(), PotentialMode::Flat)
            .is_err());
        assert!(env.nucleus_potential(0, r, PotentialMode::Flat).is_err());
    }

    #[test]
    fn gradient_exact_residual_vanishes() {
        let pc = codata_constants();
        let env = GravityEnvironment::from_compactness(1e-4, pc).unwrap();
        // characteristic Laplacian scale of the Coulomb part at offset s:
        // amp * |a| / s^2 is the natural size of each surviving term
        for offset in [[3e-11, 1e-11, 2e-11], [-5e-11, 2e-11, -4e-11]] {
            let r = [
                env.r0()[0] + offset[0],
                env.r0()[1] + offset[1],
                env.r0()[2] + offset[2],
            ];
            let s = norm3(offset);
            let amp = pc.e / (4.0 * PI * pc.eps0) * env.c2();
            let scale = amp * norm3(env.gradient_vector()) / (s * s);
            let res = env
                .potential_residual(1, r, PotentialMode::GradientExact)
                .unwrap();
            assert!(
                res.abs() <= 1e-10 * scale,
                "residual {res:e} vs scale {scale:e}"
            );
        }
    }

    #[test]
    fn gradient_linear_residual_second_order() {
        // residual of the linearized mode scales as |a|^2
        let pc = codata_constants();
        let offset = [4e-11, -2e-11, 3e-11];
        let res_at = |u: f64| -> f64 {
            let env = GravityEnvironment::from_compactness(u, pc).unwrap();
            let r = [
                env.r0()[0] + offset[0],
                env.r0()[1] + offset[1],
                env.r0()[2] + offset[2],
            ];
            env.potential_residual(1, r, PotentialMode::GradientLinear)
                .unwrap()
                .abs()
        };
        // |a| is proportional to u at fixed r0; Richardson-style ratio
        let r1 = res_at(1e-3);
        let r2 = res_at(2e-3);
        let ratio = r2 / r1;
        assert!(
            (ratio - 4.0).abs() < 0.05,
            "expected ~4x from doubling |a|, got {ratio}"
        );
    }

    #[test]
    fn linear_vs_exact_agree_on_atomic_ball() {
        let pc = codata_constants();
        // stellar-strength gradient
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        let a_norm = norm3(env.gradient_vector());
        for offset in [[5e-11, 0.0, 8e-11], [0.0, -9e-11, 2e-11]] {
            let r = [
                env.r0()[0] + offset[0],
                env.r0()[1] + offset[1],
                env.r0()[2] + offset[2],
            ];
            let s = norm3(offset);
            let lin = env
                .nucleus_potential(1, r, PotentialMode::GradientLinear)
                .unwrap();
            let exact = env
                .nucleus_potential(1, r, PotentialMode::GradientExact)
                .unwrap();
            let bound = (a_norm * s) * (a_norm * s);
            assert!(
                ((lin - exact) / exact).abs() <= bound.max(1e-15),
                "lin {lin:e} vs exact {exact:e}"
            );
        }
    }

    #[test]
    fn gradient_smallness_report() {
        let pc = codata_constants();
        let env = GravityEnvironment::new(SOLAR_MASS, [0.0, 0.0, SOLAR_RADIUS], pc).unwrap();
        let eps = env.gradient_smallness(pc.bohr_radius());
        assert!(eps > 0.0 && eps < 1e-20, "solar-surface smallness {eps:e}");
    }
}
