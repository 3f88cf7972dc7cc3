//! Independent numerical verification tools: adaptive Gauss-Kronrod
//! quadrature, Gauss-Legendre rules, and a shooting solver for the radial
//! Dirac eigenvalue problem.
//!
//! The shooting solver never evaluates the closed-form radial functions or
//! the closed-form spectrum; agreement between the two paths is what the
//! verification suite asserts.

use crate::error::{Error, Result};
use crate::gravity::GravityEnvironment;
use crate::physcon::PhysicalConstants;
use std::collections::BinaryHeap;

// ---------------------------------------------------------------------------
// 15-point Gauss-Kronrod rule (QUADPACK abscissae/weights)
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_7,
    0.949_107_912_342_758_524_526_189_7,
    0.864_864_423_359_769_072_789_712_8,
    0.741_531_185_599_394_439_863_864_8,
    0.586_087_235_467_691_130_294_144_8,
    0.405_845_151_377_397_166_906_606_4,
    0.207_784_955_007_898_467_600_689_4,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_0,
    0.063_092_092_629_978_553_290_700_7,
    0.104_790_010_322_250_183_839_876_3,
    0.140_653_259_715_525_918_745_189_6,
    0.169_004_726_639_267_902_826_583_4,
    0.190_350_578_064_785_409_913_256_4,
    0.204_432_940_075_298_892_414_162_0,
    0.209_482_141_084_727_828_012_999_2,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_4,
    0.279_705_391_489_276_667_901_467_7,
    0.381_830_050_505_118_944_950_369_8,
    0.417_959_183_673_469_387_755_102_0,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
        }
    }
}

/// QUADPACK-style conservative error rescaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Gauss-Kronrod panel. Returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for j in 0..7 {
        let x = half * XGK[j];
        let v1 = f(center - x);
        let v2 = f(center + x);
        fv1[j] = v1;
        fv2[j] = v2;
        let sum = v1 + v2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (v1.abs() + v2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }
    res_gauss += WG[3] * f_center;

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = ((res_kronrod - res_gauss) * half).abs();
    (
        res_kronrod * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    )
}

#[derive(Debug)]
struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the requested tolerance is met or the subdivision budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (value, error) = integrate_with_estimate(&f, a, b, spec)?;
    let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
    if error > tol {
        return Err(Error::QuadratureNonConvergence {
            achieved: error,
            requested: tol,
        });
    }
    Ok(value)
}

/// Like [`integrate`] but always returns the achieved (value, error) pair.
pub fn integrate_with_estimate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration bounds must be finite".into()));
    }
    if !(spec.abs_tol > 0.0 && spec.rel_tol > 0.0) {
        return Err(Error::Domain("quadrature tolerances must be positive".into()));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }

    let (v0, e0) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        err: e0,
        a,
        b,
        value: v0,
    });
    let mut total_value = v0;
    let mut total_error = e0;

    for _ in 0..spec.max_subdivisions {
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= tol {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at machine resolution; keep its estimate and move on
            total_error += worst.err; // undo the subtraction below
            total_error -= worst.err;
            heap.push(worst);
            break;
        }
        let (vl, el) = gk15(f, worst.a, mid);
        let (vr, er) = gk15(f, mid, worst.b);
        total_value += vl + vr - worst.value;
        total_error += el + er - worst.err;
        heap.push(Panel {
            err: el,
            a: worst.a,
            b: mid,
            value: vl,
        });
        heap.push(Panel {
            err: er,
            a: mid,
            b: worst.b,
            value: vr,
        });
    }

    if !total_value.is_finite() {
        return Err(Error::Domain("integrand produced non-finite values".into()));
    }
    Ok((total_value, total_error))
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rule and spherical quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the moderate orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integral of `f(theta, phi)` over the unit sphere (measure sin(theta)
/// dtheta dphi): Gauss-Legendre in cos(theta) and a uniform periodic rule
/// in phi.  Exact for the low spherical-harmonic degrees used in this crate.
pub fn sphere_integrate<F: Fn(f64, f64) -> f64>(n_theta: usize, n_phi: usize, f: F) -> f64 {
    let (u, w) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for (ui, wi) in u.iter().zip(&w) {
        let theta = ui.clamp(-1.0, 1.0).acos();
        let mut ring = 0.0;
        for k in 0..n_phi {
            ring += f(theta, dphi * k as f64);
        }
        total += wi * ring * dphi;
    }
    total
}

/// Default angular rule: order 64 in cos(theta) x 128 points in phi.
pub fn sphere_integrate_default<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    sphere_integrate(64, 128, f)
}

// ---------------------------------------------------------------------------
// Radial Dirac shooting solver
// ---------------------------------------------------------------------------

/// Parameters of the radial Dirac problem with the gravity-scaled constants
/// m_e -> (C1/C2^2) m_e and c -> C2 c.
#[derive(Debug, Clone, Copy)]
pub struct RadialOdeSpec {
    pub z: u32,
    pub kappa_r: i32,
    /// Effective mass (C1/C2^2) m_e (kg).
    pub mass_eff: f64,
    /// Effective light speed C2 c (m/s).
    pub c_eff: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Dimensionless Coulomb coupling Z alpha_e.
    pub z_alpha: f64,
}

impl RadialOdeSpec {
    /// Spec for an atom inside `env`.
    pub fn new(z: u32, kappa_r: i32, env: &GravityEnvironment) -> Result<Self> {
        let pc = env.constants();
        Self::build(z, kappa_r, &pc, env.c1(), env.c2())
    }

    /// Flat-space spec (C1 = C2 = 1).
    pub fn flat(z: u32, kappa_r: i32, pc: &PhysicalConstants) -> Result<Self> {
        Self::build(z, kappa_r, pc, 1.0, 1.0)
    }

    fn build(z: u32, kappa_r: i32, pc: &PhysicalConstants, c1: f64, c2: f64) -> Result<Self> {
        if kappa_r == 0 {
            return Err(Error::InvalidQuantumNumbers("kappa_r must be nonzero".into()));
        }
        let z_alpha = z as f64 * pc.alpha_e;
        if z_alpha >= kappa_r.unsigned_abs() as f64 {
            return Err(Error::SupercriticalCharge {
                z_alpha,
                kappa_abs: kappa_r.unsigned_abs(),
            });
        }
        Ok(Self {
            z,
            kappa_r,
            mass_eff: c1 / (c2 * c2) * pc.m_e,
            c_eff: c2 * pc.c,
            hbar: pc.hbar,
            z_alpha,
        })
    }

    /// Rest energy of the effective problem, equal to C1 m_e c^2 (J).
    pub fn rest_energy(&self) -> f64 {
        self.mass_eff * self.c_eff * self.c_eff
    }

    /// Coulomb potential prefactor C2 Z hbar c alpha_e (J m).
    pub fn coulomb_prefactor(&self) -> f64 {
        self.z_alpha * self.hbar * self.c_eff
    }
}

/// Coupled radial system for (F, G) = (r f, r g) in the scaled variable
/// s = lambda r, with eps = E / (m_eff c_eff^2) and w = sqrt(1 - eps^2):
///
/// ```text
/// dF/ds = -(kappa/s) F + [(eps+1)/w + Z alpha / s] G
/// dG/ds = +(kappa/s) G - [(eps-1)/w + Z alpha / s] F
/// ```
fn rhs(kappa: f64, z_alpha: f64, eps: f64, w: f64, s: f64, fg: [f64; 2]) -> [f64; 2] {
    let [f, g] = fg;
    let coul = z_alpha / s;
    [
        -(kappa / s) * f + ((eps + 1.0) / w + coul) * g,
        (kappa / s) * g - ((eps - 1.0) / w + coul) * f,
    ]
}

fn rk4_step(kappa: f64, z_alpha: f64, eps: f64, w: f64, s: f64, h: f64, y: [f64; 2]) -> [f64; 2] {
    let k1 = rhs(kappa, z_alpha, eps, w, s, y);
    let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
    let k2 = rhs(kappa, z_alpha, eps, w, s + 0.5 * h, y2);
    let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
    let k3 = rhs(kappa, z_alpha, eps, w, s + 0.5 * h, y3);
    let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
    let k4 = rhs(kappa, z_alpha, eps, w, s + h, y4);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Frobenius series start near the origin: F, G ~ s^gamma * (series in s).
/// Truncated when the terms stop contributing at double precision.
fn series_start(kappa: f64, z_alpha: f64, eps: f64, w: f64, s0: f64) -> [f64; 2] {
    let gamma = (kappa * kappa - z_alpha * z_alpha).sqrt();
    let a_plus = (eps + 1.0) / w;
    let a_minus = (eps - 1.0) / w;
    let mut p = 1.0_f64;
    let mut q = (gamma + kappa) / z_alpha;
    let (mut f_sum, mut g_sum) = (p, q);
    let mut s_pow = 1.0;
    for k in 1..=40_u32 {
        let kf = k as f64;
        let det = kf * (2.0 * gamma + kf);
        let p_new = ((gamma + kf - kappa) * a_plus * q - z_alpha * a_minus * p) / det;
        let q_new = (-(gamma + kf + kappa) * a_minus * p - z_alpha * a_plus * q) / det;
        p = p_new;
        q = q_new;
        s_pow *= s0;
        let df = p * s_pow;
        let dg = q * s_pow;
        f_sum += df;
        g_sum += dg;
        if df.abs() < 1e-18 * f_sum.abs().max(1.0) && dg.abs() < 1e-18 * g_sum.abs().max(1.0) {
            break;
        }
    }
    let scale = s0.powf(gamma);
    [scale * f_sum, scale * g_sum]
}

struct Sweep {
    f: f64,
    g: f64,
    sign_changes: usize,
}

/// Outward sweep from the series start to s_match.
fn sweep_out(kappa: f64, z_alpha: f64, eps: f64, w: f64, s0: f64, s_match: f64, n: usize) -> Sweep {
    let mut y = series_start(kappa, z_alpha, eps, w, s0);
    let h = (s_match - s0) / n as f64;
    let mut sign_changes = 0;
    let mut last_sign = y[0].signum();
    let mut s = s0;
    for _ in 0..n {
        y = rk4_step(kappa, z_alpha, eps, w, s, h, y);
        s += h;
        let sgn = y[0].signum();
        if sgn != 0.0 && last_sign != 0.0 && sgn != last_sign {
            sign_changes += 1;
        }
        if sgn != 0.0 {
            last_sign = sgn;
        }
        // keep the magnitude in range during long climbs
        let m = y[0].abs().max(y[1].abs());
        if m > 1e250 {
            y[0] /= m;
            y[1] /= m;
        }
    }
    Sweep {
        f: y[0],
        g: y[1],
        sign_changes,
    }
}

/// Inward sweep from s_max down to s_match, started on the locally decaying
/// branch (WKB ratio G/F = -sqrt((1 - eta)/(1 + eta)) with
/// eta = eps + Z alpha w / s).
fn sweep_in(kappa: f64, z_alpha: f64, eps: f64, w: f64, s_match: f64, s_max: f64, n: usize) -> Sweep {
    let eta = eps + z_alpha * w / s_max;
    let ratio = -((1.0 - eta) / (1.0 + eta)).max(0.0).sqrt();
    let mut y = [1.0, ratio];
    let h = -(s_max - s_match) / n as f64;
    let mut s = s_max;
    let mut sign_changes = 0;
    let mut last_sign = y[0].signum();
    for _ in 0..n {
        y = rk4_step(kappa, z_alpha, eps, w, s, h, y);
        s += h;
        let sgn = y[0].signum();
        if sgn != 0.0 && last_sign != 0.0 && sgn != last_sign {
            sign_changes += 1;
        }
        if sgn != 0.0 {
            last_sign = sgn;
        }
        let m = y[0].abs().max(y[1].abs());
        if m > 1e250 {
            y[0] /= m;
            y[1] /= m;
        }
    }
    Sweep {
        f: y[0],
        g: y[1],
        sign_changes,
    }
}

/// (series start point, matching point) of the scaled problem.
fn geometry(kappa: f64, z_alpha: f64, eps: f64, w: f64) -> (f64, f64) {
    let gamma = (kappa * kappa - z_alpha * z_alpha).sqrt();
    let s0 = (0.15 * w / (1.0 + eps).max(1.0)).min(0.05);
    (s0, gamma + kappa.abs() + 1.0)
}

fn defect_and_nodes(spec: &RadialOdeSpec, eps: f64, n_out: usize, n_in: usize) -> (f64, usize) {
    let kappa = spec.kappa_r as f64;
    let z_alpha = spec.z_alpha;
    let w = (1.0 - eps * eps).sqrt();
    let (s0, s_match) = geometry(kappa, z_alpha, eps, w);
    let s_max = s_match + 40.0;
    let out = sweep_out(kappa, z_alpha, eps, w, s0, s_match, n_out);
    let inw = sweep_in(kappa, z_alpha, eps, w, s_match, s_max, n_in);
    let defect = (out.g * inw.f - inw.g * out.f)
        / ((out.f * inw.f).abs() + (out.g * inw.g).abs() + f64::MIN_POSITIVE);
    (defect, out.sign_changes + inw.sign_changes)
}

/// Outward F(s_match): exposes the raw integrator error, which the
/// matching defect hides (the RK4 error component along the solution
/// cancels in the ratio).
#[cfg(test)]
fn outward_amplitude(spec: &RadialOdeSpec, e: f64, n: usize) -> f64 {
    let kappa = spec.kappa_r as f64;
    let z_alpha = spec.z_alpha;
    let eps = e / spec.rest_energy();
    let w = (1.0 - eps * eps).sqrt();
    let (s0, s_match) = geometry(kappa, z_alpha, eps, w);
    sweep_out(kappa, z_alpha, eps, w, s0, s_match, n).f
}

/// Matching defect of the discretized two-sided shooting at energy `e` (J),
/// using `n` RK4 steps per sweep.  Exposed for convergence studies.
pub fn matching_defect(spec: &RadialOdeSpec, e: f64, n: usize) -> f64 {
    let eps = e / spec.rest_energy();
    defect_and_nodes(spec, eps, n, n).0
}

/// Interior zeros expected in the upper radial component F = r f.
///
/// States with kappa_r < 0 have n_r zeros; states with kappa_r > 0 have
/// n_r - 1 (their nonrelativistic limit is the (n, l = kappa_r) orbital).
pub fn expected_f_nodes(n_r: u32, kappa_r: i32) -> u32 {
    if kappa_r < 0 {
        n_r
    } else {
        n_r - 1
    }
}

/// Find the bound-state energy (J) with `n_r` radial nodes inside `bracket`.
///
/// Integrates the coupled radial system outward from the origin series and
/// inward from the exponential tail, then root-finds the log-derivative
/// matching defect on E by bisection with a secant refinement.  The bracket
/// must contain exactly one eigenvalue (the caller typically supplies the
/// closed-form value +/- 1% of the binding energy).
pub fn shoot_energy(spec: &RadialOdeSpec, n_r: u32, bracket: (f64, f64)) -> Result<f64> {
    shoot_energy_with(spec, n_r, bracket, 4000, 6000)
}

/// [`shoot_energy`] with explicit RK4 step counts per sweep.
pub fn shoot_energy_with(
    spec: &RadialOdeSpec,
    n_r: u32,
    bracket: (f64, f64),
    n_out: usize,
    n_in: usize,
) -> Result<f64> {
    if n_r == 0 && spec.kappa_r > 0 {
        return Err(Error::InvalidQuantumNumbers(
            "n_r = 0 requires kappa_r < 0".into(),
        ));
    }
    let rest = spec.rest_energy();
    let (mut lo, mut hi) = (bracket.0 / rest, bracket.1 / rest);
    if lo.is_nan() || hi.is_nan() || lo >= hi || hi >= 1.0 || lo <= -1.0 {
        return Err(Error::Domain(format!(
            "bracket [{lo:.12}, {hi:.12}] (units of the rest energy) is not a bound-state range"
        )));
    }

    let d = |eps: f64| defect_and_nodes(spec, eps, n_out, n_in).0;
    let mut d_lo = d(lo);
    let mut d_hi = d(hi);
    if !(d_lo.is_finite() && d_hi.is_finite()) {
        return Err(Error::Shooting("non-finite matching defect".into()));
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(Error::NoSignChange {
            lo: bracket.0,
            hi: bracket.1,
        });
    }

    let mut best = 0.5 * (lo + hi);
    for iter in 0..200 {
        // secant candidate, guarded by the bisection bracket
        let mut mid = if d_hi != d_lo {
            hi - d_hi * (hi - lo) / (d_hi - d_lo)
        } else {
            0.5 * (lo + hi)
        };
        if !mid.is_finite() || mid <= lo || mid >= hi || iter % 3 == 2 {
            mid = 0.5 * (lo + hi);
        }
        let d_mid = d(mid);
        best = mid;
        if d_mid.abs() < 1e-12 || (hi - lo) < 4.0 * f64::EPSILON * hi.abs().max(1e-3) {
            break;
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
            d_hi = d_mid;
        }
    }

    let (_, nodes) = defect_and_nodes(spec, best, n_out, n_in);
    let expected = expected_f_nodes(n_r, spec.kappa_r);
    if nodes as u32 != expected {
        return Err(Error::Shooting(format!(
            "converged solution has {nodes} interior F zeros, expected {expected}"
        )));
    }
    Ok(best * rest)
}
