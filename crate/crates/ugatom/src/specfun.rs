//! Special functions: gamma, terminating Kummer series, Legendre and
//! associated Legendre polynomials, scalar spherical harmonics,
//! Clebsch-Gordan coefficients for l x 1/2 coupling, and spherical
//! harmonic spinors.
//!
//! Half-integer angular momenta are passed as doubled integers
//! (`j_twice = 2j`, `m_twice = 2m`) so that all arithmetic stays exact.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Lanczos coefficients, g = 7, 9 terms (GSL).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments, relative error below 1e-12
/// on (0, 170].
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    if x > 170.0 {
        return Err(Error::Domain(format!(
            "gamma_fn({x}) would overflow f64 (limit x = 170)"
        )));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_P[0];
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // exp/ln form keeps the intermediate in range up to x = 170
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * acc
}

/// Factorial as f64 (exact through n = 22, adequate through the arguments
/// used here).
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Terminating Kummer confluent hypergeometric series
/// 1F1(-n; b; x) = sum_{k=0}^{n} (-n)_k / (b)_k x^k / k!,
/// evaluated by Horner's scheme.  `neg_n` must be 0, -1, -2, ...
pub fn kummer_terminating(neg_n: i32, b: f64, x: f64) -> Result<f64> {
    if neg_n > 0 {
        return Err(Error::Domain(format!(
            "kummer_terminating requires a non-positive first argument, got {neg_n}"
        )));
    }
    if b.is_nan() || b <= 0.0 {
        return Err(Error::Domain(format!(
            "kummer_terminating requires b > 0, got {b}"
        )));
    }
    let n = neg_n.unsigned_abs() as usize;
    // c_{k+1} = c_k (neg_n + k) / ((b + k)(k + 1))
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = 1.0;
    coeffs.push(c);
    for k in 0..n {
        c *= (neg_n as f64 + k as f64) / ((b + k as f64) * (k as f64 + 1.0));
        coeffs.push(c);
    }
    let mut val = 0.0;
    for &ck in coeffs.iter().rev() {
        val = val * x + ck;
    }
    Ok(val)
}

/// Legendre polynomial P_l(x) by the three-term recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=l {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// Associated Legendre polynomial P_{l,m}(x) with the Condon-Shortley
/// phase, extended to negative m by
/// P_{l,m} = (-1)^(-m) (l+m)!/(l-m)! P_{l,-m}.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!(
            "assoc_legendre requires |m| <= l, got l = {l}, m = {m}"
        )));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "assoc_legendre requires |x| <= 1, got {x}"
        )));
    }
    if m < 0 {
        let ma = m.unsigned_abs();
        let ratio = factorial(l - ma) / factorial(l + ma);
        let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(sign * ratio * assoc_legendre(l, ma as i32, x)?);
    }
    let m = m as u32;
    // P_{m,m} = (-1)^m (2m-1)!! (1-x^2)^(m/2)
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if l == m {
        return Ok(pmm);
    }
    let mf = m as f64;
    let mut pmmp1 = x * (2.0 * mf + 1.0) * pmm;
    if l == m + 1 {
        return Ok(pmmp1);
    }
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let p = (x * (2.0 * llf - 1.0) * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pmmp1;
        pmmp1 = p;
    }
    Ok(pmmp1)
}

/// Scalar spherical harmonic
/// Y_{l,m} = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) P_{l,m}(cos theta) e^{i m phi}.
pub fn sph_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!(
            "sph_harmonic requires |m| <= l, got l = {l}, m = {m}"
        )));
    }
    let lf = l as f64;
    let norm = ((2.0 * lf + 1.0) / (4.0 * PI) * factorial((l as i32 - m) as u32)
        / factorial((l as i32 + m) as u32))
    .sqrt();
    let plm = assoc_legendre(l, m, theta.cos())?;
    Ok(norm * plm * Complex64::from_polar(1.0, m as f64 * phi))
}

/// Clebsch-Gordan coefficient <l, ml; 1/2, q | j, m> for coupling an
/// orbital angular momentum l to spin 1/2, in the Condon-Shortley
/// convention.  `q_twice` is +-1; `j_twice`, `m_twice` are doubled
/// half-integers.  Returns 0 when a selection rule fails; an invalid j
/// (not l +- 1/2) is a domain error.
pub fn clebsch_gordan(l: u32, ml: i32, q_twice: i32, j_twice: i32, m_twice: i32) -> Result<f64> {
    if q_twice != 1 && q_twice != -1 {
        return Err(Error::Domain(format!(
            "spin projection q must be +-1/2, got q_twice = {q_twice}"
        )));
    }
    let two_l = 2 * l as i32;
    if j_twice != two_l + 1 && j_twice != two_l - 1 || j_twice < 1 {
        return Err(Error::Domain(format!(
            "invalid j: 2j = {j_twice} cannot couple l = {l} with spin 1/2"
        )));
    }
    // selection rules
    if m_twice != 2 * ml + q_twice || ml.unsigned_abs() > l || m_twice.abs() > j_twice {
        return Ok(0.0);
    }
    let denom = 2.0 * (two_l + 1) as f64;
    let plus = (((two_l + m_twice + 1) as f64) / denom).sqrt();
    let minus = (((two_l - m_twice + 1) as f64) / denom).sqrt();
    Ok(match (j_twice == two_l + 1, q_twice > 0) {
        (true, true) => plus,
        (true, false) => minus,
        (false, true) => -minus,
        (false, false) => plus,
    })
}

/// A spherical harmonic spinor evaluated at one direction: the
/// Clebsch-Gordan combination of Y_{l, m - q} with the spherical unit
/// spinors u^(+1/2) = (1, 0) and u^(-1/2) = (0, 1).
#[derive(Debug, Clone, Copy)]
pub struct SpinorSphericalHarmonic {
    pub j_twice: i32,
    pub l: u32,
    pub m_twice: i32,
    /// q = +1/2 component.
    pub upper: Complex64,
    /// q = -1/2 component.
    pub lower: Complex64,
}

/// Evaluate the spherical harmonic spinor Omega_{j,l,m}(theta, phi).
pub fn spinor_harmonic(
    j_twice: i32,
    l: u32,
    m_twice: i32,
    theta: f64,
    phi: f64,
) -> Result<SpinorSphericalHarmonic> {
    let two_l = 2 * l as i32;
    if j_twice != two_l + 1 && j_twice != two_l - 1 || j_twice < 1 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "spinor harmonic requires j = l +- 1/2, got 2j = {j_twice}, l = {l}"
        )));
    }
    if m_twice.abs() > j_twice || m_twice.rem_euclid(2) == 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "projection 2m = {m_twice} invalid for 2j = {j_twice}"
        )));
    }
    let component = |q_twice: i32| -> Result<Complex64> {
        let ml = (m_twice - q_twice) / 2;
        if ml.unsigned_abs() > l {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let cg = clebsch_gordan(l, ml, q_twice, j_twice, m_twice)?;
        if cg == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(cg * sph_harmonic(l, ml, theta, phi)?)
    };
    Ok(SpinorSphericalHarmonic {
        j_twice,
        l,
        m_twice,
        upper: component(1)?,
        lower: component(-1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sphere_integrate_default;

    // ------------------------------------------------------------------
    // independent oracles
    // ------------------------------------------------------------------

    /// P_{l,m} for m >= 0 straight from the Rodrigues definition:
    /// (-1)^m (1-x^2)^(m/2) d^m/dx^m [ 1/(2^l l!) d^l/dx^l (x^2-1)^l ],
    /// carried out by symbolic polynomial differentiation.
    fn rodrigues_assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
        // coefficients of (x^2 - 1)^l
        let mut poly = vec![0.0_f64; 2 * l as usize + 1];
        for k in 0..=l {
            let binom = factorial(l) / (factorial(k) * factorial(l - k));
            let sign = if (l - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            poly[2 * k as usize] = sign * binom;
        }
        for _ in 0..(l + m) {
            let mut d = vec![0.0; poly.len().saturating_sub(1).max(1)];
            for (p, c) in poly.iter().enumerate().skip(1) {
                d[p - 1] = c * p as f64;
            }
            poly = d;
        }
        let mut val = 0.0;
        for &c in poly.iter().rev() {
            val = val * x + c;
        }
        let scale = 1.0 / (2.0_f64.powi(l as i32) * factorial(l));
        let cs = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        cs * (1.0 - x * x).powf(m as f64 / 2.0) * scale * val
    }

    /// General Clebsch-Gordan coefficient by the Racah closed form,
    /// with all angular momenta passed as doubled integers.
    fn racah_cg(j1t: i32, m1t: i32, j2t: i32, m2t: i32, jt: i32, mt: i32) -> f64 {
        if m1t + m2t != mt {
            return 0.0;
        }
        let f = |twice: i32| -> f64 {
            assert!(twice % 2 == 0 && twice >= 0, "non-integer factorial arg");
            factorial((twice / 2) as u32)
        };
        let delta = f(j1t + j2t - jt) * f(j1t - j2t + jt) * f(-j1t + j2t + jt)
            / f(j1t + j2t + jt + 2);
        let pre = ((jt + 1) as f64 * delta
            * f(j1t + m1t)
            * f(j1t - m1t)
            * f(j2t + m2t)
            * f(j2t - m2t)
            * f(jt + mt)
            * f(jt - mt))
        .sqrt();
        let mut sum = 0.0;
        for k in 0..=20 {
            let k2 = 2 * k;
            let a = j1t + j2t - jt - k2;
            let b = j1t - m1t - k2;
            let c = j2t + m2t - k2;
            let d = jt - j2t + m1t + k2;
            let e = jt - j1t - m2t + k2;
            if a < 0 || b < 0 || c < 0 {
                break;
            }
            if d < 0 || e < 0 {
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign / (factorial(k as u32) * f(a) * f(b) * f(c) * f(d) * f(e));
        }
        pre * sum
    }

    // ------------------------------------------------------------------
    // gamma
    // ------------------------------------------------------------------

    #[test]
    fn gamma_small_integers() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
    }

    #[test]
    fn gamma_half() {
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gamma_recurrence_grid() {
        let mut x = 0.5;
        while x <= 20.5 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(
                (lhs / rhs - 1.0).abs() < 1e-12,
                "recurrence fails at x = {x}: {lhs} vs {rhs}"
            );
            x += 1.0;
        }
    }

    #[test]
    fn gamma_large_argument() {
        // Gamma(101) = 100!
        let g = gamma_fn(101.0).unwrap();
        assert!((g / factorial(100) - 1.0).abs() < 1e-12);
        assert!(gamma_fn(170.0).unwrap().is_finite());
    }

    #[test]
    fn gamma_domain_errors() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-3.2).is_err());
        assert!(gamma_fn(171.0).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
    }

    // ------------------------------------------------------------------
    // Kummer
    // ------------------------------------------------------------------

    /// brute-force term-by-term sum
    fn kummer_brute(neg_n: i32, b: f64, x: f64) -> f64 {
        let n = -neg_n;
        let mut total = 0.0;
        for k in 0..=n {
            let mut poch_a = 1.0;
            let mut poch_b = 1.0;
            for i in 0..k {
                poch_a *= (neg_n + i) as f64;
                poch_b *= b + i as f64;
            }
            total += poch_a / poch_b * x.powi(k) / factorial(k as u32);
        }
        total
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_terminating(0, 3.0, 7.5).unwrap(), 1.0);
        let v = kummer_terminating(-1, 3.0, 2.0).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = kummer_terminating(-2, 2.0, 1.0).unwrap();
        assert!((v - kummer_brute(-2, 2.0, 1.0)).abs() < 1e-15);
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn kummer_matches_brute_force() {
        for neg_n in [-5, -3, -1, 0] {
            for &b in &[0.7, 2.0, 5.3] {
                for &x in &[0.0, 0.3, 1.7, 9.0] {
                    let h = kummer_terminating(neg_n, b, x).unwrap();
                    let bf = kummer_brute(neg_n, b, x);
                    assert!(
                        (h - bf).abs() <= 1e-13 * bf.abs().max(1.0),
                        "1F1({neg_n};{b};{x}): {h} vs {bf}"
                    );
                }
            }
        }
    }

    #[test]
    fn kummer_domain_errors() {
        assert!(kummer_terminating(1, 3.0, 1.0).is_err());
        assert!(kummer_terminating(-1, 0.0, 1.0).is_err());
    }

    // ------------------------------------------------------------------
    // Legendre
    // ------------------------------------------------------------------

    #[test]
    fn assoc_legendre_examples() {
        assert_eq!(assoc_legendre(0, 0, 0.3).unwrap(), 1.0);
        // P_2(x) = (3x^2 - 1)/2
        assert!((assoc_legendre(2, 0, 0.5).unwrap() + 0.125).abs() < 1e-15);
        // P_{1,1}(0) = -sqrt(1 - 0) = -1  (Condon-Shortley)
        assert!((assoc_legendre(1, 1, 0.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn assoc_legendre_vs_rodrigues() {
        for l in 0..=4u32 {
            for m in 0..=l {
                for i in 0..9 {
                    let x = -0.96 + 0.24 * i as f64;
                    let fast = assoc_legendre(l, m as i32, x).unwrap();
                    let slow = rodrigues_assoc_legendre(l, m, x);
                    assert!(
                        (fast - slow).abs() <= 1e-13 * slow.abs().max(1.0),
                        "P({l},{m})({x}): {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn assoc_legendre_negative_m() {
        for l in 1..=4u32 {
            for m in 1..=l as i32 {
                let x = 0.37;
                let pneg = assoc_legendre(l, -m, x).unwrap();
                let ppos = assoc_legendre(l, m, x).unwrap();
                let want = (if m % 2 == 0 { 1.0 } else { -1.0 })
                    * factorial(l - m as u32)
                    / factorial(l + m as u32)
                    * ppos;
                assert!((pneg - want).abs() < 1e-14 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn assoc_legendre_domain_errors() {
        assert!(assoc_legendre(1, 2, 0.0).is_err());
        assert!(assoc_legendre(2, 0, 1.5).is_err());
    }

    // ------------------------------------------------------------------
    // spherical harmonics
    // ------------------------------------------------------------------

    #[test]
    fn sph_harmonic_closed_forms() {
        let y00 = sph_harmonic(0, 0, 1.1, 2.2).unwrap();
        assert!((y00.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(y00.im.abs() < 1e-15);
        let theta = 0.8;
        let y10 = sph_harmonic(1, 0, theta, 0.4).unwrap();
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * theta.cos()).abs() < 1e-15);
    }

    #[test]
    fn sph_harmonic_normalized() {
        let norm = sphere_integrate_default(|t, p| sph_harmonic(2, 1, t, p).unwrap().norm_sqr());
        assert!((norm - 1.0).abs() < 1e-12, "int |Y21|^2 = {norm}");
    }

    #[test]
    fn sph_harmonic_rejects_bad_m() {
        assert!(sph_harmonic(1, 2, 0.0, 0.0).is_err());
    }

    // ------------------------------------------------------------------
    // Clebsch-Gordan
    // ------------------------------------------------------------------

    #[test]
    fn cg_examples() {
        // <0,0;1/2,1/2|1/2,1/2> = 1
        assert!((clebsch_gordan(0, 0, 1, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        // <1,0;1/2,1/2|3/2,1/2> = sqrt(2/3)
        let v = clebsch_gordan(1, 0, 1, 3, 1).unwrap();
        assert!((v - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        // <1,1;1/2,1/2|3/2,3/2> = 1 (stretched)
        assert!((clebsch_gordan(1, 1, 1, 3, 3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cg_matches_racah_formula() {
        for l in 0..=4u32 {
            let two_l = 2 * l as i32;
            for &jt in &[two_l + 1, two_l - 1] {
                if jt < 1 {
                    continue;
                }
                for ml in -(l as i32)..=(l as i32) {
                    for &qt in &[1, -1] {
                        let mt = 2 * ml + qt;
                        if mt.abs() > jt {
                            continue;
                        }
                        let fast = clebsch_gordan(l, ml, qt, jt, mt).unwrap();
                        let slow = racah_cg(two_l, 2 * ml, 1, qt, jt, mt);
                        assert!(
                            (fast - slow).abs() < 1e-13,
                            "CG(l={l},ml={ml},q/2={qt},2j={jt}): {fast} vs {slow}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cg_orthogonality() {
        // sum_q <l,m-q;q|j,m><l,m-q;q|j',m> = delta_{jj'}
        for l in 1..=4u32 {
            let two_l = 2 * l as i32;
            for jt in [two_l - 1, two_l + 1] {
                for jt2 in [two_l - 1, two_l + 1] {
                    for mt in (-(two_l - 1)..=(two_l - 1)).step_by(2) {
                        let mut sum = 0.0;
                        for qt in [-1, 1] {
                            let ml = (mt - qt) / 2;
                            sum += clebsch_gordan(l, ml, qt, jt, mt).unwrap()
                                * clebsch_gordan(l, ml, qt, jt2, mt).unwrap();
                        }
                        let want = if jt == jt2 { 1.0 } else { 0.0 };
                        assert!(
                            (sum - want).abs() < 1e-14,
                            "orthogonality l={l} 2j={jt} 2j'={jt2} 2m={mt}: {sum}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cg_selection_rules_and_errors() {
        // m != ml + q -> 0
        assert_eq!(clebsch_gordan(1, 0, 1, 3, 3).unwrap(), 0.0);
        // invalid j -> domain error
        assert!(clebsch_gordan(1, 0, 1, 7, 1).is_err());
        assert!(clebsch_gordan(0, 0, 1, -1, 1).is_err());
    }

    // ------------------------------------------------------------------
    // spinor harmonics
    // ------------------------------------------------------------------

    #[test]
    fn spinor_s_states() {
        let up = spinor_harmonic(1, 0, 1, 0.7, 1.3).unwrap();
        assert!((up.upper.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(up.lower.norm() < 1e-15);
        let dn = spinor_harmonic(1, 0, -1, 0.7, 1.3).unwrap();
        assert!(dn.upper.norm() < 1e-15);
        assert!((dn.lower.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn spinor_normalization() {
        // int Omega^dagger Omega dOmega = 1 for (j,l,m) = (3/2, 1, 1/2)
        let n = sphere_integrate_default(|t, p| {
            let s = spinor_harmonic(3, 1, 1, t, p).unwrap();
            s.upper.norm_sqr() + s.lower.norm_sqr()
        });
        assert!((n - 1.0).abs() < 1e-12, "norm = {n}");
    }

    #[test]
    fn spinor_same_jm_different_l_orthogonal() {
        // Omega_{1/2,0,1/2} vs Omega_{1/2,1,1/2}
        let overlap = sphere_integrate_default(|t, p| {
            let a = spinor_harmonic(1, 0, 1, t, p).unwrap();
            let b = spinor_harmonic(1, 1, 1, t, p).unwrap();
            (a.upper.conj() * b.upper + a.lower.conj() * b.lower).re
        });
        assert!(overlap.abs() < 1e-10, "overlap = {overlap}");
    }

    #[test]
    fn spinor_rejects_invalid_labels() {
        assert!(spinor_harmonic(4, 1, 1, 0.0, 0.0).is_err());
        assert!(spinor_harmonic(3, 1, 5, 0.0, 0.0).is_err());
        assert!(spinor_harmonic(3, 1, 2, 0.0, 0.0).is_err());
    }
}
