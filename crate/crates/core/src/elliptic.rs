//! Elliptic special functions in double precision.
//!
//! Everything here is parameterised by the modulus λ (not the parameter
//! m = λ²) and carries the complementary modulus λ' = √(1−λ²) alongside it,
//! so that quantities such as μ(λ) stay accurate when λ is within a few ulp
//! of 0 or 1.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{Result, ZoloError};

const AGM_MAX_ITER: usize = 64;
const LANDEN_MAX_STAGES: usize = 16;
const LANDEN_EXIT_MODULUS: f64 = 1e-16;
/// Product factors `1 + x` with `x < 2^-60` are dropped.
const PRODUCT_CUTOFF: f64 = 8.673_617_379_884_035e-19;
const MAX_PRODUCT_TERMS: usize = 1_000_000;

/// An elliptic modulus together with its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusValue {
    lambda: f64,
    complementary: f64,
}

impl ModulusValue {
    /// Builds the modulus from λ alone; λ' is formed as √((1−λ)(1+λ)).
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(ZoloError::Domain(format!("modulus {lambda} outside [0, 1]")));
        }
        let complementary = ((1.0 - lambda) * (1.0 + lambda)).sqrt();
        Ok(Self { lambda, complementary })
    }

    /// Builds the modulus from an accurately known pair (λ, λ').
    pub fn with_complementary(lambda: f64, complementary: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&complementary) {
            return Err(ZoloError::Domain(format!(
                "modulus pair ({lambda}, {complementary}) outside [0, 1]"
            )));
        }
        let defect = lambda.mul_add(lambda, complementary * complementary) - 1.0;
        if defect.abs() > 4.0 * f64::EPSILON {
            return Err(ZoloError::Domain(format!(
                "λ² + λ'² − 1 = {defect:e} for ({lambda}, {complementary})"
            )));
        }
        Ok(Self { lambda, complementary })
    }

    /// The modulus whose complement is `complementary`.
    pub fn from_complementary(complementary: f64) -> Result<Self> {
        Ok(Self::new(complementary)?.complement())
    }

    /// λ = a/b for 0 ≤ a ≤ b, with λ' = √((b−a)(b+a))/b computed without
    /// cancellation.
    pub fn from_ratio(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b > 0.0 && a <= b) || !b.is_finite() {
            return Err(ZoloError::Domain(format!("ratio {a}/{b} is not in [0, 1]")));
        }
        let lambda = a / b;
        let complementary = (((b - a) / b) * ((b + a) / b)).sqrt();
        Ok(Self {
            lambda,
            complementary: complementary.min(1.0),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn complementary(&self) -> f64 {
        self.complementary
    }

    /// The complementary modulus (λ', λ).
    pub fn complement(&self) -> Self {
        Self {
            lambda: self.complementary,
            complementary: self.lambda,
        }
    }
}

/// Arithmetic-geometric mean of two nonnegative numbers and the number of
/// iterations it took.
pub fn agm(a: f64, b: f64) -> (f64, usize) {
    let (mut a, mut b) = (a, b);
    if a == 0.0 || b == 0.0 {
        return (0.0, 0);
    }
    for it in 1..=AGM_MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        a = a_next;
        b = b_next;
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            return (0.5 * (a + b), it);
        }
    }
    (0.5 * (a + b), AGM_MAX_ITER)
}

/// Complete elliptic integral of the first kind, K(λ) = π / (2 AGM(1, λ')).
pub fn complete_elliptic_k(m: ModulusValue) -> Result<f64> {
    if m.complementary == 0.0 {
        return Err(ZoloError::Divergence("K(λ) diverges at λ = 1".into()));
    }
    Ok(PI / (2.0 * agm(1.0, m.complementary).0))
}

/// Grötzsch ring function μ(λ) = (π/2) K(λ')/K(λ).
pub fn grotzsch_mu(m: ModulusValue) -> Result<f64> {
    if m.lambda == 0.0 {
        return Err(ZoloError::Domain("μ(0) is infinite".into()));
    }
    // (π/2) K(λ')/K(λ) = (π/2) AGM(1, λ') / AGM(1, λ)
    Ok(FRAC_PI_2 * agm(1.0, m.complementary).0 / agm(1.0, m.lambda).0)
}

/// Two-sided elementary bound log(2(1+λ')/λ) on μ(λ), which itself is at most
/// log(4/λ). Returned as (sharper, weaker).
pub fn grotzsch_mu_log_bounds(m: ModulusValue) -> (f64, f64) {
    let sharp = (2.0 * (1.0 + m.complementary) / m.lambda).ln();
    let weak = (4.0 / m.lambda).ln();
    (sharp, weak)
}

/// log κ for κ = 4√q ∏ (1+q^{2τ})⁴/(1+q^{2τ−1})⁴, with q supplied as log q so
/// that nomes far below the double range are handled.
pub fn theta_quotient_log_kappa(log_q: f64) -> Result<f64> {
    if !(log_q < 0.0) {
        return Err(ZoloError::Domain(format!("nome log q = {log_q} must be negative")));
    }
    let q = log_q.exp();
    let mut sum = 0.0;
    let mut q_odd = q; // q^{2τ−1}
    let q2 = q * q;
    for _ in 0..MAX_PRODUCT_TERMS {
        if q_odd < PRODUCT_CUTOFF {
            break;
        }
        let q_even = q_odd * q;
        sum += q_even.ln_1p() - q_odd.ln_1p();
        q_odd *= q2;
    }
    Ok(2.0 * LN_2 + 0.5 * log_q + 4.0 * sum)
}

/// Inverse of the Grötzsch function through the nome: κ with q = exp(−2μ(κ)).
pub fn theta_quotient_kappa(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(ZoloError::Domain(format!("nome {q} outside (0, 1)")));
    }
    Ok(theta_quotient_log_kappa(q.ln())?.exp())
}

/// The modulus λ with μ(λ) = `mu`, returned with an accurate complement
/// (using μ(λ)μ(λ') = π²/4).
pub fn grotzsch_mu_inverse(mu: f64) -> Result<ModulusValue> {
    if !(mu > 0.0) || mu.is_infinite() {
        return Err(ZoloError::Domain(format!("μ value {mu} must be positive and finite")));
    }
    let lambda = theta_quotient_log_kappa(-2.0 * mu)?.exp().min(1.0);
    let complementary = theta_quotient_log_kappa(-PI * PI / (2.0 * mu))?.exp().min(1.0);
    Ok(ModulusValue { lambda, complementary })
}

/// Jacobi elliptic functions (sn, cn, dn) at `u` for modulus `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Jacobi sn(u; λ).
pub fn jacobi_sn(u: f64, m: ModulusValue) -> Result<f64> {
    Ok(jacobi_elliptic(u, m)?.sn)
}

/// Jacobi sn, cn and dn by descending Landen transformations.
///
/// The argument is reduced into [0, K]; on (K/2, K] the quarter-period
/// reflection sn(K−w) = cn(w)/dn(w), cn(K−w) = λ' sn(w)/dn(w),
/// dn(K−w) = λ'/dn(w) is used so that cn and dn keep full relative accuracy
/// near the quarter period.
pub fn jacobi_elliptic(u: f64, m: ModulusValue) -> Result<JacobiTriple> {
    if m.complementary == 0.0 {
        return Err(ZoloError::Domain(
            "sn at modulus 1 degenerates to tanh and is not supported".into(),
        ));
    }
    if !u.is_finite() {
        return Err(ZoloError::Domain(format!("argument {u} is not finite")));
    }
    let quarter = complete_elliptic_k(m)?;
    let odd_sign = if u < 0.0 { -1.0 } else { 1.0 };
    let mut r = u.abs() % (4.0 * quarter);
    let mut sn_sign = odd_sign;
    let mut cn_sign = 1.0;
    if r >= 2.0 * quarter {
        r -= 2.0 * quarter;
        sn_sign = -sn_sign;
        cn_sign = -cn_sign;
    }
    if r > quarter {
        r = 2.0 * quarter - r;
        cn_sign = -cn_sign;
    }
    let t = if r <= 0.5 * quarter {
        landen_triple(r, m)
    } else {
        let w = landen_triple(quarter - r, m);
        JacobiTriple {
            sn: w.cn / w.dn,
            cn: m.complementary * w.sn / w.dn,
            dn: m.complementary / w.dn,
        }
    };
    Ok(JacobiTriple {
        sn: sn_sign * t.sn,
        cn: cn_sign * t.cn,
        dn: t.dn,
    })
}

fn landen_triple(u: f64, m: ModulusValue) -> JacobiTriple {
    // descending moduli k_{n+1} = (1−k'_n)/(1+k'_n) = (k_n/(1+k'_n))², with
    // 1 − k_{n+1} = 2k'_n/(1+k'_n) kept separately
    let mut stages = [(0.0f64, 0.0f64); LANDEN_MAX_STAGES];
    let mut n = 0;
    let (mut k, mut kc) = (m.lambda, m.complementary);
    let mut v = u;
    while k >= LANDEN_EXIT_MODULUS && n < LANDEN_MAX_STAGES {
        let ratio = k / (1.0 + kc);
        let k1 = ratio * ratio;
        let one_minus_k1 = 2.0 * kc / (1.0 + kc);
        let kc1 = 2.0 * kc.sqrt() / (1.0 + kc);
        v /= 1.0 + k1;
        stages[n] = (k1, one_minus_k1);
        n += 1;
        k = k1;
        kc = kc1;
    }
    let (mut s, mut c) = v.sin_cos();
    let mut d = (1.0 - k * k * s * s).sqrt();
    for &(k1, one_minus_k1) in stages[..n].iter().rev() {
        let den = 1.0 + k1 * s * s;
        let s_next = (1.0 + k1) * s / den;
        let c_next = c * d / den;
        let d_next = (one_minus_k1 + k1 * c * c) / den;
        s = s_next;
        c = c_next;
        d = d_next;
    }
    JacobiTriple { sn: s, cn: c, dn: d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Trapezoid rule for ∫₀^{π/2} dθ / √(1 − λ² sin²θ); the integrand is
    /// smooth and periodic so the rule converges geometrically.
    fn k_by_quadrature(lambda: f64) -> f64 {
        let n = 20_000;
        let h = FRAC_PI_2 / n as f64;
        let f = |t: f64| 1.0 / (1.0 - lambda * lambda * t.sin().powi(2)).sqrt();
        let mut s = 0.5 * (f(0.0) + f(FRAC_PI_2));
        for i in 1..n {
            s += f(i as f64 * h);
        }
        s * h
    }

    /// Incomplete integral F(φ) by composite Simpson.
    fn incomplete_f(phi: f64, lambda: f64) -> f64 {
        let n = 20_000;
        let h = phi / n as f64;
        let f = |t: f64| 1.0 / (1.0 - lambda * lambda * t.sin().powi(2)).sqrt();
        let mut s = f(0.0) + f(phi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        let k = complete_elliptic_k(ModulusValue::new(0.0).unwrap()).unwrap();
        assert_eq!(k, FRAC_PI_2);
    }

    #[test]
    fn k_matches_quadrature() {
        let oracle = k_by_quadrature(0.5f64.sqrt());
        // frozen from the quadrature oracle
        assert_relative_eq!(oracle, 1.854_074_677_301_372, max_relative = 1e-13);
        let k = complete_elliptic_k(ModulusValue::new(0.5f64.sqrt()).unwrap()).unwrap();
        assert_relative_eq!(k, oracle, max_relative = 1e-14);
        for &l in &[0.1, 0.3, 0.77, 0.95] {
            let k = complete_elliptic_k(ModulusValue::new(l).unwrap()).unwrap();
            assert_relative_eq!(k, k_by_quadrature(l), max_relative = 1e-13);
        }
    }

    #[test]
    fn k_diverges_at_one() {
        let m = ModulusValue::new(1.0).unwrap();
        assert!(matches!(complete_elliptic_k(m), Err(ZoloError::Divergence(_))));
        assert!(matches!(ModulusValue::new(1.5), Err(ZoloError::Domain(_))));
        assert!(matches!(ModulusValue::new(-0.1), Err(ZoloError::Domain(_))));
    }

    #[test]
    fn agm_converges_quickly() {
        for &l in &[0.0, 0.5, 0.9, 0.999_999, 1.0 - 1e-15] {
            let m = ModulusValue::new(l).unwrap();
            let (_, iters) = agm(1.0, m.complementary());
            assert!(iters <= 12, "λ = {l}: {iters} iterations");
        }
    }

    #[test]
    fn mu_special_values() {
        let m = ModulusValue::new(0.5f64.sqrt()).unwrap();
        assert_relative_eq!(grotzsch_mu(m).unwrap(), FRAC_PI_2, max_relative = 1e-15);
        assert_eq!(grotzsch_mu(ModulusValue::new(1.0).unwrap()).unwrap(), 0.0);
        assert!(grotzsch_mu(ModulusValue::new(0.0).unwrap()).is_err());
    }

    #[test]
    fn mu_between_log_bounds() {
        let m = ModulusValue::new(0.1).unwrap();
        let mu = grotzsch_mu(m).unwrap();
        // log(2(1+λ')/λ) is the sharper of the two upper bounds, not a lower one
        assert!(mu <= (2.0 * (1.0 + 0.99f64.sqrt()) / 0.1).ln() + 1e-12);
        assert!(mu <= 40f64.ln());
        for i in 1..100 {
            let m = ModulusValue::new(i as f64 / 100.0).unwrap();
            let mu = grotzsch_mu(m).unwrap();
            let (sharp, weak) = grotzsch_mu_log_bounds(m);
            assert!(mu <= sharp + 1e-14 && sharp <= weak);
        }
    }

    #[test]
    fn mu_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=1000 {
            let mu = grotzsch_mu(ModulusValue::new(i as f64 / 1000.0).unwrap()).unwrap();
            assert!(mu < prev);
            prev = mu;
        }
    }

    #[test]
    fn gauss_and_landen_transformations() {
        for i in 1..100 {
            let l = i as f64 / 100.0;
            let mu = grotzsch_mu(ModulusValue::new(l).unwrap()).unwrap();
            let gauss = grotzsch_mu(ModulusValue::new(2.0 * l.sqrt() / (1.0 + l)).unwrap()).unwrap();
            assert_relative_eq!(gauss, mu / 2.0, max_relative = 1e-12);
            let lc = ModulusValue::new(l).unwrap().complementary();
            let landen = grotzsch_mu(ModulusValue::new((1.0 - l) / (1.0 + l)).unwrap()).unwrap();
            let rhs = 2.0 * grotzsch_mu(ModulusValue::new(lc).unwrap()).unwrap();
            assert_relative_eq!(landen, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn theta_quotient_round_trip() {
        let mu = grotzsch_mu(ModulusValue::new(0.3).unwrap()).unwrap();
        assert_relative_eq!(theta_quotient_kappa((-2.0 * mu).exp()).unwrap(), 0.3, max_relative = 1e-12);
        assert_relative_eq!(
            theta_quotient_kappa((-PI).exp()).unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-12
        );
        let q = 1e-20;
        assert_relative_eq!(theta_quotient_kappa(q).unwrap(), 4.0 * q.sqrt(), max_relative = 1e-15);
        assert!(theta_quotient_kappa(1.0).is_err());
        // log-space survives nomes below the double range
        let lk = theta_quotient_log_kappa(-2000.0).unwrap();
        assert_relative_eq!(lk, 4f64.ln() - 1000.0, max_relative = 1e-15);
    }

    #[test]
    fn mu_inverse_round_trip() {
        for &l in &[1e-12, 0.01, 0.5, 0.99, 1.0 - 1e-9] {
            let m = ModulusValue::new(l).unwrap();
            let back = grotzsch_mu_inverse(grotzsch_mu(m).unwrap()).unwrap();
            assert_relative_eq!(back.lambda(), l, max_relative = 1e-11);
            assert_relative_eq!(back.complementary(), m.complementary(), max_relative = 1e-9);
        }
    }

    #[test]
    fn sn_basic_values() {
        let m = ModulusValue::new(0.5).unwrap();
        assert_eq!(jacobi_sn(0.0, m).unwrap(), 0.0);
        let k = complete_elliptic_k(m).unwrap();
        assert!((jacobi_sn(k, m).unwrap() - 1.0).abs() < 1e-14);
        assert!(jacobi_sn(1.0, ModulusValue::new(1.0).unwrap()).is_err());
        // modulus zero is the circular case
        let z = ModulusValue::new(0.0).unwrap();
        assert_relative_eq!(jacobi_sn(0.7, z).unwrap(), 0.7f64.sin(), max_relative = 1e-15);
    }

    #[test]
    fn sn_half_period_against_inverted_integral() {
        let kappa = 0.99;
        let m = ModulusValue::new(kappa).unwrap();
        let k = complete_elliptic_k(m).unwrap();
        let u = k / 2.0;
        // bisection on φ ↦ F(φ) − u
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if incomplete_f(mid, kappa) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = (0.5 * (lo + hi)).sin();
        let sn = jacobi_sn(u, m).unwrap();
        assert_relative_eq!(sn, oracle, max_relative = 1e-11);
        assert_relative_eq!(sn, 1.0 / (1.0 + m.complementary()).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn triple_identities_and_periodicity() {
        for &l in &[0.2, 0.9, 0.999_999] {
            let m = ModulusValue::new(l).unwrap();
            let k = complete_elliptic_k(m).unwrap();
            for i in -40..=40 {
                let u = i as f64 * k / 9.3;
                let t = jacobi_elliptic(u, m).unwrap();
                assert!((t.sn * t.sn + t.cn * t.cn - 1.0).abs() < 1e-14);
                assert!((l * l * t.sn * t.sn + t.dn * t.dn - 1.0).abs() < 1e-14);
                let shifted = jacobi_elliptic(u + 4.0 * k, m).unwrap();
                assert!((shifted.sn - t.sn).abs() < 1e-12);
                let neg = jacobi_elliptic(-u, m).unwrap();
                assert_eq!(neg.sn, -t.sn);
            }
        }
    }

    #[test]
    fn dn_keeps_relative_accuracy_near_quarter_period() {
        // dn(K) = λ' even when λ' is tiny
        let m = ModulusValue::from_ratio(1.0, 1e6).unwrap().complement();
        let k = complete_elliptic_k(m).unwrap();
        let t = jacobi_elliptic(k, m).unwrap();
        assert_relative_eq!(t.dn, 1e-6, max_relative = 1e-13);
        assert_relative_eq!(t.sn, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn ratio_construction_is_consistent() {
        for &(a, b) in &[(1.0, 1.1), (1.0, 10.0), (3.0, 3.0 + 1e-12), (1e-9, 1.0)] {
            let m = ModulusValue::from_ratio(a, b).unwrap();
            assert!(ModulusValue::with_complementary(m.lambda(), m.complementary()).is_ok());
        }
    }
}
