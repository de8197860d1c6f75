//! Zolotarev numbers for pairs of real intervals and Zolotarev's extremal
//! rational function.
//!
//! For the symmetric condenser E = [−b, −a], F = [a, b] the number Z_k is
//! evaluated from its theta-function product, which is exactly the inverse
//! Grötzsch product with nome q = ρ^{−4k}, ρ = exp(π²/(2μ(a/b))). General
//! disjoint intervals are reduced to the symmetric case by a Möbius map, and
//! only the cross-ratio of the four endpoints survives.
//!
//! All values are carried as natural logarithms; Z_k for moderate k is far
//! below the smallest positive double.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::elliptic::{self, ModulusValue};
use crate::error::{Result, ZoloError};
use crate::numerics::golden_section_max;

/// Chebyshev grid size used to bracket the extrema of the sign approximant.
const NORMALIZATION_GRID: usize = 4096;

/// Geometry of a condenser with two real plates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalPair {
    /// E = [−b, −a], F = [a, b] with 0 < a < b.
    Symmetric { a: f64, b: f64 },
    /// E = [a, b], F = [c, d], disjoint and nondegenerate.
    General { a: f64, b: f64, c: f64, d: f64 },
}

impl IntervalPair {
    pub fn symmetric(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < b && b.is_finite()) {
            return Err(ZoloError::Geometry(format!(
                "symmetric pair needs 0 < a < b < ∞, got a = {a}, b = {b}"
            )));
        }
        Ok(IntervalPair::Symmetric { a, b })
    }

    pub fn general(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(ZoloError::Geometry("interval endpoints must be finite".into()));
        }
        if !(a < b && c < d) {
            return Err(ZoloError::Geometry(format!(
                "degenerate interval in [{a}, {b}], [{c}, {d}]"
            )));
        }
        if !(b < c || d < a) {
            return Err(ZoloError::Geometry(format!(
                "separation condition violated: [{a}, {b}] and [{c}, {d}] are not disjoint"
            )));
        }
        Ok(IntervalPair::General { a, b, c, d })
    }

    /// Endpoints (a, b, c, d) of E = [a, b] and F = [c, d].
    pub fn endpoints(&self) -> (f64, f64, f64, f64) {
        match *self {
            IntervalPair::Symmetric { a, b } => (-b, -a, a, b),
            IntervalPair::General { a, b, c, d } => (a, b, c, d),
        }
    }

    /// Absolute cross-ratio γ = |c−a||d−b| / (|c−b||d−a|) > 1.
    pub fn cross_ratio(&self) -> f64 {
        let (a, b, c, d) = self.endpoints();
        ((c - a) * (d - b)).abs() / ((c - b) * (d - a)).abs()
    }

    /// γ − 1 = |b−a||d−c| / (|c−b||d−a|), free of cancellation.
    pub fn cross_ratio_minus_one(&self) -> f64 {
        let (a, b, c, d) = self.endpoints();
        ((b - a) * (d - c)).abs() / ((c - b) * (d - a)).abs()
    }

    /// α = −1 + 2γ + 2√(γ² − γ), the half-width of the symmetric image
    /// [−α, −1] ∪ [1, α].
    pub fn alpha(&self) -> f64 {
        match *self {
            IntervalPair::Symmetric { a, b } => b / a,
            _ => {
                let g = self.cross_ratio();
                let gm1 = self.cross_ratio_minus_one();
                1.0 + 2.0 * gm1 + 2.0 * (g * gm1).sqrt()
            }
        }
    }

    /// The modulus μ is evaluated at: a/b for symmetric pairs, 1/√γ for
    /// general ones (where μ(1/α) = 2μ(1/√γ)).
    fn rate_modulus(&self) -> Result<(ModulusValue, f64)> {
        match *self {
            IntervalPair::Symmetric { a, b } => Ok((ModulusValue::from_ratio(a, b)?, 2.0)),
            _ => {
                let g = self.cross_ratio();
                let gm1 = self.cross_ratio_minus_one();
                let m = ModulusValue::with_complementary(1.0 / g.sqrt(), (gm1 / g).sqrt())
                    .or_else(|_| ModulusValue::new(1.0 / g.sqrt()))?;
                Ok((m, 4.0))
            }
        }
    }

    /// log ρ with ρ = exp(π²/(2μ(a/b))) (symmetric) or exp(π²/(4μ(1/√γ))).
    pub fn log_rho(&self) -> Result<f64> {
        let (m, factor) = self.rate_modulus()?;
        let mu = elliptic::grotzsch_mu(m)?;
        Ok(PI * PI / (factor * mu))
    }

    /// The Möbius map T with T(a) = −α, T(b) = −1, T(c) = 1, T(d) = α.
    pub fn transplant(&self) -> Mobius {
        let (a, b, c, _) = self.endpoints();
        let alpha = self.alpha();
        Mobius::through(&[(a, -alpha), (b, -1.0), (c, 1.0)])
    }
}

/// A real Möbius transformation z ↦ (p z + q)/(r z + s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl Mobius {
    /// The map sending each `from` to its `to`, from three real pairs.
    pub fn through(pairs: &[(f64, f64); 3]) -> Self {
        // rows of p w + q − x r w − x s = 0 written for (x = image, w = point)
        let rows: Vec<[f64; 4]> = pairs
            .iter()
            .map(|&(z, w)| [z, 1.0, -w * z, -w])
            .collect();
        let minor = |skip: usize| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            let m = |i: usize, j: usize| rows[i][cols[j]];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        };
        let v = [minor(0), -minor(1), minor(2), -minor(3)];
        let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        Mobius {
            p: v[0] / scale,
            q: v[1] / scale,
            r: v[2] / scale,
            s: v[3] / scale,
        }
    }

    pub fn apply(&self, z: f64) -> f64 {
        (self.p * z + self.q) / (self.r * z + self.s)
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        (z * self.p + self.q) / (z * self.r + self.s)
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            p: self.s,
            q: -self.q,
            r: -self.r,
            s: self.p,
        }
    }
}

/// Z_k together with the geometry it was computed for and its sandwich
/// bounds. Every quantity has a log-space form; linear fields underflow to
/// zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZolotarevEvaluation {
    pub k: usize,
    pub rho: f64,
    pub log_rho: f64,
    pub log_zk: f64,
    pub zk: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    pub lower: f64,
    pub upper: f64,
    pub underflow: bool,
}

impl ZolotarevEvaluation {
    /// Builds the evaluation from log ρ through the theta product with nome
    /// q = ρ^{−4k}.
    pub fn from_log_rho(log_rho: f64, k: usize) -> Result<Self> {
        if !(log_rho > 0.0) {
            return Err(ZoloError::Geometry(format!("decay rate log ρ = {log_rho} must be positive")));
        }
        let (log_zk, log_lower, log_upper) = if k == 0 {
            (0.0, 0.0, 0.0)
        } else {
            let kf = k as f64;
            let log_zk = if log_rho.is_infinite() {
                f64::NEG_INFINITY
            } else {
                elliptic::theta_quotient_log_kappa(-4.0 * kf * log_rho)?
            };
            let lead = 2.0 * LN_2 - 2.0 * kf * log_rho;
            let q = (-4.0 * kf * log_rho).exp();
            (log_zk, lead - 4.0 * q.ln_1p(), lead - 2.0 * q.ln_1p())
        };
        let underflow = log_zk < f64::MIN_POSITIVE.ln();
        Ok(Self {
            k,
            rho: log_rho.exp(),
            log_rho,
            log_zk,
            zk: if underflow { 0.0 } else { log_zk.exp() },
            log_lower,
            log_upper,
            lower: log_lower.exp(),
            upper: log_upper.exp(),
            underflow,
        })
    }

    /// Gonchar–Braess envelope (ρ^{−2k}, 16ρ^{−2k}) in log space.
    pub fn log_envelope(&self) -> (f64, f64) {
        let lead = -2.0 * self.k as f64 * self.log_rho;
        if self.k == 0 {
            (0.0, 0.0)
        } else {
            (lead, lead + 16f64.ln())
        }
    }

    /// log of 2√Z_k/(1+Z_k).
    pub fn log_sign_error(&self) -> f64 {
        LN_2 + 0.5 * self.log_zk - self.log_zk.exp().ln_1p()
    }
}

/// Z_k([−b, −a], [a, b]).
pub fn zolotarev_number(pair: &IntervalPair, k: usize) -> Result<ZolotarevEvaluation> {
    match pair {
        IntervalPair::Symmetric { .. } => ZolotarevEvaluation::from_log_rho(pair.log_rho()?, k),
        _ => Err(ZoloError::Geometry(
            "zolotarev_number expects a symmetric pair; use zolotarev_number_general".into(),
        )),
    }
}

/// Z_k(E, F) for any pair of disjoint real intervals via the Möbius
/// transplant onto [−α, −1] ∪ [1, α].
pub fn zolotarev_number_general(pair: &IntervalPair, k: usize) -> Result<ZolotarevEvaluation> {
    ZolotarevEvaluation::from_log_rho(pair.log_rho()?, k)
}

/// Zolotarev's best approximation r̃ to sgn on [−b, −a] ∪ [a, b] and the
/// extremal function R = (1 + s r̃)/(1 − s r̃), s = (1+Z_k)/(1−Z_k), for
/// Z_k([−b, −a], [a, b]).
///
/// R satisfies |R| ≤ √Z_k on [−b, −a], R(−z) = 1/R(z) and |R(iy)| = 1; it
/// equals (−1)^k ∏ (z + p_j)/(z − p_j) with real poles
/// p_j = b·dn((2j−1)K/(2k); κ) in [a, b], κ = √(1 − (a/b)²).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalRational {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub kappa: ModulusValue,
    /// c_1, …, c_{k−1}.
    pub c_coeffs: Vec<f64>,
    /// Normalization M of r̃.
    pub m_norm: f64,
    /// s = (1 + Z_k)/(1 − Z_k).
    pub mobius_scale: f64,
    pub zolotarev: ZolotarevEvaluation,
    /// Zeros of R in [−b, −a], ascending.
    pub zeros: Vec<Complex64>,
    /// Poles of R in [a, b], ascending.
    pub poles: Vec<Complex64>,
}

impl ExtremalRational {
    pub fn new(a: f64, b: f64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(ZoloError::Degree("extremal rational needs degree k ≥ 1".into()));
        }
        let pair = IntervalPair::symmetric(a, b)?;
        let zolotarev = zolotarev_number(&pair, k)?;
        let kappa = ModulusValue::from_ratio(a, b)?.complement();
        let quarter = elliptic::complete_elliptic_k(kappa)?;
        let kf = k as f64;

        let c_coeffs = (1..k)
            .map(|j| {
                let t = elliptic::jacobi_elliptic(j as f64 * quarter / kf, kappa)?;
                Ok(a * a * (t.sn / t.cn).powi(2))
            })
            .collect::<Result<Vec<f64>>>()?;

        let mut poles = (1..=k)
            .map(|j| {
                let t = elliptic::jacobi_elliptic((2 * j - 1) as f64 * quarter / (2.0 * kf), kappa)?;
                Ok(b * t.dn)
            })
            .collect::<Result<Vec<f64>>>()?;
        poles.sort_by(f64::total_cmp);
        let zeros: Vec<Complex64> = poles.iter().rev().map(|&p| Complex64::new(-p, 0.0)).collect();
        let poles: Vec<Complex64> = poles.into_iter().map(|p| Complex64::new(p, 0.0)).collect();

        let mut this = Self {
            k,
            a,
            b,
            kappa,
            c_coeffs,
            m_norm: 1.0,
            mobius_scale: (1.0 + zolotarev.zk) / (1.0 - zolotarev.zk),
            zolotarev,
            zeros,
            poles,
        };
        let (g_min, g_max) = this.shape_extrema();
        this.m_norm = 2.0 / (g_min + g_max);
        Ok(this)
    }

    /// G(x) = x ∏(x² + c_{2j}) / ∏(x² + c_{2j−1}), so that r̃ = M·G.
    pub fn shape(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut v = x;
        for (idx, &c) in self.c_coeffs.iter().enumerate() {
            // idx = j − 1; even j in the numerator, odd j in the denominator
            if idx % 2 == 1 {
                v *= x2 + c;
            } else {
                v /= x2 + c;
            }
        }
        v
    }

    fn shape_complex(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        let mut v = z;
        for (idx, &c) in self.c_coeffs.iter().enumerate() {
            if idx % 2 == 1 {
                v *= z2 + c;
            } else {
                v /= z2 + c;
            }
        }
        v
    }

    /// min and max of G over [a, b]: a Chebyshev grid brackets the
    /// stationary points, golden-section search refines them.
    fn shape_extrema(&self) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let n = NORMALIZATION_GRID;
        let xs: Vec<f64> = (0..n)
            .map(|i| {
                let t = (PI * i as f64 / (n - 1) as f64).cos();
                0.5 * (a + b) - 0.5 * (b - a) * t
            })
            .collect();
        let gs: Vec<f64> = xs.iter().map(|&x| self.shape(x)).collect();
        let mut g_min = gs[0].min(gs[n - 1]);
        let mut g_max = gs[0].max(gs[n - 1]);
        for i in 1..n - 1 {
            let (l, m, r) = (gs[i - 1], gs[i], gs[i + 1]);
            if m >= l && m >= r {
                let (_, v) = golden_section_max(|x| self.shape(x), xs[i - 1], xs[i + 1]);
                g_max = g_max.max(v).max(m);
            }
            if m <= l && m <= r {
                let (_, v) = golden_section_max(|x| -self.shape(x), xs[i - 1], xs[i + 1]);
                g_min = g_min.min(-v).min(m);
            }
        }
        (g_min, g_max)
    }

    /// r̃(x) = M·G(x).
    pub fn sign_approximant(&self, x: f64) -> f64 {
        self.m_norm * self.shape(x)
    }

    /// R through the Möbius form (1 + s r̃)/(1 − s r̃). Loses relative
    /// accuracy on [−b, −a] once √Z_k approaches machine precision.
    pub fn eval_mobius(&self, z: Complex64) -> Complex64 {
        let t = self.shape_complex(z) * (self.mobius_scale * self.m_norm);
        (Complex64::new(1.0, 0.0) + t) / (Complex64::new(1.0, 0.0) - t)
    }

    /// R through its factored form (−1)^k ∏ (z − z_j)/(z − p_j).
    pub fn eval(&self, z: f64) -> f64 {
        let mut v = if self.k.is_multiple_of(2) { 1.0 } else { -1.0 };
        for (zero, pole) in self.zeros.iter().zip(&self.poles) {
            v *= (z - zero.re) / (z - pole.re);
        }
        v
    }

    /// log |R(z)| from the factored form.
    pub fn log_abs_eval(&self, z: f64) -> f64 {
        self.zeros
            .iter()
            .zip(&self.poles)
            .map(|(zero, pole)| ((z - zero.re) / (z - pole.re)).abs().ln())
            .sum()
    }
}

/// Builds the extremal rational for Z_k([−b, −a], [a, b]).
pub fn extremal_rational(a: f64, b: f64, k: usize) -> Result<ExtremalRational> {
    ExtremalRational::new(a, b, k)
}

fn check_sign_domain(a: f64, b: f64, z: f64) -> Result<()> {
    let w = z.abs();
    if w >= a && w <= b {
        Ok(())
    } else {
        Err(ZoloError::Domain(format!(
            "point {z} lies outside [−{b}, −{a}] ∪ [{a}, {b}]"
        )))
    }
}

/// sgn(z) − r̃(z) on the given points of [−b, −a] ∪ [a, b].
pub fn extremal_sign_error(a: f64, b: f64, k: usize, grid: &[f64]) -> Result<Vec<f64>> {
    let r = ExtremalRational::new(a, b, k)?;
    sign_error_with(&r, grid)
}

/// sgn(z) − r̃(z) for an already constructed extremal rational.
pub fn sign_error_with(r: &ExtremalRational, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&z| {
            check_sign_domain(r.a, r.b, z)?;
            Ok(z.signum() - r.sign_approximant(z))
        })
        .collect()
}

/// Local extrema of the sign error on [a, b]: endpoints plus every interior
/// extremum of a uniform grid, refined by golden-section search. Returned as
/// (x, error) pairs in ascending x. Mirror through the origin for [−b, −a].
pub fn sign_error_extrema(r: &ExtremalRational, grid_points: usize) -> Vec<(f64, f64)> {
    let (a, b) = (r.a, r.b);
    let n = grid_points.max(3);
    let h = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect();
    let err = |x: f64| 1.0 - r.sign_approximant(x);
    let es: Vec<f64> = xs.iter().map(|&x| err(x)).collect();
    let mut out = vec![(a, es[0])];
    for i in 1..n - 1 {
        let (l, m, rr) = (es[i - 1], es[i], es[i + 1]);
        if m >= l && m >= rr && m > 0.0 {
            let (x, v) = golden_section_max(err, xs[i - 1], xs[i + 1]);
            out.push((x, v));
        } else if m <= l && m <= rr && m < 0.0 {
            let (x, v) = golden_section_max(|x| -err(x), xs[i - 1], xs[i + 1]);
            out.push((x, -v));
        }
    }
    out.push((b, es[n - 1]));
    out
}

/// Number of equioscillation clusters in a sampled error curve: samples with
/// |e| ≥ (1 − `rel_tol`)·max|e| are alternation points, and a run of them
/// with one sign counts once. Runs of equal sign separated only by
/// sub-threshold samples are merged, so a curve that fails to alternate is
/// undercounted rather than passed.
pub fn count_alternation_clusters(errors: &[f64], rel_tol: f64) -> usize {
    let max = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let threshold = (1.0 - rel_tol) * max;
    let mut count = 0;
    let mut last_sign = 0.0;
    for &e in errors {
        if e.abs() >= threshold {
            let s = e.signum();
            if s != last_sign {
                count += 1;
                last_sign = s;
            }
        }
    }
    count
}

/// Uniform grid on [a, b] merged with the refined extrema of the sign
/// error, ascending. Sampling here resolves the maxima to full precision.
pub fn sign_error_sample_points(r: &ExtremalRational, grid_points: usize) -> Vec<f64> {
    let n = grid_points.max(2);
    let h = (r.b - r.a) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { r.b } else { r.a + i as f64 * h }).collect();
    xs.extend(sign_error_extrema(r, n.min(20_000)).into_iter().map(|(x, _)| x));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// (log sup_{[−b,−a]} |R|, log inf_{[a,b]} |R|) from the factored form on a
/// uniform grid of each plate, with local extrema refined by golden-section
/// search.
pub fn extremal_log_sup_inf(r: &ExtremalRational, grid_points: usize) -> (f64, f64) {
    let n = grid_points.max(3);
    let scan = |lo: f64, hi: f64, sign: f64| {
        // maximizes sign·log|R| over [lo, hi]
        let f = |x: f64| sign * r.log_abs_eval(x);
        let h = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let mut best = vs[0].max(vs[n - 1]);
        for i in 1..n - 1 {
            if vs[i].is_finite() && vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] {
                best = best.max(golden_section_max(f, xs[i - 1], xs[i + 1]).1);
            }
        }
        sign * best
    };
    (scan(-r.b, -r.a, 1.0), scan(r.a, r.b, -1.0))
}

/// E_k([η, 1]) = min over Blaschke products of degree k of the max modulus,
/// from its own product 2ρ^{−k} ∏ (1+ρ^{−8τk})²/(1+ρ^{4k−8τk})². Log-space.
pub fn blaschke_log_ek(eta: f64, k: usize) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(ZoloError::Domain(format!("η = {eta} outside (0, 1)")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let log_rho = IntervalPair::symmetric(eta, 1.0)?.log_rho()?;
    let kf = k as f64;
    let mut sum = 0.0;
    let mut tau = 1.0;
    loop {
        let small = (-8.0 * tau * kf * log_rho).exp();
        let big = ((4.0 * kf - 8.0 * tau * kf) * log_rho).exp();
        if big < 8.673_617_379_884_035e-19 {
            break;
        }
        sum += small.ln_1p() - big.ln_1p();
        tau += 1.0;
    }
    Ok(LN_2 - kf * log_rho + 2.0 * sum)
}

/// E_k([η, 1]) in linear scale.
pub fn blaschke_ek(eta: f64, k: usize) -> Result<f64> {
    Ok(blaschke_log_ek(eta, k)?.exp())
}

/// Lower and upper bounds 2ρ^{−k}/(1+ρ^{−4k})² ≤ E_k ≤ 2ρ^{−k}/(1+ρ^{−4k}), log-space.
pub fn blaschke_log_bounds(eta: f64, k: usize) -> Result<(f64, f64)> {
    let log_rho = IntervalPair::symmetric(eta, 1.0)?.log_rho()?;
    let kf = k as f64;
    let q = (-4.0 * kf * log_rho).exp();
    let lead = LN_2 - kf * log_rho;
    Ok((lead - 2.0 * q.ln_1p(), lead - q.ln_1p()))
}

/// E_{k,k}: the minimax error of the best type-(k, k) approximation to sgn on
/// [−b, −a] ∪ [a, b], from the product 4ρ^{−k} ∏ (1+ρ^{−4τk})⁴/(1+ρ^{2k−4τk})⁴.
/// Log-space.
pub fn sign_minimax_log_ekk(a: f64, b: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(ZoloError::Degree("E_{k,k} needs k ≥ 1".into()));
    }
    let log_rho = IntervalPair::symmetric(a, b)?.log_rho()?;
    elliptic::theta_quotient_log_kappa(-2.0 * k as f64 * log_rho)
}

pub fn sign_minimax_ekk(a: f64, b: f64, k: usize) -> Result<f64> {
    Ok(sign_minimax_log_ekk(a, b, k)?.exp())
}

/// 4ρ^{−k}/(1+ρ^{−2k})⁴ ≤ E_{k,k} ≤ 4ρ^{−k}/(1+ρ^{−2k})², log-space.
pub fn sign_minimax_log_bounds(a: f64, b: f64, k: usize) -> Result<(f64, f64)> {
    let log_rho = IntervalPair::symmetric(a, b)?.log_rho()?;
    let kf = k as f64;
    let q = (-2.0 * kf * log_rho).exp();
    let lead = 2.0 * LN_2 - kf * log_rho;
    Ok((lead - 4.0 * q.ln_1p(), lead - 2.0 * q.ln_1p()))
}

/// ℓ = tan(π/(2n)) for the Krylov reduction.
pub fn krylov_ell(n: usize) -> f64 {
    (PI / (2.0 * n as f64)).tan()
}

fn krylov_pair(n: usize) -> Result<IntervalPair> {
    if n < 2 || n % 2 == 1 {
        return Err(ZoloError::Parity(format!(
            "Krylov reduction needs an even n ≥ 2 (got {n}); drop a column first"
        )));
    }
    let ell = krylov_ell(n);
    IntervalPair::symmetric(ell, 1.0 / ell)
}

/// log of 2√Z_k/(1+Z_k) with Z_k = Z_k([−1/ℓ, −ℓ], [ℓ, 1/ℓ]), ℓ = tan(π/(2n)).
/// This bounds Z_{2k} (and Z_{2k+1}) of the real line against the arcs
/// holding the spectrum of the circulant shift.
pub fn krylov_log_z2k_bound(n: usize, k: usize) -> Result<f64> {
    if k == 0 {
        krylov_pair(n)?;
        return Ok(0.0);
    }
    if n == 2 {
        // ℓ = 1: the arcs collapse to ±i and Z_k vanishes
        return Ok(f64::NEG_INFINITY);
    }
    let z = zolotarev_number(&krylov_pair(n)?, k)?;
    Ok(z.log_sign_error())
}

pub fn krylov_z2k_bound(n: usize, k: usize) -> Result<f64> {
    Ok(krylov_log_z2k_bound(n, k)?.exp())
}

/// log ρ for the Krylov rate ρ = exp(π²/(2μ(tan(π/(2n))²))).
pub fn krylov_log_rho(n: usize) -> Result<f64> {
    if n == 2 {
        return Ok(f64::INFINITY);
    }
    krylov_pair(n)?.log_rho()
}

/// Zeros and poles of the extremal rational for the pair, used as ADI shifts.
///
/// Zeros lie in E (where the rational is small), poles in F; both are real
/// and sorted ascending. For general pairs the symmetric shifts are pulled
/// back through the Möbius transplant.
pub fn adi_shifts(pair: &IntervalPair, k: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if k == 0 {
        return Err(ZoloError::Degree("ADI needs k ≥ 1 shifts".into()));
    }
    match *pair {
        IntervalPair::Symmetric { a, b } => {
            let r = ExtremalRational::new(a, b, k)?;
            Ok((r.zeros, r.poles))
        }
        IntervalPair::General { .. } => {
            let alpha = pair.alpha();
            let r = ExtremalRational::new(1.0, alpha, k)?;
            let back = pair.transplant().inverse();
            let map = |v: &[Complex64]| {
                let mut out: Vec<Complex64> = v.iter().map(|&z| back.apply_complex(z)).collect();
                out.sort_by(|x, y| x.re.total_cmp(&y.re));
                out
            };
            Ok((map(&r.zeros), map(&r.poles)))
        }
    }
}
