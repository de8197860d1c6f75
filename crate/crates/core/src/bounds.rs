//! Singular value decay bounds, ε-rank bounds and condition number floors
//! for the structured classes, as index-keyed curves in log space.

use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZoloError};
use crate::matrices::{io::format_f64, MatrixClass, StructuredMatrixSpec};
use crate::zolotarev::{krylov_log_rho, IntervalPair};

/// γ = exp(4G/π), G Catalan's constant, in κ₂(H_n) ≥ γ^{n−1}/(16n).
pub const HANKEL_CONDITION_GAMMA: f64 = 3.209_912_300_728_158;

const PI2: f64 = PI * PI;

/// Which estimate of the Grötzsch function feeds the decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundVariant {
    /// Exact μ through the elliptic machinery.
    #[default]
    MuTight,
    /// μ replaced by its logarithmic upper bounds.
    LogWeak,
}

impl BoundVariant {
    pub fn tag(self) -> &'static str {
        match self {
            BoundVariant::MuTight => "mu-tight",
            BoundVariant::LogWeak => "log-weak",
        }
    }
}

impl std::str::FromStr for BoundVariant {
    type Err = ZoloError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu-tight" | "tight" | "mu" => Ok(BoundVariant::MuTight),
            "log-weak" | "weak" | "log" => Ok(BoundVariant::LogWeak),
            other => Err(ZoloError::Parse(format!("unknown bound variant '{other}'"))),
        }
    }
}

/// Geometry and size a bound is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    /// E and F; Pick uses the symmetric pair (a, b).
    pub geometry: Option<IntervalPair>,
    pub n: usize,
}

impl BoundParams {
    pub fn pick(a: f64, b: f64, n: usize) -> Result<Self> {
        Ok(Self { geometry: Some(IntervalPair::symmetric(a, b)?), n })
    }

    pub fn intervals(a: f64, b: f64, c: f64, d: f64, n: usize) -> Result<Self> {
        Ok(Self { geometry: Some(IntervalPair::general(a, b, c, d)?), n })
    }

    pub fn size(n: usize) -> Self {
        Self { geometry: None, n }
    }

    fn pair(&self, class: MatrixClass) -> Result<IntervalPair> {
        self.geometry.ok_or_else(|| {
            ZoloError::Geometry(format!("{} bounds need an interval pair", class.name()))
        })
    }

    fn symmetric_ratio(&self, class: MatrixClass) -> Result<(f64, f64)> {
        match self.pair(class)? {
            IntervalPair::Symmetric { a, b } => Ok((a, b)),
            IntervalPair::General { .. } => Err(ZoloError::Geometry(
                "Pick bounds take a symmetric pair 0 < a < b".into(),
            )),
        }
    }
}

/// Certified bound on σ_j/σ₁, j = 1, …, len.
///
/// Index j = 1 + νk + r (0 ≤ r < ν) gets the k-step certificate
/// min(1, C·exp(−rate·(k − offset))); the ratio form σ_{j+νk} ≤ step(k)·σ_j
/// holds with the same step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub class: MatrixClass,
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub variant: BoundVariant,
    pub nu: usize,
    pub log_const: f64,
    pub log_rate: f64,
    pub offset: f64,
}

impl BoundCurve {
    /// Number of singular values covered.
    pub fn len(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// log of the k-step certificate, capped at 0.
    pub fn log_step(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let kk = k as f64 - self.offset;
        let v = if self.log_rate.is_infinite() {
            if kk > 0.0 {
                f64::NEG_INFINITY
            } else {
                self.log_const
            }
        } else {
            self.log_const - self.log_rate * kk
        };
        v.min(0.0)
    }

    /// log of the bound on σ_j/σ₁ (1-based j).
    pub fn log_value(&self, j: usize) -> f64 {
        assert!(j >= 1, "indices are 1-based");
        self.log_step((j - 1) / self.nu)
    }

    pub fn value(&self, j: usize) -> f64 {
        self.log_value(j).exp()
    }

    pub fn log10_values(&self) -> Vec<f64> {
        (1..=self.len()).map(|j| self.log_value(j) / LN_10).collect()
    }

    /// CSV: index, log10_bound, variant.
    pub fn to_csv(&self, comment: &str) -> String {
        let mut out = format!("# {comment}\nindex,log10_bound,variant\n");
        for (i, v) in self.log10_values().iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, format_f64(*v), self.variant.tag()));
        }
        out
    }
}

fn curve(
    class: MatrixClass,
    label: &str,
    (rows, cols): (usize, usize),
    variant: BoundVariant,
    nu: usize,
    (log_const, log_rate, offset): (f64, f64, f64),
) -> BoundCurve {
    BoundCurve { class, label: label.into(), rows, cols, variant, nu, log_const, log_rate, offset }
}

/// Pick matrices on [a, b]: σ_{1+2k}/σ₁ ≤ 4ρ^{−2k}, ρ = exp(π²/(2μ(a/b))),
/// or μ(a/b) → log(4b/a) for the weak variant.
pub fn pick_bound(a: f64, b: f64, n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    let pair = IntervalPair::symmetric(a, b)?;
    let rate = match variant {
        BoundVariant::MuTight => 2.0 * pair.log_rho()?,
        BoundVariant::LogWeak => PI2 / (4.0 * b / a).ln(),
    };
    Ok(curve(MatrixClass::Pick, "pick", (n, n), variant, 2, (4f64.ln(), rate, 0.0)))
}

fn cross_ratio_rate(pair: &IntervalPair, variant: BoundVariant) -> Result<f64> {
    Ok(match variant {
        BoundVariant::MuTight => 2.0 * pair.log_rho()?,
        BoundVariant::LogWeak => PI2 / (16.0 * pair.cross_ratio()).ln(),
    })
}

/// Cauchy matrices with x ∈ [a, b], y ∈ [c, d]: σ_{j+k} ≤ 4ρ^{−2k} σ_j with
/// ρ = exp(π²/(4μ(1/√γ))); the weak variant uses 4μ(1/√γ) → 2 log(16γ).
pub fn cauchy_bound(a: f64, b: f64, c: f64, d: f64, m: usize, n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    let pair = IntervalPair::general(a, b, c, d)?;
    let rate = cross_ratio_rate(&pair, variant)?;
    Ok(curve(MatrixClass::Cauchy, "cauchy", (m, n), variant, 1, (4f64.ln(), rate, 0.0)))
}

/// Löwner matrices: the Cauchy rate with stride ν = 2.
pub fn loewner_bound(a: f64, b: f64, c: f64, d: f64, m: usize, n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    let pair = IntervalPair::general(a, b, c, d)?;
    let rate = cross_ratio_rate(&pair, variant)?;
    Ok(curve(MatrixClass::Loewner, "loewner", (m, n), variant, 2, (4f64.ln(), rate, 0.0)))
}

/// n × n Hilbert matrix as a Cauchy matrix on [½, n−½], [−n+½, −½]. The weak
/// variant is 4 exp(−2kπ²/(2 log(8n−4))), from μ(λ) ≤ log(2(1+λ')/λ).
pub fn hilbert_bound(n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    if n < 2 {
        return Err(ZoloError::Size("Hilbert bound needs n ≥ 2".into()));
    }
    let nf = n as f64;
    let pair = IntervalPair::general(0.5, nf - 0.5, -nf + 0.5, -0.5)?;
    let rate = match variant {
        BoundVariant::MuTight => 2.0 * pair.log_rho()?,
        BoundVariant::LogWeak => PI2 / (8.0 * nf - 4.0).ln(),
    };
    Ok(curve(MatrixClass::Cauchy, "hilbert", (n, n), variant, 1, (4f64.ln(), rate, 0.0)))
}

/// Decay rate log R of the Krylov bound for n columns.
fn krylov_rate(n: usize, variant: BoundVariant) -> Result<f64> {
    let half = n / 2;
    Ok(match variant {
        BoundVariant::MuTight => krylov_log_rho(2 * half)?,
        BoundVariant::LogWeak => PI2 / (4.0 * (8.0 * half as f64 / PI).ln()),
    })
}

/// Krylov matrices K_{m,n} with Hermitian A: σ_{j+2k} ≤ 4R^{−k+[n]₂}σ_j,
/// R = exp(π²/(2μ(tan(π/(4⌊n/2⌋))²))); weak: R = exp(π²/(4 log(8⌊n/2⌋/π))).
/// Odd n loses one power of R through column-drop interlacing.
pub fn krylov_bound(m: usize, n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    if n < 2 {
        return Err(ZoloError::Size("Krylov bound needs n ≥ 2".into()));
    }
    let rate = krylov_rate(n, variant)?;
    let offset = (n % 2) as f64;
    Ok(curve(MatrixClass::KrylovHermitian, "krylov", (m, n), variant, 2, (4f64.ln(), rate, offset)))
}

/// Real Vandermonde matrices, the Krylov case w = (1, …, 1).
pub fn vandermonde_bound(m: usize, n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    let mut c = krylov_bound(m, n, variant)?;
    c.class = MatrixClass::VandermondeReal;
    c.label = "vandermonde".into();
    Ok(c)
}

/// Positive definite Hankel matrices: the square of the Krylov bound,
/// 16R^{−2k+2[n]₂}. The weak variant is 16[exp(π²/(4 log(8⌊n/2⌋/π)))]^{−2k+2}.
pub fn hankel_bound(n: usize, variant: BoundVariant) -> Result<BoundCurve> {
    if n < 2 {
        return Err(ZoloError::Size("Hankel bound needs n ≥ 2".into()));
    }
    let rate = 2.0 * krylov_rate(n, variant)?;
    let offset = match variant {
        BoundVariant::MuTight => (n % 2) as f64,
        BoundVariant::LogWeak => 1.0,
    };
    Ok(curve(MatrixClass::HankelPSD, "hankel", (n, n), variant, 2, (16f64.ln(), rate, offset)))
}

/// The bound matching a generated spec, using the hulls of its node sets.
pub fn bound_for_spec(spec: &StructuredMatrixSpec, variant: BoundVariant) -> Result<BoundCurve> {
    let (m, n) = spec.dims()?;
    match spec.class()? {
        MatrixClass::Pick => {
            let (a, b, _, _) = spec.interval_pair()?.endpoints();
            if a == b {
                return Err(ZoloError::Geometry("Pick bound needs at least two distinct nodes".into()));
            }
            pick_bound(a, b, n, variant)
        }
        MatrixClass::Cauchy => {
            let (a, b, c, d) = spec.interval_pair()?.endpoints();
            cauchy_bound(a, b, c, d, m, n, variant)
        }
        MatrixClass::Loewner => {
            let (a, b, c, d) = spec.interval_pair()?.endpoints();
            loewner_bound(a, b, c, d, m, n, variant)
        }
        MatrixClass::KrylovHermitian => krylov_bound(m, n, variant),
        MatrixClass::VandermondeReal => vandermonde_bound(m, n, variant),
        MatrixClass::HankelPSD => hankel_bound(n, variant),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(ZoloError::Domain(format!("ε = {eps} must lie in (0, 1)")))
    }
}

/// Upper bound on rank_ε for the class.
pub fn eps_rank_bound(class: MatrixClass, params: &BoundParams, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    let ceil = |v: f64| v.ceil().max(0.0) as usize;
    let half = |n: usize| -> Result<f64> {
        if n < 2 {
            return Err(ZoloError::Size("Krylov and Hankel ε-rank bounds need n ≥ 2".into()));
        }
        Ok((n / 2) as f64)
    };
    Ok(match class {
        MatrixClass::Pick => {
            let (a, b) = params.symmetric_ratio(class)?;
            2 * ceil((4.0 * b / a).ln() * (4.0 / eps).ln() / PI2)
        }
        MatrixClass::Cauchy | MatrixClass::Loewner => {
            let g = params.pair(class)?.cross_ratio();
            let k = ceil((16.0 * g).ln() * (4.0 / eps).ln() / PI2);
            if class == MatrixClass::Cauchy {
                k
            } else {
                2 * k
            }
        }
        MatrixClass::KrylovHermitian | MatrixClass::VandermondeReal => {
            let h = half(params.n)?;
            2 * ceil(4.0 * (8.0 * h / PI).ln() * (4.0 / eps).ln() / PI2) + 2
        }
        MatrixClass::HankelPSD => {
            let h = half(params.n)?;
            2 * ceil(2.0 * (8.0 * h / PI).ln() * (16.0 / eps).ln() / PI2) + 2
        }
    })
}

/// Lower bound on log κ₂ for Pick, Cauchy (n × n) and positive definite
/// Hankel matrices.
pub fn condition_lower_bound(class: MatrixClass, params: &BoundParams) -> Result<f64> {
    let n = params.n;
    if n == 0 {
        return Err(ZoloError::Size("condition bound needs n ≥ 1".into()));
    }
    match class {
        MatrixClass::Pick => {
            let (a, b) = params.symmetric_ratio(class)?;
            let power = 2.0 * (n as f64 / 2.0 - 1.0).ceil().max(0.0);
            Ok(-4f64.ln() + power * PI2 / (2.0 * (4.0 * b / a).ln()))
        }
        MatrixClass::Cauchy => {
            let g = params.pair(class)?.cross_ratio();
            Ok(-4f64.ln() + 2.0 * (n as f64 - 1.0) * PI2 / (2.0 * (16.0 * g).ln()))
        }
        MatrixClass::HankelPSD => {
            if n < 3 {
                return Err(ZoloError::Size("Hankel condition bound holds for n ≥ 3".into()));
            }
            Ok((n as f64 - 1.0) * HANKEL_CONDITION_GAMMA.ln() - (16.0 * n as f64).ln())
        }
        other => Err(ZoloError::Capability(format!(
            "no condition number bound for {} matrices",
            other.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{self, ModulusValue};
    use crate::zolotarev::zolotarev_number;

    #[test]
    fn pick_stepping_and_spot_value() {
        let c = pick_bound(1.0, 100.0, 100, BoundVariant::MuTight).unwrap();
        assert_eq!(c.log_value(1), 0.0);
        for k in 1..40 {
            assert_eq!(c.log_value(2 * k), c.log_value(2 * k - 1));
        }
        let mu = elliptic::grotzsch_mu(ModulusValue::new(0.01).unwrap()).unwrap();
        let rho = (PI2 / (2.0 * mu)).exp();
        let by_hand = 4.0 * rho.powi(-20);
        assert!((c.value(21) / by_hand - 1.0).abs() < 1e-12);
        // the product-formula Z_k sits below the certificate
        let z = zolotarev_number(&IntervalPair::symmetric(1.0, 100.0).unwrap(), 10).unwrap();
        assert!(z.log_zk <= c.log_value(21));
    }

    #[test]
    fn tight_below_weak() {
        let pairs = [
            (pick_bound(1.0, 10.0, 200, BoundVariant::MuTight), pick_bound(1.0, 10.0, 200, BoundVariant::LogWeak)),
            (
                cauchy_bound(-8.5, -2.0, 3.0, 10.0, 200, 200, BoundVariant::MuTight),
                cauchy_bound(-8.5, -2.0, 3.0, 10.0, 200, 200, BoundVariant::LogWeak),
            ),
            (krylov_bound(200, 200, BoundVariant::MuTight), krylov_bound(200, 200, BoundVariant::LogWeak)),
            (krylov_bound(201, 201, BoundVariant::MuTight), krylov_bound(201, 201, BoundVariant::LogWeak)),
            (hankel_bound(200, BoundVariant::MuTight), hankel_bound(200, BoundVariant::LogWeak)),
            (hilbert_bound(100, BoundVariant::MuTight), hilbert_bound(100, BoundVariant::LogWeak)),
        ];
        for (t, w) in pairs {
            let (t, w) = (t.unwrap(), w.unwrap());
            let mut prev = 0.0;
            for j in 1..=t.len() {
                assert!(t.log_value(j) <= w.log_value(j) + 1e-12, "{} j = {j}", t.label);
                assert!(t.log_value(j) <= prev);
                prev = t.log_value(j);
            }
        }
    }

    #[test]
    fn symmetric_cauchy_matches_pick_rate() {
        let p = pick_bound(2.0, 7.0, 50, BoundVariant::MuTight).unwrap();
        let c = cauchy_bound(-7.0, -2.0, 2.0, 7.0, 50, 50, BoundVariant::MuTight).unwrap();
        assert!((p.log_rate - c.log_rate).abs() < 1e-12 * p.log_rate);
    }

    #[test]
    fn hilbert_weak_is_eq_form() {
        let n = 100;
        let c = hilbert_bound(n, BoundVariant::LogWeak).unwrap();
        for k in 0..20usize {
            let expect = (4.0 * (-2.0 * k as f64 * PI2 / (2.0 * (8.0 * n as f64 - 4.0).ln())).exp()).min(1.0);
            assert!((c.value(1 + k) / expect - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hankel_is_square_of_krylov() {
        for n in [10usize, 100, 1000] {
            let k = krylov_bound(n, n, BoundVariant::MuTight).unwrap();
            let h = hankel_bound(n, BoundVariant::MuTight).unwrap();
            for step in 1..30 {
                let a = 2.0 * (4f64.ln() - k.log_rate * step as f64);
                let b = h.log_const - h.log_rate * step as f64;
                assert!((a - b).abs() < 1e-12 * a.abs());
            }
        }
        let odd = krylov_bound(11, 11, BoundVariant::MuTight).unwrap();
        let even = krylov_bound(10, 10, BoundVariant::MuTight).unwrap();
        for step in 2..10 {
            assert!((odd.log_step(step) - even.log_step(step - 1)).abs() < 1e-12);
        }
        assert!(krylov_bound(1, 1, BoundVariant::MuTight).is_err());
    }

    #[test]
    fn weak_hankel_is_verbatim() {
        let n = 1000;
        let c = hankel_bound(n, BoundVariant::LogWeak).unwrap();
        let r = (PI2 / (4.0 * (8.0 * 500.0 / PI).ln())).exp();
        for k in 2..30 {
            let expect = 16.0 * r.powi(-2 * k + 2);
            assert!((c.log_step(k as usize) - expect.ln().min(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn eps_rank_rows() {
        let p = BoundParams::size(1000);
        let eps = 1e-10;
        let v = eps_rank_bound(MatrixClass::HankelPSD, &p, eps).unwrap();
        let pieces = (2.0f64.ln() + (8.0 * 500.0 / PI).ln().ln() + (16.0 / eps).ln().ln() - PI2.ln()).exp();
        assert_eq!(v, 2 * pieces.ceil() as usize + 2);

        let n = 100.0f64;
        let hil = BoundParams::intervals(0.5, n - 0.5, -n + 0.5, -0.5, 100).unwrap();
        let g = n * n / (2.0 * n - 1.0);
        let expect = ((16.0 * g).ln() * (4.0 / 1e-8f64).ln() / PI2).ceil() as usize;
        assert_eq!(eps_rank_bound(MatrixClass::Cauchy, &hil, 1e-8).unwrap(), expect);
        assert_eq!(eps_rank_bound(MatrixClass::Loewner, &hil, 1e-8).unwrap(), 2 * expect);

        let pick = BoundParams::pick(1.0, 10.0, 50).unwrap();
        assert!(matches!(eps_rank_bound(MatrixClass::Pick, &pick, 4.0), Err(ZoloError::Domain(_))));
        assert!(eps_rank_bound(MatrixClass::Pick, &pick, 0.0).is_err());
        let expect = 2 * ((40f64).ln() * (4.0 / 1e-6f64).ln() / PI2).ceil() as usize;
        assert_eq!(eps_rank_bound(MatrixClass::Pick, &pick, 1e-6).unwrap(), expect);
    }

    #[test]
    fn condition_floors() {
        let h = condition_lower_bound(MatrixClass::HankelPSD, &BoundParams::size(3)).unwrap();
        assert!((h.exp() - 3.210f64.powi(2) / 48.0).abs() < 1e-3);
        assert!((HANKEL_CONDITION_GAMMA - (4.0 * 0.915_965_594_177_219 / PI).exp()).abs() < 4e-15);
        let p = condition_lower_bound(MatrixClass::Pick, &BoundParams::pick(1.0, 3.0, 2).unwrap()).unwrap();
        assert!((p.exp() - 0.25).abs() < 1e-15);
        // γ = 10 through the cross-ratio of [0, 1] and [c, d]
        let c = 1.0 / 9.0 + 1.0;
        let pair = IntervalPair::general(0.0, 1.0, c, f64::MAX.sqrt()).unwrap();
        let params = BoundParams { geometry: Some(pair), n: 100 };
        let g = pair.cross_ratio();
        let v = condition_lower_bound(MatrixClass::Cauchy, &params).unwrap();
        let by_hand = 0.25 * (PI2 / (2.0 * (16.0 * g).ln())).exp().powi(198);
        assert!((v - by_hand.ln()).abs() < 1e-12 * v.abs());
        assert!(matches!(
            condition_lower_bound(MatrixClass::KrylovHermitian, &BoundParams::size(4)),
            Err(ZoloError::Capability(_))
        ));
    }

    #[test]
    fn overlapping_cauchy_rejected() {
        match cauchy_bound(0.0, 2.0, 1.0, 3.0, 5, 5, BoundVariant::MuTight) {
            Err(ZoloError::Geometry(msg)) => assert!(msg.contains("separation condition violated")),
            other => panic!("{other:?}"),
        }
    }
}
