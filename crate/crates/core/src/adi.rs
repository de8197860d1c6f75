//! Factored ADI with Zolotarev shifts for diag(a)·X − X·diag(b) = M Nᵀ.
//!
//! After k steps with zeros α_j ∈ E ⊇ σ(A) and poles β_j ∈ F ⊇ σ(B) the
//! error is r(A) X r(B)^{−1} with r(z) = ∏ (z − α_j)/(z − β_j), so
//! ‖X − X_k‖₂ ≤ Z_k(E, F)·‖X‖₂ when the shifts come from the extremal
//! rational. Unrolling X_j = r_j(A) X_{j−1} r_j(B)^{−1} plus
//! (β_j − α_j)(A − β_j)^{−1} M Nᵀ (B − α_j)^{−1}, from X_0 = 0, gives
//! X_k = U Vᵀ with one ν-column block per step.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZoloError};
use crate::matrices::{diagonal_displacement, generate, DenseMatrix, MatrixClass, StructuredMatrixSpec};
use crate::spectra::singular_values_only;
use crate::zolotarev::{adi_shifts, zolotarev_number_general};

/// X_k = U Vᵀ together with its certificate.
#[derive(Debug, Clone)]
pub struct LowRankFactors {
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub k: usize,
    pub nu: usize,
    /// Z_k(E, F); zero when it underflows.
    pub certified_bound: f64,
    pub log_certified_bound: f64,
}

impl LowRankFactors {
    pub fn reconstruct(&self) -> Result<DenseMatrix> {
        self.u.matmul(&self.v.transpose())
    }
}

fn check_class(spec: &StructuredMatrixSpec) -> Result<()> {
    match spec.class()? {
        MatrixClass::Pick | MatrixClass::Cauchy | MatrixClass::Loewner => Ok(()),
        other => Err(ZoloError::Capability(format!(
            "ADI needs real diagonal displacement coefficients; {} matrices are covered by bounds only",
            other.name()
        ))),
    }
}

/// k steps of factored ADI on the spec's Sylvester equation.
pub fn fadi_approximate(spec: &StructuredMatrixSpec, k: usize) -> Result<LowRankFactors> {
    check_class(spec)?;
    if k == 0 {
        return Err(ZoloError::Degree("ADI needs k ≥ 1 steps".into()));
    }
    let pair = spec.interval_pair()?;
    let d = diagonal_displacement(spec)?;
    let (zeros, poles) = adi_shifts(&pair, k)?;
    let z = zolotarev_number_general(&pair, k)?;
    let (m, n) = (d.a.len(), d.b.len());
    let nu = d.m.cols();

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(nu * k);
    let mut v_cols: Vec<Vec<f64>> = Vec::with_capacity(nu * k);
    // running ∏_{i>j} r_i(a) and ∏_{i>j} r_i(b)^{−1}
    let mut pa = vec![1.0; m];
    let mut pb = vec![1.0; n];
    for j in (0..k).rev() {
        let (alpha, beta) = (zeros[j].re, poles[j].re);
        let ua: Vec<f64> = (0..m).map(|i| (beta - alpha) / (d.a[i] - beta) * pa[i]).collect();
        let vb: Vec<f64> = (0..n).map(|i| pb[i] / (d.b[i] - alpha)).collect();
        for c in 0..nu {
            u_cols.push(d.m.column(c).iter().zip(&ua).map(|(x, s)| x * s).collect());
            v_cols.push(d.n.column(c).iter().zip(&vb).map(|(x, s)| x * s).collect());
        }
        for (p, &x) in pa.iter_mut().zip(&d.a) {
            *p *= (x - alpha) / (x - beta);
        }
        for (p, &y) in pb.iter_mut().zip(&d.b) {
            *p *= (y - beta) / (y - alpha);
        }
    }
    Ok(LowRankFactors {
        u: DenseMatrix::from_columns(&u_cols)?,
        v: DenseMatrix::from_columns(&v_cols)?,
        k,
        nu,
        certified_bound: z.zk,
        log_certified_bound: z.log_zk,
    })
}

/// ADI error against the best possible error of the same rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiComparison {
    pub k: usize,
    pub rank: usize,
    /// ‖X − UVᵀ‖₂ / ‖X‖₂.
    pub adi_error: f64,
    /// σ_{1+νk}/σ₁, the truncated-SVD error; 0 past the last index.
    pub optimal_error: f64,
    /// Z_k(E, F).
    pub certified_bound: f64,
    /// adi_error / optimal_error (∞ when the optimum is 0).
    pub ratio: f64,
}

/// Runs ADI for k steps and measures it against the truncated SVD.
pub fn compare_with_truncated_svd(spec: &StructuredMatrixSpec, k: usize) -> Result<AdiComparison> {
    let x = generate(spec)?;
    let sigma = singular_values_only(&x)?;
    compare_with_sigma(spec, &x, &sigma, k)
}

/// As [`compare_with_truncated_svd`] with the matrix and its spectrum given.
pub fn compare_with_sigma(spec: &StructuredMatrixSpec, x: &DenseMatrix, sigma: &[f64], k: usize) -> Result<AdiComparison> {
    let f = fadi_approximate(spec, k)?;
    let err = x.sub(&f.reconstruct()?)?;
    let s1 = sigma[0];
    let adi_error = singular_values_only(&err)?[0] / s1;
    let rank = f.nu * k;
    let optimal_error = sigma.get(rank).map_or(0.0, |s| s / s1);
    Ok(AdiComparison {
        k,
        rank,
        adi_error,
        optimal_error,
        certified_bound: f.certified_bound,
        ratio: if optimal_error > 0.0 { adi_error / optimal_error } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::ensembles::{chebyshev_nodes, equispaced, EnsembleRng};

    fn cauchy(seed: u64, n: usize) -> StructuredMatrixSpec {
        let mut rng = EnsembleRng::new(seed);
        StructuredMatrixSpec::cauchy(
            chebyshev_nodes(-8.5, -2.0, n),
            chebyshev_nodes(3.0, 10.0, n),
            rng.normals(n),
            rng.normals(n),
        )
    }

    #[test]
    fn cauchy_k5_within_certificate() {
        let spec = cauchy(11, 60);
        let c = compare_with_truncated_svd(&spec, 5).unwrap();
        let pair = spec.interval_pair().unwrap();
        let z = zolotarev_number_general(&pair, 5).unwrap();
        assert!(c.adi_error <= z.upper * (1.0 + 1e-8));
        assert!(c.adi_error <= c.certified_bound * (1.0 + 1e-8));
        assert!(c.ratio >= 1.0 - 1e-10);
    }

    #[test]
    fn error_decays_with_k() {
        let spec = cauchy(5, 50);
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let c = compare_with_truncated_svd(&spec, k).unwrap();
            assert!(c.adi_error < prev);
            prev = c.adi_error;
        }
    }

    #[test]
    fn pick_rank_is_2k() {
        let mut rng = EnsembleRng::new(2);
        let spec = StructuredMatrixSpec::pick(equispaced(1.0, 10.0, 40), rng.normals(40));
        for k in 1..=4 {
            let f = fadi_approximate(&spec, k).unwrap();
            assert_eq!(f.u.cols(), 2 * k);
            let s = singular_values_only(&f.reconstruct().unwrap()).unwrap();
            let rank = s.iter().filter(|&&v| v > 1e-13 * s[0]).count();
            assert_eq!(rank, 2 * k);
            let c = compare_with_truncated_svd(&spec, k).unwrap();
            assert!(c.adi_error <= f.certified_bound * (1.0 + 1e-8));
        }
    }

    #[test]
    fn loewner_within_certificate() {
        let mut rng = EnsembleRng::new(9);
        let spec = StructuredMatrixSpec::loewner(
            chebyshev_nodes(-100.0, -3.0, 50),
            chebyshev_nodes(3.0, 100.0, 50),
            rng.normals(50),
            rng.normals(50),
        );
        for k in 1..=4 {
            let c = compare_with_truncated_svd(&spec, k).unwrap();
            assert!(c.adi_error <= c.certified_bound * (1.0 + 1e-8));
            assert!(c.adi_error >= c.optimal_error * (1.0 - 1e-10));
        }
    }

    #[test]
    fn unsupported_classes() {
        let spec = StructuredMatrixSpec::vandermonde(vec![0.0, 1.0], 2);
        assert!(matches!(fadi_approximate(&spec, 1), Err(ZoloError::Capability(_))));
        assert!(matches!(fadi_approximate(&cauchy(1, 5), 0), Err(ZoloError::Degree(_))));
    }
}
