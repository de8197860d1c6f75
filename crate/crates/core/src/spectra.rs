//! Dense SVD by one-sided Jacobi and the spectrum reports used to check the
//! singular value bounds.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundCurve;
use crate::error::{Result, ZoloError};
use crate::matrices::{dot, norm2, DenseMatrix};

/// Default trust threshold relative to σ₁.
pub const DEFAULT_TRUST_RATIO: f64 = 1e-12;

/// Environment variable overriding [`DEFAULT_TRUST_RATIO`].
pub const TRUST_ENV_VAR: &str = "ZOLO_TRUST_THRESHOLD";

const MAX_SWEEPS: usize = 80;

/// Trust ratio from `ZOLO_TRUST_THRESHOLD`, falling back to the default.
pub fn trust_ratio_from_env() -> Result<f64> {
    match std::env::var(TRUST_ENV_VAR) {
        Ok(text) => {
            let v: f64 = text
                .trim()
                .parse()
                .map_err(|e| ZoloError::Parse(format!("{TRUST_ENV_VAR}='{text}': {e}")))?;
            if !(v > 0.0 && v < 1.0) {
                return Err(ZoloError::Domain(format!("{TRUST_ENV_VAR} must lie in (0, 1), got {v}")));
            }
            Ok(v)
        }
        Err(_) => Ok(DEFAULT_TRUST_RATIO),
    }
}

/// Full SVD X = U diag(σ) Vᵀ, thin U.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

/// Rotates columns of `g` (column-major, `rows` long) until they are
/// mutually orthogonal to within the Jacobi tolerance; applies the same
/// rotations to `v` when given.
fn one_sided_jacobi(g: &mut [f64], rows: usize, cols: usize, mut v: Option<&mut [f64]>) -> Result<()> {
    let tol = 1e-15f64.max((rows as f64).sqrt() * f64::EPSILON);
    let mut norms: Vec<f64> = (0..cols).map(|j| sq(&g[j * rows..(j + 1) * rows])).collect();
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha < f64::MIN_POSITIVE || beta < f64::MIN_POSITIVE {
                    continue;
                }
                let (head, tail) = g.split_at_mut(q * rows);
                let gp = &mut head[p * rows..(p + 1) * rows];
                let gq = &mut tail[..rows];
                let gamma = dot(gp, gq);
                if gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(gp, gq, c, s);
                norms[p] = (alpha - t * gamma).max(0.0);
                norms[q] = beta + t * gamma;
                if let Some(v) = v.as_deref_mut() {
                    let (vh, vt) = v.split_at_mut(q * cols);
                    rotate(&mut vh[p * cols..(p + 1) * cols], &mut vt[..cols], c, s);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
        // cached norms drift under many updates
        for j in 0..cols {
            norms[j] = sq(&g[j * rows..(j + 1) * rows]);
        }
    }
    Err(ZoloError::Divergence(format!("Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")))
}

fn sq(v: &[f64]) -> f64 {
    dot(v, v)
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = c * xa - s * yb;
        *b = s * xa + c * yb;
    }
}

fn check_input(x: &DenseMatrix) -> Result<()> {
    if !x.is_finite() {
        return Err(ZoloError::Data("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Full SVD by one-sided Jacobi on the columns of X (rows ≥ cols assumed;
/// wider matrices are transposed first).
pub fn svd(x: &DenseMatrix) -> Result<Svd> {
    check_input(x)?;
    if x.rows() < x.cols() {
        let t = svd(&x.transpose())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let (m, n) = x.shape();
    let mut g = x.as_col_major().to_vec();
    let mut v = DenseMatrix::identity(n).into_col_major();
    one_sided_jacobi(&mut g, m, n, Some(&mut v))?;
    let sig: Vec<f64> = (0..n).map(|j| norm2(&g[j * m..(j + 1) * m])).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]));
    let mut u = DenseMatrix::zeros(m, n);
    let mut vv = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = sig[src];
        sigma.push(s);
        let col = &g[src * m..(src + 1) * m];
        u.column_mut(dst)
            .iter_mut()
            .zip(col)
            .for_each(|(o, c)| *o = if s > 0.0 { c / s } else { 0.0 });
        vv.column_mut(dst).copy_from_slice(&v[src * n..(src + 1) * n]);
    }
    Ok(Svd { u, sigma, v: vv })
}

/// Householder QR with column pivoting; returns the n × n factor R in
/// column-major order (Q is discarded).
fn pivoted_qr_r(x: &DenseMatrix) -> Vec<f64> {
    let (m, n) = x.shape();
    let mut a = x.as_col_major().to_vec();
    let mut norms: Vec<f64> = (0..n).map(|j| norm2(&a[j * m..(j + 1) * m])).collect();
    let mut orig = norms.clone();
    let tol3z = f64::EPSILON.sqrt();
    let mut work = vec![0.0; m];
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| norms[i].total_cmp(&norms[j])).unwrap_or(k);
        if piv != k {
            for i in 0..m {
                a.swap(k * m + i, piv * m + i);
            }
            norms.swap(k, piv);
            orig.swap(k, piv);
        }
        let col = &a[k * m + k..(k + 1) * m];
        let xnorm = norm2(col);
        if xnorm == 0.0 {
            continue;
        }
        let alpha = if col[0] > 0.0 { -xnorm } else { xnorm };
        let vlen = m - k;
        work[..vlen].copy_from_slice(col);
        work[0] -= alpha;
        let vnorm2 = sq(&work[..vlen]);
        a[k * m + k] = alpha;
        for i in k + 1..m {
            a[k * m + i] = 0.0;
        }
        if vnorm2 == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm2;
        for j in k + 1..n {
            let cj = &mut a[j * m + k..(j + 1) * m];
            let f = scale * dot(&work[..vlen], cj);
            cj.iter_mut().zip(&work[..vlen]).for_each(|(c, v)| *c -= f * v);
            if norms[j] != 0.0 {
                let r = cj[0].abs() / norms[j];
                let temp = (1.0 - r * r).max(0.0);
                let temp2 = temp * (norms[j] / orig[j]).powi(2);
                if temp2 <= tol3z {
                    norms[j] = norm2(&cj[1..]);
                    orig[j] = norms[j];
                } else {
                    norms[j] *= temp.sqrt();
                }
            }
        }
    }
    let mut r = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            r[j * n + i] = a[j * m + i];
        }
    }
    r
}

/// Singular values of X, descending.
///
/// Columns are first pivoted and triangularized (X P = Q R) and Jacobi runs
/// on the columns of Rᵀ, which are already close to orthogonal and graded,
/// so few sweeps are needed.
pub fn singular_values_only(x: &DenseMatrix) -> Result<Vec<f64>> {
    check_input(x)?;
    if x.rows() < x.cols() {
        return singular_values_only(&x.transpose());
    }
    let n = x.cols();
    if n == 0 {
        return Ok(vec![]);
    }
    let r = pivoted_qr_r(x);
    // columns of Rᵀ are the rows of R
    let mut g = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            g[i * n + j] = r[j * n + i];
        }
    }
    one_sided_jacobi(&mut g, n, n, None)?;
    let mut sigma: Vec<f64> = (0..n).map(|j| norm2(&g[j * n..(j + 1) * n])).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}

/// Singular values with their trust bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub sigma: Vec<f64>,
    /// Absolute threshold: σ_j below it are excluded from every check.
    pub trust_threshold: f64,
    pub trusted_count: usize,
    pub checksum: u64,
}

impl SpectrumReport {
    pub fn from_sigma(sigma: Vec<f64>, trust_ratio: f64, checksum: u64) -> Self {
        let s1 = sigma.first().copied().unwrap_or(0.0);
        let trust_threshold = trust_ratio * s1;
        let trusted_count = sigma.iter().filter(|&&s| s >= trust_threshold && s > 0.0).count();
        Self { sigma, trust_threshold, trusted_count, checksum }
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Whether σ_j (1-based) is above the trust threshold.
    pub fn is_trusted(&self, j: usize) -> bool {
        j >= 1 && j <= self.trusted_count
    }

    /// CSV with columns index, sigma, sigma_over_sigma1, trusted.
    pub fn to_csv(&self, comment: &str) -> String {
        use crate::matrices::io::format_f64;
        let mut out = format!("# {comment}\nindex,sigma,sigma_over_sigma1,trusted\n");
        let s1 = self.sigma1();
        for (i, s) in self.sigma.iter().enumerate() {
            let ratio = if s1 > 0.0 { s / s1 } else { 0.0 };
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                format_f64(*s),
                format_f64(ratio),
                u8::from(self.is_trusted(i + 1))
            ));
        }
        out
    }
}

/// Spectrum of X with the default trust ratio.
pub fn singular_values(x: &DenseMatrix) -> Result<SpectrumReport> {
    singular_values_with_trust(x, DEFAULT_TRUST_RATIO)
}

pub fn singular_values_with_trust(x: &DenseMatrix, trust_ratio: f64) -> Result<SpectrumReport> {
    let sigma = singular_values_only(x)?;
    Ok(SpectrumReport::from_sigma(sigma, trust_ratio, x.checksum()))
}

/// rank_ε with a flag telling whether ε·σ₁ sits above the trust threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsRank {
    pub rank: usize,
    /// False when ε·σ₁ is below the trust threshold; the rank then only
    /// reflects rounding noise in the tail.
    pub trusted: bool,
}

/// Smallest k with σ_{k+1} ≤ ε σ₁.
pub fn eps_rank(report: &SpectrumReport, eps: f64) -> Result<EpsRank> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ZoloError::Domain(format!("ε = {eps} outside (0, 1)")));
    }
    let cut = eps * report.sigma1();
    let rank = report.sigma.iter().take_while(|&&s| s > cut).count();
    Ok(EpsRank { rank, trusted: cut >= report.trust_threshold })
}

/// Result of checking a spectrum against a bound curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub passed: bool,
    pub checked_indices: usize,
    /// (j, log10 bound − log10(σ_j/σ₁)) for every trusted j; negative means
    /// violated.
    pub margins: Vec<(usize, f64)>,
    pub violations: Vec<usize>,
    pub ratio_checks: usize,
    /// (j, k) pairs with σ_{j+νk} > step(k)·σ_j.
    pub ratio_violations: Vec<(usize, usize)>,
    pub min_margin: f64,
}

/// Checks σ_j/σ₁ ≤ curve(j)(1 + 1e−10) on trusted indices and the ratio form
/// σ_{j+νk} ≤ step(k)·σ_j (1 + 1e−10) on trusted pairs with j > 1.
pub fn verify_bound(report: &SpectrumReport, curve: &BoundCurve) -> VerificationRecord {
    let slack = (1e-10f64).ln_1p();
    let s1 = report.sigma1();
    let mut margins = Vec::new();
    let mut violations = Vec::new();
    let trusted = report.trusted_count.min(curve.len());
    for j in 1..=trusted {
        let lhs = (report.sigma[j - 1] / s1).ln();
        let rhs = curve.log_value(j);
        margins.push((j, (rhs - lhs) / std::f64::consts::LN_10));
        if lhs > rhs + slack {
            violations.push(j);
        }
    }
    let mut ratio_checks = 0;
    let mut ratio_violations = Vec::new();
    let nu = curve.nu;
    for j in 2..=trusted {
        for k in 1.. {
            let idx = j + nu * k;
            if idx > trusted {
                break;
            }
            ratio_checks += 1;
            let lhs = (report.sigma[idx - 1] / report.sigma[j - 1]).ln();
            if lhs > curve.log_step(k) + slack {
                ratio_violations.push((j, k));
            }
        }
    }
    let min_margin = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    VerificationRecord {
        passed: violations.is_empty() && ratio_violations.is_empty(),
        checked_indices: margins.len(),
        margins,
        violations,
        ratio_checks,
        ratio_violations,
        min_margin,
    }
}
