use serde::{Deserialize, Serialize};

use super::dense::{dot, DenseMatrix};
use crate::error::{Result, ZoloError};

/// Largest n accepted for raw moment input before a conditioning warning.
pub const MOMENT_INPUT_WARN_N: usize = 30;

/// A nonnegative Borel measure on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Lebesgue measure (density 1) on [a, b].
    #[serde(alias = "uniform_on")]
    Uniform { a: f64, b: f64 },
    /// ∑ weights_s δ(x − nodes_s).
    Discrete { nodes: Vec<f64>, weights: Vec<f64> },
    /// Moments h_m = ∫ x^m dμ, m = 0, 1, ….
    Moments { h: Vec<f64> },
}

impl MeasureSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let m = MeasureSpec::Uniform { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Uniform { a, b } => {
                if !(a < b) || !a.is_finite() || !b.is_finite() {
                    return Err(ZoloError::Measure(format!("uniform measure needs a < b, got [{a}, {b}]")));
                }
            }
            MeasureSpec::Discrete { nodes, weights } => {
                if nodes.len() != weights.len() || nodes.is_empty() {
                    return Err(ZoloError::Measure("discrete measure needs equal, nonzero numbers of nodes and weights".into()));
                }
                if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
                    return Err(ZoloError::Measure("discrete weights must be finite and nonnegative".into()));
                }
                if nodes.iter().any(|x| !x.is_finite()) {
                    return Err(ZoloError::Measure("discrete nodes must be finite".into()));
                }
            }
            MeasureSpec::Moments { h } => {
                if h.is_empty() {
                    return Err(ZoloError::Measure("empty moment vector".into()));
                }
                moment_cholesky(h, h.len().div_ceil(2), false)?;
            }
        }
        Ok(())
    }

    /// ∫ x^m dμ.
    pub fn moment(&self, m: usize) -> Result<f64> {
        match self {
            MeasureSpec::Uniform { a, b } => {
                let p = m as i32 + 1;
                Ok((b.powi(p) - a.powi(p)) / p as f64)
            }
            MeasureSpec::Discrete { nodes, weights } => {
                Ok(nodes.iter().zip(weights).map(|(x, w)| w * x.powi(m as i32)).sum())
            }
            MeasureSpec::Moments { h } => h.get(m).copied().ok_or_else(|| {
                ZoloError::Measure(format!("moment h_{m} requested but only {} supplied", h.len()))
            }),
        }
    }
}

/// Nodes and weights (the weights are the squares w_s² of the Fiedler
/// factor's scaling).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Eigenvalues and first eigenvector components of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (length n−1), by
/// implicit QL with Wilkinson-type shifts. Sorted by eigenvalue.
pub fn tridiagonal_eigen_first_row(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(ZoloError::Dimension("off-diagonal must have length n − 1".into()));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(ZoloError::Divergence("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
}

fn rule_from_jacobi(alpha: &[f64], beta: &[f64], mass: f64) -> Result<QuadratureRule> {
    let (nodes, first) = tridiagonal_eigen_first_row(alpha, beta)?;
    let weights = first.iter().map(|v| mass * v * v).collect();
    Ok(QuadratureRule { nodes, weights })
}

/// Upper Cholesky factor of the moment Hankel form, n rows by `cols`
/// columns, where cols is n+1 when moment h_{2n−1} is available.
fn moment_cholesky(h: &[f64], n: usize, extend: bool) -> Result<Vec<Vec<f64>>> {
    if h.len() < 2 * n - 1 {
        return Err(ZoloError::Measure(format!(
            "{n}-point rule needs at least {} moments, got {}",
            2 * n - 1,
            h.len()
        )));
    }
    let cols = if extend && h.len() >= 2 * n { n + 1 } else { n };
    let mut r = vec![vec![0.0; cols]; n];
    for j in 0..cols {
        for i in 0..=j.min(n - 1) {
            let s: f64 = (0..i).map(|k| r[k][i] * r[k][j]).sum();
            let v = h[i + j] - s;
            if i == j {
                if !(v > 0.0) {
                    return Err(ZoloError::Measure(format!(
                        "moment Hankel form is not positive definite (pivot {i} = {v:e})"
                    )));
                }
                r[i][j] = v.sqrt();
            } else {
                r[i][j] = v / r[i][i];
            }
        }
    }
    Ok(r)
}

/// n-point Gauss rule for the measure.
///
/// With exactly 2n−1 moments the last recurrence coefficient is not
/// determined; it is set equal to the previous one, giving a rule exact to
/// degree 2n−2, which is all the Hankel form H_n needs.
pub fn gauss_quadrature(measure: &MeasureSpec, n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(ZoloError::Size("quadrature needs n ≥ 1".into()));
    }
    measure.validate()?;
    match measure {
        MeasureSpec::Uniform { a, b } => {
            let beta: Vec<f64> = (1..n)
                .map(|j| {
                    let j = j as f64;
                    j / (4.0 * j * j - 1.0).sqrt()
                })
                .collect();
            let rule = rule_from_jacobi(&vec![0.0; n], &beta, 2.0)?;
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            Ok(QuadratureRule {
                nodes: rule.nodes.iter().map(|t| c + h * t).collect(),
                weights: rule.weights.iter().map(|w| h * w).collect(),
            })
        }
        MeasureSpec::Discrete { nodes, weights } => {
            let support: Vec<(f64, f64)> = nodes
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&x, &w)| (x, w))
                .collect();
            if support.len() < n {
                return Err(ZoloError::Measure(format!(
                    "discrete measure has {} support points, {n}-point rule requested",
                    support.len()
                )));
            }
            let mass: f64 = support.iter().map(|p| p.1).sum();
            let xs: Vec<f64> = support.iter().map(|p| p.0).collect();
            let mut q: Vec<Vec<f64>> = vec![support.iter().map(|p| (p.1 / mass).sqrt()).collect()];
            let mut alpha = Vec::with_capacity(n);
            let mut beta = Vec::with_capacity(n.saturating_sub(1));
            for j in 0..n {
                let mut v: Vec<f64> = xs.iter().zip(&q[j]).map(|(x, qi)| x * qi).collect();
                alpha.push(dot(&v, &q[j]));
                if j + 1 == n {
                    break;
                }
                // two passes of classical Gram–Schmidt against every previous vector
                for _ in 0..2 {
                    for qk in &q {
                        let c = dot(&v, qk);
                        v.iter_mut().zip(qk).for_each(|(vi, qi)| *vi -= c * qi);
                    }
                }
                let nrm = super::dense::norm2(&v);
                let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
                if nrm <= 1e3 * f64::EPSILON * scale {
                    return Err(ZoloError::Measure("Lanczos broke down: support points nearly coincide".into()));
                }
                beta.push(nrm);
                q.push(v.iter().map(|vi| vi / nrm).collect());
            }
            rule_from_jacobi(&alpha, &beta, mass)
        }
        MeasureSpec::Moments { h } => {
            if n > MOMENT_INPUT_WARN_N {
                log::warn!(
                    "moment input with n = {n} > {MOMENT_INPUT_WARN_N}: the moment-to-recurrence map is exponentially ill-conditioned"
                );
            }
            let r = moment_cholesky(h, n, true)?;
            let cols = r[0].len();
            let mut alpha = Vec::with_capacity(n);
            for j in 0..n {
                if j + 1 >= cols {
                    alpha.push(if j == 0 { 0.0 } else { alpha[j - 1] });
                    continue;
                }
                let prev = if j == 0 { 0.0 } else { r[j - 1][j] / r[j - 1][j - 1] };
                alpha.push(r[j][j + 1] / r[j][j] - prev);
            }
            let beta: Vec<f64> = (1..n).map(|j| r[j][j] / r[j - 1][j - 1]).collect();
            rule_from_jacobi(&alpha, &beta, h[0])
        }
    }
}

/// (H_n)_{jk} = ∫ x^{j+k} dμ, 0-based.
pub fn hankel_from_measure(measure: &MeasureSpec, n: usize) -> Result<DenseMatrix> {
    measure.validate()?;
    let moments = (0..2 * n.max(1) - 1)
        .map(|m| measure.moment(m))
        .collect::<Result<Vec<f64>>>()?;
    if moments.iter().any(|v| !v.is_finite()) {
        return Err(ZoloError::Data("moments overflow double precision".into()));
    }
    Ok(DenseMatrix::from_fn(n, n, |j, k| moments[j + k]))
}

/// Krylov factor K = [w | D_x w | … | D_x^{n−1} w] with x, w² the n-point
/// Gauss rule, so that KᵀK = H_n.
pub fn fiedler_factor(measure: &MeasureSpec, n: usize) -> Result<DenseMatrix> {
    let rule = gauss_quadrature(measure, n)?;
    let w: Vec<f64> = rule.weights.iter().map(|v| v.sqrt()).collect();
    Ok(super::krylov_matrix(&rule.nodes, &w, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_moments(rule: &QuadratureRule, measure: &MeasureSpec, max_m: usize, tol: f64) {
        for m in 0..=max_m {
            let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(m as i32)).sum();
            let exact = measure.moment(m).unwrap();
            let scale = exact.abs().max(measure.moment(0).unwrap() * f64::EPSILON);
            assert!((q - exact).abs() <= tol * scale.max(exact.abs()) || (exact == 0.0 && q.abs() < 1e-14),
                "m = {m}: {q} vs {exact}");
        }
    }

    #[test]
    fn two_point_legendre() {
        let mu = MeasureSpec::uniform(-1.0, 1.0).unwrap();
        let rule = gauss_quadrature(&mu, 2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + r).abs() < 1e-15 && (rule.nodes[1] - r).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15 && (rule.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ten_point_legendre_moments() {
        let mu = MeasureSpec::uniform(-1.0, 1.0).unwrap();
        let rule = gauss_quadrature(&mu, 10).unwrap();
        check_moments(&rule, &mu, 19, 1e-12);
        // closed form 2/(m+1) for even m
        assert_eq!(mu.moment(4).unwrap(), 0.4);
        assert_eq!(mu.moment(5).unwrap(), 0.0);
    }

    #[test]
    fn shifted_interval() {
        let mu = MeasureSpec::uniform(0.0, 1.0).unwrap();
        let rule = gauss_quadrature(&mu, 8).unwrap();
        check_moments(&rule, &mu, 15, 1e-12);
    }

    #[test]
    fn discrete_measure_reproduces_itself() {
        let nodes = vec![-0.7, -0.1, 0.2, 0.9, 1.5];
        let weights = vec![0.3, 1.0, 0.5, 2.0, 0.05];
        let mu = MeasureSpec::Discrete { nodes: nodes.clone(), weights: weights.clone() };
        let rule = gauss_quadrature(&mu, 5).unwrap();
        for i in 0..5 {
            assert!((rule.nodes[i] - nodes[i]).abs() < 1e-13);
            assert!((rule.weights[i] - weights[i]).abs() < 1e-13);
        }
        let rule3 = gauss_quadrature(&mu, 3).unwrap();
        check_moments(&rule3, &mu, 5, 1e-12);
        assert!(rule3.weights.iter().all(|&w| w > 0.0));
        assert!(matches!(gauss_quadrature(&mu, 6), Err(ZoloError::Measure(_))));
    }

    #[test]
    fn moment_input() {
        let mu = MeasureSpec::uniform(-1.0, 1.0).unwrap();
        let h: Vec<f64> = (0..12).map(|m| mu.moment(m).unwrap()).collect();
        let via_moments = gauss_quadrature(&MeasureSpec::Moments { h: h.clone() }, 6).unwrap();
        let direct = gauss_quadrature(&mu, 6).unwrap();
        for i in 0..6 {
            assert!((via_moments.nodes[i] - direct.nodes[i]).abs() < 1e-10);
            assert!((via_moments.weights[i] - direct.weights[i]).abs() < 1e-10);
        }
        // 2n − 1 moments give a rule exact through degree 2n − 2
        let short = MeasureSpec::Moments { h: h[..11].to_vec() };
        let rule = gauss_quadrature(&short, 6).unwrap();
        check_moments(&rule, &mu, 10, 1e-10);
        let bad = MeasureSpec::Moments { h: vec![1.0, 0.0, -1.0] };
        assert!(matches!(bad.validate(), Err(ZoloError::Measure(_))));
    }

    #[test]
    fn hankel_examples() {
        let hilbert = hankel_from_measure(&MeasureSpec::uniform(0.0, 1.0).unwrap(), 5).unwrap();
        for j in 0..5 {
            for k in 0..5 {
                assert!((hilbert[(j, k)] - 1.0 / (j + k + 1) as f64).abs() < 1e-16);
            }
        }
        let point = MeasureSpec::Discrete { nodes: vec![0.0], weights: vec![1.0] };
        let h = hankel_from_measure(&point, 3).unwrap();
        assert_eq!(h[(0, 0)], 1.0);
        assert_eq!(h.max_abs(), 1.0);
        assert_eq!(h.as_col_major().iter().filter(|v| **v != 0.0).count(), 1);
        let h = hankel_from_measure(&MeasureSpec::uniform(-1.0, 1.0).unwrap(), 4).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                let expect = if (j + k) % 2 == 0 { 2.0 / (j + k + 1) as f64 } else { 0.0 };
                assert_eq!(h[(j, k)], expect);
            }
        }
    }

    #[test]
    fn fiedler_reproduces_hilbert() {
        let mu = MeasureSpec::uniform(0.0, 1.0).unwrap();
        let k = fiedler_factor(&mu, 5).unwrap();
        let ktk = k.transpose_matmul(&k).unwrap();
        for j in 0..5 {
            for l in 0..5 {
                assert!((ktk[(j, l)] - 1.0 / (j + l + 1) as f64).abs() < 1e-13);
            }
        }
        let one = fiedler_factor(&mu, 1).unwrap();
        assert!((one[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measure_json() {
        let m: MeasureSpec = serde_json::from_str(r#"{"kind":"uniform","a":-1,"b":1}"#).unwrap();
        assert_eq!(m, MeasureSpec::Uniform { a: -1.0, b: 1.0 });
        let m: MeasureSpec = serde_json::from_str(r#"{"kind":"uniform_on","a":0,"b":1}"#).unwrap();
        assert_eq!(m, MeasureSpec::Uniform { a: 0.0, b: 1.0 });
        let m: MeasureSpec = serde_json::from_str(r#"{"kind":"discrete","nodes":[0],"weights":[2]}"#).unwrap();
        assert_eq!(m.moment(0).unwrap(), 2.0);
        assert!(MeasureSpec::uniform(1.0, 1.0).is_err());
    }
}
