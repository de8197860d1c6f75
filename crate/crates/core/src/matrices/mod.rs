//! Generators for Pick, Cauchy, Löwner, Krylov, real Vandermonde and
//! positive definite Hankel matrices, with their displacement data.

mod dense;
pub mod ensembles;
pub mod io;
mod quadrature;

use serde::{Deserialize, Serialize};

pub use dense::DenseMatrix;
pub(crate) use dense::{dot, norm2};
pub use quadrature::{
    fiedler_factor, gauss_quadrature, hankel_from_measure, tridiagonal_eigen_first_row, MeasureSpec,
    QuadratureRule, MOMENT_INPUT_WARN_N,
};

use crate::error::{Result, ZoloError};
use crate::zolotarev::IntervalPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixClass {
    Pick,
    Cauchy,
    Loewner,
    KrylovHermitian,
    VandermondeReal,
    HankelPSD,
}

impl MatrixClass {
    /// Displacement rank ν of the class's Sylvester equation.
    pub fn displacement_rank(self) -> Option<usize> {
        match self {
            MatrixClass::Pick | MatrixClass::Loewner => Some(2),
            MatrixClass::Cauchy | MatrixClass::KrylovHermitian | MatrixClass::VandermondeReal => Some(1),
            MatrixClass::HankelPSD => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixClass::Pick => "pick",
            MatrixClass::Cauchy => "cauchy",
            MatrixClass::Loewner => "loewner",
            MatrixClass::KrylovHermitian => "krylov",
            MatrixClass::VandermondeReal => "vandermonde",
            MatrixClass::HankelPSD => "hankel",
        }
    }
}

impl std::str::FromStr for MatrixClass {
    type Err = ZoloError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "pick" => MatrixClass::Pick,
            "cauchy" => MatrixClass::Cauchy,
            "loewner" | "lowner" | "löwner" => MatrixClass::Loewner,
            "krylov" | "krylovhermitian" => MatrixClass::KrylovHermitian,
            "vandermonde" | "vandermondereal" => MatrixClass::VandermondeReal,
            "hankel" | "hankelpsd" => MatrixClass::HankelPSD,
            other => return Err(ZoloError::Parse(format!("unknown matrix class '{other}'"))),
        })
    }
}

/// Everything needed to build one structured matrix.
///
/// Pick: x, s (n × n). Cauchy: x (rows), y (cols), s, t. Löwner: x, y, r, s
/// with (L)_{jk} = (r_j − s_k)/(x_j − y_k). Krylov: x (rows), w, `cols`.
/// Vandermonde: x, `cols`. Hankel: measure, `cols`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StructuredMatrixSpec {
    pub class: Option<MatrixClass>,
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Vec<f64>,
    #[serde(default)]
    pub s: Vec<f64>,
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default)]
    pub r: Vec<f64>,
    #[serde(default)]
    pub w: Vec<f64>,
    #[serde(default)]
    pub cols: usize,
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
}

/// Diagonal Sylvester data: diag(a)·X − X·diag(b) = M Nᵀ.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDisplacement {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub m: DenseMatrix,
    pub n: DenseMatrix,
}

/// Numerical rank of AX − XB and the relative error of its best rank-ν fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementReport {
    pub rank: usize,
    pub nu: usize,
    /// σ_{ν+1}(AX − XB) / ‖AX − XB‖₂, zero for a vanishing residual.
    pub residual: f64,
}

fn check_monotone(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(ZoloError::Data(format!("{name} contains non-finite values")));
    }
    let inc = v.windows(2).all(|w| w[0] < w[1]);
    let dec = v.windows(2).all(|w| w[0] > w[1]);
    if !(inc || dec) {
        return Err(ZoloError::Data(format!("nodes {name} must be strictly monotone")));
    }
    Ok(())
}

fn check_len(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(ZoloError::Dimension(format!("{name} has length {}, expected {n}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(ZoloError::Data(format!("{name} contains non-finite values")));
    }
    Ok(())
}

fn span(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

impl StructuredMatrixSpec {
    pub fn pick(x: Vec<f64>, s: Vec<f64>) -> Self {
        Self { class: Some(MatrixClass::Pick), cols: x.len(), x, s, ..Default::default() }
    }

    pub fn cauchy(x: Vec<f64>, y: Vec<f64>, s: Vec<f64>, t: Vec<f64>) -> Self {
        Self { class: Some(MatrixClass::Cauchy), cols: y.len(), x, y, s, t, ..Default::default() }
    }

    pub fn loewner(x: Vec<f64>, y: Vec<f64>, r: Vec<f64>, s: Vec<f64>) -> Self {
        Self { class: Some(MatrixClass::Loewner), cols: y.len(), x, y, r, s, ..Default::default() }
    }

    pub fn krylov(x: Vec<f64>, w: Vec<f64>, cols: usize) -> Self {
        Self { class: Some(MatrixClass::KrylovHermitian), x, w, cols, ..Default::default() }
    }

    pub fn vandermonde(x: Vec<f64>, cols: usize) -> Self {
        Self { class: Some(MatrixClass::VandermondeReal), x, cols, ..Default::default() }
    }

    pub fn hankel(measure: MeasureSpec, n: usize) -> Self {
        Self { class: Some(MatrixClass::HankelPSD), measure: Some(measure), cols: n, ..Default::default() }
    }

    /// The n × n Hilbert matrix 1/(j+k−1) as a Cauchy matrix with
    /// x_j = j − ½, y_k = −k + ½.
    pub fn hilbert(n: usize) -> Self {
        let x = (1..=n).map(|j| j as f64 - 0.5).collect();
        let y = (1..=n).map(|k| -(k as f64) + 0.5).collect();
        Self::cauchy(x, y, vec![1.0; n], vec![1.0; n])
    }

    pub fn class(&self) -> Result<MatrixClass> {
        self.class.ok_or_else(|| ZoloError::Parse("matrix spec without a class".into()))
    }

    /// (rows, cols) of the generated matrix.
    pub fn dims(&self) -> Result<(usize, usize)> {
        Ok(match self.class()? {
            MatrixClass::Pick => (self.x.len(), self.x.len()),
            MatrixClass::Cauchy | MatrixClass::Loewner => (self.x.len(), self.y.len()),
            MatrixClass::KrylovHermitian | MatrixClass::VandermondeReal => (self.x.len(), self.cols),
            MatrixClass::HankelPSD => (self.cols, self.cols),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let class = self.class()?;
        let (m, n) = self.dims()?;
        if n == 0 {
            return Err(ZoloError::Size("empty matrix requested".into()));
        }
        if m < n {
            return Err(ZoloError::Size(format!("{m}×{n}: generated matrices need rows ≥ cols")));
        }
        match class {
            MatrixClass::Pick => {
                check_monotone("x", &self.x)?;
                check_len("s", &self.s, n)?;
                if self.x.iter().any(|&x| x <= 0.0) {
                    return Err(ZoloError::Geometry("Pick nodes must lie in some [a, b] with 0 < a".into()));
                }
            }
            MatrixClass::Cauchy | MatrixClass::Loewner => {
                check_monotone("x", &self.x)?;
                check_monotone("y", &self.y)?;
                if class == MatrixClass::Cauchy {
                    check_len("s", &self.s, m)?;
                    check_len("t", &self.t, n)?;
                } else {
                    check_len("r", &self.r, m)?;
                    check_len("s", &self.s, n)?;
                }
                for &xj in &self.x {
                    if self.y.contains(&xj) {
                        return Err(ZoloError::SingularEntry(format!("x_j = y_k = {xj}")));
                    }
                }
            }
            MatrixClass::KrylovHermitian => {
                check_len("x", &self.x, m)?;
                check_len("w", &self.w, m)?;
            }
            MatrixClass::VandermondeReal => check_len("x", &self.x, m)?,
            MatrixClass::HankelPSD => {
                self.measure
                    .as_ref()
                    .ok_or_else(|| ZoloError::Measure("Hankel spec without a measure".into()))?
                    .validate()?;
            }
        }
        Ok(())
    }

    /// Hulls [min x, max x] and [min y, max y] of the node sets as a pair of
    /// intervals (E holds x, F holds y; for Pick F = −E).
    pub fn interval_pair(&self) -> Result<IntervalPair> {
        match self.class()? {
            MatrixClass::Pick => {
                let (a, b) = span(&self.x);
                IntervalPair::general(a, b, -b, -a)
            }
            MatrixClass::Cauchy | MatrixClass::Loewner => {
                let (a, b) = span(&self.x);
                let (c, d) = span(&self.y);
                IntervalPair::general(a, b, c, d)
            }
            other => Err(ZoloError::Capability(format!(
                "{} matrices have no real interval pair",
                other.name()
            ))),
        }
    }
}

/// K = [w | D_x w | … | D_x^{cols−1} w].
pub fn krylov_matrix(x: &[f64], w: &[f64], cols: usize) -> DenseMatrix {
    let rows = x.len();
    let mut data = Vec::with_capacity(rows * cols);
    let mut col = w.to_vec();
    for j in 0..cols {
        if j > 0 {
            col.iter_mut().zip(x).for_each(|(c, xi)| *c *= xi);
        }
        data.extend_from_slice(&col);
    }
    DenseMatrix::from_col_major(rows, cols, data).expect("sized by construction")
}

/// Builds the matrix described by `spec`.
pub fn generate(spec: &StructuredMatrixSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let (m, n) = spec.dims()?;
    let out = match spec.class()? {
        MatrixClass::Pick => {
            let (x, s) = (&spec.x, &spec.s);
            DenseMatrix::from_fn(n, n, |j, k| (s[j] + s[k]) / (x[j] + x[k]))
        }
        MatrixClass::Cauchy => {
            let (x, y, s, t) = (&spec.x, &spec.y, &spec.s, &spec.t);
            DenseMatrix::from_fn(m, n, |j, k| s[j] * t[k] / (x[j] - y[k]))
        }
        MatrixClass::Loewner => {
            let (x, y, r, s) = (&spec.x, &spec.y, &spec.r, &spec.s);
            DenseMatrix::from_fn(m, n, |j, k| (r[j] - s[k]) / (x[j] - y[k]))
        }
        MatrixClass::KrylovHermitian => krylov_matrix(&spec.x, &spec.w, n),
        MatrixClass::VandermondeReal => krylov_matrix(&spec.x, &vec![1.0; m], n),
        MatrixClass::HankelPSD => hankel_from_measure(spec.measure.as_ref().expect("validated"), n)?,
    };
    if !out.is_finite() {
        return Err(ZoloError::Data("generated matrix has non-finite entries".into()));
    }
    Ok(out)
}

/// Diagonal displacement data for Pick, Cauchy and Löwner specs.
pub fn diagonal_displacement(spec: &StructuredMatrixSpec) -> Result<DiagonalDisplacement> {
    spec.validate()?;
    let (m, n) = spec.dims()?;
    let ones = |k: usize| vec![1.0; k];
    let (a, b, mf, nf) = match spec.class()? {
        MatrixClass::Pick => (
            spec.x.clone(),
            spec.x.iter().map(|v| -v).collect(),
            vec![spec.s.clone(), ones(m)],
            vec![ones(n), spec.s.clone()],
        ),
        MatrixClass::Cauchy => (spec.x.clone(), spec.y.clone(), vec![spec.s.clone()], vec![spec.t.clone()]),
        MatrixClass::Loewner => (
            spec.x.clone(),
            spec.y.clone(),
            vec![spec.r.clone(), ones(m)],
            vec![ones(n), spec.s.iter().map(|v| -v).collect()],
        ),
        other => {
            return Err(ZoloError::Capability(format!(
                "{} matrices have no diagonal displacement",
                other.name()
            )))
        }
    };
    Ok(DiagonalDisplacement { a, b, m: DenseMatrix::from_columns(&mf)?, n: DenseMatrix::from_columns(&nf)? })
}

/// A X − X B for the class's displacement pair; Krylov and Vandermonde use
/// A = D_x and the signed cyclic shift Q with Q e_j = e_{j+1}, Q e_n = −e_1.
pub fn displacement_matrix(spec: &StructuredMatrixSpec, x_mat: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, n) = spec.dims()?;
    if x_mat.shape() != (m, n) {
        return Err(ZoloError::Dimension(format!(
            "matrix is {}×{}, spec describes {m}×{n}",
            x_mat.rows(),
            x_mat.cols()
        )));
    }
    match spec.class()? {
        MatrixClass::Pick | MatrixClass::Cauchy | MatrixClass::Loewner => {
            let d = diagonal_displacement(spec)?;
            Ok(DenseMatrix::from_fn(m, n, |i, j| (d.a[i] - d.b[j]) * x_mat[(i, j)]))
        }
        MatrixClass::KrylovHermitian | MatrixClass::VandermondeReal => {
            // (K Q)_{:,j} = K_{:,j+1} for j < n−1 and −K_{:,0} for the last column
            Ok(DenseMatrix::from_fn(m, n, |i, j| {
                let kq = if j + 1 < n { x_mat[(i, j + 1)] } else { -x_mat[(i, 0)] };
                spec.x[i] * x_mat[(i, j)] - kq
            }))
        }
        MatrixClass::HankelPSD => Err(ZoloError::Capability(
            "Hankel matrices are handled through their Fiedler factor".into(),
        )),
    }
}

/// Numerical rank (σ > 1e−10·σ₁) of AX − XB and its best rank-ν residual.
pub fn displacement_residual(spec: &StructuredMatrixSpec, x_mat: &DenseMatrix) -> Result<DisplacementReport> {
    let nu = spec
        .class()?
        .displacement_rank()
        .ok_or_else(|| ZoloError::Capability("no displacement rank for this class".into()))?;
    let d = displacement_matrix(spec, x_mat)?;
    let sigma = crate::spectra::singular_values_only(&d)?;
    let s1 = sigma.first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return Ok(DisplacementReport { rank: 0, nu, residual: 0.0 });
    }
    let rank = sigma.iter().filter(|&&s| s > 1e-10 * s1).count();
    let residual = sigma.get(nu).map_or(0.0, |s| s / s1);
    Ok(DisplacementReport { rank, nu, residual })
}
