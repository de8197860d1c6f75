//! Named ensembles of structured matrices matching the experiment setups.

use serde::{Deserialize, Serialize};
use zolo_core::bounds::{
    cauchy_bound, hankel_bound, hilbert_bound, krylov_bound, loewner_bound, pick_bound, vandermonde_bound,
    BoundCurve, BoundParams, BoundVariant,
};
use zolo_core::matrices::ensembles::{chebyshev_nodes, equispaced, EnsembleRng};
use zolo_core::matrices::{MatrixClass, MeasureSpec, StructuredMatrixSpec};
use zolo_core::zolotarev::IntervalPair;
use zolo_core::{Result, ZoloError};

/// Interval endpoints (lo, hi).
pub type Span = (f64, f64);

/// The three Cauchy/Löwner geometries of the experiments (x-interval,
/// y-interval).
pub const CAUCHY_GEOMETRIES: [(Span, Span); 3] =
    [((-8.5, -2.0), (3.0, 10.0)), ((-100.0, -3.0), (3.0, 100.0)), ((-101.0, 2.8), (3.0, 100.0))];

pub const PICK_RATIOS: [f64; 3] = [1.1, 10.0, 100.0];

/// Sizes for the Krylov, Vandermonde and Hankel experiments.
pub const KRYLOV_SIZES: [usize; 3] = [10, 100, 1000];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ensemble {
    /// x equispaced in [a, b], s standard normal.
    Pick { a: f64, b: f64, n: usize },
    /// x, y Chebyshev nodes in the two intervals, s, t standard normal.
    Cauchy { x: Span, y: Span, n: usize },
    /// x, y Chebyshev nodes, r, s standard normal.
    Loewner { x: Span, y: Span, n: usize },
    /// A = diag of n equispaced points in [−1, 1], w standard normal.
    Krylov { n: usize },
    /// n sorted uniform random nodes in [−1, 1].
    Vandermonde { n: usize },
    /// Moments of the uniform measure on [−1, 1].
    Hankel { n: usize },
    /// 1/(j+k−1) as a Cauchy matrix.
    Hilbert { n: usize },
}

impl Ensemble {
    pub fn class(&self) -> MatrixClass {
        match self {
            Ensemble::Pick { .. } => MatrixClass::Pick,
            Ensemble::Cauchy { .. } | Ensemble::Hilbert { .. } => MatrixClass::Cauchy,
            Ensemble::Loewner { .. } => MatrixClass::Loewner,
            Ensemble::Krylov { .. } => MatrixClass::KrylovHermitian,
            Ensemble::Vandermonde { .. } => MatrixClass::VandermondeReal,
            Ensemble::Hankel { .. } => MatrixClass::HankelPSD,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Ensemble::Pick { n, .. }
            | Ensemble::Cauchy { n, .. }
            | Ensemble::Loewner { n, .. }
            | Ensemble::Krylov { n }
            | Ensemble::Vandermonde { n }
            | Ensemble::Hankel { n }
            | Ensemble::Hilbert { n } => n,
        }
    }

    /// Whether instances depend on the seed.
    pub fn is_random(&self) -> bool {
        !matches!(self, Ensemble::Hankel { .. } | Ensemble::Hilbert { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            Ensemble::Pick { a, b, n } => format!("pick[a={a},b={b},n={n}]"),
            Ensemble::Cauchy { x, y, n } => format!("cauchy[x=({},{}),y=({},{}),n={n}]", x.0, x.1, y.0, y.1),
            Ensemble::Loewner { x, y, n } => format!("loewner[x=({},{}),y=({},{}),n={n}]", x.0, x.1, y.0, y.1),
            Ensemble::Krylov { n } => format!("krylov[n={n}]"),
            Ensemble::Vandermonde { n } => format!("vandermonde[n={n}]"),
            Ensemble::Hankel { n } => format!("hankel[n={n}]"),
            Ensemble::Hilbert { n } => format!("hilbert[n={n}]"),
        }
    }

    /// Checks geometry and sizes before any matrix is built.
    pub fn validate(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(ZoloError::Size(format!("{}: need n ≥ 2", self.label())));
        }
        self.params()?;
        Ok(())
    }

    /// Parameters for the ε-rank and condition bounds.
    pub fn params(&self) -> Result<BoundParams> {
        Ok(match *self {
            Ensemble::Pick { a, b, n } => BoundParams::pick(a, b, n)?,
            Ensemble::Cauchy { x, y, n } | Ensemble::Loewner { x, y, n } => {
                BoundParams::intervals(x.0, x.1, y.0, y.1, n)?
            }
            Ensemble::Hilbert { n } => {
                let nf = n as f64;
                BoundParams::intervals(0.5, nf - 0.5, -nf + 0.5, -0.5, n)?
            }
            Ensemble::Krylov { n } | Ensemble::Vandermonde { n } | Ensemble::Hankel { n } => BoundParams::size(n),
        })
    }

    pub fn interval_pair(&self) -> Option<IntervalPair> {
        self.params().ok().and_then(|p| p.geometry)
    }

    pub fn bound(&self, variant: BoundVariant) -> Result<BoundCurve> {
        match *self {
            Ensemble::Pick { a, b, n } => pick_bound(a, b, n, variant),
            Ensemble::Cauchy { x, y, n } => cauchy_bound(x.0, x.1, y.0, y.1, n, n, variant),
            Ensemble::Loewner { x, y, n } => loewner_bound(x.0, x.1, y.0, y.1, n, n, variant),
            Ensemble::Krylov { n } => krylov_bound(n, n, variant),
            Ensemble::Vandermonde { n } => vandermonde_bound(n, n, variant),
            Ensemble::Hankel { n } => hankel_bound(n, variant),
            Ensemble::Hilbert { n } => hilbert_bound(n, variant),
        }
    }

    /// Member `index` of the ensemble for `seed`.
    pub fn instance(&self, seed: u64, index: u64) -> Result<StructuredMatrixSpec> {
        self.validate()?;
        let mut rng = EnsembleRng::for_member(seed, index);
        Ok(match *self {
            Ensemble::Pick { a, b, n } => StructuredMatrixSpec::pick(equispaced(a, b, n), rng.normals(n)),
            Ensemble::Cauchy { x, y, n } => StructuredMatrixSpec::cauchy(
                chebyshev_nodes(x.0, x.1, n),
                chebyshev_nodes(y.0, y.1, n),
                rng.normals(n),
                rng.normals(n),
            ),
            Ensemble::Loewner { x, y, n } => StructuredMatrixSpec::loewner(
                chebyshev_nodes(x.0, x.1, n),
                chebyshev_nodes(y.0, y.1, n),
                rng.normals(n),
                rng.normals(n),
            ),
            Ensemble::Krylov { n } => StructuredMatrixSpec::krylov(equispaced(-1.0, 1.0, n), rng.normals(n), n),
            Ensemble::Vandermonde { n } => {
                StructuredMatrixSpec::vandermonde(rng.uniform_points(-1.0, 1.0, n), n)
            }
            Ensemble::Hankel { n } => StructuredMatrixSpec::hankel(MeasureSpec::Uniform { a: -1.0, b: 1.0 }, n),
            Ensemble::Hilbert { n } => StructuredMatrixSpec::hilbert(n),
        })
    }
}

/// The ensembles of a named suite.
pub fn standard_suite(name: &str) -> Result<Vec<Ensemble>> {
    let geoms = CAUCHY_GEOMETRIES;
    Ok(match name {
        "pick" => PICK_RATIOS.iter().map(|&b| Ensemble::Pick { a: 1.0, b, n: 100 }).collect(),
        "cauchy" => geoms.iter().map(|&(x, y)| Ensemble::Cauchy { x, y, n: 100 }).collect(),
        "loewner" => geoms.iter().map(|&(x, y)| Ensemble::Loewner { x, y, n: 100 }).collect(),
        "krylov" => KRYLOV_SIZES.iter().map(|&n| Ensemble::Krylov { n }).collect(),
        "vandermonde" => KRYLOV_SIZES.iter().map(|&n| Ensemble::Vandermonde { n }).collect(),
        "hankel" => KRYLOV_SIZES.iter().map(|&n| Ensemble::Hankel { n }).collect(),
        "hilbert" => [50, 100, 500].iter().map(|&n| Ensemble::Hilbert { n }).collect(),
        other => {
            return Err(ZoloError::Parse(format!(
                "unknown suite '{other}' (pick, cauchy, loewner, krylov, vandermonde, hankel, hilbert)"
            )))
        }
    })
}
