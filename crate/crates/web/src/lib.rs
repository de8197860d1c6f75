//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Results are flat `Float64Array`s; the layout of each is given on the
//! function. Errors surface as JS exceptions carrying the message.

use wasm_bindgen::prelude::*;
use zolo_core::bounds::{pick_bound, BoundVariant};
use zolo_core::matrices::ensembles::{equispaced, EnsembleRng};
use zolo_core::matrices::{generate, StructuredMatrixSpec};
use zolo_core::spectra::{singular_values_only, SpectrumReport, DEFAULT_TRUST_RATIO};
use zolo_core::zolotarev::{extremal_rational, sign_error_sample_points, zolotarev_number, IntervalPair};
use zolo_core::ZoloError;

/// Largest Pick matrix the page will build.
pub const MAX_PICK_N: usize = 300;

fn js(e: ZoloError) -> JsError {
    JsError::new(&e.to_string())
}

/// log10 Z_k and its lower/upper bounds for [−b, −a] ∪ [a, b], k = 0..=k_max,
/// as rows (k, log10 Z_k, log10 lower, log10 upper).
#[wasm_bindgen]
pub fn zolotarev_curve(a: f64, b: f64, k_max: usize) -> Result<Vec<f64>, JsError> {
    let pair = IntervalPair::symmetric(a, b).map_err(js)?;
    let mut out = Vec::with_capacity(4 * (k_max + 1));
    for k in 0..=k_max.min(200) {
        let z = zolotarev_number(&pair, k).map_err(js)?;
        let l = std::f64::consts::LN_10;
        out.extend([k as f64, z.log_zk / l, z.log_lower / l, z.log_upper / l]);
    }
    Ok(out)
}

/// sgn(x) − r̃(x) for the degree-k Zolotarev sign approximant on
/// [−b, −a] ∪ [a, b], as rows (x, error) over the positive interval; the
/// error is odd in x. `points` is capped at 20 000.
#[wasm_bindgen]
pub fn sign_error_curve(a: f64, b: f64, k: usize, points: usize) -> Result<Vec<f64>, JsError> {
    let r = extremal_rational(a, b, k).map_err(js)?;
    let xs = sign_error_sample_points(&r, points.clamp(2, 20_000));
    Ok(xs.iter().flat_map(|&x| [x, 1.0 - r.sign_approximant(x)]).collect())
}

/// Singular values of an n × n Pick matrix on [a, b] (equispaced nodes,
/// standard normal s from `seed`) against the decay bound, as rows
/// (j, σ_j/σ₁, trusted, bound).
#[wasm_bindgen]
pub fn pick_spectrum(a: f64, b: f64, n: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    if !(2..=MAX_PICK_N).contains(&n) {
        return Err(JsError::new(&format!("n must lie in 2..={MAX_PICK_N}")));
    }
    let curve = pick_bound(a, b, n, BoundVariant::MuTight).map_err(js)?;
    let mut rng = EnsembleRng::for_member(seed, 0);
    let spec = StructuredMatrixSpec::pick(equispaced(a, b, n), rng.normals(n));
    let x = generate(&spec).map_err(js)?;
    let sigma = singular_values_only(&x).map_err(js)?;
    let rep = SpectrumReport::from_sigma(sigma, DEFAULT_TRUST_RATIO, x.checksum());
    let s1 = rep.sigma1();
    Ok(rep
        .sigma
        .iter()
        .enumerate()
        .flat_map(|(i, s)| [(i + 1) as f64, s / s1, f64::from(u8::from(rep.is_trusted(i + 1))), curve.value(i + 1)])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_layout() {
        let v = zolotarev_curve(1.0, 10.0, 5).unwrap();
        assert_eq!(v.len(), 24);
        assert_eq!(v[1], 0.0);
        for row in v.chunks(4).skip(1) {
            assert!(row[2] <= row[1] + 1e-12 && row[1] <= row[3] + 1e-12);
        }
    }

    #[test]
    fn pick_spectrum_under_bound() {
        let v = pick_spectrum(1.0, 10.0, 40, 3).unwrap();
        for row in v.chunks(4) {
            if row[2] == 1.0 {
                assert!(row[1] <= row[3] * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn sign_error_is_bounded() {
        let v = sign_error_curve(1.0, 10.0, 4, 500).unwrap();
        let max = v.chunks(2).map(|r| r[1].abs()).fold(0.0, f64::max);
        let z = zolotarev_number(&IntervalPair::symmetric(1.0, 10.0).unwrap(), 4).unwrap().zk;
        assert!((max - 2.0 * z.sqrt() / (1.0 + z)).abs() < 1e-9 * max);
    }
}
