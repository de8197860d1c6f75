//! Node sets and seeded random data vectors for the experiment ensembles.

use std::f64::consts::PI;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Name of the generator, written into every CSV header.
pub const RNG_ALGORITHM: &str =
    "xoshiro256** seeded by splitmix64(seed); uniform = (next_u64 >> 11) * 2^-53; normal = Box-Muller (cos branch, then sin)";

/// Deterministic stream of uniforms and standard normals.
pub struct EnsembleRng {
    inner: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl EnsembleRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: Xoshiro256StarStar::seed_from_u64(seed), spare: None }
    }

    /// Stream for member `index` of an ensemble, independent of how many
    /// numbers other members consumed.
    pub fn for_member(seed: u64, index: u64) -> Self {
        // splitmix-style mixing keeps nearby (seed, index) pairs apart
        let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        Self::new(z ^ (z >> 31))
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(radius * theta.sin());
        radius * theta.cos()
    }

    pub fn normals(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.standard_normal()).collect()
    }

    /// n sorted uniform points in [a, b).
    pub fn uniform_points(&mut self, a: f64, b: f64, n: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|_| a + (b - a) * self.uniform()).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// n equally spaced points from a to b inclusive.
pub fn equispaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (a + b)],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|j| if j == n - 1 { b } else { a + j as f64 * h }).collect()
        }
    }
}

/// n Chebyshev points of the first kind mapped to (a, b), ascending.
pub fn chebyshev_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    (0..n)
        .map(|j| c - h * ((2 * j + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = EnsembleRng::new(42).normals(10);
        let b = EnsembleRng::new(42).normals(10);
        assert_eq!(a, b);
        assert_ne!(a, EnsembleRng::new(43).normals(10));
        assert_ne!(EnsembleRng::for_member(42, 0).normals(3), EnsembleRng::for_member(42, 1).normals(3));
    }

    #[test]
    fn normal_moments() {
        let v = EnsembleRng::new(7).normals(200_000);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.02);
    }

    #[test]
    fn node_sets() {
        assert_eq!(equispaced(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
        let c = chebyshev_nodes(3.0, 10.0, 50);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(c[0] > 3.0 && c[49] < 10.0);
    }
}
