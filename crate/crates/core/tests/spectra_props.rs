use proptest::prelude::*;
use zolo_core::matrices::ensembles::{chebyshev_nodes, equispaced, EnsembleRng};
use zolo_core::matrices::{fiedler_factor, generate, DenseMatrix, MeasureSpec, StructuredMatrixSpec};
use zolo_core::spectra::{singular_values, singular_values_only, svd};

fn orthogonality_residual(q: &DenseMatrix) -> f64 {
    let qtq = q.transpose_matmul(q).unwrap();
    qtq.sub(&DenseMatrix::identity(q.cols())).unwrap().max_abs()
}

fn reconstruction_residual(x: &DenseMatrix) -> f64 {
    let s = svd(x).unwrap();
    let us = s.u.scale_cols(&s.sigma);
    let rec = us.matmul(&s.v.transpose()).unwrap();
    assert!(orthogonality_residual(&s.v) <= 1e-13);
    assert!(orthogonality_residual(&s.u) <= 1e-13);
    x.sub(&rec).unwrap().frobenius_norm() / x.frobenius_norm()
}

#[test]
fn svd_residuals_on_structured_matrices() {
    let mut rng = EnsembleRng::new(17);
    let specs = [
        StructuredMatrixSpec::hilbert(40),
        StructuredMatrixSpec::pick(equispaced(1.0, 100.0, 60), rng.normals(60)),
        StructuredMatrixSpec::cauchy(
            chebyshev_nodes(-100.0, -3.0, 80),
            chebyshev_nodes(3.0, 100.0, 50),
            rng.normals(80),
            rng.normals(50),
        ),
        StructuredMatrixSpec::krylov(equispaced(-1.0, 1.0, 70), rng.normals(70), 70),
    ];
    for spec in &specs {
        let x = generate(spec).unwrap();
        assert!(reconstruction_residual(&x) <= 1e-13);
        // the preconditioned values-only path agrees with the full SVD
        let a = svd(&x).unwrap().sigma;
        let b = singular_values_only(&x).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() <= 1e-13 * a[0]);
        }
    }
}

#[test]
fn svd_residuals_at_512() {
    let mut rng = EnsembleRng::new(5);
    let x = DenseMatrix::from_fn(512, 512, |_, _| rng.standard_normal());
    assert!(reconstruction_residual(&x) <= 1e-13);
}

#[test]
fn fiedler_identity_n20() {
    let mu = MeasureSpec::uniform(-1.0, 1.0).unwrap();
    let h = singular_values(&generate(&StructuredMatrixSpec::hankel(mu.clone(), 20)).unwrap()).unwrap();
    let k = singular_values_only(&fiedler_factor(&mu, 20).unwrap()).unwrap();
    for (s, kj) in h.sigma.iter().zip(&k).take(h.trusted_count) {
        assert!((s - kj * kj).abs() <= 1e-10 * h.sigma[0]);
    }
    // K*K reproduces H entrywise
    let kk = fiedler_factor(&mu, 20).unwrap();
    let hh = generate(&StructuredMatrixSpec::hankel(mu, 20)).unwrap();
    let diff = kk.transpose_matmul(&kk).unwrap().sub(&hh).unwrap().max_abs();
    assert!(diff <= 1e-12 * hh.max_abs());
}

#[test]
fn hankel_matrices_are_psd() {
    for mu in [
        MeasureSpec::uniform(-1.0, 1.0).unwrap(),
        MeasureSpec::uniform(0.0, 1.0).unwrap(),
        MeasureSpec::Discrete { nodes: vec![-0.5, 0.1, 0.3, 2.0], weights: vec![1.0, 0.0, 3.0, 0.1] },
    ] {
        let h = generate(&StructuredMatrixSpec::hankel(mu, 12)).unwrap();
        let s = svd(&h).unwrap();
        // eigenvalue λ_j = σ_j·sign(u_jᵀ v_j) for symmetric H
        let norm = s.sigma[0];
        for j in 0..12 {
            let sign: f64 = s.u.column(j).iter().zip(s.v.column(j)).map(|(a, b)| a * b).sum();
            assert!(s.sigma[j] * sign.signum() >= -1e-12 * norm);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn column_drop_interlacing(seed in any::<u64>(), m in 3usize..30, n in 2usize..12) {
        prop_assume!(m >= n);
        let mut rng = EnsembleRng::new(seed);
        let x = generate(&StructuredMatrixSpec::krylov(rng.uniform_points(-1.0, 1.0, m), rng.normals(m), n)).unwrap();
        let full = singular_values_only(&x).unwrap();
        let dropped = singular_values_only(&x.drop_last_column()).unwrap();
        for (d, f) in dropped.iter().zip(&full) {
            prop_assert!(*d <= f * (1.0 + 1e-12) + 1e-15 * full[0]);
        }
    }

    #[test]
    fn random_reconstruction(seed in any::<u64>(), m in 1usize..25, n in 1usize..25) {
        let mut rng = EnsembleRng::new(seed);
        let x = DenseMatrix::from_fn(m, n, |_, _| rng.standard_normal());
        let s = svd(&x).unwrap();
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        let rec = s.u.scale_cols(&s.sigma).matmul(&s.v.transpose()).unwrap();
        prop_assert!(x.sub(&rec).unwrap().frobenius_norm() <= 1e-13 * x.frobenius_norm());
    }

    #[test]
    fn gauss_weights_positive(seed in any::<u64>(), support in 2usize..40, n in 1usize..20) {
        prop_assume!(n <= support);
        let mut rng = EnsembleRng::new(seed);
        let nodes = rng.uniform_points(-3.0, 3.0, support);
        prop_assume!(nodes.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let weights: Vec<f64> = (0..support).map(|_| 0.1 + rng.uniform()).collect();
        let mu = MeasureSpec::Discrete { nodes, weights };
        let rule = zolo_core::matrices::gauss_quadrature(&mu, n).unwrap();
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
        let total: f64 = rule.weights.iter().sum();
        prop_assert!((total - mu.moment(0).unwrap()).abs() <= 1e-12 * total);
    }
}
