use proptest::prelude::*;
use zolo_core::zolotarev::{
    extremal_rational, zolotarev_number, zolotarev_number_general, IntervalPair,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn submultiplicative(log_ratio in 0.01f64..9.0, k1 in 1usize..30, k2 in 1usize..30) {
        let pair = IntervalPair::symmetric(1.0, log_ratio.exp()).unwrap();
        let z1 = zolotarev_number(&pair, k1).unwrap().log_zk;
        let z2 = zolotarev_number(&pair, k2).unwrap().log_zk;
        let z12 = zolotarev_number(&pair, k1 + k2).unwrap().log_zk;
        prop_assert!(z12 <= z1 + z2 + 1e-12);
    }

    #[test]
    fn monotone_in_k(log_ratio in 0.01f64..9.0, k in 0usize..60) {
        let pair = IntervalPair::symmetric(1.0, log_ratio.exp()).unwrap();
        let a = zolotarev_number(&pair, k).unwrap().log_zk;
        let b = zolotarev_number(&pair, k + 1).unwrap().log_zk;
        prop_assert!(b <= a);
    }

    #[test]
    fn envelope_is_looser_than_sandwich(log_ratio in 0.01f64..9.2, k in 1usize..40) {
        let pair = IntervalPair::symmetric(1.0, log_ratio.exp()).unwrap();
        let z = zolotarev_number(&pair, k).unwrap();
        let (lo, hi) = z.log_envelope();
        prop_assert!(lo < z.log_lower && z.log_upper < hi);
        prop_assert!(z.log_lower <= z.log_zk && z.log_zk <= z.log_upper);
    }

    #[test]
    fn affine_maps_preserve_z(
        a in -10.0f64..10.0, w1 in 0.01f64..5.0, gap in 0.01f64..5.0, w2 in 0.01f64..5.0,
        scale in 0.1f64..10.0, shift in -50.0f64..50.0, k in 1usize..20,
    ) {
        let pts = [a, a + w1, a + w1 + gap, a + w1 + gap + w2];
        let base = IntervalPair::general(pts[0], pts[1], pts[2], pts[3]).unwrap();
        let m: Vec<f64> = pts.iter().map(|p| scale * p + shift).collect();
        let moved = IntervalPair::general(m[0], m[1], m[2], m[3]).unwrap();
        let za = zolotarev_number_general(&base, k).unwrap().log_zk;
        let zb = zolotarev_number_general(&moved, k).unwrap().log_zk;
        prop_assert!(((za - zb) / za).abs() < 1e-11);
        // orientation flip swaps the roles of E and F without changing Z
        let flipped = IntervalPair::general(-pts[3], -pts[2], -pts[1], -pts[0]).unwrap();
        let zc = zolotarev_number_general(&flipped, k).unwrap().log_zk;
        prop_assert!(((za - zc) / za).abs() < 1e-11);
    }

    #[test]
    fn reflection_symmetry(ratio in 1.05f64..200.0, k in 1usize..12, z in -300.0f64..300.0) {
        let r = extremal_rational(1.0, ratio, k).unwrap();
        let p = r.eval(z) * r.eval(-z);
        prop_assume!(p.is_finite());
        prop_assert!((p - 1.0).abs() < 1e-10);
    }
}
