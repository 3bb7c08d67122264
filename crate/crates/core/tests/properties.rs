use std::f64::consts::PI;

use nullharm::{
    apply_rotation, build_grid, convert_phi_to_y, convert_y_to_phi, eval_phi_expansion,
    eval_y_expansion, g_matrix_solve, inner_product, make_null_vector, roots_of_unity_sum,
    Complex64, PhiExpansion, RotationMatrix3, SpherePoint, YExpansion,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn phi_expansion(max_ell: usize) -> impl Strategy<Value = PhiExpansion> {
    (0..=max_ell).prop_flat_map(|ell| {
        prop::collection::vec(complex(), 2 * ell + 1)
            .prop_map(move |c| PhiExpansion::new(ell, c).unwrap())
    })
}

fn point() -> impl Strategy<Value = SpherePoint> {
    (-1.0..1.0f64, 0.0..2.0 * PI).prop_map(|(x, phi)| SpherePoint::new(x.acos(), phi))
}

fn rotation() -> impl Strategy<Value = RotationMatrix3> {
    (prop::array::uniform3(-1.0..1.0f64), 0.0..2.0 * PI)
        .prop_filter("nonzero axis", |(a, _)| {
            a.iter().map(|v| v * v).sum::<f64>() > 1e-3
        })
        .prop_map(|(a, t)| RotationMatrix3::from_axis_angle(a, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn null_vectors_are_isotropic(alpha in -10.0..10.0f64) {
        let n = make_null_vector(alpha);
        prop_assert!(n.dot(&n).norm() <= 1e-15);
    }

    #[test]
    fn roots_sum_to_kronecker(ell in 0usize..30, k in -200i64..200) {
        let n = (2 * ell + 1) as i64;
        let want = if k.rem_euclid(n) == 0 { n as f64 } else { 0.0 };
        prop_assert!((roots_of_unity_sum(ell, k) - want).norm() <= 1e-12);
    }

    #[test]
    fn cartesian_roundtrip(p in point()) {
        let q = SpherePoint::from_cartesian(p.to_cartesian());
        let (a, b) = (p.to_cartesian(), q.to_cartesian());
        prop_assert!((0..3).all(|i| (a[i] - b[i]).abs() <= 1e-14));
        let (tz, pz) = p.to_z_polar();
        let r = SpherePoint::from_z_polar(tz, pz).to_cartesian();
        prop_assert!((0..3).all(|i| (a[i] - r[i]).abs() <= 1e-14));
    }

    #[test]
    fn conversion_is_linear(e in phi_expansion(10), s in complex()) {
        let scaled = PhiExpansion::new(e.ell, e.coeffs.iter().map(|c| c * s).collect()).unwrap();
        let a = convert_phi_to_y(&scaled);
        let b = convert_phi_to_y(&e);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            prop_assert!((x - y * s).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn conversion_keeps_the_function(e in phi_expansion(12), p in point()) {
        let y = convert_phi_to_y(&e);
        let norm = e.coeffs.iter().map(|z| z.norm()).fold(1e-300, f64::max);
        prop_assert!((eval_phi_expansion(&e, &p) - eval_y_expansion(&y, &p)).norm() <= 1e-10 * norm);
        let back = convert_y_to_phi(&y);
        for (a, b) in back.coeffs.iter().zip(&e.coeffs) {
            prop_assert!((a - b).norm() <= 1e-11);
        }
    }

    #[test]
    fn y_roundtrip_small_degree(ell in 0usize..=12, c in prop::collection::vec(complex(), 25)) {
        let y = YExpansion::new(ell, c[..2 * ell + 1].to_vec()).unwrap();
        let back = convert_phi_to_y(&convert_y_to_phi(&y));
        for (a, b) in back.coeffs.iter().zip(&y.coeffs) {
            prop_assert!((a - b).norm() <= 1e-11);
        }
    }

    #[test]
    fn rotation_transports_functions(e in phi_expansion(5), g in rotation(), p in point()) {
        let out = apply_rotation(&e, &g_matrix_solve(e.ell, &g).unwrap()).unwrap();
        let want = eval_phi_expansion(&e, &g.apply_point(&p));
        prop_assert!((eval_phi_expansion(&out, &p) - want).norm() <= 1e-9);
        let before = e.gram_norm_sq();
        prop_assert!((out.gram_norm_sq() - before).abs() <= 1e-9 * before.max(1e-12));
    }

    #[test]
    fn inner_product_is_hermitian(a in phi_expansion(4), b in phi_expansion(4)) {
        let grid = build_grid(6, 11);
        let f = |p: &SpherePoint| eval_phi_expansion(&a, p);
        let g = |p: &SpherePoint| eval_phi_expansion(&b, p);
        let fg = inner_product(f, g, &grid);
        let gf = inner_product(g, f, &grid);
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
        prop_assert!(inner_product(f, f, &grid).re >= -1e-12);
    }
}
