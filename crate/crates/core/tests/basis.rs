mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use nullharm::basis::gram_third_form;
use nullharm::{
    convert_phi_to_y, convert_y_to_phi, eval_phi_expansion, eval_y_expansion, gram_closed_form,
    gram_quadrature, null_family, phi_from_y_matrix, y_from_phi_matrix, Basis, Complex64, Error,
    Expansion, PhiExpansion, YExpansion,
};

#[test]
fn first_rows_have_known_values() {
    let a = phi_from_y_matrix(1);
    let s = (2.0 * PI / 3.0).sqrt();
    let want = [s, (4.0 * PI / 3.0).sqrt(), s];
    for (m, w) in (-1..=1).zip(want) {
        assert!((a.get(0, m) - w).norm() <= 1e-12);
    }
    let w = Complex64::new(-1.0, 3f64.sqrt()) / 2.0 * s;
    assert!((a.get(-1, -1) - w).norm() <= 1e-12);
    let a2 = phi_from_y_matrix(2);
    let w = Complex64::from_polar(2.0 * PI.sqrt() / 5f64.sqrt() / 6f64.sqrt(), -4.0 * PI / 5.0);
    assert!((a2.get(1, -2) - w).norm() <= 1e-12);
    let b0 = y_from_phi_matrix(0);
    assert!((b0.get(0, 0).re - 0.5 / PI.sqrt()).abs() <= 1e-15);
}

#[test]
fn phi_y_phi_roundtrip() {
    let mut rng = common::rng(20);
    for ell in 0..=20usize {
        for _ in 0..100 {
            let c = common::coeffs(&mut rng, 2 * ell + 1);
            let e = PhiExpansion::new(ell, c.clone()).unwrap();
            let back = convert_y_to_phi(&convert_phi_to_y(&e));
            assert!(common::max_diff(&back.coeffs, &c) <= 1e-11);
        }
    }
}

/// Y→Φ→Y loses about `u·√((2ℓ)!/(ℓ!)²)` because the `Φ` coefficients span that
/// dynamic range.
#[test]
fn y_phi_y_roundtrip_within_conditioning_bound() {
    let mut rng = common::rng(21);
    for ell in 0..=20usize {
        let spread = (1..=ell)
            .map(|k| (ell + k) as f64 / k as f64)
            .product::<f64>()
            .sqrt();
        let bound = (64.0 * f64::EPSILON * spread).max(1e-14);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let c = common::coeffs(&mut rng, 2 * ell + 1);
            let e = YExpansion::new(ell, c.clone()).unwrap();
            worst = worst.max(common::max_diff(
                &convert_phi_to_y(&convert_y_to_phi(&e)).coeffs,
                &c,
            ));
        }
        assert!(worst <= bound, "ell {ell}: {worst} > {bound}");
        if ell <= 16 {
            assert!(worst <= 1e-11, "ell {ell}: {worst}");
        }
    }
}

#[test]
fn matrices_are_inverse() {
    for ell in 0..=20usize {
        let n = 2 * ell + 1;
        let a = phi_from_y_matrix(ell).entries;
        let b = y_from_phi_matrix(ell).entries;
        let id = DMatrix::<Complex64>::identity(n, n);
        // the Φ-side product carries no scale ratios
        assert!((&a * &b - &id).camax() <= 1e-13, "ell {ell}");
        if ell <= 18 {
            assert!((&b * &a - &id).camax() <= 1e-11, "ell {ell}");
        }
    }
}

#[test]
fn gram_forms_and_quadrature() {
    let g1 = gram_closed_form(1);
    assert!((g1.get(0, 0).re - 8.0 * PI / 3.0).abs() <= 1e-12);
    assert!((g1.get(0, 1).re - 2.0 * PI / 3.0).abs() <= 1e-12);
    assert!((gram_closed_form(0).get(0, 0).re - 4.0 * PI).abs() <= 1e-13);
    for ell in 0..=16usize {
        let closed = gram_closed_form(ell).entries;
        let quad = gram_quadrature(ell, ell + 1, 2 * ell + 2).unwrap().entries;
        let scale = closed.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((&closed - &quad).camax() / scale <= 1e-9, "ell {ell}");
        let a = phi_from_y_matrix(ell).entries;
        assert!((&closed - &a * a.adjoint()).camax() / scale <= 1e-10);
    }
    for ell in 1..=6usize {
        let ratio = gram_closed_form(ell).get(0, 0).re / gram_third_form(ell).get(0, 0).re;
        assert!((ratio - 4f64.powi(ell as i32)).abs() <= 1e-9 * ratio);
    }
    assert!(gram_quadrature(3, 3, 8).is_err());
    assert!(gram_quadrature(3, 4, 7).is_err());
}

#[test]
fn gram_is_circulant_and_conditioned_as_central_binomial() {
    let g = gram_closed_form(5).entries;
    let n = 11;
    for r in 0..n {
        for c in 0..n {
            assert!((g[(r, c)] - g[(0, (c + n - r) % n)]).norm() <= 1e-12);
            assert!((g[(r, c)] - g[(c, r)].conj()).norm() <= 1e-12);
        }
    }
    // eigenvalues are (2ℓ+1)/(2π B_m)², so the condition number is C(2ℓ, ℓ)
    let cond = gram_closed_form(10).condition_number();
    assert!(cond.is_finite());
    assert!((cond - 184_756.0).abs() <= 1e-6 * 184_756.0, "{cond}");
}

#[test]
fn two_minus_dot_is_cosine_squared() {
    for ell in 0..=20usize {
        let fam = null_family(ell).unwrap();
        for j in fam.indices() {
            for k in fam.indices() {
                let c = ((j - k) as f64 * PI / fam.len() as f64).cos();
                let lhs = Complex64::new(2.0, 0.0) - fam.get(j).dot(fam.get(k));
                assert!((lhs - 2.0 * c * c).norm() <= 1e-13);
            }
        }
    }
}

#[test]
fn conversion_preserves_point_values() {
    let mut rng = common::rng(22);
    for ell in 0..=12usize {
        for _ in 0..10 {
            let c = common::coeffs(&mut rng, 2 * ell + 1);
            let norm = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let e = PhiExpansion::new(ell, c).unwrap();
            let y = convert_phi_to_y(&e);
            for _ in 0..5 {
                let p = common::point(&mut rng);
                let d = (eval_phi_expansion(&e, &p) - eval_y_expansion(&y, &p)).norm();
                assert!(d <= 1e-10 * norm);
            }
        }
    }
}

#[test]
fn expansion_enum_dispatch() {
    let e = Expansion::Phi(PhiExpansion::delta(1, 0));
    let y = e.convert(Basis::Y).unwrap();
    assert_eq!(y.basis(), Basis::Y);
    let s = (2.0 * PI / 3.0).sqrt();
    assert!(
        common::max_diff(
            y.coeffs(),
            &[s.into(), (2.0 * s * s).sqrt().into(), s.into()]
        ) <= 1e-12
    );
    assert!(matches!(
        e.convert(Basis::Phi),
        Err(Error::BasisMismatch { .. })
    ));
    assert!(PhiExpansion::new(2, vec![Complex64::new(0.0, 0.0); 4]).is_err());
    let zero = convert_phi_to_y(&PhiExpansion::zeros(3));
    assert!(zero.coeffs.iter().all(|z| z.norm() == 0.0));
}
