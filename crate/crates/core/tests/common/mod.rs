#![allow(dead_code)]

use std::f64::consts::PI;

use nullharm::{Complex64, RotationMatrix3, SpherePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let x: f64 = rng.gen_range(-1.0..1.0);
    SpherePoint::new(x.acos(), rng.gen_range(0.0..2.0 * PI))
}

pub fn rotation(rng: &mut ChaCha8Rng) -> RotationMatrix3 {
    let axis = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    RotationMatrix3::from_axis_angle(axis, rng.gen_range(0.0..2.0 * PI)).unwrap()
}

pub fn coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
