//! Complex 3-vectors, the null family `N_j` and point evaluation of `Φ_j`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{check_degree, check_index, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Element of `ℂ³` with the bilinear (unconjugated) dot product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3 {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl ComplexVec3 {
    pub const fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    /// `α = (0, 1, -i)`, which satisfies `α·N_j = ρ^j`.
    pub fn alpha() -> Self {
        Self::new(0.0.into(), 1.0.into(), -I)
    }

    /// `β = (1, 0, 0)`, which satisfies `β·N_j = 1`.
    pub fn beta() -> Self {
        Self::real(1.0, 0.0, 0.0)
    }

    /// `Σ v_i w_i` with no conjugation.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.c1 * other.c1 + self.c2 * other.c2 + self.c3 * other.c3
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn from_components(c: [Complex64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    /// Whether all imaginary parts are within `tol` of zero.
    pub fn is_real(&self, tol: f64) -> bool {
        self.components().iter().all(|c| c.im.abs() <= tol)
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2, self.c3 + rhs.c3)
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2, self.c3 - rhs.c3)
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2, -self.c3)
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        Self::new(self.c1 * s, self.c2 * s, self.c3 * s)
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.c1 * s, self.c2 * s, self.c3 * s)
    }
}

/// Point on the unit sphere in the x-polar frame.
///
/// `theta` is measured from the `+x` axis and `phi` turns from `+y` towards `+z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Cartesian coordinates `(cos θ, sin θ cos φ, sin θ sin φ)`.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct, st * cp, st * sp]
    }

    /// Point in the direction of `v`, which need not be normalized.
    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = (v[0] / r).clamp(-1.0, 1.0).acos();
        let phi = v[2].atan2(v[1]).rem_euclid(2.0 * PI);
        Self { theta, phi }
    }

    /// Converts angles given in the common z-polar frame
    /// (`x = sin θ cos φ`, `y = sin θ sin φ`, `z = cos θ`) into this frame.
    pub fn from_z_polar(theta_z: f64, phi_z: f64) -> Self {
        let (st, ct) = theta_z.sin_cos();
        let (sp, cp) = phi_z.sin_cos();
        Self::from_cartesian([st * cp, st * sp, ct])
    }

    /// The same point expressed as z-polar angles `(θ_z, φ_z)`.
    pub fn to_z_polar(&self) -> (f64, f64) {
        let [x, y, z] = self.to_cartesian();
        (z.clamp(-1.0, 1.0).acos(), y.atan2(x).rem_euclid(2.0 * PI))
    }
}

/// Embeds a sphere point in `ℂ³` (with zero imaginary parts).
pub fn embed(p: &SpherePoint) -> ComplexVec3 {
    let [x, y, z] = p.to_cartesian();
    ComplexVec3::real(x, y, z)
}

/// `N(α) = (1, i sin α, i cos α)`.
pub fn make_null_vector(alpha: f64) -> ComplexVec3 {
    let (s, c) = alpha.sin_cos();
    ComplexVec3::new(1.0.into(), Complex64::new(0.0, s), Complex64::new(0.0, c))
}

/// `ρ^k` with `ρ = e^{2πi/(2ℓ+1)}`.
///
/// The exponent is reduced modulo `2ℓ+1` and evaluated directly.
pub fn root_of_unity(ell: usize, k: i64) -> Complex64 {
    let n = 2 * ell as i64 + 1;
    let mut r = k.rem_euclid(n);
    if 2 * r > n {
        r -= n;
    }
    // symmetric reduction makes ρ^{-k} the exact conjugate of ρ^k
    let (s, c) = (2.0 * PI * r as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// `Σ_{j=-ℓ..ℓ} (ρ^k)^j`, which is `2ℓ+1` when `k ≡ 0 (mod 2ℓ+1)` and zero otherwise.
pub fn roots_of_unity_sum(ell: usize, k: i64) -> Complex64 {
    let l = ell as i64;
    (-l..=l).map(|j| root_of_unity(ell, k * j)).sum()
}

/// The `2ℓ+1` null vectors `N_j = N(j a_ℓ)`, `a_ℓ = 2π/(2ℓ+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullFamily {
    pub ell: usize,
    /// Ordered `j = -ℓ..=ℓ`.
    pub vectors: Vec<ComplexVec3>,
    pub rho: Complex64,
    pub a_ell: f64,
}

impl NullFamily {
    /// `N_j`. Panics if `|j| > ℓ`.
    pub fn get(&self, j: i64) -> &ComplexVec3 {
        &self.vectors[crate::position(self.ell, j)]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let l = self.ell as i64;
        -l..=l
    }
}

pub fn null_family(ell: usize) -> Result<NullFamily> {
    check_degree(ell)?;
    Ok(build_null_family(ell))
}

pub(crate) fn build_null_family(ell: usize) -> NullFamily {
    let a_ell = 2.0 * PI / (2 * ell + 1) as f64;
    let l = ell as i64;
    let vectors = (-l..=l)
        .map(|j| make_null_vector(j as f64 * a_ell))
        .collect();
    NullFamily {
        ell,
        vectors,
        rho: root_of_unity(ell, 1),
        a_ell,
    }
}

/// `N_j` for degree `ell`, without building the whole family.
pub(crate) fn null_vector(ell: usize, j: i64) -> ComplexVec3 {
    make_null_vector(2.0 * PI * j as f64 / (2 * ell + 1) as f64)
}

/// `Φ^ℓ_j(p) = (X·N_j)^ℓ`.
pub fn eval_phi(ell: usize, j: i64, p: &SpherePoint) -> Result<Complex64> {
    check_index(ell, j)?;
    Ok(phi_at(ell, j, &embed(p)))
}

/// `(X·N_j)^ℓ` for an arbitrary complex point `X`.
pub(crate) fn phi_at(ell: usize, j: i64, x: &ComplexVec3) -> Complex64 {
    x.dot(&null_vector(ell, j)).powu(ell as u32)
}
