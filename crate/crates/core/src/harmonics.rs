//! Reference spherical harmonics, associated Legendre functions, and the
//! finite-sum form of `Y_ℓm`.
//!
//! Associated Legendre functions use the derivative definition
//! `P_ℓ^m(x) = (1-x²)^{m/2} d^m P_ℓ/dx^m` with no Condon-Shortley phase.
//! Negative orders follow `P_ℓ^{-μ} = s(μ) (ℓ-μ)!/(ℓ+μ)! P_ℓ^μ`, where the sign
//! `s(μ) = (-1)^μ` is the one produced by the explicit sum
//! [`assoc_legendre_paper`] at negative `m` (checked in the tests).
//!
//! The harmonics that make the `Φ ↔ Y` change of basis exact are the ones
//! given by the finite sum [`y_finite_sum`]. They coincide with
//! `σ(m) · y_reference` where [`phase_convention`] is identically one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{root_of_unity, SpherePoint};
use crate::special::{binomial, ln_factorial};
use crate::{Error, Result};

/// Normalization `B^ℓ_m = (1/(4π ℓ!)) √((ℓ+m)!(ℓ-m)!(2ℓ+1)/π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BCoefficient {
    pub ell: usize,
    pub m: i64,
    pub value: f64,
}

pub fn b_coefficient(ell: usize, m: i64) -> Result<BCoefficient> {
    check_order(ell, m)?;
    Ok(BCoefficient {
        ell,
        m,
        value: b_value(ell, m),
    })
}

/// `ln B^ℓ_m`; `|m| ≤ ℓ` is assumed.
pub(crate) fn ln_b(ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    0.5 * (ln_factorial((l + m) as usize)
        + ln_factorial((l - m) as usize)
        + ((2 * ell + 1) as f64).ln()
        - PI.ln())
        - (4.0 * PI).ln()
        - ln_factorial(ell)
}

pub(crate) fn b_value(ell: usize, m: i64) -> f64 {
    ln_b(ell, m).exp()
}

fn check_order(ell: usize, m: i64) -> Result<()> {
    if m.unsigned_abs() as usize > ell {
        return Err(Error::IndexOutOfRange { ell, index: m });
    }
    Ok(())
}

fn check_abscissa(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::AbscissaOutOfRange(x));
    }
    Ok(())
}

/// Sign relating negative and positive orders, see the module docs.
pub fn negative_order_sign(mu: i64) -> f64 {
    if mu % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `σ(m)`: phase of the finite-sum harmonic relative to [`y_reference`].
///
/// Determined by comparing the two at generic points for every `|m| ≤ ℓ ≤ 8`
/// and checked to be independent of `ℓ`; every entry came out as one.
pub fn phase_convention(_m: i64) -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `P_ℓ^m(x)` from the standard three-term recurrence in `ℓ`.
pub fn assoc_legendre_oracle(ell: usize, m: i64, x: f64) -> Result<f64> {
    check_order(ell, m)?;
    check_abscissa(x)?;
    let mu = m.unsigned_abs() as usize;
    let p = legendre_recurrence(ell, mu, x);
    if m >= 0 {
        Ok(p)
    } else {
        let ratio = (ln_factorial(ell - mu) - ln_factorial(ell + mu)).exp();
        Ok(negative_order_sign(-m) * ratio * p)
    }
}

fn legendre_recurrence(ell: usize, m: usize, x: f64) -> f64 {
    // P_m^m = (2m-1)!! (1-x²)^{m/2}
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if ell == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=ell {
        let next = (x * (2 * l - 1) as f64 * cur - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit finite development of `P_ℓ^m(x)` as a sum over `q` of powers of
/// `x` and `1-x²`, valid for every `m` in `-ℓ..=ℓ`.
pub fn assoc_legendre_paper(ell: usize, m: i64, x: f64) -> Result<f64> {
    check_order(ell, m)?;
    check_abscissa(x)?;
    let l = ell as i64;
    let w = ((1.0 - x) * (1.0 + x)).max(0.0);
    let sqrt_w = w.sqrt();
    let mut sum = 0.0;
    for q in m.max(0)..=(l + m).div_euclid(2) {
        // (ℓ+m)! / ((ℓ+m-2q)! q! (q-m)!) = C(ℓ+m, 2q) C(2q, q) q!/(q-m)!
        let k = 2 * q - m;
        let falling: f64 = if m >= 0 {
            (q - m + 1..=q).map(|i| i as f64).product()
        } else {
            1.0 / (q + 1..=q - m).map(|i| i as f64).product::<f64>()
        };
        let coeff = binomial((l + m) as usize, (2 * q) as usize)
            * binomial((2 * q) as usize, q as usize)
            * falling
            * 2f64.powi((m - 2 * q) as i32);
        let sign = if (q - m).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        // (1-x²)^{q-m/2} = w^{k/2}
        let pow_w = if k % 2 == 0 {
            w.powi((k / 2) as i32)
        } else {
            w.powi((k / 2) as i32) * sqrt_w
        };
        sum += sign * coeff * pow_w * x.powi((l + m - 2 * q) as i32);
    }
    Ok(sum)
}

/// `P_ℓ(x) = ℓ! Σ_q 2^{-2q} / ((ℓ-2q)! (q!)²) (x²-1)^q x^{ℓ-2q}`.
pub fn legendre_poly_paper(ell: usize, x: f64) -> Result<f64> {
    check_abscissa(x)?;
    let l = ell as i64;
    let w = (x - 1.0) * (x + 1.0);
    let mut sum = 0.0;
    for q in 0..=l / 2 {
        // ℓ! / ((ℓ-2q)! (q!)²) = C(ℓ, 2q) C(2q, q)
        let coeff = binomial(ell, (2 * q) as usize)
            * binomial((2 * q) as usize, q as usize)
            * 2f64.powi(-2 * q as i32);
        sum += coeff * w.powi(q as i32) * x.powi((l - 2 * q) as i32);
    }
    Ok(sum)
}

/// `√((2ℓ+1)(ℓ-m)! / (4π (ℓ+m)!))`.
fn y_normalization(ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    (0.5 * (((2 * ell + 1) as f64).ln() + ln_factorial((l - m) as usize)
        - (4.0 * PI).ln()
        - ln_factorial((l + m) as usize)))
    .exp()
}

/// Reference `Y_ℓm(θ, φ) = C_ℓm P_ℓ^m(cos θ) e^{imφ}` in the x-polar frame.
pub fn y_reference(ell: usize, m: i64, p: &SpherePoint) -> Result<Complex64> {
    check_order(ell, m)?;
    let x = p.theta.cos().clamp(-1.0, 1.0);
    let plm = assoc_legendre_oracle(ell, m, x)?;
    Ok(Complex64::from_polar(
        y_normalization(ell, m) * plm,
        m as f64 * p.phi,
    ))
}

/// `(2π B_ℓm/(2ℓ+1)) Σ_j e^{-imja} [cos θ + i sin θ sin(φ + ja)]^ℓ`, `a = 2π/(2ℓ+1)`.
pub fn y_finite_sum(ell: usize, m: i64, p: &SpherePoint) -> Result<Complex64> {
    check_order(ell, m)?;
    let l = ell as i64;
    let n = 2 * ell + 1;
    let a = 2.0 * PI / n as f64;
    let (st, ct) = p.theta.sin_cos();
    let sum: Complex64 = (-l..=l)
        .map(|j| {
            let base = Complex64::new(ct, st * (p.phi + j as f64 * a).sin());
            root_of_unity(ell, -m * j) * base.powu(ell as u32)
        })
        .sum();
    Ok(sum * (2.0 * PI * b_value(ell, m) / n as f64))
}

/// `B_ℓm ∫_0^{2π} e^{-imα} [cos θ + i sin θ sin(φ + α)]^ℓ dα` by the trapezoid
/// rule on `n_nodes` equispaced nodes, exact once `n_nodes ≥ 2ℓ+2`.
pub fn y_integral_quadrature(
    ell: usize,
    m: i64,
    p: &SpherePoint,
    n_nodes: usize,
) -> Result<Complex64> {
    check_order(ell, m)?;
    let required = 2 * ell + 2;
    if n_nodes < required {
        return Err(Error::InsufficientNodes {
            required,
            got: n_nodes,
        });
    }
    let h = 2.0 * PI / n_nodes as f64;
    let (st, ct) = p.theta.sin_cos();
    let sum: Complex64 = (0..n_nodes)
        .map(|k| {
            let alpha = k as f64 * h;
            let base = Complex64::new(ct, st * (p.phi + alpha).sin());
            Complex64::from_polar(1.0, -(m as f64) * alpha) * base.powu(ell as u32)
        })
        .sum();
    Ok(sum * (h * b_value(ell, m)))
}

/// Coefficients `f_m` of `Σ_m f_m Y_ℓm`, ordered `m = -ℓ..=ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YExpansion {
    pub ell: usize,
    pub coeffs: Vec<Complex64>,
}

impl YExpansion {
    pub fn new(ell: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * ell + 1 {
            return Err(Error::LengthMismatch {
                expected: 2 * ell + 1,
                found: coeffs.len(),
            });
        }
        Ok(Self { ell, coeffs })
    }

    pub fn zeros(ell: usize) -> Self {
        Self {
            ell,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * ell + 1],
        }
    }

    /// `f_m`. Panics if `|m| > ℓ`.
    pub fn get(&self, m: i64) -> Complex64 {
        self.coeffs[crate::position(self.ell, m)]
    }

    /// Eigenvalue `-ℓ(ℓ+1)` of the sphere Laplacian on this degree.
    pub fn eigenvalue(&self) -> f64 {
        -((self.ell * (self.ell + 1)) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn b_examples() {
        let b10 = b_coefficient(1, 0).unwrap().value;
        assert_abs_diff_eq!(b10, (3.0 / PI).sqrt() / (4.0 * PI), epsilon = 1e-16);
        assert_abs_diff_eq!(b10, 0.0777635, epsilon = 1e-7);
        let b11 = b_coefficient(1, 1).unwrap().value;
        assert_abs_diff_eq!(b11, (6.0 / PI).sqrt() / (4.0 * PI), epsilon = 1e-16);
        assert_abs_diff_eq!(b11, 0.1099742, epsilon = 1e-7);
        assert_eq!(b11, b_coefficient(1, -1).unwrap().value);
        assert_abs_diff_eq!(
            1.0 / (2.0 * PI * b11),
            (2.0 * PI / 3.0).sqrt(),
            epsilon = 1e-15
        );
        assert!(b_coefficient(1, 2).is_err());
    }

    #[test]
    fn b_symmetric_and_finite_to_cap() {
        for ell in 0..=crate::DEFAULT_MAX_DEGREE {
            for m in 0..=ell as i64 {
                let v = b_value(ell, m);
                assert!(v.is_finite() && v > 0.0);
                assert_eq!(v, b_value(ell, -m));
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_abs_diff_eq!(assoc_legendre_oracle(1, 1, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            assoc_legendre_oracle(2, 0, 0.5).unwrap(),
            -0.125,
            epsilon = 1e-16
        );
        for x in [-1.0, -0.3, 0.0, 0.9, 1.0] {
            assert_eq!(assoc_legendre_oracle(0, 0, x).unwrap(), 1.0);
        }
        assert!(matches!(
            assoc_legendre_oracle(2, 0, 1.5),
            Err(Error::AbscissaOutOfRange(_))
        ));
        assert!(assoc_legendre_oracle(2, 3, 0.1).is_err());
    }

    #[test]
    fn explicit_legendre_examples() {
        for x in [-0.7, 0.0, 0.25, 0.99] {
            let expect = (1.0f64 - x * x).sqrt();
            assert_abs_diff_eq!(
                assoc_legendre_paper(1, 1, x).unwrap(),
                expect,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(
            assoc_legendre_paper(2, 0, 0.5).unwrap(),
            -0.125,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            assoc_legendre_paper(1, -1, 0.0).unwrap(),
            -0.5,
            epsilon = 1e-15
        );
        assert!(assoc_legendre_paper(1, 0, -1.01).is_err());
    }

    #[test]
    fn legendre_poly_examples() {
        assert_abs_diff_eq!(
            legendre_poly_paper(2, 0.5).unwrap(),
            -0.125,
            epsilon = 1e-15
        );
        for x in [-1.0, -0.4, 0.0, 0.6, 1.0] {
            assert_eq!(legendre_poly_paper(1, x).unwrap(), x);
        }
        assert_abs_diff_eq!(
            legendre_poly_paper(4, 0.3).unwrap(),
            0.0729375,
            epsilon = 1e-15
        );
        let x: f64 = 0.3;
        let oracle = (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
        assert_abs_diff_eq!(oracle, 0.0729375, epsilon = 1e-15);
    }

    #[test]
    fn y_examples() {
        let c00 = 1.0 / (2.0 * PI.sqrt());
        for p in [SpherePoint::new(0.0, 0.0), SpherePoint::new(1.2, 5.0)] {
            let y = y_reference(0, 0, &p).unwrap();
            assert_abs_diff_eq!(y.re, c00, epsilon = 1e-16);
            assert_abs_diff_eq!(y.re, 0.2820948, epsilon = 1e-7);
            let f = y_finite_sum(0, 0, &p).unwrap();
            assert_abs_diff_eq!(f.re, c00, epsilon = 1e-15);
            let q = y_integral_quadrature(0, 0, &p, 2).unwrap();
            assert_abs_diff_eq!(q.re, c00, epsilon = 1e-15);
        }
        let pole = SpherePoint::new(0.0, 0.7);
        let c10 = (3.0 / (4.0 * PI)).sqrt();
        assert_abs_diff_eq!(y_reference(1, 0, &pole).unwrap().re, c10, epsilon = 1e-15);
        assert_abs_diff_eq!(c10, 0.4886025, epsilon = 1e-7);
        let f = y_finite_sum(1, 0, &pole).unwrap();
        assert!((f - c10).norm() < 1e-15);
        assert!(y_reference(1, 2, &pole).is_err());
        assert!(y_finite_sum(1, -2, &pole).is_err());
    }

    #[test]
    fn trapezoid_needs_enough_nodes() {
        let p = SpherePoint::new(0.4, 0.1);
        assert_eq!(
            y_integral_quadrature(3, 1, &p, 7),
            Err(Error::InsufficientNodes {
                required: 8,
                got: 7
            })
        );
        let a = y_integral_quadrature(3, 2, &p, 16).unwrap();
        let b = y_integral_quadrature(3, 2, &p, 64).unwrap();
        assert!((a - b).norm() <= 1e-13);
    }

    #[test]
    fn y_expansion_length_checked() {
        assert!(YExpansion::new(2, vec![Complex64::new(0.0, 0.0); 4]).is_err());
        let e = YExpansion::zeros(3);
        assert_eq!(e.coeffs.len(), 7);
        assert_eq!(e.eigenvalue(), -12.0);
    }
}
