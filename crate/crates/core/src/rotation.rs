//! The SO(3) representation on degree-`ℓ` harmonics, written in the `Φ` basis.
//!
//! A rotation `g` acts on functions by `(T_g f)(X) = f(gX)`. Its matrix `G` is
//! oriented so that **row `j` expands the transformed `Φ_j`**:
//!
//! ```text
//! T_g Φ_j = Σ_k G[j, k] Φ_k        i.e.  (gX·N_j)^ℓ = Σ_k G[j, k] (X·N_k)^ℓ
//! ```
//!
//! Coefficient vectors therefore transform with the transpose, `c' = Gᵀ c`
//! (see [`apply_rotation`]). Transport composes contravariantly:
//! `T_{g1} T_{g2} = T_{g2 g1}`.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{conversion_pair, PhiExpansion};
use crate::geometry::{embed, null_vector, phi_at, root_of_unity, ComplexVec3, SpherePoint};
use crate::{index_at, position, Error, Result};

const ORTHOGONALITY_TOL: f64 = 1e-12;
/// Sampling sets whose evaluation matrix is worse than this are rejected.
pub const MAX_SAMPLING_CONDITION: f64 = 1e8;
const MAX_SAMPLING_ATTEMPTS: usize = 16;
const HELD_OUT_POINTS: usize = 10;
const HELD_OUT_TOL: f64 = 1e-9;

/// Real special-orthogonal 3x3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationMatrix3 {
    m: [[f64; 3]; 3],
}

impl RotationMatrix3 {
    /// Validates `gᵀg = I` and `det g = 1` to `1e-12`.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let g = Self { m };
        let deviation = g.orthogonality_defect();
        if deviation > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rotation by `psi` in the `(y, z)` plane, fixing the pole `(1, 0, 0)`.
    pub fn about_x(psi: f64) -> Self {
        let (s, c) = psi.sin_cos();
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        }
    }

    /// Right-handed rotation by `angle` about `axis`; the axis is normalized.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(norm.is_finite() && norm > 0.0) || !angle.is_finite() {
            return Err(Error::NotOrthogonal {
                deviation: f64::INFINITY,
            });
        }
        let [x, y, z] = axis.map(|a| a / norm);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Ok(Self {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        })
    }

    /// Rotation for the quaternion `(w, x, y, z)`, normalized first.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let [w, x, y, z] = q.map(|v| v / n);
        Self {
            m: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        }
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn transpose(&self) -> Self {
        let m = self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn determinant(&self) -> f64 {
        let m = self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `max |gᵀg - I|` together with `|det g - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gt = self.transpose();
        let p = gt * *self;
        let mut worst = (self.determinant() - 1.0).abs();
        for (r, row) in p.m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((v - id).abs());
            }
        }
        if worst.is_nan() {
            f64::INFINITY
        } else {
            worst
        }
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = self.m;
        [0, 1, 2].map(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
    }

    pub fn apply_complex(&self, v: &ComplexVec3) -> ComplexVec3 {
        let c = v.components();
        let m = self.m;
        ComplexVec3::from_components(
            [0, 1, 2].map(|r| c[0] * m[r][0] + c[1] * m[r][1] + c[2] * m[r][2]),
        )
    }

    pub fn apply_point(&self, p: &SpherePoint) -> SpherePoint {
        SpherePoint::from_cartesian(self.apply(p.to_cartesian()))
    }
}

impl Mul for RotationMatrix3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| a[r][k] * b[k][c]).sum();
            }
        }
        Self { m }
    }
}

/// Representation matrix of one rotation, rows `j`, columns `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    pub ell: usize,
    pub entries: DMatrix<Complex64>,
}

impl GMatrix {
    pub fn get(&self, j: i64, k: i64) -> Complex64 {
        self.entries[(position(self.ell, j), position(self.ell, k))]
    }

    pub fn identity(ell: usize) -> Self {
        Self {
            ell,
            entries: DMatrix::identity(2 * ell + 1, 2 * ell + 1),
        }
    }

    /// Same action in the `Y` basis: `T_g Y_m = Σ_m' D[m, m'] Y_m'`.
    pub fn to_y_basis(&self) -> DMatrix<Complex64> {
        let pair = conversion_pair(self.ell);
        &pair.y_from_phi.entries * &self.entries * &pair.phi_from_y.entries
    }
}

/// `2ℓ+1` sphere points on a spiral, clear of both poles; `seed` shifts the
/// latitude offset and the starting longitude.
fn spiral_points(count: usize, seed: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let offset = 0.05 + 0.9 * (0.5 + seed as f64 * 0.618_033_988_749_895).fract();
    let phase = 0.3 + seed as f64 * 1.234_567;
    (0..count)
        .map(|i| {
            let x = 1.0 - 2.0 * (i as f64 + offset) / count as f64;
            let phi = (phase + i as f64 * golden).rem_euclid(2.0 * PI);
            SpherePoint::new(x.clamp(-1.0, 1.0).acos(), phi)
        })
        .collect()
}

fn sampling_matrix(ell: usize, points: &[SpherePoint]) -> DMatrix<Complex64> {
    let n = 2 * ell + 1;
    let xs: Vec<_> = points.iter().map(embed).collect();
    DMatrix::from_fn(points.len(), n, |i, k| {
        phi_at(ell, index_at(ell, k), &xs[i])
    })
}

fn condition(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `(gX·N_j)^ℓ = Σ_k G[j, k] (X·N_k)^ℓ` on `2ℓ+1` sampling points.
///
/// Sampling sets with condition number above [`MAX_SAMPLING_CONDITION`] are
/// replaced by the next seed; the result is checked at held-out points.
pub fn g_matrix_solve(ell: usize, g: &RotationMatrix3) -> Result<GMatrix> {
    let deviation = g.orthogonality_defect();
    if deviation > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { deviation });
    }
    let n = 2 * ell + 1;
    let mut best = f64::INFINITY;
    for seed in 0..MAX_SAMPLING_ATTEMPTS {
        let points = spiral_points(n, seed);
        let m = sampling_matrix(ell, &points);
        let cond = condition(&m);
        best = best.min(cond);
        if cond > MAX_SAMPLING_CONDITION {
            continue;
        }
        let rotated: Vec<SpherePoint> = points.iter().map(|p| g.apply_point(p)).collect();
        let rhs = sampling_matrix(ell, &rotated);
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularSampling { condition: cond })?;
        let gm = GMatrix {
            ell,
            entries: sol.transpose(),
        };
        let residual = held_out_residual(&gm, g, seed);
        if residual > HELD_OUT_TOL {
            return Err(Error::ValidationFailed { residual });
        }
        return Ok(gm);
    }
    Err(Error::SingularSampling { condition: best })
}

/// Largest `|Φ_j(gX) - Σ_k G[j,k] Φ_k(X)| / Σ_k |G[j,k]|` over held-out points.
fn held_out_residual(gm: &GMatrix, g: &RotationMatrix3, seed: usize) -> f64 {
    let ell = gm.ell;
    let points = spiral_points(HELD_OUT_POINTS, seed + 1000);
    let before = sampling_matrix(ell, &points);
    let rotated: Vec<SpherePoint> = points.iter().map(|p| g.apply_point(p)).collect();
    let after = sampling_matrix(ell, &rotated);
    // predicted[i, j] = Σ_k Φ_k(X_i) G[j, k]
    let predicted = &before * gm.entries.transpose();
    let mut worst: f64 = 0.0;
    for j in 0..gm.entries.nrows() {
        let row_norm: f64 = gm
            .entries
            .row(j)
            .iter()
            .map(|z| z.norm())
            .sum::<f64>()
            .max(1.0);
        for i in 0..points.len() {
            worst = worst.max((after[(i, j)] - predicted[(i, j)]).norm() / row_norm);
        }
    }
    worst
}

/// Summation range of `n` in the closed-form `G`; always `2ℓ+1` consecutive values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NRange {
    /// `-ℓ..=ℓ`
    Symmetric,
    /// `0..=2ℓ`
    NonNegative,
    /// `start..=start+2ℓ`
    StartingAt(i64),
}

impl NRange {
    pub fn bounds(&self, ell: usize) -> (i64, i64) {
        let l = ell as i64;
        let start = match *self {
            NRange::Symmetric => -l,
            NRange::NonNegative => 0,
            NRange::StartingAt(s) => s,
        };
        (start, start + 2 * l)
    }
}

const DEGENERATE_BASE: f64 = 1e-12;

fn signed_pow(base: Complex64, exp: i64, row: i64, n: i64) -> Result<Complex64> {
    if exp >= 0 {
        return Ok(base.powu(exp as u32));
    }
    if base.norm() < DEGENERATE_BASE {
        return Err(Error::FormulaInapplicable { row, n });
    }
    Ok(base.inv().powu(exp.unsigned_abs() as u32))
}

/// `G[j, k] = (1/(2ℓ+1)) Σ_n ρ^{-kn} (gα·N_j)^n (gβ·N_j)^{ℓ-n}` over `range`,
/// with `α = (0, 1, -i)` and `β = (1, 0, 0)`.
///
/// With [`NRange::Symmetric`] this reproduces [`g_matrix_solve`] for any
/// rotation, and [`g_matrix_so2`] for rotations about the x axis. Other ranges
/// do not give the representation matrix in general.
pub fn g_matrix_formula(ell: usize, g: &RotationMatrix3, range: NRange) -> Result<GMatrix> {
    let nn = 2 * ell + 1;
    let ga = g.apply_complex(&ComplexVec3::alpha());
    let gb = g.apply_complex(&ComplexVec3::beta());
    let (lo, hi) = range.bounds(ell);
    let l = ell as i64;
    let mut entries = DMatrix::zeros(nn, nn);
    for r in 0..nn {
        let j = index_at(ell, r);
        let nj = null_vector(ell, j);
        let a = ga.dot(&nj);
        let b = gb.dot(&nj);
        let mut terms = Vec::with_capacity(nn);
        for n in lo..=hi {
            terms.push((n, signed_pow(a, n, j, n)? * signed_pow(b, l - n, j, n)?));
        }
        for c in 0..nn {
            let k = index_at(ell, c);
            let s: Complex64 = terms
                .iter()
                .map(|(n, t)| root_of_unity(ell, -k * n) * t)
                .sum();
            entries[(r, c)] = s / nn as f64;
        }
    }
    Ok(GMatrix { ell, entries })
}

/// `G[j, k] = (1/(2ℓ+1)) Σ_{n=-ℓ..ℓ} w^n ρ^{n(j-k)}`, `w = e^{iψ}`, for
/// [`RotationMatrix3::about_x`]`(psi)`.
pub fn g_matrix_so2(ell: usize, psi: f64) -> GMatrix {
    let nn = 2 * ell + 1;
    let l = ell as i64;
    let entries = DMatrix::from_fn(nn, nn, |r, c| {
        let d = index_at(ell, r) - index_at(ell, c);
        let s: Complex64 = (-l..=l)
            .map(|n| Complex64::from_polar(1.0, n as f64 * psi) * root_of_unity(ell, n * d))
            .sum();
        s / nn as f64
    });
    GMatrix { ell, entries }
}

/// Coefficients of `T_g f` given those of `f`: `c' = Gᵀ c`.
pub fn apply_rotation(e: &PhiExpansion, gm: &GMatrix) -> Result<PhiExpansion> {
    if e.ell != gm.ell {
        return Err(Error::DegreeMismatch {
            expected: gm.ell,
            found: e.ell,
        });
    }
    let c = nalgebra::DVector::from_column_slice(&e.coeffs);
    Ok(PhiExpansion {
        ell: e.ell,
        coeffs: gm.entries.tr_mul(&c).iter().cloned().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::eval_phi_expansion;

    #[test]
    fn about_x_examples() {
        assert_eq!(RotationMatrix3::about_x(0.0), RotationMatrix3::identity());
        let v = RotationMatrix3::about_x(PI / 2.0).apply([0.0, 1.0, 0.0]);
        assert!(v[0].abs() < 1e-16 && v[1].abs() < 1e-15 && (v[2] - 1.0).abs() < 1e-15);
        let full = RotationMatrix3::about_x(2.0 * PI);
        for (r, row) in full.rows().iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                assert!((v - id).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn rejects_non_rotations() {
        let scaled = [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(RotationMatrix3::new(scaled).is_err());
        let reflection = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(RotationMatrix3::new(reflection).is_err());
        assert!(RotationMatrix3::from_axis_angle([0.0; 3], 1.0).is_err());
        let bad = RotationMatrix3 { m: scaled };
        assert!(matches!(
            g_matrix_solve(2, &bad),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn axis_angle_about_x_matches() {
        let a = RotationMatrix3::from_axis_angle([3.0, 0.0, 0.0], 0.7).unwrap();
        let b = RotationMatrix3::about_x(0.7);
        for r in 0..3 {
            for c in 0..3 {
                assert!((a.rows()[r][c] - b.rows()[r][c]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn solve_identity() {
        for ell in 0..=8 {
            let g = g_matrix_solve(ell, &RotationMatrix3::identity()).unwrap();
            let err =
                (g.entries - DMatrix::<Complex64>::identity(2 * ell + 1, 2 * ell + 1)).camax();
            assert!(err <= 1e-11, "ell={ell} err={err}");
        }
    }

    #[test]
    fn formula_identity() {
        for ell in 0..=6 {
            let g = g_matrix_formula(ell, &RotationMatrix3::identity(), NRange::Symmetric).unwrap();
            let err =
                (g.entries - DMatrix::<Complex64>::identity(2 * ell + 1, 2 * ell + 1)).camax();
            assert!(err <= 1e-12);
        }
    }

    #[test]
    fn formula_reports_degenerate_base() {
        // maps β = (1,0,0) to (0,1,0), so gβ·N_0 = 0 and negative powers of it are needed
        let g = RotationMatrix3::from_axis_angle([0.0, 0.0, 1.0], PI / 2.0).unwrap();
        assert!(matches!(
            g_matrix_formula(2, &g, NRange::NonNegative),
            Err(Error::FormulaInapplicable { row: 0, .. })
        ));
    }

    #[test]
    fn root_of_unity_rotation_permutes() {
        let ell = 3;
        let n = 2 * ell as i64 + 1;
        for big_k in 0..n {
            let psi = big_k as f64 * 2.0 * PI / n as f64;
            let g = g_matrix_so2(ell, psi);
            for j in -3i64..=3 {
                for k in -3i64..=3 {
                    let expect = if (big_k + j - k).rem_euclid(n) == 0 {
                        1.0
                    } else {
                        0.0
                    };
                    assert!((g.get(j, k) - expect).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn apply_checks_degree_and_identity() {
        let e = PhiExpansion::delta(2, 1);
        assert!(apply_rotation(&e, &GMatrix::identity(3)).is_err());
        assert_eq!(apply_rotation(&e, &GMatrix::identity(2)).unwrap(), e);
    }

    #[test]
    fn transport_law_small() {
        let g = RotationMatrix3::from_quaternion([0.3, -0.5, 0.7, 0.2]);
        let gm = g_matrix_solve(2, &g).unwrap();
        let e = PhiExpansion::new(
            2,
            (0..5)
                .map(|i| Complex64::new(0.3 * i as f64 - 0.5, 0.1 * i as f64))
                .collect(),
        )
        .unwrap();
        let r = apply_rotation(&e, &gm).unwrap();
        for p in spiral_points(25, 7) {
            let lhs = eval_phi_expansion(&r, &p);
            let rhs = eval_phi_expansion(&e, &g.apply_point(&p));
            assert!((lhs - rhs).norm() <= 1e-10);
        }
    }
}
