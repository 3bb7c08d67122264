//! Spherical harmonics in the null-vector basis.
//!
//! For every degree `ℓ` the eigenspace of the sphere Laplacian with eigenvalue
//! `-ℓ(ℓ+1)` is spanned by the `2ℓ+1` functions `Φ_j(X) = (X·N_j)^ℓ`, where the
//! `N_j` are complex null vectors indexed by the `(2ℓ+1)`-th roots of unity.
//! This crate provides:
//!
//! * [`geometry`]: complex 3-vectors, the null family `N_j` and point evaluation of `Φ_j`;
//! * [`harmonics`]: reference `Y_ℓm`, associated Legendre functions and the finite-sum
//!   representation of `Y_ℓm`;
//! * [`basis`]: change-of-basis matrices between `Φ` and `Y` expansions, Gram matrices;
//! * [`rotation`]: the SO(3) representation matrices in the `Φ` basis;
//! * [`quadrature`]: Gauss-Legendre x trapezoid grids on the sphere;
//! * [`verify`]: the self-check suites behind `nullharm verify`.
//!
//! Coordinates follow an x-polar frame throughout: `x = cos θ`, `y = sin θ cos φ`,
//! `z = sin θ sin φ`. See [`SpherePoint::from_z_polar`] for the usual z-polar frame.
//!
//! Coefficient vectors are stored in increasing index order `-ℓ..=ℓ`, so position
//! `p` holds index `p - ℓ`.

use std::sync::atomic::{AtomicUsize, Ordering};

pub mod basis;
pub mod geometry;
pub mod harmonics;
pub mod quadrature;
pub mod rotation;
mod special;
pub mod verify;

pub use basis::{
    convert_phi_to_y, convert_y_to_phi, eval_phi_expansion, eval_y_expansion, gram_closed_form,
    gram_quadrature, phi_from_y_matrix, y_from_phi_matrix, Basis, BasisMatrix, Direction,
    Expansion, PhiExpansion,
};
pub use geometry::{
    embed, eval_phi, make_null_vector, null_family, root_of_unity, roots_of_unity_sum, ComplexVec3,
    NullFamily, SpherePoint,
};
pub use harmonics::{
    assoc_legendre_oracle, assoc_legendre_paper, b_coefficient, legendre_poly_paper, y_finite_sum,
    y_integral_quadrature, y_reference, BCoefficient, YExpansion,
};
pub use num_complex::Complex64;
pub use quadrature::{build_grid, inner_product, SphereGrid};
pub use rotation::{
    apply_rotation, g_matrix_formula, g_matrix_so2, g_matrix_solve, GMatrix, NRange,
    RotationMatrix3,
};

/// Default upper bound on the harmonic degree.
pub const DEFAULT_MAX_DEGREE: usize = 64;

static MAX_DEGREE: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DEGREE);

/// Current degree cap used by the fallible constructors.
pub fn max_degree() -> usize {
    MAX_DEGREE.load(Ordering::Relaxed)
}

/// Overrides the degree cap.
///
/// Above roughly `ℓ = 80` the factorial ratios in the basis matrices leave the
/// `f64` range and the `Φ` basis becomes too ill-conditioned for the documented
/// tolerances to hold.
pub fn set_max_degree(ell: usize) {
    MAX_DEGREE.store(ell, Ordering::Relaxed);
}

pub(crate) fn check_degree(ell: usize) -> Result<()> {
    let max = max_degree();
    if ell > max {
        return Err(Error::DegreeAboveCap { ell, max });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degree {ell} exceeds the configured maximum {max}")]
    DegreeAboveCap { ell: usize, max: usize },
    #[error("index {index} is outside -{ell}..={ell}")]
    IndexOutOfRange { ell: usize, index: i64 },
    #[error("abscissa {0} is outside [-1, 1]")]
    AbscissaOutOfRange(f64),
    #[error("{got} quadrature nodes given, at least {required} required")]
    InsufficientNodes { required: usize, got: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is not a rotation (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("no well-conditioned sampling set found (best condition number {condition:e})")]
    SingularSampling { condition: f64 },
    #[error("solved representation misses held-out points (residual {residual:e})")]
    ValidationFailed { residual: f64 },
    #[error("expansion cannot be converted to the {target:?} basis it is already in")]
    BasisMismatch { target: basis::Basis },
    #[error("closed-form G needs a negative power of zero in row {row} (n = {n})")]
    FormulaInapplicable { row: i64, n: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Position of index `j` in a coefficient vector of degree `ell`.
#[inline]
pub fn position(ell: usize, j: i64) -> usize {
    (j + ell as i64) as usize
}

/// Index stored at position `p` of a coefficient vector of degree `ell`.
#[inline]
pub fn index_at(ell: usize, p: usize) -> i64 {
    p as i64 - ell as i64
}

pub(crate) fn check_index(ell: usize, j: i64) -> Result<()> {
    if j.unsigned_abs() as usize > ell {
        return Err(Error::IndexOutOfRange { ell, index: j });
    }
    Ok(())
}
