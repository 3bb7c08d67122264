//! Change of basis between `Φ` and `Y` expansions, and the Gram matrix of the
//! `Φ` basis.
//!
//! With `A = phi_from_y_matrix(ℓ)`, `Φ_j = Σ_m A[j, m] Y_m`, and with
//! `B = y_from_phi_matrix(ℓ)`, `Y_m = Σ_j B[m, j] Φ_j`. Coefficient vectors
//! therefore transform by the transposes: `y = Aᵀ c` and `c = Bᵀ y`.
//!
//! Inner products conjugate the second argument, `⟨f, g⟩ = ∫ f ḡ dΩ`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{eval_phi, root_of_unity, SpherePoint};
use crate::harmonics::{ln_b, phase_convention, y_reference, YExpansion};
use crate::quadrature::build_grid;
use crate::special::ln_factorial;
use crate::{index_at, position, Error, Result};

/// Which relation a [`BasisMatrix`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Rows `j`, columns `m`: `Φ_j = Σ_m M[j, m] Y_m`.
    PhiFromY,
    /// Rows `m`, columns `j`: `Y_m = Σ_j M[m, j] Φ_j`.
    YFromPhi,
    /// `M[j, j'] = ⟨Φ_j, Φ_j'⟩`.
    Gram,
}

/// `(2ℓ+1) x (2ℓ+1)` complex matrix indexed `-ℓ..=ℓ` on both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    pub ell: usize,
    pub direction: Direction,
    pub entries: DMatrix<Complex64>,
}

impl BasisMatrix {
    /// Entry at row index `r` and column index `c`, both in `-ℓ..=ℓ`.
    pub fn get(&self, r: i64, c: i64) -> Complex64 {
        self.entries[(position(self.ell, r), position(self.ell, c))]
    }

    pub fn dim(&self) -> usize {
        2 * self.ell + 1
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        let sv = self.entries.clone().svd(false, false).singular_values;
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

fn indexed_matrix<F>(ell: usize, direction: Direction, f: F) -> BasisMatrix
where
    F: Fn(i64, i64) -> Complex64,
{
    let n = 2 * ell + 1;
    let entries = DMatrix::from_fn(n, n, |r, c| f(index_at(ell, r), index_at(ell, c)));
    BasisMatrix {
        ell,
        direction,
        entries,
    }
}

/// `A[j, m] = ρ^{jm} / (2π B^ℓ_m)`.
pub fn phi_from_y_matrix(ell: usize) -> BasisMatrix {
    let ln_two_pi = (2.0 * PI).ln();
    indexed_matrix(ell, Direction::PhiFromY, |j, m| {
        root_of_unity(ell, j * m) * (-ln_two_pi - ln_b(ell, m)).exp()
    })
}

/// `B[m, j] = 2π B^ℓ_m ρ^{-jm} / (2ℓ+1)`.
pub fn y_from_phi_matrix(ell: usize) -> BasisMatrix {
    let ln_scale = (2.0 * PI).ln() - ((2 * ell + 1) as f64).ln();
    indexed_matrix(ell, Direction::YFromPhi, |m, j| {
        root_of_unity(ell, -j * m) * (ln_scale + ln_b(ell, m)).exp()
    })
}

/// Both conversion matrices of one degree.
#[derive(Debug)]
pub struct ConversionPair {
    pub phi_from_y: BasisMatrix,
    pub y_from_phi: BasisMatrix,
}

type Cache = Mutex<HashMap<usize, Arc<OnceLock<Arc<ConversionPair>>>>>;

/// Conversion matrices for `ell`, built at most once per process.
pub fn conversion_pair(ell: usize) -> Arc<ConversionPair> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let slot = {
        let mut map = CACHE
            .get_or_init(Default::default)
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        map.entry(ell).or_default().clone()
    };
    slot.get_or_init(|| {
        Arc::new(ConversionPair {
            phi_from_y: phi_from_y_matrix(ell),
            y_from_phi: y_from_phi_matrix(ell),
        })
    })
    .clone()
}

/// Coefficients `c_j` of `Σ_j c_j Φ_j`, ordered `j = -ℓ..=ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiExpansion {
    pub ell: usize,
    pub coeffs: Vec<Complex64>,
}

impl PhiExpansion {
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

    /// The single basis function `Φ_j`. Panics if `|j| > ℓ`.
    pub fn delta(ell: usize, j: i64) -> Self {
        let mut e = Self::zeros(ell);
        e.coeffs[position(ell, j)] = Complex64::new(1.0, 0.0);
        e
    }

    /// `c_j`. Panics if `|j| > ℓ`.
    pub fn get(&self, j: i64) -> Complex64 {
        self.coeffs[position(self.ell, j)]
    }

    /// `⟨f, f⟩` from the closed-form Gram matrix.
    pub fn gram_norm_sq(&self) -> f64 {
        let g = gram_closed_form(self.ell);
        let c = DVector::from_column_slice(&self.coeffs);
        (c.transpose() * &g.entries * c.map(|z| z.conj()))[(0, 0)].re
    }
}

/// Either kind of expansion.
#[derive(Debug, Clone, PartialEq)]
pub enum Expansion {
    Phi(PhiExpansion),
    Y(YExpansion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Phi,
    Y,
}

impl Expansion {
    pub fn basis(&self) -> Basis {
        match self {
            Expansion::Phi(_) => Basis::Phi,
            Expansion::Y(_) => Basis::Y,
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            Expansion::Phi(e) => e.ell,
            Expansion::Y(e) => e.ell,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        match self {
            Expansion::Phi(e) => &e.coeffs,
            Expansion::Y(e) => &e.coeffs,
        }
    }

    pub fn eval(&self, p: &SpherePoint) -> Complex64 {
        match self {
            Expansion::Phi(e) => eval_phi_expansion(e, p),
            Expansion::Y(e) => eval_y_expansion(e, p),
        }
    }

    /// Re-expresses the same function in `target`; the expansion must be in
    /// the other basis.
    pub fn convert(&self, target: Basis) -> Result<Expansion> {
        match (self, target) {
            (Expansion::Phi(e), Basis::Y) => Ok(Expansion::Y(convert_phi_to_y(e))),
            (Expansion::Y(e), Basis::Phi) => Ok(Expansion::Phi(convert_y_to_phi(e))),
            (_, target) => Err(Error::BasisMismatch { target }),
        }
    }
}

fn apply_transpose(m: &DMatrix<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    let v = DVector::from_column_slice(v);
    m.tr_mul(&v).iter().cloned().collect()
}

pub fn convert_phi_to_y(e: &PhiExpansion) -> YExpansion {
    let pair = conversion_pair(e.ell);
    YExpansion {
        ell: e.ell,
        coeffs: apply_transpose(&pair.phi_from_y.entries, &e.coeffs),
    }
}

pub fn convert_y_to_phi(e: &YExpansion) -> PhiExpansion {
    let pair = conversion_pair(e.ell);
    PhiExpansion {
        ell: e.ell,
        coeffs: apply_transpose(&pair.y_from_phi.entries, &e.coeffs),
    }
}

/// `Σ_j c_j Φ_j(p)`.
pub fn eval_phi_expansion(e: &PhiExpansion, p: &SpherePoint) -> Complex64 {
    let l = e.ell as i64;
    (-l..=l)
        .zip(&e.coeffs)
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(j, c)| c * eval_phi(e.ell, j, p).expect("index in range"))
        .sum()
}

/// `Σ_m f_m Y_m(p)` with the harmonics that [`convert_phi_to_y`] targets.
pub fn eval_y_expansion(e: &YExpansion, p: &SpherePoint) -> Complex64 {
    let l = e.ell as i64;
    (-l..=l)
        .zip(&e.coeffs)
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(m, c)| c * phase_convention(m) * y_reference(e.ell, m, p).expect("order in range"))
        .sum()
}

/// `⟨Φ_j, Φ_j'⟩ = 4π (ℓ!)² / ((2ℓ+1)(2ℓ)!) · [2 cos((j-j')π/(2ℓ+1))]^{2ℓ}`,
/// evaluated in log space.
pub fn gram_closed_form(ell: usize) -> BasisMatrix {
    let n = (2 * ell + 1) as f64;
    let ln_k = (4.0 * PI).ln() + 2.0 * ln_factorial(ell) - n.ln() - ln_factorial(2 * ell);
    indexed_matrix(ell, Direction::Gram, |j, jp| {
        let c = (2.0 * ((j - jp) as f64 * PI / n).cos()).abs();
        let v = if ell == 0 {
            ln_k.exp()
        } else {
            (ln_k + (2 * ell) as f64 * c.ln()).exp()
        };
        Complex64::new(v, 0.0)
    })
}

/// The alternative Gram expression written with `[2 - N_j·N_j']^ℓ` and the
/// extra factor `2^ℓ / 2^{2ℓ}`. It is smaller than [`gram_closed_form`] by
/// exactly `2^{2ℓ}` and does not match quadrature for `ℓ ≥ 1`; kept only so the
/// discrepancy can be reported.
pub fn gram_third_form(ell: usize) -> BasisMatrix {
    let n = (2 * ell + 1) as f64;
    let ln_k = (4.0 * PI).ln() + 2.0 * ln_factorial(ell) + ell as f64 * 2f64.ln()
        - n.ln()
        - ln_factorial(2 * ell)
        - (2 * ell) as f64 * 2f64.ln();
    let family = crate::geometry::build_null_family(ell);
    indexed_matrix(ell, Direction::Gram, |j, jp| {
        let base = Complex64::new(2.0, 0.0) - family.get(j).dot(family.get(jp));
        base.powu(ell as u32) * ln_k.exp()
    })
}

/// Gram matrix by Gauss x trapezoid quadrature of `Φ_j conj(Φ_j')`.
pub fn gram_quadrature(ell: usize, n_theta: usize, n_phi: usize) -> Result<BasisMatrix> {
    if n_theta < ell + 1 {
        return Err(Error::InsufficientNodes {
            required: ell + 1,
            got: n_theta,
        });
    }
    if n_phi < 2 * ell + 2 {
        return Err(Error::InsufficientNodes {
            required: 2 * ell + 2,
            got: n_phi,
        });
    }
    let grid = build_grid(n_theta, n_phi);
    let n = 2 * ell + 1;
    // rows: nodes, columns: basis functions, scaled by sqrt(weight)
    let values = DMatrix::from_fn(grid.nodes.len(), n, |r, c| {
        let (p, w) = &grid.nodes[r];
        eval_phi(ell, index_at(ell, c), p).expect("index in range") * w.sqrt()
    });
    let entries = values.transpose() * values.map(|z| z.conj());
    Ok(BasisMatrix {
        ell,
        direction: Direction::Gram,
        entries,
    })
}
