//! Browser bindings for the demo page in `www/`.
//!
//! Complex arrays cross the boundary interleaved as `[re0, im0, re1, im1, ...]`.
//! Sphere maps are theta-major with cell-centred `θ_i = (i+½)π/nθ` and `φ_k = 2πk/nφ`.

use nullharm::{
    apply_rotation, eval_phi, g_matrix_solve, phi_from_y_matrix, Complex64, PhiExpansion,
    RotationMatrix3, SpherePoint,
};
use wasm_bindgen::prelude::*;

/// Largest degree the page may request.
pub const DEMO_MAX_DEGREE: usize = 12;

fn check_degree(ell: usize) -> Result<(), String> {
    if ell > DEMO_MAX_DEGREE {
        return Err(format!(
            "degree {ell} exceeds the demo limit {DEMO_MAX_DEGREE}"
        ));
    }
    Ok(())
}

fn interleave(values: impl IntoIterator<Item = Complex64>) -> Vec<f64> {
    values.into_iter().flat_map(|z| [z.re, z.im]).collect()
}

fn deinterleave(ell: usize, data: &[f64]) -> Result<Vec<Complex64>, String> {
    if data.len() != 2 * (2 * ell + 1) {
        return Err(format!(
            "expected {} numbers for degree {ell}, got {}",
            2 * (2 * ell + 1),
            data.len()
        ));
    }
    Ok(data
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect())
}

fn grid(n_theta: usize, n_phi: usize) -> Result<impl Iterator<Item = SpherePoint>, String> {
    if n_theta == 0 || n_phi == 0 || n_theta * n_phi > 1 << 20 {
        return Err(format!("unusable grid {n_theta}x{n_phi}"));
    }
    Ok((0..n_theta).flat_map(move |i| {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
        (0..n_phi).map(move |k| {
            SpherePoint::new(theta, 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64)
        })
    }))
}

pub fn basis_map_impl(
    ell: usize,
    j: i64,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>, String> {
    check_degree(ell)?;
    if j.unsigned_abs() as usize > ell {
        return Err(format!("index {j} outside -{ell}..={ell}"));
    }
    let values: Result<Vec<_>, _> = grid(n_theta, n_phi)?
        .map(|p| eval_phi(ell, j, &p))
        .collect();
    Ok(interleave(values.map_err(|e| e.to_string())?))
}

pub fn expansion_map_impl(
    ell: usize,
    coeffs: &[f64],
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>, String> {
    check_degree(ell)?;
    let e = PhiExpansion::new(ell, deinterleave(ell, coeffs)?).map_err(|e| e.to_string())?;
    Ok(interleave(
        grid(n_theta, n_phi)?.map(|p| nullharm::eval_phi_expansion(&e, &p)),
    ))
}

pub fn rotate_impl(
    ell: usize,
    coeffs: &[f64],
    axis: [f64; 3],
    angle: f64,
) -> Result<Vec<f64>, String> {
    check_degree(ell)?;
    let e = PhiExpansion::new(ell, deinterleave(ell, coeffs)?).map_err(|e| e.to_string())?;
    let g = RotationMatrix3::from_axis_angle(axis, angle).map_err(|e| e.to_string())?;
    let gm = g_matrix_solve(ell, &g).map_err(|e| e.to_string())?;
    let out = apply_rotation(&e, &gm).map_err(|e| e.to_string())?;
    Ok(interleave(out.coeffs))
}

pub fn table_impl(ell: usize) -> Result<Vec<f64>, String> {
    check_degree(ell)?;
    let a = phi_from_y_matrix(ell);
    let l = ell as i64;
    Ok(interleave(
        (-l..=l)
            .flat_map(|j| (-l..=l).map(move |m| (j, m)))
            .map(|(j, m)| a.get(j, m)),
    ))
}

/// Values of `Φ^ℓ_j` on an `n_theta × n_phi` grid.
#[wasm_bindgen]
pub fn basis_map(ell: usize, j: i32, n_theta: usize, n_phi: usize) -> Result<Vec<f64>, JsError> {
    basis_map_impl(ell, j as i64, n_theta, n_phi).map_err(|e| JsError::new(&e))
}

/// Values of `Σ c_j Φ^ℓ_j` on an `n_theta × n_phi` grid.
#[wasm_bindgen]
pub fn expansion_map(
    ell: usize,
    coeffs: &[f64],
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>, JsError> {
    expansion_map_impl(ell, coeffs, n_theta, n_phi).map_err(|e| JsError::new(&e))
}

/// Φ coefficients of `x ↦ f(gx)` for the rotation `g` about `axis` by `angle`.
#[wasm_bindgen]
pub fn rotate(
    ell: usize,
    coeffs: &[f64],
    ax: f64,
    ay: f64,
    az: f64,
    angle: f64,
) -> Result<Vec<f64>, JsError> {
    rotate_impl(ell, coeffs, [ax, ay, az], angle).map_err(|e| JsError::new(&e))
}

/// Row-major `(2ℓ+1)²` matrix `A[j,m]` with `Φ^ℓ_j = Σ_m A[j,m] Y_ℓm`.
#[wasm_bindgen]
pub fn coefficient_table(ell: usize) -> Result<Vec<f64>, JsError> {
    table_impl(ell).map_err(|e| JsError::new(&e))
}
