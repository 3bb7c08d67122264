//! Self-check suites for every invariant of the library, plus the recorded
//! resolutions of the formula ambiguities (Gram prefactor, Legendre exponent,
//! summation range of the closed-form `G`).
//!
//! Every check compares a worst-case error against a base tolerance multiplied
//! by a caller-supplied scale factor. A scale of zero makes every check with a
//! nonzero rounding error fail.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{
    conversion_pair, convert_phi_to_y, convert_y_to_phi, eval_phi_expansion, eval_y_expansion,
    gram_closed_form, gram_quadrature, gram_third_form, phi_from_y_matrix, y_from_phi_matrix,
    PhiExpansion,
};
use crate::geometry::{build_null_family, eval_phi, phi_at, ComplexVec3, SpherePoint};
use crate::harmonics::{
    assoc_legendre_oracle, assoc_legendre_paper, legendre_poly_paper, negative_order_sign,
    phase_convention, y_finite_sum, y_integral_quadrature, y_reference, YExpansion,
};
use crate::quadrature::{build_grid, inner_product, SphereGrid};
use crate::rotation::{
    apply_rotation, g_matrix_formula, g_matrix_so2, g_matrix_solve, NRange, RotationMatrix3,
};
use crate::special::ln_factorial;
use crate::{check_degree, index_at, Result};

const SEED: u64 = 0x6e75_6c6c;

/// One invariant evaluated over its degree range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    /// Highest degree the check ran at.
    pub ell: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub label: String,
    pub value: f64,
}

/// How an ambiguity in the published formulas was settled, with the numbers
/// that settle it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub topic: String,
    pub resolution: String,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub ell_max: usize,
    pub tol_scale: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn finding(&self, topic: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.topic == topic)
    }
}

/// One row of the tabulated `ℓ = 1, 2` developments: coefficients of `Φ^ℓ_j`
/// on `Y_ℓm`, `m = -ℓ..=ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixRow {
    pub ell: usize,
    pub j: i64,
    pub coeffs: Vec<Complex64>,
}

/// The published `ℓ = 1, 2` developments, transcribed literally.
///
/// Labels are canonicalized: the `ℓ = 2` block writes `Y^1_m` for `Y^2_m`,
/// its first line carries no `Φ` label and is `Φ^2_0`, and `Y(1)` is `Y^1_1`.
pub fn appendix_a() -> Vec<AppendixRow> {
    let s3 = 3f64.sqrt();
    let p1 = (2.0 * PI / 3.0).sqrt();
    let sq2 = Complex64::new(2f64.sqrt(), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let w_plus = Complex64::new(-1.0, s3) / 2.0;
    let w_minus = -Complex64::new(1.0, s3) / 2.0;
    let mut rows = vec![
        AppendixRow {
            ell: 1,
            j: 0,
            coeffs: vec![one * p1, sq2 * p1, one * p1],
        },
        AppendixRow {
            ell: 1,
            j: -1,
            coeffs: vec![w_plus * p1, sq2 * p1, w_minus * p1],
        },
        AppendixRow {
            ell: 1,
            j: 1,
            coeffs: vec![w_minus * p1, sq2 * p1, w_plus * p1],
        },
    ];
    let p2 = 2.0 * PI.sqrt() / 5f64.sqrt();
    let mags = [
        1.0 / 6f64.sqrt(),
        (2.0 / 3.0f64).sqrt(),
        1.0,
        (2.0 / 3.0f64).sqrt(),
        1.0 / 6f64.sqrt(),
    ];
    // phases in units of iπ/5, m = -2..=2
    let phases: [(i64, [i64; 5]); 5] = [
        (0, [0, 0, 0, 0, 0]),
        (-1, [4, 2, 0, -2, -4]),
        (1, [-4, -2, 0, 2, 4]),
        (2, [-8, -4, 0, 4, 8]),
        (-2, [8, 4, 0, -4, -8]),
    ];
    for (j, ph) in phases {
        let coeffs = mags
            .iter()
            .zip(ph)
            .map(|(m, k)| Complex64::from_polar(p2 * m, k as f64 * PI / 5.0))
            .collect();
        rows.push(AppendixRow { ell: 2, j, coeffs });
    }
    rows
}

struct Runner {
    scale: f64,
    checks: Vec<Check>,
}

impl Runner {
    fn record(&mut self, suite: &str, name: &str, ell: usize, max_error: f64, base_tol: f64) {
        let tolerance = base_tol * self.scale;
        self.checks.push(Check {
            suite: suite.into(),
            name: name.into(),
            ell,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        });
    }
}

/// Running maximum that keeps NaN once seen.
#[derive(Clone, Copy, Default)]
struct Worst(f64);

impl Worst {
    fn add(&mut self, e: f64) {
        if e.is_nan() || self.0.is_nan() {
            self.0 = f64::NAN;
        } else if e > self.0 {
            self.0 = e;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let x: f64 = rng.gen_range(-1.0..1.0);
    SpherePoint::new(x.acos(), rng.gen_range(0.0..2.0 * PI))
}

fn random_rotation(rng: &mut ChaCha8Rng) -> RotationMatrix3 {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n: f64 = q.iter().map(|v| v * v).sum();
        if n > 1e-2 && n <= 1.0 {
            return RotationMatrix3::from_quaternion(q);
        }
    }
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    max_abs(&(a - b))
}

fn vec_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Legendre error metric: relative above `|ref| = 1e-2`, absolute `1e-12`
/// equivalent below it.
fn legendre_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-2)
}

/// Runs every suite for degrees up to `ell_max` with tolerances multiplied by
/// `tol_scale`.
pub fn run(ell_max: usize, tol_scale: f64) -> Result<Report> {
    check_degree(ell_max)?;
    let mut r = Runner {
        scale: tol_scale,
        checks: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    geometry_suite(&mut r, &mut rng, ell_max);
    harmonics_suite(&mut r, &mut rng, ell_max);
    basis_suite(&mut r, &mut rng, ell_max);
    quadrature_suite(&mut r, ell_max);
    rotation_suite(&mut r, &mut rng, ell_max)?;
    let findings = vec![
        gram_finding(ell_max),
        legendre_exponent_finding(ell_max),
        negative_order_finding(ell_max),
        phase_finding(&mut rng, ell_max),
        g_range_finding(&mut rng, ell_max)?,
        composition_finding(&mut rng, ell_max)?,
    ];
    let passed = r.checks.iter().all(|c| c.passed);
    Ok(Report {
        ell_max,
        tol_scale,
        passed,
        checks: r.checks,
        findings,
    })
}

fn geometry_suite(r: &mut Runner, rng: &mut ChaCha8Rng, ell_max: usize) {
    let top = ell_max.min(32);
    let (mut self_dot, mut pair_dot) = (Worst::default(), Worst::default());
    for ell in 0..=top {
        let fam = build_null_family(ell);
        for j in fam.indices() {
            self_dot.add(fam.get(j).dot(fam.get(j)).norm());
            for k in fam.indices() {
                let want = 1.0 - (2.0 * PI * (j - k) as f64 / fam.len() as f64).cos();
                pair_dot.add((fam.get(j).dot(fam.get(k)) - want).norm());
            }
        }
    }
    r.record("geometry", "null_self_dot", top, self_dot.0, 1e-13);
    r.record("geometry", "null_pair_dot", top, pair_dot.0, 1e-12);

    // flat Laplacian by central differences, scaled by ℓ² |X|^{ℓ-2} max_{S²}|p|
    // (the maximum of |X·N_j| over the unit sphere is one)
    let h = 1e-4;
    let mut harm = Worst::default();
    for ell in 0..=ell_max {
        let l = ell as i64;
        for _ in 0..20 {
            let j = rng.gen_range(-l..=l);
            let radius = rng.gen_range(0.5..2.0);
            let p = random_point(rng).to_cartesian().map(|c| c * radius);
            let f = |x: [f64; 3]| phi_at(ell, j, &ComplexVec3::real(x[0], x[1], x[2]));
            let centre = f(p);
            let mut lap = Complex64::new(0.0, 0.0);
            for axis in 0..3 {
                let mut up = p;
                let mut down = p;
                up[axis] += h;
                down[axis] -= h;
                lap += (f(up) - 2.0 * centre + f(down)) / (h * h);
            }
            let scale = (ell * ell).max(1) as f64 * radius.powi(ell as i32 - 2);
            harm.add(lap.norm() / scale);
        }
    }
    r.record("geometry", "flat_laplacian_vanishes", ell_max, harm.0, 1e-5);

    let top = ell_max.min(8);
    let mut eig = Worst::default();
    for ell in 0..=top {
        let l = ell as i64;
        let lambda = (ell * (ell + 1)) as f64;
        for _ in 0..20 {
            let j = rng.gen_range(-l..=l);
            let p = SpherePoint::new(rng.gen_range(0.2..PI - 0.2), rng.gen_range(0.0..2.0 * PI));
            let lap = angular_laplacian(|q| eval_phi(ell, j, q).expect("index in range"), &p, 1e-3);
            let f = eval_phi(ell, j, &p).expect("index in range");
            let denom = (lambda.max(1.0)) * f.norm();
            eig.add((lap + f * lambda).norm() / denom);
        }
    }
    r.record("geometry", "angular_laplacian_eigenvalue", top, eig.0, 1e-4);

    let top = ell_max.min(16);
    let mut closed = Worst::default();
    for ell in 0..=top {
        let l = ell as i64;
        let a = 2.0 * PI / (2 * ell + 1) as f64;
        for _ in 0..10 {
            let p = random_point(rng);
            for j in -l..=l {
                let got = eval_phi(ell, j, &p).expect("index in range");
                let want =
                    Complex64::new(p.theta.cos(), p.theta.sin() * (p.phi + j as f64 * a).sin())
                        .powu(ell as u32);
                closed.add((got - want).norm() / want.norm().max(1e-300));
            }
        }
    }
    r.record("geometry", "phi_closed_form", top, closed.0, 1e-12);
}

/// `∂²_θ f + cot θ ∂_θ f + sin^{-2} θ ∂²_φ f` with 5-point stencils.
pub fn angular_laplacian<F>(f: F, p: &SpherePoint, h: f64) -> Complex64
where
    F: Fn(&SpherePoint) -> Complex64,
{
    let at = |dt: f64, dp: f64| f(&SpherePoint::new(p.theta + dt, p.phi + dp));
    let c = at(0.0, 0.0);
    let (t2, t1, tm1, tm2) = (at(2.0 * h, 0.0), at(h, 0.0), at(-h, 0.0), at(-2.0 * h, 0.0));
    let (p2, p1, pm1, pm2) = (at(0.0, 2.0 * h), at(0.0, h), at(0.0, -h), at(0.0, -2.0 * h));
    let d1 = (-t2 + t1 * 8.0 - tm1 * 8.0 + tm2) / (12.0 * h);
    let d2 = (-t2 + t1 * 16.0 - c * 30.0 + tm1 * 16.0 - tm2) / (12.0 * h * h);
    let dpp = (-p2 + p1 * 16.0 - c * 30.0 + pm1 * 16.0 - pm2) / (12.0 * h * h);
    let (s, co) = p.theta.sin_cos();
    d2 + d1 * (co / s) + dpp / (s * s)
}

fn harmonics_suite(r: &mut Runner, rng: &mut ChaCha8Rng, ell_max: usize) {
    let top = ell_max.min(20);
    let xs: Vec<f64> = (0..100).map(|i| -0.995 + 1.99 * i as f64 / 99.0).collect();
    let (mut pos, mut neg) = (Worst::default(), Worst::default());
    for ell in 0..=top {
        let l = ell as i64;
        for m in -l..=l {
            for &x in &xs {
                let got = assoc_legendre_paper(ell, m, x).expect("valid order");
                let want = assoc_legendre_oracle(ell, m, x).expect("valid order");
                if m >= 0 { &mut pos } else { &mut neg }.add(legendre_err(got, want));
            }
        }
    }
    r.record(
        "harmonics",
        "legendre_formula_vs_recurrence",
        top,
        pos.0,
        1e-10,
    );
    r.record("harmonics", "legendre_negative_order", top, neg.0, 1e-10);

    let mut at_one = Worst::default();
    let mut poly = Worst::default();
    for ell in 0..=top {
        at_one.add((legendre_poly_paper(ell, 1.0).expect("in range") - 1.0).abs());
        for &x in &xs {
            let got = legendre_poly_paper(ell, x).expect("in range");
            poly.add(legendre_err(
                got,
                assoc_legendre_oracle(ell, 0, x).expect("in range"),
            ));
        }
    }
    r.record("harmonics", "legendre_poly_at_one", top, at_one.0, 1e-12);
    r.record(
        "harmonics",
        "legendre_poly_vs_recurrence",
        top,
        poly.0,
        1e-10,
    );

    let top = ell_max.min(8);
    let (mut quad, mut refd, mut azi) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=top {
        let l = ell as i64;
        for _ in 0..50 {
            let p = random_point(rng);
            for m in -l..=l {
                let fin = y_finite_sum(ell, m, &p).expect("valid order");
                let int = y_integral_quadrature(ell, m, &p, 2 * ell + 2).expect("enough nodes");
                quad.add((fin - int).norm());
                let want = phase_convention(m) * y_reference(ell, m, &p).expect("valid order");
                refd.add((fin - want).norm());
            }
        }
        for _ in 0..20 {
            let p = random_point(rng);
            let psi = rng.gen_range(0.0..2.0 * PI);
            let m = rng.gen_range(-l..=l);
            let moved = SpherePoint::new(p.theta, p.phi + psi);
            let got = y_finite_sum(ell, m, &moved).expect("valid order");
            let want = y_finite_sum(ell, m, &p).expect("valid order")
                * Complex64::from_polar(1.0, m as f64 * psi);
            azi.add((got - want).norm());
        }
    }
    r.record("harmonics", "finite_sum_vs_integral", top, quad.0, 1e-12);
    r.record("harmonics", "finite_sum_vs_reference", top, refd.0, 1e-11);
    r.record("harmonics", "azimuthal_eigenfunction", top, azi.0, 1e-12);

    let top = ell_max.min(10);
    let mut ortho = Worst::default();
    for ell in 0..=top {
        let grid = SphereGrid::for_degree(ell);
        let l = ell as i64;
        for m in -l..=l {
            for mp in -l..=l {
                let v = inner_product(
                    |p| y_reference(ell, m, p).expect("valid order"),
                    |p| y_reference(ell, mp, p).expect("valid order"),
                    &grid,
                );
                let want = if m == mp { 1.0 } else { 0.0 };
                ortho.add((v - want).norm());
            }
        }
    }
    r.record("harmonics", "reference_orthonormal", top, ortho.0, 1e-10);
}

fn basis_suite(r: &mut Runner, rng: &mut ChaCha8Rng, ell_max: usize) {
    let mut appendix = Worst::default();
    for row in appendix_a().into_iter().filter(|row| row.ell <= ell_max) {
        let a = phi_from_y_matrix(row.ell);
        for (p, want) in row.coeffs.iter().enumerate() {
            appendix.add((a.get(row.j, index_at(row.ell, p)) - want).norm());
        }
    }
    r.record(
        "basis",
        "appendix_a_rows",
        ell_max.min(2),
        appendix.0,
        1e-12,
    );

    let top = ell_max.min(20);
    let (mut inv, mut phi_rt, mut y_rt) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=top {
        let n = 2 * ell + 1;
        let pair = conversion_pair(ell);
        let prod = &pair.y_from_phi.entries * &pair.phi_from_y.entries;
        inv.add(max_diff(&prod, &DMatrix::identity(n, n)));
        for _ in 0..100 {
            let c = random_coeffs(rng, n);
            let e = PhiExpansion::new(ell, c.clone()).expect("length matches");
            phi_rt.add(vec_diff(
                &convert_y_to_phi(&convert_phi_to_y(&e)).coeffs,
                &c,
            ));
            let y = YExpansion::new(ell, c.clone()).expect("length matches");
            y_rt.add(vec_diff(
                &convert_phi_to_y(&convert_y_to_phi(&y)).coeffs,
                &c,
            ));
        }
    }
    r.record("basis", "inverse_pair", top, inv.0, 1e-11);
    r.record("basis", "roundtrip_phi_y_phi", top, phi_rt.0, 1e-11);
    r.record("basis", "roundtrip_y_phi_y", top, y_rt.0, 1e-11);

    let top = ell_max.min(16);
    let (mut gq, mut gaa, mut circ) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=top {
        let closed = gram_closed_form(ell);
        let scale = max_abs(&closed.entries);
        let quad = gram_quadrature(ell, ell + 2, 2 * ell + 3).expect("order sufficient");
        gq.add(max_diff(&closed.entries, &quad.entries) / scale);
        let a = &conversion_pair(ell).phi_from_y.entries;
        gaa.add(max_diff(&closed.entries, &(a * a.adjoint())) / scale);
        let n = 2 * ell + 1;
        for rr in 0..n {
            for c in 0..n {
                let d = (c + n - rr) % n;
                circ.add((closed.entries[(rr, c)] - closed.entries[(0, d)]).norm() / scale);
            }
        }
    }
    r.record("basis", "gram_closed_vs_quadrature", top, gq.0, 1e-9);
    r.record("basis", "gram_equals_a_a_adjoint", top, gaa.0, 1e-10);
    r.record("basis", "gram_circulant", top, circ.0, 1e-12);

    let mut bridge = Worst::default();
    for ell in 0..=ell_max.min(32) {
        let fam = build_null_family(ell);
        for j in fam.indices() {
            for k in fam.indices() {
                let c = ((j - k) as f64 * PI / fam.len() as f64).cos();
                let lhs = Complex64::new(2.0, 0.0) - fam.get(j).dot(fam.get(k));
                bridge.add((lhs - 2.0 * c * c).norm());
            }
        }
    }
    r.record(
        "basis",
        "two_minus_dot_identity",
        ell_max.min(32),
        bridge.0,
        1e-13,
    );

    let top = ell_max.min(12);
    let (mut pointwise, mut yrow) = (Worst::default(), Worst::default());
    for ell in 0..=top {
        let n = 2 * ell + 1;
        let l = ell as i64;
        for _ in 0..10 {
            let c = random_coeffs(rng, n);
            let norm = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let e = PhiExpansion::new(ell, c).expect("length matches");
            let y = convert_phi_to_y(&e);
            for _ in 0..5 {
                let p = random_point(rng);
                pointwise
                    .add((eval_phi_expansion(&e, &p) - eval_y_expansion(&y, &p)).norm() / norm);
            }
        }
        let b = y_from_phi_matrix(ell);
        for _ in 0..30 {
            let p = random_point(rng);
            let phis: Vec<Complex64> = (-l..=l)
                .map(|j| eval_phi(ell, j, &p).expect("in range"))
                .collect();
            for m in -l..=l {
                let sum: Complex64 = (-l..=l).zip(&phis).map(|(j, f)| b.get(m, j) * f).sum();
                let want = phase_convention(m) * y_reference(ell, m, &p).expect("in range");
                yrow.add((sum - want).norm());
            }
        }
    }
    r.record("basis", "convert_preserves_values", top, pointwise.0, 1e-10);
    r.record("basis", "y_from_phi_pointwise", top, yrow.0, 1e-10);
}

fn quadrature_suite(r: &mut Runner, ell_max: usize) {
    let (mut wsum, mut doubling, mut conj) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=ell_max {
        let grid = SphereGrid::for_degree(ell);
        wsum.add((grid.weight_sum() - 4.0 * PI).abs());
        let fine = build_grid(2 * grid.n_theta, 2 * grid.n_phi);
        let l = ell as i64;
        let f = |p: &SpherePoint| eval_phi(ell, l, p).expect("in range");
        let g = |p: &SpherePoint| eval_phi(ell, -l, p).expect("in range");
        let coarse_v = inner_product(f, g, &grid);
        let fine_v = inner_product(f, g, &fine);
        let scale = inner_product(f, f, &grid).norm();
        doubling.add((coarse_v - fine_v).norm() / scale);
        conj.add((coarse_v - inner_product(g, f, &grid).conj()).norm() / scale);
    }
    r.record("quadrature", "weights_sum_to_4pi", ell_max, wsum.0, 1e-12);
    r.record(
        "quadrature",
        "resolution_doubling",
        ell_max,
        doubling.0,
        1e-12,
    );
    r.record("quadrature", "conjugate_symmetry", ell_max, conj.0, 1e-14);
}

fn rotation_suite(r: &mut Runner, rng: &mut ChaCha8Rng, ell_max: usize) -> Result<()> {
    let top = ell_max.min(6);
    let (mut ident, mut defining, mut iso) = (Worst::default(), Worst::default(), Worst::default());
    let (mut so2, mut diag, mut perm) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=top {
        let n = 2 * ell + 1;
        let l = ell as i64;
        let id = g_matrix_solve(ell, &RotationMatrix3::identity())?;
        ident.add(max_diff(&id.entries, &DMatrix::identity(n, n)));
        let gram = gram_closed_form(ell).entries;
        for _ in 0..20 {
            let g = random_rotation(rng);
            let gm = g_matrix_solve(ell, &g)?;
            for _ in 0..50 {
                let p = random_point(rng);
                let moved = g.apply_point(&p);
                let phis: Vec<Complex64> = (-l..=l)
                    .map(|k| eval_phi(ell, k, &p).expect("in range"))
                    .collect();
                for j in -l..=l {
                    let lhs = eval_phi(ell, j, &moved).expect("in range");
                    let rhs: Complex64 = (-l..=l).zip(&phis).map(|(k, f)| gm.get(j, k) * f).sum();
                    defining.add((lhs - rhs).norm());
                }
            }
            let c = nalgebra::DVector::from_vec(random_coeffs(rng, n));
            let e = PhiExpansion::new(ell, c.iter().cloned().collect()).expect("length");
            let moved = apply_rotation(&e, &gm)?;
            let before = (c.adjoint() * &gram * &c)[(0, 0)].re;
            let after = moved.gram_norm_sq();
            iso.add((after.sqrt() - before.sqrt()).abs() / before.sqrt());
        }
        for _ in 0..5 {
            let psi = rng.gen_range(0.0..2.0 * PI);
            let closed = g_matrix_so2(ell, psi);
            let solved = g_matrix_solve(ell, &RotationMatrix3::about_x(psi))?;
            so2.add(max_diff(&closed.entries, &solved.entries));
            let d = closed.to_y_basis();
            for rr in 0..n {
                for cc in 0..n {
                    let want = if rr == cc {
                        Complex64::from_polar(1.0, index_at(ell, rr) as f64 * psi)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    diag.add((d[(rr, cc)] - want).norm());
                }
            }
        }
        for k in 0..n as i64 {
            let psi = k as f64 * 2.0 * PI / n as f64;
            let gm = g_matrix_solve(ell, &RotationMatrix3::about_x(psi))?;
            perm.add(max_diff(&gm.entries, &permutation(ell, k)));
            perm.add(max_diff(
                &g_matrix_so2(ell, psi).entries,
                &permutation(ell, k),
            ));
        }
    }
    r.record("rotation", "identity_solve", top, ident.0, 1e-11);
    r.record("rotation", "defining_relation", top, defining.0, 1e-9);
    r.record("rotation", "gram_isometry", top, iso.0, 1e-9);
    r.record("rotation", "so2_closed_vs_solve", top, so2.0, 1e-10);
    r.record("rotation", "so2_diagonal_in_y", top, diag.0, 1e-11);
    r.record("rotation", "root_of_unity_permutation", top, perm.0, 1e-11);

    let top = ell_max.min(4);
    let mut comp = Worst::default();
    for ell in 0..=top {
        for _ in 0..5 {
            comp.add(transport_composition_error(rng, ell)?.0);
        }
    }
    r.record("rotation", "transport_composition", top, comp.0, 1e-9);
    Ok(())
}

/// `G` for a rotation by `k · 2π/(2ℓ+1)` about x: `G[j, k'] = δ(k' ≡ j + k)`.
pub fn permutation(ell: usize, k: i64) -> DMatrix<Complex64> {
    let n = 2 * ell + 1;
    DMatrix::from_fn(n, n, |r, c| {
        let d = (index_at(ell, c) - index_at(ell, r) - k).rem_euclid(n as i64);
        if d == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Applies `G[g2]` and then `G[g1]` to a random expansion. Returns the worst
/// deviation from `f(g2 g1 X)` and the worst deviation from `f(g1 g2 X)`.
fn transport_composition_error(rng: &mut ChaCha8Rng, ell: usize) -> Result<(f64, f64)> {
    let (g1, g2) = (random_rotation(rng), random_rotation(rng));
    let e = PhiExpansion::new(ell, random_coeffs(rng, 2 * ell + 1))?;
    let twice = apply_rotation(
        &apply_rotation(&e, &g_matrix_solve(ell, &g2)?)?,
        &g_matrix_solve(ell, &g1)?,
    )?;
    let (mut right, mut wrong) = (Worst::default(), Worst::default());
    for _ in 0..50 {
        let p = random_point(rng);
        let got = eval_phi_expansion(&twice, &p);
        right.add((got - eval_phi_expansion(&e, &(g2 * g1).apply_point(&p))).norm());
        wrong.add((got - eval_phi_expansion(&e, &(g1 * g2).apply_point(&p))).norm());
    }
    Ok((right.0, wrong.0))
}

fn gram_finding(ell_max: usize) -> Finding {
    let mut evidence = Vec::new();
    for ell in 1..=ell_max.clamp(1, 4) {
        let first = gram_closed_form(ell).entries;
        let third = gram_third_form(ell).entries;
        let quad = gram_quadrature(ell, ell + 2, 2 * ell + 3)
            .expect("order sufficient")
            .entries;
        let scale = max_abs(&quad);
        evidence.push(Evidence {
            label: format!("ell={ell} first_form_vs_quadrature"),
            value: max_diff(&first, &quad) / scale,
        });
        evidence.push(Evidence {
            label: format!("ell={ell} third_form_vs_quadrature"),
            value: max_diff(&third, &quad) / scale,
        });
        evidence.push(Evidence {
            label: format!("ell={ell} first_over_third_ratio"),
            value: first[(0, 0)].re / third[(0, 0)].re,
        });
    }
    Finding {
        topic: "gram_form".into(),
        resolution: "first closed form 4π(ℓ!)²/((2ℓ+1)(2ℓ)!)·[2cos((j-j')π/(2ℓ+1))]^{2ℓ} adopted; \
                     the [2-N_j·N_j']^ℓ expression with prefactor 2^ℓ/2^{2ℓ} is inconsistent, \
                     smaller by a factor 2^{2ℓ}"
            .into(),
        evidence,
    }
}

/// The Legendre polynomial sum with the alternative `2^{+2q}` weight.
fn legendre_poly_positive_exponent(ell: usize, x: f64) -> f64 {
    (0..=ell / 2)
        .map(|q| {
            let ln_c = ln_factorial(ell) + (2 * q) as f64 * 2f64.ln()
                - ln_factorial(ell - 2 * q)
                - 2.0 * ln_factorial(q);
            ln_c.exp() * (x * x - 1.0).powi(q as i32) * x.powi((ell - 2 * q) as i32)
        })
        .sum()
}

fn legendre_exponent_finding(ell_max: usize) -> Finding {
    let top = ell_max.min(20);
    let xs: Vec<f64> = (0..21).map(|i| -1.0 + i as f64 * 0.1).collect();
    let (mut neg, mut pos, mut pos_at_one) = (Worst::default(), Worst::default(), Worst::default());
    for ell in 0..=top {
        for &x in &xs {
            let want = assoc_legendre_oracle(ell, 0, x).expect("in range");
            neg.add(legendre_err(
                legendre_poly_paper(ell, x).expect("in range"),
                want,
            ));
            pos.add(legendre_err(legendre_poly_positive_exponent(ell, x), want));
        }
        pos_at_one.add((legendre_poly_positive_exponent(ell, 1.0) - 1.0).abs());
    }
    Finding {
        topic: "legendre_exponent".into(),
        resolution: "weight 2^{-2q} (the m = 0 case of the associated Legendre sum) matches the \
                     recurrence; the displayed 2^{+2q} does not. Both give P_ℓ(1) = 1, so the \
                     interior abscissae are what discriminate"
            .into(),
        evidence: vec![
            Evidence {
                label: "minus_2q_max_error".into(),
                value: neg.0,
            },
            Evidence {
                label: "plus_2q_max_error".into(),
                value: pos.0,
            },
            Evidence {
                label: "plus_2q_error_at_x_eq_1".into(),
                value: pos_at_one.0,
            },
            Evidence {
                label: "plus_2q_value_ell2_x0.5".into(),
                value: legendre_poly_positive_exponent(2, 0.5),
            },
        ],
    }
}

fn negative_order_finding(ell_max: usize) -> Finding {
    let top = ell_max.clamp(2, 20);
    let x = 0.3;
    let mut evidence = Vec::new();
    let mut spread = Worst::default();
    for mu in 1..=3i64.min(top as i64 - 1) {
        for ell in [mu as usize, mu as usize + 1] {
            let ratio = assoc_legendre_paper(ell, -mu, x).expect("in range")
                / assoc_legendre_oracle(ell, mu, x).expect("in range");
            evidence.push(Evidence {
                label: format!("raw_ratio ell={ell} mu={mu}"),
                value: ratio,
            });
        }
    }
    for ell in 1..=top {
        for mu in 1..=ell as i64 {
            let ratio = assoc_legendre_paper(ell, -mu, x).expect("in range")
                / assoc_legendre_oracle(ell, mu, x).expect("in range");
            let ln_f = ln_factorial(ell + mu as usize) - ln_factorial(ell - mu as usize);
            spread.add((ratio * ln_f.exp() - negative_order_sign(mu)).abs());
        }
    }
    evidence.push(Evidence {
        label: "normalized_ratio_deviation_from_sign".into(),
        value: spread.0,
    });
    Finding {
        topic: "legendre_negative_order".into(),
        resolution: "P_ℓ^{-μ}/P_ℓ^{μ} is not constant in ℓ; (ℓ+μ)!/(ℓ-μ)! times it is the \
                     ℓ-independent sign (-1)^μ"
            .into(),
        evidence,
    }
}

fn phase_finding(rng: &mut ChaCha8Rng, ell_max: usize) -> Finding {
    let top = ell_max.clamp(1, 8);
    let mut dev = Worst::default();
    for ell in 0..=top {
        let l = ell as i64;
        let p = random_point(rng);
        for m in -l..=l {
            let sigma = y_finite_sum(ell, m, &p).expect("in range")
                / y_reference(ell, m, &p).expect("in range");
            dev.add((sigma - phase_convention(m)).norm());
        }
    }
    Finding {
        topic: "y_phase_convention".into(),
        resolution:
            "the finite-sum harmonic equals the Condon-Shortley-free reference with σ(m) = 1 \
                     for every m, independent of ℓ"
                .into(),
        evidence: vec![Evidence {
            label: "max_sigma_deviation".into(),
            value: dev.0,
        }],
    }
}

fn g_range_finding(rng: &mut ChaCha8Rng, ell_max: usize) -> Result<Finding> {
    let top = ell_max.clamp(1, 4);
    type RangeOf = fn(usize) -> NRange;
    let ranges: [(&str, RangeOf); 3] = [
        ("symmetric", |_| NRange::Symmetric),
        ("non_negative", |_| NRange::NonNegative),
        ("non_positive", |ell| NRange::StartingAt(-2 * ell as i64)),
    ];
    let mut worst = [Worst::default(), Worst::default(), Worst::default()];
    let mut inapplicable = [0.0f64; 3];
    for ell in 1..=top {
        for _ in 0..5 {
            let g = random_rotation(rng);
            let solved = g_matrix_solve(ell, &g)?;
            for (i, (_, range)) in ranges.iter().enumerate() {
                match g_matrix_formula(ell, &g, range(ell)) {
                    Ok(f) => worst[i].add(max_diff(&f.entries, &solved.entries)),
                    Err(_) => inapplicable[i] += 1.0,
                }
            }
        }
    }
    let mut evidence = Vec::new();
    for (i, (name, _)) in ranges.iter().enumerate() {
        evidence.push(Evidence {
            label: format!("{name}_max_deviation"),
            value: worst[i].0,
        });
        evidence.push(Evidence {
            label: format!("{name}_inapplicable"),
            value: inapplicable[i],
        });
    }
    let sym_ok = worst[0].0 <= 1e-9;
    let resolution = if sym_ok {
        "n = -ℓ..ℓ reproduces the solved representation matrix for general rotations; \
         0..2ℓ and -2ℓ..0 do not"
    } else {
        "no tested summation range reproduces the solved representation matrix"
    };
    Ok(Finding {
        topic: "g_formula_n_range".into(),
        resolution: resolution.into(),
        evidence,
    })
}

fn composition_finding(rng: &mut ChaCha8Rng, ell_max: usize) -> Result<Finding> {
    let ell = ell_max.clamp(1, 3);
    let (mut right, mut wrong) = (Worst::default(), Worst::default());
    for _ in 0..5 {
        let (r, w) = transport_composition_error(rng, ell)?;
        right.add(r);
        wrong.add(w);
    }
    Ok(Finding {
        topic: "composition_order".into(),
        resolution: "with (T_g f)(X) = f(gX), applying G[g2] and then G[g1] transports f to \
                     X ↦ f(g2 g1 X); the matrices satisfy G[g2 g1] = G[g2] G[g1]"
            .into(),
        evidence: vec![
            Evidence {
                label: "deviation_from_g2_g1".into(),
                value: right.0,
            },
            Evidence {
                label: "deviation_from_g1_g2".into(),
                value: wrong.0,
            },
        ],
    })
}
