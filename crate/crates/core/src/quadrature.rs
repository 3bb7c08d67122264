//! Gauss-Legendre (in `cos θ`) x trapezoid (in `φ`) product rules on the sphere.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::SpherePoint;

/// Product quadrature grid; weights are in steradians and sum to `4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Theta-major order.
    pub nodes: Vec<(SpherePoint, f64)>,
}

impl SphereGrid {
    /// `∫ f dΩ`.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&SpherePoint) -> Complex64,
    {
        let terms: Vec<Complex64> = self.nodes.iter().map(|(p, w)| f(p) * *w).collect();
        pairwise_sum(&terms)
    }

    pub fn weight_sum(&self) -> f64 {
        let terms: Vec<Complex64> = self.nodes.iter().map(|(_, w)| (*w).into()).collect();
        pairwise_sum(&terms).re
    }

    /// Smallest grid that integrates products of two degree-`ell` harmonics exactly.
    pub fn for_degree(ell: usize) -> Self {
        build_grid(ell + 2, 2 * ell + 3)
    }
}

/// Recursive halving keeps the rounding error at `O(log n)` and the result
/// independent of how callers chunk the work.
pub(crate) fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if terms.len() <= LEAF {
        return terms.iter().sum();
    }
    let (a, b) = terms.split_at(terms.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[n - 1 - i] = (x, w);
        out[i] = (-x, w);
    }
    if n % 2 == 1 {
        // the middle node is exactly zero
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Grid with `n_theta` Gauss nodes in `cos θ` and `n_phi` uniform nodes in `φ`.
///
/// Exact for polynomials of degree `2 n_theta - 1` in `cos θ` times
/// trigonometric polynomials of degree below `n_phi` in `φ`.
pub fn build_grid(n_theta: usize, n_phi: usize) -> SphereGrid {
    assert!(
        n_theta >= 1 && n_phi >= 1,
        "grid needs at least one node per axis"
    );
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in gauss_legendre(n_theta) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            nodes.push((SpherePoint::new(theta, k as f64 * dphi), w * dphi));
        }
    }
    SphereGrid {
        n_theta,
        n_phi,
        nodes,
    }
}

/// `⟨f, g⟩ = ∫ f ḡ dΩ` on `grid`.
pub fn inner_product<F, G>(f: F, g: G, grid: &SphereGrid) -> Complex64
where
    F: Fn(&SpherePoint) -> Complex64,
    G: Fn(&SpherePoint) -> Complex64,
{
    grid.integrate(|p| f(p) * g(p).conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::eval_phi;
    use crate::harmonics::y_reference;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_node_grid() {
        let g = build_grid(1, 1);
        assert_eq!(g.nodes.len(), 1);
        assert_abs_diff_eq!(g.nodes[0].1, 4.0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for n_theta in 1..40 {
            for n_phi in [1, 2, 7, 30] {
                let g = build_grid(n_theta, n_phi);
                assert_abs_diff_eq!(g.weight_sum(), 4.0 * PI, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn integrates_x_squared() {
        for n_theta in 2..10 {
            let g = build_grid(n_theta, 3);
            let v = g.integrate(|p| p.to_cartesian()[0].powi(2).into());
            assert_abs_diff_eq!(v.re, 4.0 * PI / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_rule_exact_to_degree() {
        for n in 1..30 {
            let rule = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = rule.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let expect = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg + 1) as f64
                };
                assert_abs_diff_eq!(got, expect, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let grid = build_grid(4, 5);
        let y00 = |p: &SpherePoint| y_reference(0, 0, p).unwrap();
        assert_abs_diff_eq!(inner_product(y00, y00, &grid).re, 1.0, epsilon = 1e-13);
        let phi = |p: &SpherePoint| eval_phi(1, 0, p).unwrap();
        let v = inner_product(phi, phi, &grid);
        assert_abs_diff_eq!(v.re, 8.0 * PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }
}
