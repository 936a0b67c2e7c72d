//! Closed-form phase Hessian and the circulant nonsingularity check.

use nalgebra::DMatrix;

use crate::configcount::geometry::determinant_in_place;

/// Determinant of the `(d-1) x (d-1)` matrix with unit diagonal and all
/// off-diagonal entries `1/2`, by Gaussian elimination.
pub fn circulant_check(d: usize) -> f64 {
    assert!(d >= 2, "circulant_check needs d >= 2");
    let m = d - 1;
    let mut a: Vec<f64> = (0..m * m)
        .map(|k| if k / m == k % m { 1.0 } else { 0.5 })
        .collect();
    determinant_in_place(&mut a, m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseHessian {
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    pub p: f64,
    /// `[q11, q12, q22]`.
    pub q_block: [f64; 3],
}

fn block_entries(xi_d: f64, eta_1: f64, eta_d: f64) -> (f64, [f64; 3]) {
    let s3 = 3f64.sqrt();
    let p = -xi_d - 13.0 * s3 / 18.0 * eta_1 + 7.0 / 3.0 * eta_d;
    let q11 = -(xi_d + s3 / 6.0 * eta_1 - 0.5 * eta_d);
    let q12 = eta_1 / s3 - eta_d;
    let q22 = -2.0 * eta_1 / s3;
    (p, [q11, q12, q22])
}

/// Number of singular values above `1e-10` times the largest.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

/// The `(2d-3) x (2d-3)` Hessian `p ⊕ (d-2)` copies of the `2 x 2` block
/// `[[q11, q12], [q12, q22]]`, built from `ξ_d`, `η_1` and `η_d`.
pub fn phase_hessian(d: usize, xi: &[f64], eta: &[f64]) -> PhaseHessian {
    assert!(d >= 3, "phase_hessian needs d >= 3");
    assert!(xi.len() == d && eta.len() == d, "ξ and η must have length d");
    let (p, q) = block_entries(xi[d - 1], eta[0], eta[d - 1]);
    let size = 2 * d - 3;
    let mut m = DMatrix::zeros(size, size);
    m[(0, 0)] = p;
    for b in 0..d - 2 {
        let i = 1 + 2 * b;
        m[(i, i)] = q[0];
        m[(i, i + 1)] = q[1];
        m[(i + 1, i)] = q[1];
        m[(i + 1, i + 1)] = q[2];
    }
    let rank = numerical_rank(&m);
    PhaseHessian { matrix: m, rank, p, q_block: q }
}

/// `q(η_1, η_d) = -13/9 η_1² + 17√3/9 η_1 η_d - η_d²`.
pub fn q_form(eta_1: f64, eta_d: f64) -> f64 {
    -13.0 / 9.0 * eta_1 * eta_1 + 17.0 * 3f64.sqrt() / 9.0 * eta_1 * eta_d - eta_d * eta_d
}

/// Discriminant `b² - 4ac` of [`q_form`]; equals `399/81 > 0`, so the form
/// is indefinite.
pub fn q_discriminant() -> f64 {
    let (a, b, c) = (-13.0 / 9.0, 17.0 * 3f64.sqrt() / 9.0, -1.0);
    b * b - 4.0 * a * c
}

/// `det` of the `2 x 2` block with `ξ_d` chosen on the plane `p = 0`.
pub fn restricted_block_determinant(eta_1: f64, eta_d: f64) -> f64 {
    let xi_d = -13.0 * 3f64.sqrt() / 18.0 * eta_1 + 7.0 / 3.0 * eta_d;
    let (_, q) = block_entries(xi_d, eta_1, eta_d);
    q[0] * q[2] - q[1] * q[1]
}
