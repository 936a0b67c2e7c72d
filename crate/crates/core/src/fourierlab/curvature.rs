//! Principal curvatures of level sets by finite differences.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::FourierError;

pub const DEFAULT_STEP: f64 = 1e-4;
/// Eigenvalues below this fraction of the largest count as zero.
pub const NONZERO_RELATIVE_TOLERANCE: f64 = 1e-6;
/// Eigenvalues below this absolute size count as zero, so flat level sets
/// report no curvature even though finite-difference noise is nonzero.
pub const NONZERO_ABSOLUTE_FLOOR: f64 = 1e-6;

/// Eigenvalues of the second fundamental form of `{F = t}` at `x0`, sorted
/// by decreasing magnitude: the Hessian of `F` restricted to the tangent
/// space, divided by `|∇F(x0)|`. Derivatives use central differences with
/// step `h`.
pub fn level_set_curvatures(
    f: &dyn Fn(&[f64]) -> f64,
    t: f64,
    x0: &[f64],
    h: f64,
) -> Result<Vec<f64>, FourierError> {
    let n = x0.len();
    let residual = (f(x0) - t).abs();
    if residual > 1e-9 {
        return Err(FourierError::OffLevelSet(residual));
    }
    let mut x = x0.to_vec();
    let mut eval = |offsets: &[(usize, f64)]| {
        for &(i, dx) in offsets {
            x[i] += dx;
        }
        let v = f(&x);
        for &(i, dx) in offsets {
            x[i] -= dx;
        }
        x.copy_from_slice(x0);
        v
    };
    let f0 = f(x0);
    let mut grad = DVector::zeros(n);
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        let fp = eval(&[(i, h)]);
        let fm = eval(&[(i, -h)]);
        grad[i] = (fp - fm) / (2.0 * h);
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let v = (eval(&[(i, h), (j, h)]) - eval(&[(i, h), (j, -h)]) - eval(&[(i, -h), (j, h)])
                + eval(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let gnorm = grad.norm();
    if gnorm < 1e-6 {
        return Err(FourierError::NotRegular(gnorm));
    }
    let normal = &grad / gnorm;

    // Orthonormal tangent basis by Gram-Schmidt on the coordinate axes.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        v -= &normal * normal.dot(&v);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let len = v.norm();
        if len > 1e-8 {
            basis.push(v / len);
        }
        if basis.len() == n - 1 {
            break;
        }
    }
    let tangent = DMatrix::from_columns(&basis);
    let shape = tangent.transpose() * &hess * &tangent / gnorm;
    let shape = (&shape + shape.transpose()) * 0.5;
    let mut eig: Vec<f64> = SymmetricEigen::new(shape).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    Ok(eig)
}

/// `x1 y2 - x2 y1` for `z = (x1, x2, y1, y2)`.
pub fn partial_determinant(z: &[f64]) -> f64 {
    z[0] * z[3] - z[1] * z[2]
}

/// Sum over coordinate pairs `(i, i+1)`, `i = 0, 2, ...` of
/// `u_i² + v_i² - u_{i+1}² - v_{i+1}²` for `z = (u, v)` in `R^{2d}`, `d`
/// even: the diagonalized sum of `2 x 2` minors `x_i y_{i+1} - x_{i+1} y_i`.
pub fn paired_quadratic_form(z: &[f64]) -> f64 {
    let d = z.len() / 2;
    let (u, v) = z.split_at(d);
    let mut acc = 0.0;
    for i in (0..d - 1).step_by(2) {
        acc += u[i] * u[i] + v[i] * v[i] - u[i + 1] * u[i + 1] - v[i + 1] * v[i + 1];
    }
    acc
}

/// A point of `{paired_quadratic_form = t}` for `t > 0`.
pub fn paired_form_base_point(d: usize, t: f64) -> Result<Vec<f64>, FourierError> {
    if d % 2 != 0 || d == 0 {
        return Err(FourierError::Unsupported(format!(
            "paired form needs even d, got {d}"
        )));
    }
    if !(t > 0.0) {
        return Err(FourierError::Unsupported("paired form base point needs t > 0".into()));
    }
    let mut z = vec![0.0; 2 * d];
    z[0] = t.sqrt();
    Ok(z)
}

/// Number of eigenvalues above both the relative and absolute floors.
pub fn nonzero_count(eigenvalues: &[f64]) -> usize {
    let largest = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = (NONZERO_RELATIVE_TOLERANCE * largest).max(NONZERO_ABSOLUTE_FLOOR);
    eigenvalues.iter().filter(|v| v.abs() > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm_sq(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn unit_sphere_is_umbilic() {
        let e = level_set_curvatures(&norm_sq, 1.0, &[1.0, 0.0, 0.0], DEFAULT_STEP).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(nonzero_count(&e), 2);
        for v in &e {
            assert!((v - 1.0).abs() < 1e-6, "{e:?}");
        }
    }

    #[test]
    fn partial_determinant_has_three_curvatures() {
        let f = |z: &[f64]| z[0] * z[3] - z[1] * z[2];
        let e = level_set_curvatures(&f, 1.0, &[1.0, 0.0, 0.0, 1.0], DEFAULT_STEP).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(nonzero_count(&e), 3, "{e:?}");
    }

    #[test]
    fn paired_forms_are_nondegenerate() {
        for d in [2, 4] {
            let x0 = paired_form_base_point(d, 1.0).unwrap();
            let e = level_set_curvatures(&paired_quadratic_form, 1.0, &x0, DEFAULT_STEP).unwrap();
            assert_eq!(e.len(), 2 * d - 1);
            assert_eq!(nonzero_count(&e), 2 * d - 1, "d={d}: {e:?}");
        }
        assert!(paired_form_base_point(3, 1.0).is_err());
    }

    #[test]
    fn hyperplane_is_flat() {
        let f = |z: &[f64]| 2.0 * z[0] - z[1] + 0.5 * z[2];
        let e = level_set_curvatures(&f, 0.0, &[0.0, 0.0, 0.0], DEFAULT_STEP).unwrap();
        assert_eq!(nonzero_count(&e), 0, "{e:?}");
    }

    #[test]
    fn errors() {
        let f = |z: &[f64]| z[0] * z[0] + z[1] * z[1];
        assert!(matches!(
            level_set_curvatures(&f, 0.0, &[0.0, 0.0], DEFAULT_STEP),
            Err(FourierError::NotRegular(_))
        ));
        assert!(matches!(
            level_set_curvatures(&f, 2.0, &[1.0, 0.0], DEFAULT_STEP),
            Err(FourierError::OffLevelSet(_))
        ));
    }

    #[test]
    fn step_refinement_converges() {
        // |x| has nonzero fourth derivatives, so the truncation error shows.
        let f = |z: &[f64]| norm_sq(z).sqrt();
        let x0 = [0.6, 0.0, 0.8];
        let steps = [0.2, 0.1, 0.05];
        let eigs: Vec<Vec<f64>> = steps
            .iter()
            .map(|&h| level_set_curvatures(&f, 1.0, &x0, h).unwrap())
            .collect();
        for k in 0..2 {
            let c1 = (eigs[1][k] - eigs[0][k]).abs();
            let c2 = (eigs[2][k] - eigs[1][k]).abs();
            assert!(c2 <= 0.6 * c1, "changes {c1} then {c2}");
        }
    }
}
