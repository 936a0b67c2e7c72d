//! Transform of the equilateral-triangle pair measure in the plane.

use num_complex::Complex64;

use super::sphere::sphere_radial;

/// The two linear maps `U_±(ξ, η) = ξ + R_∓ η` with `R` the rotation by
/// `π/3`.
pub fn triangle_maps(xi: [f64; 2], eta: [f64; 2]) -> [[f64; 2]; 2] {
    let h = 3f64.sqrt() / 2.0;
    [
        [xi[0] + 0.5 * eta[0] + h * eta[1], xi[1] - h * eta[0] + 0.5 * eta[1]],
        [xi[0] + 0.5 * eta[0] - h * eta[1], xi[1] + h * eta[0] + 0.5 * eta[1]],
    ]
}

/// `μ̂(ξ, η) = Σ_± σ̂(U_±(ξ, η))`, where `σ̂` is the transform of arc length
/// on the unit circle. Total mass `4π`.
pub fn ft_triangle(xi: [f64; 2], eta: [f64; 2]) -> Complex64 {
    let value: f64 = triangle_maps(xi, eta)
        .iter()
        .map(|u| sphere_radial(2, u[0].hypot(u[1])))
        .sum();
    Complex64::new(value, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourierlab::bessel_j;
    use std::f64::consts::PI;

    #[test]
    fn mass_at_origin() {
        assert!((ft_triangle([0.0, 0.0], [0.0, 0.0]).re - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn antidiagonal_direction() {
        // Along (ξ, -ξ) both maps have modulus |ξ|.
        for r in [0.3, 2.0, 17.5] {
            let xi = [r * 0.6, r * 0.8];
            let got = ft_triangle(xi, [-xi[0], -xi[1]]).re;
            let want = 4.0 * PI * bessel_j(0.0, 2.0 * PI * r);
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_and_bounded() {
        let mut rng = crate::pointgen::rng_for(5);
        use rand::Rng;
        let mass = 4.0 * PI;
        for _ in 0..200 {
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
            let a = ft_triangle([v[0], v[1]], [v[2], v[3]]);
            let b = ft_triangle([-v[0], -v[1]], [-v[2], -v[3]]);
            assert_eq!(a, b.conj());
            assert!(a.norm() <= mass + 1e-12);
        }
    }

    #[test]
    fn maps_rotate_eta() {
        // U_+ applied to (0, η) is η rotated by -π/3.
        let u = triangle_maps([0.0, 0.0], [1.0, 0.0]);
        assert!((u[0][0] - 0.5).abs() < 1e-15 && (u[0][1] + 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((u[1][0] - 0.5).abs() < 1e-15 && (u[1][1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
