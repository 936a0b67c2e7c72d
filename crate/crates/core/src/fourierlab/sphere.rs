//! Fourier transform of surface measure on the unit sphere, in closed form
//! and by one-dimensional quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::{bessel_j, scaled_series};
use super::{FourierError, FrequencyPoint, MeasureSpec};

/// Surface area of `S^{d-1}` in `R^d` (`d = 1` gives the two-point count).
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

/// `σ̂(ξ) = 2π |ξ|^{-ν} J_ν(2π|ξ|)` with `ν = (d-2)/2`; equals the surface
/// area at `ξ = 0`.
pub fn ft_sphere(d: usize, xi: &[f64]) -> Complex64 {
    assert!(d >= 2, "sphere transform needs d >= 2");
    assert_eq!(xi.len(), d, "frequency has the wrong dimension");
    let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    Complex64::new(sphere_radial(d, r), 0.0)
}

pub(crate) fn sphere_radial(d: usize, r: f64) -> f64 {
    let nu = (d as f64 - 2.0) / 2.0;
    let x = 2.0 * PI * r;
    if x < 1.0 {
        2.0 * PI.powf(nu + 1.0) * scaled_series(nu, x)
    } else {
        2.0 * PI * r.powf(-nu) * bessel_j(nu, x)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature oracle for the sphere transform:
/// `|S^{d-2}| ∫_0^π exp(-2πi r cos φ) sin^{d-2} φ dφ`.
///
/// Even `d` uses the trapezoid rule on the periodic integrand over a full
/// period; odd `d` uses Gauss-Legendre in `u = cos φ`, where the weight
/// `(1-u^2)^{(d-3)/2}` is a polynomial.
pub fn ft_quadrature(
    spec: &MeasureSpec,
    xi: &FrequencyPoint,
    nodes: usize,
) -> Result<Complex64, FourierError> {
    let MeasureSpec::Sphere { d } = *spec else {
        return Err(FourierError::Unsupported(
            "quadrature oracle covers the sphere only".into(),
        ));
    };
    spec.validate()?;
    xi.check(&[d])?;
    if nodes < 16 {
        return Err(FourierError::TooFewNodes(nodes));
    }
    let r = xi.norm();
    let outer = sphere_area(d - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    if d % 2 == 0 {
        let h = 2.0 * PI / nodes as f64;
        let power = (d - 2) as i32;
        for j in 0..nodes {
            let phi = j as f64 * h;
            let (s, c) = phi.sin_cos();
            let w = 0.5 * s.abs().powi(power);
            acc += Complex64::from_polar(w, -2.0 * PI * r * c);
        }
        acc *= h;
    } else {
        let (u, w) = gauss_legendre(nodes);
        let power = ((d - 3) / 2) as i32;
        for (&u, &w) in u.iter().zip(&w) {
            acc += Complex64::from_polar(w * (1.0 - u * u).powi(power), -2.0 * PI * r * u);
        }
    }
    Ok(acc * outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn value_at_zero_is_area() {
        for d in 2..8 {
            assert!((ft_sphere(d, &vec![0.0; d]).re - sphere_area(d)).abs() < 1e-13);
        }
    }

    #[test]
    fn three_dimensional_elementary_form() {
        for r in [0.01, 0.1, 0.7, 2.0, 13.3, 500.25] {
            let want = 2.0 * (2.0 * PI * r).sin() / r;
            let got = ft_sphere(3, &[0.0, r, 0.0]).re;
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "r={r}");
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for d in [2, 3, 4, 5] {
            for r in [0.0, 0.5, 1.0, 2.0, 3.0, 7.5] {
                let mut xi = vec![0.0; d];
                xi[0] = r;
                let q = ft_quadrature(&MeasureSpec::Sphere { d }, &FrequencyPoint::single(&xi), 256)
                    .unwrap();
                let c = ft_sphere(d, &xi);
                let scale = c.re.abs().max(1e-3);
                assert!((q - c).norm() / scale < 1e-8, "d={d} r={r}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn quadrature_converges() {
        let spec = MeasureSpec::Sphere { d: 2 };
        let xi = FrequencyPoint::single(&[6.0, 8.0]);
        let a = ft_quadrature(&spec, &xi, 2048).unwrap();
        let b = ft_quadrature(&spec, &xi, 4096).unwrap();
        assert!((a - b).norm() < 1e-10);
        assert!(ft_quadrature(&spec, &xi, 8).is_err());
        let zero = ft_quadrature(&spec, &FrequencyPoint::single(&[0.0, 0.0]), 16).unwrap();
        assert!((zero.re - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = crate::pointgen::rng_for(21);
        for d in [2, 3, 4] {
            let r = 3.7;
            let base = sphere_radial(d, r);
            for _ in 0..100 {
                let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let xi: Vec<f64> = v.iter().map(|x| x * r / n).collect();
                let got = ft_sphere(d, &xi).re;
                assert!((got - base).abs() <= 1e-12 * base.abs().max(1e-2));
            }
        }
    }
}
