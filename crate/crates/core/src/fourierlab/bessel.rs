//! Bessel functions of the first kind for integer and half-integer order.

use std::f64::consts::PI;

/// `Γ(z)` for `z` a positive integer or half-integer.
pub(crate) fn gamma_half_integer(z: f64) -> f64 {
    let twice = (2.0 * z).round();
    debug_assert!(twice >= 1.0 && (2.0 * z - twice).abs() < 1e-12);
    let (mut acc, mut k) = if twice as u64 % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while k < z - 0.25 {
        acc *= k;
        k += 1.0;
    }
    acc
}

/// `(x/2)^{-ν} J_ν(x)` by its power series; accurate for `x < 1`.
pub(crate) fn scaled_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma_half_integer(nu + 1.0);
    let mut sum = term;
    for m in 1..40 {
        let m = m as f64;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_ν(x)` for `ν >= 0` an integer or half-integer and `x >= 0`.
///
/// Panics for other orders.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0, "negative order {nu}");
    assert!(x >= 0.0, "negative argument {x}");
    let twice = 2.0 * nu;
    assert!(
        (twice - twice.round()).abs() < 1e-12,
        "order {nu} is not an integer or half-integer"
    );
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        return (0.5 * x).powf(nu) * scaled_series(nu, x);
    }
    let twice = twice.round() as u64;
    if twice % 2 == 0 {
        bessel_integer((twice / 2) as usize, x)
    } else {
        let l = ((twice - 1) / 2) as usize;
        (2.0 * x / PI).sqrt() * spherical_j(l, x)
    }
}

/// Miller's backward recurrence normalized by `J_0 + 2 Σ J_{2k} = 1`.
fn bessel_integer(n: usize, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut m = (top + 20.0 * top.cbrt() + 30.0).ceil() as usize;
    m += m % 2;
    let (mut next, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut result = if m == n { cur } else { 0.0 };
    for k in (1..=m).rev() {
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        let j = k - 1;
        if j == n {
            result = cur;
        }
        if j % 2 == 0 {
            norm += if j == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    result / norm
}

/// Spherical Bessel function `j_l(x)` for `x >= 1`.
fn spherical_j(l: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if l == 0 {
        return j0;
    }
    if (l as f64) < x {
        let (mut a, mut b) = (j0, j1);
        for k in 1..l {
            let next = (2 * k + 1) as f64 / x * b - a;
            a = b;
            b = next;
        }
        return b;
    }
    let m = l + (20.0 * (l as f64).cbrt()) as usize + 30;
    let (mut next, mut cur) = (0.0f64, 1e-30f64);
    let mut result = 0.0;
    let (mut t0, mut t1) = (0.0, 0.0);
    for k in (1..=m).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let j = k - 1;
        if j == l {
            result = cur;
        }
        if j == 1 {
            t1 = cur;
        }
        if j == 0 {
            t0 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            result *= 1e-250;
            t0 *= 1e-250;
            t1 *= 1e-250;
        }
    }
    if j0.abs() >= j1.abs() {
        result * j0 / t0
    } else {
        result * j1 / t1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values from an independent library implementation.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 0.5, 0.938469807240813),
        (0.0, 3.0, -0.2600519549019334),
        (0.0, 18.84955592153876, 0.12906351943681874),
        (0.0, 6285.07026277174, 0.004569289854474204),
        (1.0, 2.0, 0.5767248077568736),
        (1.0, 50.0, -0.09751182812517514),
        (2.0, 0.1, 0.0012489586587999192),
        (2.0, 7.5, -0.23027341052579028),
        (0.5, 1.0, 0.6713967071418039),
        (1.5, 0.3, 0.04330988191837836),
        (1.5, 20.0, -0.06466286659231113),
        (2.5, 4.0, 0.440884974557338),
        (3.0, 1e-4, 2.083333332031256e-14),
        (4.0, 100.0, 0.026105809447725278),
        (3.5, 2.0, 0.06851754998512713),
        (0.0, 10000.25, -0.007777942227618853),
    ];

    #[test]
    fn matches_reference_table() {
        for &(nu, x, want) in REFERENCE {
            let got = bessel_j(nu, x);
            let err = (got - want).abs() / want.abs().max(1e-3);
            assert!(err < 1e-10, "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn half_order_elementary_forms() {
        for x in [0.2, 1.0, 2.5, 9.0, 123.4] {
            let j12 = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x) - j12).abs() < 1e-13);
            let j32 = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((bessel_j(1.5, x) - j32).abs() < 1e-13);
        }
    }

    #[test]
    fn series_and_recurrence_meet() {
        for nu in [0.0, 1.0, 0.5, 2.5, 3.0] {
            let below = bessel_j(nu, 1.0 - 1e-12);
            let above = bessel_j(nu, 1.0 + 1e-12);
            assert!((below - above).abs() < 1e-11, "nu={nu}");
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half_integer(1.0), 1.0);
        assert_eq!(gamma_half_integer(4.0), 6.0);
        assert!((gamma_half_integer(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(2.5) - 0.75 * PI.sqrt()).abs() < 1e-15);
    }
}
