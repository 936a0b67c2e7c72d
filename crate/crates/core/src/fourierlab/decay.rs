//! Power-law decay fits of transform magnitudes along a ray.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{FourierError, FrequencyPoint};
use crate::regress::fit_loglog;

/// Magnitudes below this are dropped before fitting.
pub const MIN_MAGNITUDE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub direction: FrequencyPoint,
    pub radii: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Radii and magnitudes of the envelope points used in the fit.
    pub envelope: Vec<(f64, f64)>,
    /// `None` when too few usable points remain.
    pub fitted_exponent: Option<f64>,
    pub stderr: Option<f64>,
    pub reference_exponent: Option<f64>,
    pub mc_error_bars: Option<Vec<f64>>,
}

impl DecayReport {
    pub fn is_conclusive(&self) -> bool {
        self.fitted_exponent.is_some()
    }

    /// `radius,magnitude,stderr` rows followed by a `#` summary line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,magnitude,stderr\n");
        for (i, (r, m)) in self.radii.iter().zip(&self.magnitudes).enumerate() {
            let e = self
                .mc_error_bars
                .as_ref()
                .map(|e| format!("{:?}", e[i]))
                .unwrap_or_default();
            let _ = writeln!(out, "{r:?},{m:?},{e}");
        }
        let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_else(|| "none".into());
        let _ = writeln!(
            out,
            "# fitted_exponent={} stderr={} reference_exponent={} envelope_points={}",
            fmt(self.fitted_exponent),
            fmt(self.stderr),
            fmt(self.reference_exponent),
            self.envelope.len()
        );
        out
    }
}

fn check_radii(radii: &[f64]) -> Result<(), FourierError> {
    if radii.len() < 5 {
        return Err(FourierError::InvalidRadii(format!(
            "need at least 5 radii, got {}",
            radii.len()
        )));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || !(radii[0] > 0.0) {
        return Err(FourierError::InvalidRadii(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    if radii[radii.len() - 1] < 10.0 * radii[0] {
        return Err(FourierError::InvalidRadii(
            "radii must span at least one decade".into(),
        ));
    }
    Ok(())
}

/// Maximizes `f` on `[a, b]` by golden-section search.
fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-10 * b.abs().max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Upper envelope: interior local maxima that also exceed every later
/// value (the latter discards maxima produced by noise near zeros).
fn envelope_indices(m: &[f64]) -> Vec<usize> {
    let n = m.len();
    let mut later_max = vec![f64::NEG_INFINITY; n];
    for i in (0..n.saturating_sub(1)).rev() {
        later_max[i] = later_max[i + 1].max(m[i + 1]);
    }
    (1..n.saturating_sub(1))
        .filter(|&i| m[i] >= m[i - 1] && m[i] > m[i + 1] && m[i] > later_max[i])
        .collect()
}

fn fit(
    direction: FrequencyPoint,
    radii: Vec<f64>,
    magnitudes: Vec<f64>,
    refine: Option<&dyn Fn(f64) -> f64>,
    reference_exponent: Option<f64>,
    mc_error_bars: Option<Vec<f64>>,
) -> DecayReport {
    let peaks = envelope_indices(&magnitudes);
    let mut envelope: Vec<(f64, f64)> = if peaks.len() >= 3 {
        peaks
            .iter()
            .map(|&i| match refine {
                Some(f) => golden_max(f, radii[i - 1], radii[i + 1]),
                None => (radii[i], magnitudes[i]),
            })
            .collect()
    } else {
        radii.iter().copied().zip(magnitudes.iter().copied()).collect()
    };
    envelope.retain(|&(_, m)| m >= MIN_MAGNITUDE);
    let (xs, ys): (Vec<f64>, Vec<f64>) = envelope.iter().copied().unzip();
    let (fitted_exponent, stderr) = match fit_loglog(&xs, &ys, 3) {
        Ok(f) => (Some(-f.slope), Some(f.stderr)),
        Err(_) => (None, None),
    };
    DecayReport {
        direction,
        radii,
        magnitudes,
        envelope,
        fitted_exponent,
        stderr,
        reference_exponent,
        mc_error_bars,
    }
}

/// Fits the decay exponent of `|F(r · direction)|` over `radii`, using the
/// upper envelope of the oscillations, each peak refined by a local
/// maximization of `|F|`. With fewer than three peaks all points are used.
pub fn decay_fit(
    evaluator: &(dyn Fn(&FrequencyPoint) -> Complex64 + Sync),
    direction: &FrequencyPoint,
    radii: &[f64],
    reference_exponent: Option<f64>,
) -> Result<DecayReport, FourierError> {
    check_radii(radii)?;
    let unit = direction.normalized()?;
    let magnitude = |r: f64| evaluator(&unit.scaled(r)).norm();
    let magnitudes: Vec<f64> = radii.iter().map(|&r| magnitude(r)).collect();
    Ok(fit(
        unit.clone(),
        radii.to_vec(),
        magnitudes,
        Some(&magnitude),
        reference_exponent,
        None,
    ))
}

/// Same fit on precomputed magnitudes (for noisy estimates, no refinement).
pub fn decay_fit_values(
    direction: &FrequencyPoint,
    radii: &[f64],
    magnitudes: &[f64],
    reference_exponent: Option<f64>,
    mc_error_bars: Option<Vec<f64>>,
) -> Result<DecayReport, FourierError> {
    check_radii(radii)?;
    if magnitudes.len() != radii.len() {
        return Err(FourierError::InvalidRadii(
            "one magnitude per radius required".into(),
        ));
    }
    if magnitudes.iter().any(|m| !(*m >= 0.0)) {
        return Err(FourierError::InvalidRadii("magnitudes must be >= 0".into()));
    }
    Ok(fit(
        direction.normalized()?,
        radii.to_vec(),
        magnitudes.to_vec(),
        None,
        reference_exponent,
        mc_error_bars,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourierlab::{ft_sphere, ft_triangle};

    fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
        let n = ((b - a) / step).round() as usize;
        (0..=n).map(|i| a + step * i as f64).collect()
    }

    #[test]
    fn synthetic_power_law() {
        let f = |xi: &FrequencyPoint| Complex64::new(xi.norm().powf(-0.5), 0.0);
        let radii: Vec<f64> = (0..20).map(|i| 10f64.powf(1.0 + i as f64 * 0.1)).collect();
        let r = decay_fit(&f, &FrequencyPoint::single(&[1.0, 1.0]), &radii, Some(0.5)).unwrap();
        assert!((r.fitted_exponent.unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sphere_three_dimensions() {
        let f = |xi: &FrequencyPoint| ft_sphere(3, &xi.blocks[0]);
        let radii = grid(10.0, 1000.0, 0.05);
        let r = decay_fit(&f, &FrequencyPoint::single(&[0.0, 0.0, 1.0]), &radii, Some(1.0)).unwrap();
        let e = r.fitted_exponent.unwrap();
        assert!((e - 1.0).abs() < 0.05, "exponent {e}");
    }

    #[test]
    fn sphere_two_dimensions() {
        let f = |xi: &FrequencyPoint| ft_sphere(2, &xi.blocks[0]);
        let radii = grid(10.0, 300.0, 0.05);
        let r = decay_fit(&f, &FrequencyPoint::single(&[0.6, 0.8]), &radii, Some(0.5)).unwrap();
        assert!((r.fitted_exponent.unwrap() - 0.5).abs() < 0.1);
    }

    #[test]
    fn triangle_antidiagonal() {
        let f = |xi: &FrequencyPoint| {
            let (a, b) = (&xi.blocks[0], &xi.blocks[1]);
            ft_triangle([a[0], a[1]], [b[0], b[1]])
        };
        let dir = FrequencyPoint::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let r = decay_fit(&f, &dir, &grid(10.0, 300.0, 0.05), Some(0.5)).unwrap();
        assert!((r.fitted_exponent.unwrap() - 0.5).abs() < 0.15);
    }

    #[test]
    fn radius_preconditions() {
        let f = |_: &FrequencyPoint| Complex64::new(1.0, 0.0);
        let d = FrequencyPoint::single(&[1.0]);
        assert!(decay_fit(&f, &d, &[1.0, 2.0, 3.0, 4.0], None).is_err());
        assert!(decay_fit(&f, &d, &[1.0, 2.0, 3.0, 4.0, 5.0], None).is_err());
        assert!(decay_fit(&f, &d, &[1.0, 2.0, 5.0, 4.0, 10.0], None).is_err());
    }

    #[test]
    fn tiny_values_are_inconclusive() {
        let f = |_: &FrequencyPoint| Complex64::new(1e-16, 0.0);
        let radii: Vec<f64> = (1..=10).map(|i| i as f64 * 2.0).collect();
        let r = decay_fit(&f, &FrequencyPoint::single(&[1.0]), &radii, None).unwrap();
        assert!(!r.is_conclusive());
        assert!(r.to_csv().contains("fitted_exponent=none"));
    }
}
