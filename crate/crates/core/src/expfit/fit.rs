//! Log-log slope fits of count growth.

use super::ExpFitError;
use crate::regress::fit_loglog;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    /// Samples used after dropping zeros.
    pub samples: usize,
}

/// OLS slope of `ln y` on `ln n`. Samples with `y <= 0` are dropped; at
/// least three must remain.
pub fn fit_slope(samples: &[(f64, f64)]) -> Result<SlopeFit, ExpFitError> {
    let (ns, ys): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    let fit = fit_loglog(&ns, &ys, 3)?;
    Ok(SlopeFit {
        slope: fit.slope,
        stderr: fit.stderr,
        samples: fit.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let f = fit_slope(&[(10.0, 100.0), (100.0, 1e4), (1000.0, 1e6)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
    }

    #[test]
    fn constant() {
        let f = fit_slope(&[(10.0, 7.0), (100.0, 7.0), (1000.0, 7.0)]).unwrap();
        assert!(f.slope.abs() < 1e-15);
    }

    #[test]
    fn hand_oracle() {
        // OLS of (ln n, ln y) computed independently.
        let f = fit_slope(&[(16.0, 50.0), (64.0, 380.0), (256.0, 3100.0)]).unwrap();
        assert!((f.slope - 1.488_549_077_596_718).abs() < 1e-12);
        assert!((f.stderr - 0.014_750_934_676_35).abs() < 1e-10);
    }

    #[test]
    fn zeros_dropped() {
        assert!(fit_slope(&[(10.0, 0.0), (20.0, 4.0), (40.0, 16.0)]).is_err());
        let f = fit_slope(&[(10.0, 0.0), (20.0, 4.0), (40.0, 16.0), (80.0, 64.0)]).unwrap();
        assert_eq!(f.samples, 3);
        assert!((f.slope - 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn recovers_exponent(a in 1e-3f64..1e3, beta in -5.0f64..5.0) {
            let s: Vec<(f64, f64)> = [3.0, 17.0, 250.0, 4000.0]
                .iter()
                .map(|&n: &f64| (n, a * n.powf(beta)))
                .collect();
            let f = fit_slope(&s).unwrap();
            prop_assert!((f.slope - beta).abs() <= 1e-9);
        }
    }
}
