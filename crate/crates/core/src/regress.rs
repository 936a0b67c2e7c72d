//! Ordinary least squares for straight-line fits in log-log coordinates.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegressError {
    #[error("need at least {needed} usable samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("all abscissae are equal; slope is undefined")]
    DegenerateAbscissa,
}

/// Result of a straight-line least-squares fit `y = intercept + slope * x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for an exact fit or two samples.
    pub stderr: f64,
    pub samples: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit, RegressError> {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len();
    if m < 2 {
        return Err(RegressError::TooFewSamples { needed: 2, got: m });
    }
    let mf = m as f64;
    let mx = xs.iter().sum::<f64>() / mf;
    let my = ys.iter().sum::<f64>() / mf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return Err(RegressError::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if m > 2 {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - intercept - slope * x;
                r * r
            })
            .sum();
        (ssr / (mf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
        samples: m,
    })
}

/// Fits `ln y` against `ln x`, skipping samples with non-positive `y`.
pub fn fit_loglog(xs: &[f64], ys: &[f64], min_samples: usize) -> Result<LineFit, RegressError> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    if lx.len() < min_samples {
        return Err(RegressError::TooFewSamples {
            needed: min_samples,
            got: lx.len(),
        });
    }
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!((f.intercept - 1.0).abs() < 1e-15);
        assert!(f.stderr < 1e-15);
    }

    #[test]
    fn degenerate_abscissa() {
        assert_eq!(
            fit_line(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]),
            Err(RegressError::DegenerateAbscissa)
        );
    }

    #[test]
    fn loglog_drops_nonpositive() {
        let err = fit_loglog(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0], 3).unwrap_err();
        assert_eq!(err, RegressError::TooFewSamples { needed: 3, got: 2 });
    }
}
