//! Closed-form dimension thresholds and count exponents, in floating point
//! and as exact rationals.

use num_rational::Rational64;

use super::ExpFitError;
use crate::configcount::Family;

/// One row of the threshold registry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdEntry {
    pub family: Family,
    pub k: usize,
    pub d: usize,
    pub s_threshold: f64,
}

impl ThresholdEntry {
    /// Predicted growth exponent of the count at dimension `s`.
    pub fn predicted_count_exponent(&self, s: f64) -> Result<f64, ExpFitError> {
        count_exponent(self.family, self.k, self.d, s)
    }
}

fn check(family: Family, k: usize, d: usize) -> Result<(), ExpFitError> {
    let ok = match family {
        Family::Simplex => k >= 1 && k <= d,
        Family::Volume => d >= 1 && k == d,
        Family::Area2 | Family::Angle => k == 2 && d >= 2,
        Family::Custom => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ExpFitError::Incompatible(format!(
            "no threshold for family {family} with k = {k}, d = {d}"
        )))
    }
}

fn rat(n: usize) -> Rational64 {
    Rational64::from_integer(n as i64)
}

pub fn threshold_exact(family: Family, k: usize, d: usize) -> Result<Rational64, ExpFitError> {
    check(family, k, d)?;
    let one = Rational64::from_integer(1);
    Ok(match family {
        Family::Simplex => rat(d) - rat(d - 1) / rat(2 * k),
        Family::Volume => {
            let denom = if d % 2 == 0 { 2 * d } else { 2 * (d - 1) };
            if denom == 0 {
                // d = 1: lengths on the line.
                return Ok(one / rat(2));
            }
            rat(d - 1) + one / rat(denom)
        }
        Family::Area2 => rat(d) / rat(2) + one / rat(4),
        Family::Angle => rat(d + 1) / rat(2),
        Family::Custom => unreachable!(),
    })
}

pub fn threshold(family: Family, k: usize, d: usize) -> Result<f64, ExpFitError> {
    let r = threshold_exact(family, k, d)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

pub fn threshold_entry(family: Family, k: usize, d: usize) -> Result<ThresholdEntry, ExpFitError> {
    Ok(ThresholdEntry {
        family,
        k,
        d,
        s_threshold: threshold(family, k, d)?,
    })
}

pub fn count_exponent_exact(
    family: Family,
    k: usize,
    d: usize,
    s: Rational64,
) -> Result<Rational64, ExpFitError> {
    check(family, k, d)?;
    if s <= Rational64::from_integer(0) {
        return Err(ExpFitError::InvalidExponent(*s.numer() as f64 / *s.denom() as f64));
    }
    let one = Rational64::from_integer(1);
    Ok(match family {
        Family::Simplex => rat(k + 1) - rat(k * (k + 1) / 2) / s,
        Family::Volume => rat(d + 1) - one / s,
        Family::Area2 | Family::Angle => rat(3) - one / s,
        Family::Custom => unreachable!(),
    })
}

pub fn count_exponent(family: Family, k: usize, d: usize, s: f64) -> Result<f64, ExpFitError> {
    check(family, k, d)?;
    if !(s > 0.0) {
        return Err(ExpFitError::InvalidExponent(s));
    }
    Ok(match family {
        Family::Simplex => (k + 1) as f64 - (k * (k + 1) / 2) as f64 / s,
        Family::Volume => (d + 1) as f64 - 1.0 / s,
        Family::Area2 | Family::Angle => 3.0 - 1.0 / s,
        Family::Custom => unreachable!(),
    })
}
