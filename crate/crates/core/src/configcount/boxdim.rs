//! Box-counting dimension of point clouds and sampled solution sets.

use std::collections::HashSet;

use super::phi::{in_ball, PhiFunction};
use super::{CountError, BRUTE_EVALUATION_LIMIT};
use crate::pointgen::{PointMeta, PointSet};
use crate::regress::fit_line;

#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimReport {
    pub scales: Vec<f64>,
    /// Occupied boxes `N(δ)` per scale.
    pub counts: Vec<u64>,
    /// Fitted slope of `ln N` against `ln(1/δ)`.
    pub slope: f64,
    pub stderr: f64,
    /// All `N(δ)` equal: the slope is reported as zero.
    pub degenerate: bool,
}

/// Occupied boxes of side `δ` (`ceil(1/δ)` boxes per axis, the last one
/// closed on the right).
fn occupied_boxes(set: &PointSet, delta: f64) -> u64 {
    let per_axis = (1.0 / delta).ceil() as i64;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for p in set.points() {
        let key: Vec<i64> = p
            .iter()
            .map(|&x| ((x / delta).floor() as i64).clamp(0, per_axis - 1))
            .collect();
        seen.insert(key);
    }
    seen.len() as u64
}

pub fn box_dim(set: &PointSet, scales: &[f64]) -> Result<BoxDimReport, CountError> {
    if scales.len() < 3 {
        return Err(CountError::InvalidScales(format!(
            "need at least 3 scales, got {}",
            scales.len()
        )));
    }
    if let Some(bad) = scales.iter().find(|&&s| !(s > 0.0 && s < 1.0)) {
        return Err(CountError::InvalidScales(format!("scale {bad} is not in (0,1)")));
    }
    let counts: Vec<u64> = scales.iter().map(|&s| occupied_boxes(set, s)).collect();
    let degenerate = counts.windows(2).all(|w| w[0] == w[1]);
    let (slope, stderr) = if degenerate {
        (0.0, 0.0)
    } else {
        let xs: Vec<f64> = scales.iter().map(|s| (1.0 / s).ln()).collect();
        let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
        let fit = fit_line(&xs, &ys)
            .map_err(|e| CountError::InvalidScales(e.to_string()))?;
        (fit.slope, fit.stderr)
    };
    Ok(BoxDimReport {
        scales: scales.to_vec(),
        counts,
        slope,
        stderr,
        degenerate,
    })
}

/// Points `(x^1, ..., x^{k+1})` of the product `E_1 x ... x E_{k+1}` with
/// `|Φ - t|_∞ < δ`, concatenated into one point set of dimension
/// `d_1 + ... + d_{k+1}`. Entries from different sets need not be distinct.
pub fn sample_solution_set(
    sets: &[&PointSet],
    phi: &PhiFunction,
    t: &[f64],
    delta: f64,
) -> Result<PointSet, CountError> {
    if sets.len() != phi.arity() || t.len() != phi.output_dim() {
        return Err(CountError::Arity {
            arity: phi.arity(),
            output: phi.output_dim(),
            msg: format!("{} sets and a target of length {}", sets.len(), t.len()),
        });
    }
    if !(delta > 0.0) {
        return Err(CountError::InvalidDelta(delta));
    }
    let total: f64 = sets.iter().map(|s| s.len() as f64).product();
    if total > BRUTE_EVALUATION_LIMIT {
        return Err(CountError::BruteBudget(total));
    }
    let dim: usize = sets.iter().map(|s| s.dim()).sum();
    let mut coords = Vec::new();
    let mut idx = vec![0usize; sets.len()];
    let mut pts: Vec<&[f64]> = vec![&[]; sets.len()];
    let mut out = vec![0.0; phi.output_dim()];
    'outer: loop {
        for (j, slot) in pts.iter_mut().enumerate() {
            *slot = sets[j].point(idx[j]);
        }
        phi.evaluate(&pts, &mut out);
        if in_ball(&out, t, delta) {
            for p in &pts {
                coords.extend_from_slice(p);
            }
        }
        for j in (0..sets.len()).rev() {
            idx[j] += 1;
            if idx[j] < sets[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    if coords.is_empty() {
        return Err(CountError::EmptySolutionSet);
    }
    let meta = PointMeta::named(format!("solutions:{}", phi.name()));
    PointSet::new(dim, coords, meta).map_err(|e| CountError::InvalidTarget(e.to_string()))
}
