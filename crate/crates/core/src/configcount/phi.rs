//! Generic Φ-configuration counts by full enumeration.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::tuples::for_each_with_first;
use super::{finish_report, Algorithm, ConfigQuery, CountError, CountReport, Family};
use crate::pointgen::{distance, PointSet};

type Evaluator = dyn Fn(&[&[f64]], &mut [f64]) + Send + Sync;

/// A configuration map from `arity` points to `R^output_dim`.
#[derive(Clone)]
pub struct PhiFunction {
    name: String,
    arity: usize,
    output_dim: usize,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("output_dim", &self.output_dim)
            .finish()
    }
}

impl PhiFunction {
    /// Wraps an evaluator that writes `output_dim` values into its output
    /// slice. Panics if `arity` or `output_dim` is zero.
    pub fn new<F>(name: impl Into<String>, arity: usize, output_dim: usize, eval: F) -> Self
    where
        F: Fn(&[&[f64]], &mut [f64]) + Send + Sync + 'static,
    {
        assert!(arity >= 1 && output_dim >= 1);
        Self {
            name: name.into(),
            arity,
            output_dim,
            eval: Arc::new(eval),
        }
    }

    /// All `C(arity, 2)` pairwise distances in pair order `(1,2), (1,3), ...`.
    pub fn pairwise_distances(arity: usize) -> Self {
        let m = arity * (arity - 1) / 2;
        Self::new("pairwise_distances", arity, m.max(1), move |pts, out| {
            let mut p = 0;
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    out[p] = distance(pts[a], pts[b]);
                    p += 1;
                }
            }
        })
    }

    /// Ignores its input and returns `value`.
    pub fn constant(arity: usize, value: Vec<f64>) -> Self {
        let m = value.len();
        Self::new("constant", arity, m, move |_, out| out.copy_from_slice(&value))
    }

    /// `det[x^1, ..., x^d]` for `d` points in `R^d` (no translation).
    pub fn determinant(d: usize) -> Self {
        Self::new("determinant", d, 1, move |pts, out| {
            let mut a: Vec<f64> = pts.iter().flat_map(|p| p.iter().copied()).collect();
            out[0] = super::geometry::determinant_in_place(&mut a, d);
        })
    }

    /// `x - y` for two points of dimension `d`.
    pub fn difference(d: usize) -> Self {
        Self::new("difference", 2, d, move |pts, out| {
            for i in 0..d {
                out[i] = pts[0][i] - pts[1][i];
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn evaluate(&self, points: &[&[f64]], out: &mut [f64]) {
        (self.eval)(points, out)
    }
}

/// `true` when `|value - t|_∞ < delta`.
#[inline]
pub(crate) fn in_ball(value: &[f64], t: &[f64], delta: f64) -> bool {
    value.iter().zip(t).all(|(v, c)| (v - c).abs() < delta)
}

pub fn count_phi(
    set: &PointSet,
    phi: &PhiFunction,
    t: &[f64],
    delta: f64,
) -> Result<CountReport, CountError> {
    let query = ConfigQuery::new(Family::Custom, phi.arity - 1, t.to_vec(), delta);
    query.validate(set.dim())?;
    if t.len() != phi.output_dim {
        return Err(CountError::Arity {
            arity: phi.arity,
            output: phi.output_dim,
            msg: format!("target has length {}", t.len()),
        });
    }
    if phi.arity > set.len() {
        return Err(CountError::Arity {
            arity: phi.arity,
            output: phi.output_dim,
            msg: format!("only {} points available", set.len()),
        });
    }
    let start = Instant::now();
    let n = set.len();
    let count = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut pts: Vec<&[f64]> = vec![&[]; phi.arity];
            let mut out = vec![0.0; phi.output_dim];
            let mut count = 0u64;
            for_each_with_first(n, phi.arity, first, |idx| {
                for (slot, &i) in pts.iter_mut().zip(idx) {
                    *slot = set.point(i);
                }
                phi.evaluate(&pts, &mut out);
                if in_ball(&out, t, delta) {
                    count += 1;
                }
            });
            count
        })
        .sum();
    Ok(finish_report(set, query, Algorithm::Brute, start, count))
}
