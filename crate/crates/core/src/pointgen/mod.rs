//! Structured point sets in the unit cube and their text serialization.
//!
//! Every experiment in the workbench runs on a [`PointSet`]: `n` points in
//! `[0,1]^d` with a little provenance attached (generator name, seed, nominal
//! dimension, separation). Generators are pure functions of their
//! [`GeneratorSpec`], so the same generator always serializes to the same bytes.

mod generators;
mod io;

pub use generators::{
    gen_cantor, gen_coplanar, gen_homogeneous, gen_lattice, gen_random, GeneratorSpec,
    DEFAULT_POINT_BUDGET,
};
pub(crate) use generators::rng_for;
pub use io::{parse_pointset, read_pointset, write_pointset, FORMAT_HEADER};

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PointGenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("generator would produce {requested} points, above the budget of {budget}")]
    Capacity { requested: u128, budget: usize },
    #[error("point {index} coordinate {axis} = {value} lies outside [0,1]")]
    OutOfRange {
        index: usize,
        axis: usize,
        value: f64,
    },
    #[error("point set is empty")]
    Empty,
    #[error("duplicate points at indices {0} and {1} in a separated set")]
    Duplicate(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Provenance carried alongside the coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointMeta {
    pub generator: String,
    pub seed: Option<u64>,
    pub nominal_dimension: Option<f64>,
    /// Guaranteed minimal pairwise distance. Exact for lattices and Cantor
    /// products, a lower bound for jittered generators.
    pub separation: Option<f64>,
    /// Unrecognized `# key=value` lines, preserved for round-tripping.
    pub extra: BTreeMap<String, String>,
}

impl PointMeta {
    pub fn named(generator: impl Into<String>) -> Self {
        Self {
            generator: generator.into(),
            ..Self::default()
        }
    }
}

/// An ordered list of `n >= 1` points in `[0,1]^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    meta: PointMeta,
}

impl PointSet {
    /// Builds a point set from flat row-major coordinates, checking the range
    /// invariant (and distinctness when a separation is declared).
    pub fn new(dim: usize, coords: Vec<f64>, meta: PointMeta) -> Result<Self, PointGenError> {
        if dim == 0 {
            return Err(PointGenError::InvalidParams("dimension must be >= 1".into()));
        }
        if coords.is_empty() {
            return Err(PointGenError::Empty);
        }
        if coords.len() % dim != 0 {
            return Err(PointGenError::InvalidParams(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        for (i, &x) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(PointGenError::OutOfRange {
                    index: i / dim,
                    axis: i % dim,
                    value: x,
                });
            }
        }
        let set = Self { dim, coords, meta };
        if set.meta.separation.is_some() {
            set.check_distinct()?;
        }
        Ok(set)
    }

    /// Convenience constructor from nested point lists.
    pub fn from_points<P: AsRef<[f64]>>(
        points: &[P],
        meta: PointMeta,
    ) -> Result<Self, PointGenError> {
        let dim = points.first().map(|p| p.as_ref().len()).ok_or(PointGenError::Empty)?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(PointGenError::InvalidParams(format!(
                    "mixed point dimensions {dim} and {}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords, meta)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a point set holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn meta(&self) -> &PointMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut PointMeta {
        &mut self.meta
    }

    pub fn nominal_dimension(&self) -> Option<f64> {
        self.meta.nominal_dimension
    }

    fn check_distinct(&self) -> Result<(), PointGenError> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for w in order.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                return Err(PointGenError::Duplicate(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(())
    }
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        let err = PointSet::from_points(&[[0.5, 1.5]], PointMeta::default()).unwrap_err();
        assert!(matches!(err, PointGenError::OutOfRange { axis: 1, .. }));
    }

    #[test]
    fn rejects_duplicates_only_when_separated() {
        let pts = [[0.1, 0.2], [0.3, 0.3], [0.1, 0.2]];
        assert!(PointSet::from_points(&pts, PointMeta::default()).is_ok());
        let meta = PointMeta {
            separation: Some(0.1),
            ..PointMeta::default()
        };
        assert!(matches!(
            PointSet::from_points(&pts, meta),
            Err(PointGenError::Duplicate(0, 2))
        ));
    }

    #[test]
    fn empty_is_an_error() {
        let pts: [[f64; 2]; 0] = [];
        assert!(matches!(
            PointSet::from_points(&pts, PointMeta::default()),
            Err(PointGenError::Empty)
        ));
    }
}
