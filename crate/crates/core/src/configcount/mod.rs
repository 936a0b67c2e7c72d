//! Counting δ-approximate point configurations.
//!
//! All counts are over *ordered* tuples of *distinct* points. Simplex, volume,
//! area and angle predicates use closed intervals `[t - δ, t + δ]`; generic
//! Φ-configurations use the strict max-norm ball `|Φ - t|_∞ < δ`.
//!
//! Every family has a brute-force counter (plain nested loops, the oracle)
//! and an optimized one. Both evaluate the final predicate with the same
//! routines from [`geometry`], so they return identical integers.

mod boxdim;
mod classes;
pub mod geometry;
mod grid;
mod phi;
mod simplex;
mod tuples;
mod volume;

pub use boxdim::{box_dim, sample_solution_set, BoxDimReport};
pub use classes::{distinct_classes, MAX_CLASS_K};
pub use phi::{count_phi, PhiFunction};
pub use simplex::{count_simplex, count_simplex_brute, count_simplex_with};
pub use tuples::{ordered_tuple_count, pair_index, pair_list};
pub use volume::{
    count_angle, count_angle_brute, count_angle_with, count_area, count_area_brute,
    count_area_with, count_volume, count_volume_brute, count_volume_with,
};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::pointgen::PointSet;

/// Brute-force counters refuse inputs with more than this many
/// `n^{k+1}` predicate evaluations.
pub const BRUTE_EVALUATION_LIMIT: f64 = 1e9;

#[derive(Debug, Error, PartialEq)]
pub enum CountError {
    #[error("tolerance must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("invalid configuration size: {0}")]
    InvalidK(String),
    #[error("Φ arity {arity} / output dimension {output} incompatible with the query: {msg}")]
    Arity {
        arity: usize,
        output: usize,
        msg: String,
    },
    #[error("brute force would need {0:.3e} predicate evaluations (limit 1e9)")]
    BruteBudget(f64),
    #[error("distinct_classes supports k <= {MAX_CLASS_K}, got {0}")]
    ClassBudget(usize),
    #[error("invalid scales: {0}")]
    InvalidScales(String),
    #[error("no tuple satisfies the constraint")]
    EmptySolutionSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Simplex,
    Volume,
    Area2,
    Angle,
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Simplex => "simplex",
            Self::Volume => "volume",
            Self::Area2 => "area2",
            Self::Angle => "angle",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simplex" => Ok(Self::Simplex),
            "volume" => Ok(Self::Volume),
            "area2" | "area" => Ok(Self::Area2),
            "angle" => Ok(Self::Angle),
            "custom" => Ok(Self::Custom),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// Whether volumes are bare determinants or divided by `d!` (or `2` for
/// areas).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VolumeConvention {
    #[default]
    BareDeterminant,
    Simplex,
}

impl FromStr for VolumeConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bare_determinant" | "bare" => Ok(Self::BareDeterminant),
            "simplex" => Ok(Self::Simplex),
            other => Err(format!("unknown volume convention `{other}`")),
        }
    }
}

impl fmt::Display for VolumeConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BareDeterminant => "bare_determinant",
            Self::Simplex => "simplex",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TupleRule {
    #[default]
    OrderedDistinct,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algorithm {
    Brute,
    #[default]
    Pruned,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Brute => "brute",
            Self::Pruned => "pruned",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Self::Brute),
            "pruned" => Ok(Self::Pruned),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// A configuration family together with its target and tolerance.
///
/// For the simplex family `t` lists the target distances `t_ij` for
/// `1 <= i < j <= k+1` in lexicographic pair order
/// `(1,2), (1,3), ..., (1,k+1), (2,3), ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigQuery {
    pub family: Family,
    pub k: usize,
    pub t: Vec<f64>,
    pub delta: f64,
    pub volume_convention: VolumeConvention,
    pub tuple_rule: TupleRule,
}

impl ConfigQuery {
    pub fn simplex(k: usize, t: Vec<f64>, delta: f64) -> Self {
        Self::new(Family::Simplex, k, t, delta)
    }

    pub fn volume(d: usize, t: f64, delta: f64, convention: VolumeConvention) -> Self {
        Self {
            volume_convention: convention,
            ..Self::new(Family::Volume, d, vec![t], delta)
        }
    }

    pub fn area(t: f64, delta: f64, convention: VolumeConvention) -> Self {
        Self {
            volume_convention: convention,
            ..Self::new(Family::Area2, 2, vec![t], delta)
        }
    }

    pub fn angle(theta0: f64, delta: f64) -> Self {
        Self::new(Family::Angle, 2, vec![theta0], delta)
    }

    pub fn new(family: Family, k: usize, t: Vec<f64>, delta: f64) -> Self {
        Self {
            family,
            k,
            t,
            delta,
            volume_convention: VolumeConvention::default(),
            tuple_rule: TupleRule::default(),
        }
    }

    /// Checks the family invariants for points of dimension `d`.
    pub fn validate(&self, d: usize) -> Result<(), CountError> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(CountError::InvalidDelta(self.delta));
        }
        let one_target = || {
            if self.t.len() != 1 {
                Err(CountError::InvalidTarget(format!(
                    "{} family takes a single target, got {}",
                    self.family,
                    self.t.len()
                )))
            } else {
                Ok(())
            }
        };
        match self.family {
            Family::Simplex => {
                if self.delta <= 0.0 {
                    return Err(CountError::InvalidDelta(self.delta));
                }
                if self.k < 1 || self.k > d {
                    return Err(CountError::InvalidK(format!(
                        "simplex family needs 1 <= k <= d = {d}, got k = {}",
                        self.k
                    )));
                }
                let want = self.k * (self.k + 1) / 2;
                if self.t.len() != want {
                    return Err(CountError::InvalidTarget(format!(
                        "simplex with k = {} needs {want} distances, got {}",
                        self.k,
                        self.t.len()
                    )));
                }
                if let Some(bad) = self.t.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                    return Err(CountError::InvalidTarget(format!(
                        "simplex distances must be positive, got {bad}"
                    )));
                }
            }
            Family::Volume => {
                if self.k != d {
                    return Err(CountError::InvalidK(format!(
                        "volume family needs k = d = {d}, got {}",
                        self.k
                    )));
                }
                one_target()?;
                if !(self.t[0] >= 0.0 && self.t[0].is_finite()) {
                    return Err(CountError::InvalidTarget(format!(
                        "volume target must be >= 0, got {}",
                        self.t[0]
                    )));
                }
            }
            Family::Area2 => {
                if self.k != 2 || d < 2 {
                    return Err(CountError::InvalidK(format!(
                        "area2 family needs k = 2 and d >= 2, got k = {} d = {d}",
                        self.k
                    )));
                }
                one_target()?;
                if !(self.t[0] >= 0.0 && self.t[0].is_finite()) {
                    return Err(CountError::InvalidTarget(format!(
                        "area target must be >= 0, got {}",
                        self.t[0]
                    )));
                }
            }
            Family::Angle => {
                if self.delta <= 0.0 {
                    return Err(CountError::InvalidDelta(self.delta));
                }
                if self.k != 2 {
                    return Err(CountError::InvalidK(format!(
                        "angle family needs k = 2, got {}",
                        self.k
                    )));
                }
                one_target()?;
                if !(0.0..=std::f64::consts::PI).contains(&self.t[0]) {
                    return Err(CountError::InvalidTarget(format!(
                        "angle target must lie in [0, π], got {}",
                        self.t[0]
                    )));
                }
            }
            Family::Custom => {
                if self.delta <= 0.0 {
                    return Err(CountError::InvalidDelta(self.delta));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one counting run.
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub query: ConfigQuery,
    pub n: usize,
    pub d: usize,
    pub count: u64,
    pub algorithm: Algorithm,
    pub elapsed_seconds: f64,
    pub seed: Option<u64>,
}

impl CountReport {
    pub const CSV_HEADER: &'static str =
        "family,k,d,n,t,delta,count,algorithm,elapsed_seconds,seed";

    /// One CSV row. Timing is left blank unless `with_timing`, which keeps
    /// rows from repeated runs byte-identical.
    pub fn csv_row(&self, with_timing: bool) -> String {
        let t = self
            .query
            .t
            .iter()
            .map(|x| format!("{x:?}"))
            .collect::<Vec<_>>()
            .join(";");
        let elapsed = if with_timing {
            format!("{:.6}", self.elapsed_seconds)
        } else {
            String::new()
        };
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{:?},{},{},{},{}",
            self.query.family,
            self.query.k,
            self.d,
            self.n,
            t,
            self.query.delta,
            self.count,
            self.algorithm.name(),
            elapsed,
            seed
        )
    }
}

/// Dispatches a non-custom query to its counter.
pub fn count_query(
    set: &PointSet,
    query: &ConfigQuery,
    algorithm: Algorithm,
) -> Result<CountReport, CountError> {
    match query.family {
        Family::Simplex => count_simplex_with(set, query.k, &query.t, query.delta, algorithm),
        Family::Volume => {
            count_volume_with(set, query.t[0], query.delta, query.volume_convention, algorithm)
        }
        Family::Area2 => {
            count_area_with(set, query.t[0], query.delta, query.volume_convention, algorithm)
        }
        Family::Angle => count_angle_with(set, query.t[0], query.delta, algorithm),
        Family::Custom => Err(CountError::InvalidTarget(
            "custom family needs a Φ function; use count_phi".into(),
        )),
    }
}

pub(crate) fn check_brute_budget(n: usize, tuple_len: usize) -> Result<(), CountError> {
    let evals = (n as f64).powi(tuple_len as i32);
    if evals > BRUTE_EVALUATION_LIMIT {
        return Err(CountError::BruteBudget(evals));
    }
    Ok(())
}

pub(crate) fn finish_report(
    set: &PointSet,
    query: ConfigQuery,
    algorithm: Algorithm,
    start: Instant,
    count: u64,
) -> CountReport {
    CountReport {
        query,
        n: set.len(),
        d: set.dim(),
        count,
        algorithm,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        seed: set.meta().seed,
    }
}
