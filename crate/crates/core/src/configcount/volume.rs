//! Volume, area and angle counters.
//!
//! The optimized versions hoist the part of the predicate that does not
//! depend on the first vertex (facet cofactor, first leg) out of the inner
//! loop; the arithmetic for each tuple is the same as in the brute loops.

use std::time::Instant;

use rayon::prelude::*;

use super::geometry::{
    angle, angle_with_leg, bare_area, bare_volume, cofactor_row, facet_rows, gram_area, leg,
    volume_from_cofactor, DEGENERATE_LEG,
};
use super::tuples::for_each_with_first;
use super::{
    check_brute_budget, finish_report, Algorithm, ConfigQuery, CountError, CountReport,
    VolumeConvention,
};
use crate::pointgen::PointSet;

fn factorial(d: usize) -> f64 {
    (1..=d).map(|i| i as f64).product()
}

pub fn count_volume(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
) -> Result<CountReport, CountError> {
    count_volume_with(set, t, delta, convention, Algorithm::Pruned)
}

pub fn count_volume_brute(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
) -> Result<CountReport, CountError> {
    count_volume_with(set, t, delta, convention, Algorithm::Brute)
}

pub fn count_volume_with(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
    algorithm: Algorithm,
) -> Result<CountReport, CountError> {
    let d = set.dim();
    let query = ConfigQuery::volume(d, t, delta, convention);
    query.validate(d)?;
    let scale = match convention {
        VolumeConvention::BareDeterminant => 1.0,
        VolumeConvention::Simplex => factorial(d),
    };
    let (t, delta) = (t * scale, delta * scale);
    let start = Instant::now();
    let n = set.len();
    let count = if n < d + 1 {
        0
    } else {
        match algorithm {
            Algorithm::Brute => {
                check_brute_budget(n, d + 1)?;
                let mut count = 0u64;
                let mut tuple: Vec<&[f64]> = vec![&[]; d + 1];
                for first in 0..n {
                    for_each_with_first(n, d + 1, first, |idx| {
                        for (slot, &i) in tuple.iter_mut().zip(idx) {
                            *slot = set.point(i);
                        }
                        if (bare_volume(&tuple) - t).abs() <= delta {
                            count += 1;
                        }
                    });
                }
                count
            }
            Algorithm::Pruned => volume_pruned(set, t, delta),
        }
    };
    Ok(finish_report(set, query, algorithm, start, count))
}

fn volume_pruned(set: &PointSet, t: f64, delta: f64) -> u64 {
    let d = set.dim();
    let n = set.len();
    // Parallel over the apex x^{d+1}; the facet x^2..x^d is enumerated
    // inside, then every remaining point is tried as x^1.
    (0..n)
        .into_par_iter()
        .map(|apex| {
            let mut rows = vec![vec![0.0; d]; d - 1];
            let mut cof = vec![0.0; d];
            let mut tuple: Vec<&[f64]> = vec![set.point(apex); d + 1];
            let mut facet = vec![apex; d];
            let mut count = 0u64;
            let mut visit = |facet: &[usize]| {
                // facet[0] = apex, facet[1..] = x^2..x^d
                for (slot, &i) in tuple[1..d].iter_mut().zip(&facet[1..]) {
                    *slot = set.point(i);
                }
                facet_rows(&tuple, &mut rows);
                cofactor_row(&rows, d, &mut cof);
                let apex_pt = set.point(apex);
                for x1 in 0..n {
                    if facet.contains(&x1) {
                        continue;
                    }
                    if (volume_from_cofactor(&cof, set.point(x1), apex_pt) - t).abs() <= delta {
                        count += 1;
                    }
                }
            };
            if d == 1 {
                visit(&facet);
            } else {
                for_each_with_first(n, d, apex, |idx| {
                    facet.copy_from_slice(idx);
                    visit(&facet);
                });
            }
            count
        })
        .sum()
}

pub fn count_area(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
) -> Result<CountReport, CountError> {
    count_area_with(set, t, delta, convention, Algorithm::Pruned)
}

pub fn count_area_brute(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
) -> Result<CountReport, CountError> {
    count_area_with(set, t, delta, convention, Algorithm::Brute)
}

pub fn count_area_with(
    set: &PointSet,
    t: f64,
    delta: f64,
    convention: VolumeConvention,
    algorithm: Algorithm,
) -> Result<CountReport, CountError> {
    let query = ConfigQuery::area(t, delta, convention);
    query.validate(set.dim())?;
    let scale = match convention {
        VolumeConvention::BareDeterminant => 1.0,
        VolumeConvention::Simplex => 2.0,
    };
    let (t, delta) = (t * scale, delta * scale);
    let start = Instant::now();
    let n = set.len();
    let count = if n < 3 {
        0
    } else {
        match algorithm {
            Algorithm::Brute => {
                check_brute_budget(n, 3)?;
                let mut count = 0u64;
                for first in 0..n {
                    for_each_with_first(n, 3, first, |idx| {
                        let a = bare_area(set.point(idx[0]), set.point(idx[1]), set.point(idx[2]));
                        if (a - t).abs() <= delta {
                            count += 1;
                        }
                    });
                }
                count
            }
            Algorithm::Pruned => triple_pruned(set, |x1, lg, lsq, x3, scratch| {
                (gram_area(lg, lsq, x1, x3, scratch) - t).abs() <= delta
            }),
        }
    };
    Ok(finish_report(set, query, algorithm, start, count))
}

pub fn count_angle(set: &PointSet, theta0: f64, delta: f64) -> Result<CountReport, CountError> {
    count_angle_with(set, theta0, delta, Algorithm::Pruned)
}

pub fn count_angle_brute(
    set: &PointSet,
    theta0: f64,
    delta: f64,
) -> Result<CountReport, CountError> {
    count_angle_with(set, theta0, delta, Algorithm::Brute)
}

pub fn count_angle_with(
    set: &PointSet,
    theta0: f64,
    delta: f64,
    algorithm: Algorithm,
) -> Result<CountReport, CountError> {
    let query = ConfigQuery::angle(theta0, delta);
    query.validate(set.dim())?;
    let start = Instant::now();
    let n = set.len();
    let hit = |theta: Option<f64>| theta.is_some_and(|a| (a - theta0).abs() <= delta);
    let count = if n < 3 {
        0
    } else {
        match algorithm {
            Algorithm::Brute => {
                check_brute_budget(n, 3)?;
                let mut count = 0u64;
                for first in 0..n {
                    for_each_with_first(n, 3, first, |idx| {
                        if hit(angle(set.point(idx[0]), set.point(idx[1]), set.point(idx[2]))) {
                            count += 1;
                        }
                    });
                }
                count
            }
            Algorithm::Pruned => triple_pruned(set, |x1, lg, lsq, x3, scratch| {
                let len = lsq.sqrt();
                len >= DEGENERATE_LEG && hit(angle_with_leg(lg, len, x1, x3, scratch))
            }),
        }
    };
    Ok(finish_report(set, query, algorithm, start, count))
}

/// Counts ordered distinct triples `(x1, x2, x3)` accepted by `pred`, which
/// receives `x1`, the leg `x2 - x1`, its squared length, `x3` and scratch.
fn triple_pruned<F>(set: &PointSet, pred: F) -> u64
where
    F: Fn(&[f64], &[f64], f64, &[f64], &mut [f64]) -> bool + Sync,
{
    let n = set.len();
    let d = set.dim();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = set.point(i);
            let mut lg = vec![0.0; d];
            let mut scratch = vec![0.0; d];
            let mut count = 0u64;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let lsq = leg(x1, set.point(j), &mut lg);
                for l in 0..n {
                    if l == i || l == j {
                        continue;
                    }
                    if pred(x1, &lg, lsq, set.point(l), &mut scratch) {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum()
}
