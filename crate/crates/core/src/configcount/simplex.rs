//! Counting near-congruent copies of a simplex with prescribed edge lengths.

use std::time::Instant;

use rayon::prelude::*;

use super::grid::Grid;
use super::tuples::{for_each_with_first, pair_index};
use super::{check_brute_budget, finish_report, Algorithm, ConfigQuery, CountError, CountReport};
use crate::pointgen::{distance, PointSet};

pub fn count_simplex(
    set: &PointSet,
    k: usize,
    t: &[f64],
    delta: f64,
) -> Result<CountReport, CountError> {
    count_simplex_with(set, k, t, delta, Algorithm::Pruned)
}

pub fn count_simplex_brute(
    set: &PointSet,
    k: usize,
    t: &[f64],
    delta: f64,
) -> Result<CountReport, CountError> {
    count_simplex_with(set, k, t, delta, Algorithm::Brute)
}

pub fn count_simplex_with(
    set: &PointSet,
    k: usize,
    t: &[f64],
    delta: f64,
    algorithm: Algorithm,
) -> Result<CountReport, CountError> {
    let query = ConfigQuery::simplex(k, t.to_vec(), delta);
    query.validate(set.dim())?;
    let start = Instant::now();
    let m = k + 1;
    let count = if set.len() < m {
        0
    } else {
        match algorithm {
            Algorithm::Brute => {
                check_brute_budget(set.len(), m)?;
                brute(set, m, t, delta)
            }
            Algorithm::Pruned => pruned(set, m, t, delta),
        }
    };
    Ok(finish_report(set, query, algorithm, start, count))
}

#[inline]
fn within(dist: f64, target: f64, delta: f64) -> bool {
    target - delta <= dist && dist <= target + delta
}

fn brute(set: &PointSet, m: usize, t: &[f64], delta: f64) -> u64 {
    let mut count = 0u64;
    for first in 0..set.len() {
        for_each_with_first(set.len(), m, first, |idx| {
            for a in 0..m {
                for b in a + 1..m {
                    let d = distance(set.point(idx[a]), set.point(idx[b]));
                    if !within(d, t[pair_index(a, b, m)], delta) {
                        return;
                    }
                }
            }
            count += 1;
        });
    }
    count
}

fn pruned(set: &PointSet, m: usize, t: &[f64], delta: f64) -> u64 {
    let radius = t[..m - 1].iter().cloned().fold(0.0, f64::max) + delta;
    let grid = Grid::build(set, radius * (1.0 + 1e-9));
    (0..set.len())
        .into_par_iter()
        .map(|first| {
            let x = set.point(first);
            // candidates[l] holds the points that can sit at vertex l + 1
            // given the first vertex.
            let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); m - 1];
            grid.for_each_near(x, |j| {
                if j == first {
                    return;
                }
                let d = distance(x, set.point(j));
                for (l, list) in candidates.iter_mut().enumerate() {
                    if within(d, t[pair_index(0, l + 1, m)], delta) {
                        list.push(j);
                    }
                }
            });
            if candidates.iter().any(Vec::is_empty) {
                return 0;
            }
            let mut chosen = vec![first; m];
            extend(set, m, t, delta, &candidates, &mut chosen, 1)
        })
        .sum()
}

fn extend(
    set: &PointSet,
    m: usize,
    t: &[f64],
    delta: f64,
    candidates: &[Vec<usize>],
    chosen: &mut [usize],
    level: usize,
) -> u64 {
    if level == m {
        return 1;
    }
    let mut count = 0;
    'cand: for &c in &candidates[level - 1] {
        if chosen[1..level].contains(&c) {
            continue;
        }
        for a in 1..level {
            let d = distance(set.point(chosen[a]), set.point(c));
            if !within(d, t[pair_index(a, level, m)], delta) {
                continue 'cand;
            }
        }
        chosen[level] = c;
        count += extend(set, m, t, delta, candidates, chosen, level + 1);
    }
    count
}
