//! Counting δ-distinct congruence classes of `(k+1)`-point configurations.

use std::collections::HashSet;

use super::tuples::pair_list;
use super::CountError;
use crate::pointgen::{distance, PointSet};

/// Largest `k` accepted by [`distinct_classes`]; canonicalization tries all
/// `(k+1)!` relabelings.
pub const MAX_CLASS_K: usize = 4;

/// Number of distinct quantized canonical distance vectors over all
/// `(k+1)`-subsets of `set`.
///
/// A subset's canonical form is the lexicographically smallest distance
/// vector among its vertex relabelings, rounded to the grid `δZ`.
/// Reflections are not distinguished from rotations.
pub fn distinct_classes(set: &PointSet, k: usize, delta: f64) -> Result<u64, CountError> {
    if k > MAX_CLASS_K {
        return Err(CountError::ClassBudget(k));
    }
    if k == 0 {
        return Err(CountError::InvalidK("distinct_classes needs k >= 1".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CountError::InvalidDelta(delta));
    }
    let m = k + 1;
    let n = set.len();
    if n < m {
        return Ok(0);
    }
    let pairs = pair_list(m);
    let perms = permutations(m);
    let mut classes: HashSet<Vec<i64>> = HashSet::new();
    let mut subset: Vec<usize> = (0..m).collect();
    let mut dist = vec![0.0; m * m];
    let mut best = vec![0.0; pairs.len()];
    let mut cand = vec![0.0; pairs.len()];
    loop {
        for a in 0..m {
            for b in a + 1..m {
                let v = distance(set.point(subset[a]), set.point(subset[b]));
                dist[a * m + b] = v;
                dist[b * m + a] = v;
            }
        }
        best.fill(f64::INFINITY);
        for perm in &perms {
            for (slot, &(a, b)) in cand.iter_mut().zip(&pairs) {
                *slot = dist[perm[a] * m + perm[b]];
            }
            if lex_less(&cand, &best) {
                best.copy_from_slice(&cand);
            }
        }
        classes.insert(best.iter().map(|v| (v / delta).round() as i64).collect());
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(classes.len() as u64)
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Advances a strictly increasing index vector to the next combination.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let m = c.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if c[i] < n - m + i {
            c[i] += 1;
            for j in i + 1..m {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgen::PointMeta;

    fn square() -> PointSet {
        PointSet::from_points(
            &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
            PointMeta::named("square"),
        )
        .unwrap()
    }

    #[test]
    fn spec_examples() {
        let tri = PointSet::from_points(
            &[[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
            PointMeta::default(),
        )
        .unwrap();
        assert_eq!(distinct_classes(&tri, 2, 0.1).unwrap(), 1);
        assert_eq!(distinct_classes(&square(), 1, 0.01).unwrap(), 2);
        assert_eq!(distinct_classes(&square(), 2, 0.01).unwrap(), 1);
    }

    #[test]
    fn budget() {
        assert_eq!(distinct_classes(&square(), 5, 0.1), Err(CountError::ClassBudget(5)));
    }

    #[test]
    fn combinations_enumerated() {
        let mut c = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut c, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
        assert_eq!(permutations(4).len(), 24);
    }
}
