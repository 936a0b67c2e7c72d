//! Ordered-tuple bookkeeping shared by the counters.

/// Number of ordered tuples of `len` distinct indices drawn from `n`:
/// `n (n-1) ... (n-len+1)`. Saturates at `u128::MAX`.
pub fn ordered_tuple_count(n: usize, len: usize) -> u128 {
    if len > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..len {
        acc = acc.saturating_mul((n - i) as u128);
    }
    acc
}

/// Vertex pairs `(i, j)`, `i < j < m`, in the order used for simplex targets.
pub fn pair_list(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Position of the pair `(i, j)`, `i < j`, in [`pair_list`]`(m)`.
pub fn pair_index(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Visits every ordered tuple of `len` distinct indices in `0..n`, the first
/// index fixed to `first`. Used by the brute-force counters.
pub(crate) fn for_each_with_first<F: FnMut(&[usize])>(
    n: usize,
    len: usize,
    first: usize,
    mut f: F,
) {
    let mut idx = vec![0usize; len];
    idx[0] = first;
    fn rec<F: FnMut(&[usize])>(idx: &mut [usize], depth: usize, n: usize, f: &mut F) {
        if depth == idx.len() {
            f(idx);
            return;
        }
        'next: for c in 0..n {
            for &prev in &idx[..depth] {
                if prev == c {
                    continue 'next;
                }
            }
            idx[depth] = c;
            rec(idx, depth + 1, n, f);
        }
    }
    rec(&mut idx, 1, n, &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorial() {
        assert_eq!(ordered_tuple_count(4, 2), 12);
        assert_eq!(ordered_tuple_count(4, 3), 24);
        assert_eq!(ordered_tuple_count(2, 3), 0);
        assert_eq!(ordered_tuple_count(5, 0), 1);
    }

    #[test]
    fn pair_order() {
        assert_eq!(pair_list(3), vec![(0, 1), (0, 2), (1, 2)]);
        for m in 2..7 {
            for (pos, &(i, j)) in pair_list(m).iter().enumerate() {
                assert_eq!(pair_index(i, j, m), pos);
            }
        }
    }

    #[test]
    fn enumerates_distinct_tuples() {
        let mut total = 0;
        for first in 0..5 {
            for_each_with_first(5, 3, first, |t| {
                assert_eq!(t[0], first);
                assert!(t[0] != t[1] && t[1] != t[2] && t[0] != t[2]);
                total += 1;
            });
        }
        assert_eq!(total, 60);
    }
}
