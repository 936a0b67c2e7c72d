//! Configuration-valued functions shared by the brute and pruned counters.
//!
//! Both algorithms call exactly these routines for the final predicate, so
//! their floating-point decisions agree bit for bit.

/// Tolerance below which an angle's leg is considered degenerate.
pub const DEGENERATE_LEG: f64 = 1e-12;

/// Cofactor vector `c` of the last `d - 1` rows of a `d x d` matrix, so that
/// `det = c · r_1` for any first row `r_1`.
///
/// `rows` holds the `d - 1` trailing rows, each of length `d`.
pub fn cofactor_row(rows: &[Vec<f64>], d: usize, out: &mut [f64]) {
    debug_assert_eq!(rows.len(), d - 1);
    match d {
        1 => out[0] = 1.0,
        2 => {
            out[0] = rows[0][1];
            out[1] = -rows[0][0];
        }
        3 => {
            let (a, b) = (&rows[0], &rows[1]);
            out[0] = a[1] * b[2] - a[2] * b[1];
            out[1] = a[2] * b[0] - a[0] * b[2];
            out[2] = a[0] * b[1] - a[1] * b[0];
        }
        _ => {
            let mut minor = vec![0.0; (d - 1) * (d - 1)];
            for col in 0..d {
                for (r, row) in rows.iter().enumerate() {
                    let mut c = 0;
                    for (j, &v) in row.iter().enumerate() {
                        if j != col {
                            minor[r * (d - 1) + c] = v;
                            c += 1;
                        }
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                out[col] = sign * determinant_in_place(&mut minor, d - 1);
            }
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting. Destroys `a`.
pub fn determinant_in_place(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[pivot * n + col].abs() {
                pivot = r;
            }
        }
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..n {
                a.swap(col * n + c, pivot * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
    }
    det
}

/// Rows `x^{j} - x^{d+1}` for `j = 2..=d`: the part of the volume matrix that
/// does not involve the first vertex.
pub fn facet_rows(tuple: &[&[f64]], rows: &mut [Vec<f64>]) {
    let d = tuple[0].len();
    let apex = tuple[d];
    for (row, x) in rows.iter_mut().zip(&tuple[1..d]) {
        for i in 0..d {
            row[i] = x[i] - apex[i];
        }
    }
}

/// `|c · (x - apex)|` for a precomputed facet cofactor `c`.
#[inline]
pub fn volume_from_cofactor(cof: &[f64], x: &[f64], apex: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..cof.len() {
        acc += cof[i] * (x[i] - apex[i]);
    }
    acc.abs()
}

/// Bare `d`-volume `|det(x^1 - x^{d+1}, ..., x^d - x^{d+1})|` of a
/// `(d+1)`-tuple, evaluated through the facet cofactor.
pub fn bare_volume(tuple: &[&[f64]]) -> f64 {
    let d = tuple[0].len();
    let mut rows = vec![vec![0.0; d]; d - 1];
    facet_rows(tuple, &mut rows);
    let mut cof = vec![0.0; d];
    cofactor_row(&rows, d, &mut cof);
    volume_from_cofactor(&cof, tuple[0], tuple[d])
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn diff_into(a: &[f64], b: &[f64], out: &mut [f64]) {
    for i in 0..a.len() {
        out[i] = a[i] - b[i];
    }
}

/// Parallelogram area spanned by `x2 - x1` and `x3 - x1` via the Gram
/// determinant, given `|x2 - x1|^2` precomputed.
#[inline]
pub fn gram_area(leg: &[f64], leg_sq: f64, x1: &[f64], x3: &[f64], scratch: &mut [f64]) -> f64 {
    diff_into(x3, x1, scratch);
    let bb = dot(scratch, scratch);
    let ab = dot(leg, scratch);
    (leg_sq * bb - ab * ab).max(0.0).sqrt()
}

/// Bare (parallelogram) area of the triangle `(x1, x2, x3)`.
pub fn bare_area(x1: &[f64], x2: &[f64], x3: &[f64]) -> f64 {
    let mut leg = vec![0.0; x1.len()];
    diff_into(x2, x1, &mut leg);
    let mut scratch = vec![0.0; x1.len()];
    let aa = dot(&leg, &leg);
    gram_area(&leg, aa, x1, x3, &mut scratch)
}

/// Angle at `x1` between the legs towards `x2` and `x3`, given the first leg
/// and its length. `None` when the second leg is degenerate.
#[inline]
pub fn angle_with_leg(
    leg: &[f64],
    leg_len: f64,
    x1: &[f64],
    x3: &[f64],
    scratch: &mut [f64],
) -> Option<f64> {
    diff_into(x3, x1, scratch);
    let len = dot(scratch, scratch).sqrt();
    if len < DEGENERATE_LEG {
        return None;
    }
    let cos = (dot(leg, scratch) / (leg_len * len)).clamp(-1.0, 1.0);
    Some(cos.acos())
}

/// `∠(x2 - x1, x3 - x1)` in `[0, π]`, or `None` for a degenerate leg.
pub fn angle(x1: &[f64], x2: &[f64], x3: &[f64]) -> Option<f64> {
    let mut leg = vec![0.0; x1.len()];
    diff_into(x2, x1, &mut leg);
    let leg_len = dot(&leg, &leg).sqrt();
    if leg_len < DEGENERATE_LEG {
        return None;
    }
    let mut scratch = vec![0.0; x1.len()];
    angle_with_leg(&leg, leg_len, x1, x3, &mut scratch)
}

pub(crate) fn leg(x1: &[f64], x2: &[f64], out: &mut [f64]) -> f64 {
    diff_into(x2, x1, out);
    dot(out, out)
}
