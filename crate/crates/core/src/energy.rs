//! Discrete Riesz energy and the s-adaptability test.
//!
//! The energy of an `n`-point set is taken over ordered pairs with the
//! `n^{-2}` normalization,
//!
//! ```text
//! E_s(P) = n^{-2} * sum_{p != p'} |p - p'|^{-s},
//! ```
//!
//! and `P` is called adaptable at level `C` when `E_s(P) <= C`. Row sums are
//! computed in a fixed order and combined by pairwise reduction, so the value
//! does not depend on how many threads computed the rows.

use rayon::prelude::*;
use thiserror::Error;

use crate::pointgen::{squared_distance, PointSet};
use crate::reduce::pairwise_sum;

/// Distances below this are treated as coincident points.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_ADAPTABILITY_CONSTANT: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("energy exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("adaptability constant must be positive, got {0}")]
    InvalidConstant(f64),
    #[error("points {0} and {1} coincide (distance {2:e})")]
    Coincident(usize, usize, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub s: f64,
    pub value: f64,
    pub n: usize,
    pub adaptable_at: f64,
    pub verdict: bool,
}

pub fn discrete_energy(set: &PointSet, s: f64) -> Result<f64, EnergyError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(EnergyError::InvalidExponent(s));
    }
    let n = set.len();
    if n == 1 {
        return Ok(0.0);
    }
    let half = -0.5 * s;
    let tol2 = COINCIDENCE_TOLERANCE * COINCIDENCE_TOLERANCE;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = set.point(i);
            let mut row = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d2 = squared_distance(p, set.point(j));
                if d2 < tol2 {
                    return Err(EnergyError::Coincident(i.min(j), i.max(j), d2.sqrt()));
                }
                row += d2.powf(half);
            }
            Ok(row)
        })
        .collect::<Result<_, _>>()?;
    let nf = n as f64;
    Ok(pairwise_sum(&rows) / (nf * nf))
}

pub fn is_adaptable(set: &PointSet, s: f64, c: f64) -> Result<EnergyReport, EnergyError> {
    if !(c > 0.0) {
        return Err(EnergyError::InvalidConstant(c));
    }
    let value = discrete_energy(set, s)?;
    Ok(EnergyReport {
        s,
        value,
        n: set.len(),
        adaptable_at: c,
        verdict: value <= c,
    })
}

pub fn energy_profile(set: &PointSet, s_grid: &[f64]) -> Result<Vec<(f64, f64)>, EnergyError> {
    s_grid
        .iter()
        .map(|&s| discrete_energy(set, s).map(|v| (s, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgen::{gen_lattice, gen_random, PointMeta};
    use proptest::prelude::*;

    fn set(points: &[[f64; 2]]) -> PointSet {
        PointSet::from_points(points, PointMeta::named("manual")).unwrap()
    }

    /// Plain double loop in index order; the oracle for the reduced sum.
    fn naive_energy(p: &PointSet, s: f64) -> f64 {
        let n = p.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = crate::pointgen::distance(p.point(i), p.point(j));
                    acc += d.powf(-s);
                }
            }
        }
        acc / (n * n) as f64
    }

    #[test]
    fn two_points_unit_distance() {
        let p = set(&[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(discrete_energy(&p, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn single_point_is_zero() {
        let p = set(&[[0.3, 0.3]]);
        for s in [0.5, 1.0, 3.0] {
            assert_eq!(discrete_energy(&p, s).unwrap(), 0.0);
            assert!(is_adaptable(&p, s, 1e-9).unwrap().verdict);
        }
    }

    #[test]
    fn halving_doubles_for_s_one() {
        let p = set(&[[0.0, 0.0], [1.0, 0.0]]);
        let q = set(&[[0.0, 0.0], [0.5, 0.0]]);
        assert_eq!(discrete_energy(&q, 1.0).unwrap(), 2.0 * discrete_energy(&p, 1.0).unwrap());
    }

    #[test]
    fn coincident_points_error() {
        let p = set(&[[0.1, 0.1], [0.5, 0.5], [0.1, 0.1]]);
        assert!(matches!(
            discrete_energy(&p, 1.0),
            Err(EnergyError::Coincident(0, 2, _))
        ));
    }

    #[test]
    fn invalid_parameters() {
        let p = set(&[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(discrete_energy(&p, 0.0), Err(EnergyError::InvalidExponent(0.0)));
        assert_eq!(is_adaptable(&p, 1.0, 0.0), Err(EnergyError::InvalidConstant(0.0)));
    }

    #[test]
    fn lattice_is_adaptable() {
        let p = gen_lattice(2, 20).unwrap();
        let r = is_adaptable(&p, 1.5, DEFAULT_ADAPTABILITY_CONSTANT).unwrap();
        assert!(r.verdict, "lattice energy {}", r.value);
    }

    #[test]
    fn close_pair_is_not_adaptable() {
        let p = set(&[[0.5, 0.5], [0.5 + 1e-9, 0.5]]);
        let r = is_adaptable(&p, 1.9, 10.0).unwrap();
        assert!(!r.verdict);
        // single pair: 2 * (1e-9)^{-1.9} / 4
        let expected = 0.5 * (1e-9f64).powf(-1.9);
        assert!((r.value / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn profile_examples() {
        let p = set(&[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(energy_profile(&p, &[1.0, 2.0]).unwrap(), vec![(1.0, 0.5), (2.0, 0.5)]);
        assert!(energy_profile(&p, &[]).unwrap().is_empty());

        // {0, 1/2, 1}: ordered pairs at distances 1/2 (x4) and 1 (x2).
        let line = gen_lattice(1, 3).unwrap();
        let v = energy_profile(&line, &[1.0]).unwrap()[0].1;
        assert!((v - 10.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_naive_oracle() {
        for (n, seed) in [(2, 1), (17, 2), (120, 3), (200, 4)] {
            let p = gen_random(3, n, seed).unwrap();
            for s in [0.5, 1.5, 2.9] {
                let fast = discrete_energy(&p, s).unwrap();
                let slow = naive_energy(&p, s);
                assert!(((fast - slow) / slow).abs() <= 1e-12, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let p = gen_random(2, 300, 5).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| discrete_energy(&p, 1.3).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| discrete_energy(&p, 1.3).unwrap());
        assert_eq!(serial, parallel);
    }

    fn rotate_about_center(p: &[[f64; 2]], angle: f64, shift: [f64; 2]) -> Vec<[f64; 2]> {
        let (s, c) = angle.sin_cos();
        p.iter()
            .map(|q| {
                let x = q[0] - 0.5;
                let y = q[1] - 0.5;
                [0.5 + c * x - s * y + shift[0], 0.5 + s * x + c * y + shift[1]]
            })
            .collect()
    }

    proptest! {
        #[test]
        fn rigid_motion_invariance(
            pts in prop::collection::vec((0.25f64..0.75, 0.25f64..0.75), 2..40),
            angle in 0.0f64..std::f64::consts::TAU,
            dx in -0.1f64..0.1,
            dy in -0.1f64..0.1,
            s in 0.2f64..3.0,
        ) {
            let raw: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let p = set(&raw);
            let Ok(base) = discrete_energy(&p, s) else { return Ok(()); };
            let moved = set(&rotate_about_center(&raw, angle, [dx, dy]));
            let e = discrete_energy(&moved, s).unwrap();
            prop_assert!(((e - base) / base).abs() <= 1e-12);
        }

        #[test]
        fn scaling_law(
            pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..40),
            lambda in 0.05f64..1.0,
            s in 0.2f64..3.0,
        ) {
            let raw: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let p = set(&raw);
            let Ok(base) = discrete_energy(&p, s) else { return Ok(()); };
            let scaled: Vec<[f64; 2]> = raw.iter().map(|q| [q[0] * lambda, q[1] * lambda]).collect();
            let e = discrete_energy(&set(&scaled), s).unwrap();
            let expected = lambda.powf(-s) * base;
            prop_assert!(((e - expected) / expected).abs() <= 1e-12);
        }

        #[test]
        fn permutation_invariance(
            pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..40),
            seed in any::<u64>(),
            s in 0.2f64..3.0,
        ) {
            use rand::seq::SliceRandom;
            let raw: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let Ok(base) = discrete_energy(&set(&raw), s) else { return Ok(()); };
            let mut shuffled = raw.clone();
            shuffled.shuffle(&mut crate::pointgen::rng_for(seed));
            let e = discrete_energy(&set(&shuffled), s).unwrap();
            prop_assert!(((e - base) / base).abs() <= 1e-12);
        }
    }
}
