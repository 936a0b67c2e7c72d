//! Uniform spatial hash over `[0,1]^d` for fixed-radius neighbor queries.

use std::collections::HashMap;

use crate::pointgen::PointSet;

/// Buckets of point indices on a uniform grid whose cell width is at least
/// the query radius, so every point within the radius of `x` lies in the
/// `3^d` cells around the cell of `x`.
pub(crate) struct Grid {
    dim: usize,
    per_axis: u64,
    cells: HashMap<u64, Vec<u32>>,
}

impl Grid {
    pub fn build(set: &PointSet, radius: f64) -> Self {
        let dim = set.dim();
        // Largest per-axis count whose linear ids still fit in u64.
        let cap = (2f64.powf(63.0 / dim as f64)).floor().max(1.0);
        let per_axis = if radius > 0.0 {
            (1.0 / radius).floor().clamp(1.0, cap) as u64
        } else {
            cap as u64
        };
        let mut grid = Self {
            dim,
            per_axis,
            cells: HashMap::new(),
        };
        for (i, p) in set.points().enumerate() {
            let id = grid.linear_id(&grid.cell_of(p));
            grid.cells.entry(id).or_default().push(i as u32);
        }
        grid
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        let m = self.per_axis as f64;
        p.iter()
            .map(|&x| ((x * m).floor() as i64).clamp(0, self.per_axis as i64 - 1))
            .collect()
    }

    fn linear_id(&self, cell: &[i64]) -> u64 {
        cell.iter()
            .fold(0u64, |acc, &c| acc * self.per_axis + c as u64)
    }

    /// Calls `f` with every point index in the cells adjacent to `p`'s cell
    /// (including its own). Each index is visited once.
    pub fn for_each_near<F: FnMut(usize)>(&self, p: &[f64], mut f: F) {
        let home = self.cell_of(p);
        let mut offset = vec![-1i64; self.dim];
        let mut cell = vec![0i64; self.dim];
        let top = self.per_axis as i64 - 1;
        'outer: loop {
            let mut inside = true;
            for a in 0..self.dim {
                cell[a] = home[a] + offset[a];
                if cell[a] < 0 || cell[a] > top {
                    inside = false;
                    break;
                }
            }
            if inside {
                if let Some(bucket) = self.cells.get(&self.linear_id(&cell)) {
                    for &i in bucket {
                        f(i as usize);
                    }
                }
            }
            for a in 0..self.dim {
                if offset[a] < 1 {
                    offset[a] += 1;
                    continue 'outer;
                }
                offset[a] = -1;
            }
            break;
        }
    }
}
