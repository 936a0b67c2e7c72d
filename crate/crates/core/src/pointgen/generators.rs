use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PointGenError, PointMeta, PointSet};

/// Default cap on generated point counts. Downstream counting is
/// `O(n^{k+1})`, so oversized sets are refused up front.
pub const DEFAULT_POINT_BUDGET: usize = 1_000_000;

/// Parameters for one of the point-set families.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// `{0, 1/(m-1), ..., 1}^d`.
    Lattice { d: usize, m: usize },
    /// Level-`level` left endpoints of the `d`-fold product of the ratio-`ratio`
    /// Cantor construction.
    CantorProduct { d: usize, ratio: f64, level: u32 },
    /// One jittered point in each of `n` distinct cells of the `m^d` grid,
    /// kept in the central half of its cell.
    Homogeneous { d: usize, n: usize, seed: u64 },
    UniformRandom { d: usize, n: usize, seed: u64 },
    /// Uniform points in the slice `{x_d = 1/2}`.
    Coplanar { d: usize, n: usize, seed: u64 },
    FromFile { path: PathBuf },
}

impl GeneratorSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Lattice { .. } => "lattice",
            Self::CantorProduct { .. } => "cantor_product",
            Self::Homogeneous { .. } => "homogeneous",
            Self::UniformRandom { .. } => "uniform_random",
            Self::Coplanar { .. } => "coplanar",
            Self::FromFile { .. } => "from_file",
        }
    }

    pub fn validate(&self) -> Result<(), PointGenError> {
        let invalid = |msg: &str| Err(PointGenError::InvalidParams(msg.to_string()));
        match *self {
            Self::Lattice { d, m } => {
                if d == 0 {
                    return invalid("lattice dimension must be >= 1");
                }
                if m == 0 {
                    return invalid("lattice side count m must be >= 1");
                }
            }
            Self::CantorProduct { d, ratio, .. } => {
                if d == 0 {
                    return invalid("cantor dimension must be >= 1");
                }
                if !(ratio > 0.0 && ratio < 0.5) {
                    return invalid("cantor contraction ratio must satisfy 0 < r < 1/2");
                }
            }
            Self::Homogeneous { d, n, .. } | Self::UniformRandom { d, n, .. } => {
                if d == 0 {
                    return invalid("dimension must be >= 1");
                }
                if n == 0 {
                    return invalid("point count n must be >= 1");
                }
            }
            Self::Coplanar { d, n, .. } => {
                if d < 2 {
                    return invalid("coplanar sets need d >= 2");
                }
                if n == 0 {
                    return invalid("point count n must be >= 1");
                }
            }
            Self::FromFile { .. } => {}
        }
        Ok(())
    }

    /// Number of points the generator will produce, if known without reading files.
    pub fn point_count(&self) -> Option<u128> {
        match *self {
            Self::Lattice { d, m } => checked_pow(m as u128, d),
            Self::CantorProduct { d, level, .. } => {
                let bits = (d as u128).checked_mul(level as u128)?;
                if bits >= 127 {
                    None
                } else {
                    Some(1u128 << bits)
                }
            }
            Self::Homogeneous { n, .. } | Self::UniformRandom { n, .. } | Self::Coplanar { n, .. } => {
                Some(n as u128)
            }
            Self::FromFile { .. } => None,
        }
    }

    pub fn generate(&self) -> Result<PointSet, PointGenError> {
        self.generate_with_budget(DEFAULT_POINT_BUDGET)
    }

    pub fn generate_with_budget(&self, budget: usize) -> Result<PointSet, PointGenError> {
        self.validate()?;
        if !matches!(self, Self::FromFile { .. }) {
            match self.point_count() {
                Some(c) if c <= budget as u128 => {}
                Some(c) => return Err(PointGenError::Capacity { requested: c, budget }),
                None => {
                    return Err(PointGenError::Capacity {
                        requested: u128::MAX,
                        budget,
                    })
                }
            }
        }
        match *self {
            Self::Lattice { d, m } => Ok(lattice(d, m)),
            Self::CantorProduct { d, ratio, level } => Ok(cantor(d, ratio, level)),
            Self::Homogeneous { d, n, seed } => Ok(homogeneous(d, n, seed)),
            Self::UniformRandom { d, n, seed } => Ok(uniform(d, n, seed)),
            Self::Coplanar { d, n, seed } => Ok(coplanar(d, n, seed)),
            Self::FromFile { ref path } => {
                let set = super::read_pointset(path)?;
                if set.len() > budget {
                    return Err(PointGenError::Capacity {
                        requested: set.len() as u128,
                        budget,
                    });
                }
                Ok(set)
            }
        }
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn gen_lattice(d: usize, m: usize) -> Result<PointSet, PointGenError> {
    GeneratorSpec::Lattice { d, m }.generate()
}

pub fn gen_cantor(d: usize, ratio: f64, level: u32) -> Result<PointSet, PointGenError> {
    GeneratorSpec::CantorProduct { d, ratio, level }.generate()
}

pub fn gen_random(d: usize, n: usize, seed: u64) -> Result<PointSet, PointGenError> {
    GeneratorSpec::UniformRandom { d, n, seed }.generate()
}

pub fn gen_coplanar(d: usize, n: usize, seed: u64) -> Result<PointSet, PointGenError> {
    GeneratorSpec::Coplanar { d, n, seed }.generate()
}

pub fn gen_homogeneous(d: usize, n: usize, seed: u64) -> Result<PointSet, PointGenError> {
    GeneratorSpec::Homogeneous { d, n, seed }.generate()
}

/// Calls `f` with every multi-index of `{0..m}^d`, last axis fastest.
fn for_each_index(d: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; d];
    loop {
        f(&idx);
        let mut axis = d;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < m {
                break;
            }
            idx[axis] = 0;
        }
    }
}

fn finish(d: usize, coords: Vec<f64>, meta: PointMeta) -> PointSet {
    PointSet::new(d, coords, meta).expect("generator produced an invalid point set")
}

fn lattice(d: usize, m: usize) -> PointSet {
    let mut coords = Vec::with_capacity(m.pow(d as u32) * d);
    let step = if m > 1 { (m - 1) as f64 } else { 1.0 };
    for_each_index(d, m, |idx| {
        coords.extend(idx.iter().map(|&i| i as f64 / step));
    });
    let meta = PointMeta {
        generator: "lattice".into(),
        seed: None,
        nominal_dimension: Some(d as f64),
        separation: (m > 1).then(|| 1.0 / (m - 1) as f64),
        extra: Default::default(),
    };
    finish(d, coords, meta)
}

/// Left endpoints of the surviving level-`level` intervals in `[0,1]`.
fn cantor_endpoints(ratio: f64, level: u32) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut scale = 1.0;
    for _ in 0..level {
        let jump = (1.0 - ratio) * scale;
        pts = pts.iter().flat_map(|&x| [x, x + jump]).collect();
        scale *= ratio;
    }
    pts
}

fn cantor(d: usize, ratio: f64, level: u32) -> PointSet {
    let line = cantor_endpoints(ratio, level);
    let mut coords = Vec::with_capacity(line.len().pow(d as u32) * d);
    for_each_index(d, line.len(), |idx| {
        coords.extend(idx.iter().map(|&i| line[i]));
    });
    let meta = PointMeta {
        generator: "cantor_product".into(),
        seed: None,
        nominal_dimension: Some(d as f64 * 2f64.ln() / (1.0 / ratio).ln()),
        separation: (level >= 1).then(|| (1.0 - 2.0 * ratio) * ratio.powi(level as i32 - 1)),
        extra: [
            ("ratio".to_string(), format!("{ratio}")),
            ("level".to_string(), format!("{level}")),
        ]
        .into_iter()
        .collect(),
    };
    finish(d, coords, meta)
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(d: usize, n: usize, seed: u64) -> PointSet {
    let mut rng = rng_for(seed);
    let coords: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
    let meta = PointMeta {
        generator: "uniform_random".into(),
        seed: Some(seed),
        nominal_dimension: Some(d as f64),
        ..PointMeta::default()
    };
    finish(d, coords, meta)
}

fn coplanar(d: usize, n: usize, seed: u64) -> PointSet {
    let mut rng = rng_for(seed);
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        coords.extend((0..d - 1).map(|_| rng.random::<f64>()));
        coords.push(0.5);
    }
    let meta = PointMeta {
        generator: "coplanar".into(),
        seed: Some(seed),
        nominal_dimension: Some((d - 1) as f64),
        ..PointMeta::default()
    };
    finish(d, coords, meta)
}

fn homogeneous(d: usize, n: usize, seed: u64) -> PointSet {
    let mut m = 1usize;
    while m.pow(d as u32) < n {
        m += 1;
    }
    let total = m.pow(d as u32);
    let mut rng = rng_for(seed);
    let mut cells: Vec<usize> = (0..total).collect();
    cells.shuffle(&mut rng);
    let mut chosen = cells[..n].to_vec();
    chosen.sort_unstable();

    let width = 1.0 / m as f64;
    let mut coords = Vec::with_capacity(n * d);
    for cell in chosen {
        let mut rest = cell;
        let mut digits = vec![0usize; d];
        for axis in (0..d).rev() {
            digits[axis] = rest % m;
            rest /= m;
        }
        for &digit in &digits {
            let jitter = 0.25 + 0.5 * rng.random::<f64>();
            coords.push(((digit as f64 + jitter) * width).min(1.0));
        }
    }
    let meta = PointMeta {
        generator: "homogeneous".into(),
        seed: Some(seed),
        nominal_dimension: Some(d as f64),
        separation: (n > 1).then_some(0.5 * width),
        extra: Default::default(),
    };
    finish(d, coords, meta)
}
