//! Fourier transforms of configuration measures, decay-exponent fits, and
//! numerical curvature and rank certificates.
//!
//! Frequencies use the convention `F(Ξ) = ∫ exp(-2πi Ξ·z) dμ(z)`.

mod bessel;
mod curvature;
mod decay;
mod hessian;
mod montecarlo;
mod sphere;
mod triangle;

pub use bessel::bessel_j;
pub use curvature::{
    level_set_curvatures, nonzero_count, paired_form_base_point, paired_quadratic_form,
    partial_determinant, DEFAULT_STEP, NONZERO_ABSOLUTE_FLOOR,
    NONZERO_RELATIVE_TOLERANCE,
};
pub use decay::{decay_fit, decay_fit_values, DecayReport, MIN_MAGNITUDE};
pub use hessian::{
    circulant_check, numerical_rank, phase_hessian, q_discriminant, q_form,
    restricted_block_determinant, PhaseHessian,
};
pub use montecarlo::{ft_montecarlo, McEstimate, McSample, MC_STREAMS};
pub use sphere::{ft_quadrature, ft_sphere, gauss_legendre, sphere_area};
pub use triangle::{ft_triangle, triangle_maps};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FourierError {
    #[error("invalid measure: {0}")]
    InvalidSpec(String),
    #[error("frequency does not match the measure: {0}")]
    FrequencyShape(String),
    #[error("quadrature needs at least 16 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("epsilon must lie in (0, 0.2], got {0}")]
    InvalidEpsilon(f64),
    #[error("need at least 10^4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("no sample satisfied the constraints")]
    Infeasible,
    #[error("invalid radii: {0}")]
    InvalidRadii(String),
    #[error("|∇F| = {0:e} at the base point; not a regular point")]
    NotRegular(f64),
    #[error("base point is off the level set: |F(x0) - t| = {0:e}")]
    OffLevelSet(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A frequency `(ξ^1, ..., ξ^k)` split into blocks matching the measure's
/// factors.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyPoint {
    pub blocks: Vec<Vec<f64>>,
}

impl FrequencyPoint {
    pub fn new(blocks: Vec<Vec<f64>>) -> Self {
        Self { blocks }
    }

    pub fn single(xi: &[f64]) -> Self {
        Self::new(vec![xi.to_vec()])
    }

    pub fn zeros(block_dims: &[usize]) -> Self {
        Self::new(block_dims.iter().map(|&d| vec![0.0; d]).collect())
    }

    pub fn flat(&self) -> Vec<f64> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, r: f64) -> Self {
        Self::new(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|x| x * r).collect())
                .collect(),
        )
    }

    /// The same direction with unit Euclidean norm.
    pub fn normalized(&self) -> Result<Self, FourierError> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(FourierError::FrequencyShape("zero direction".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    fn check(&self, dims: &[usize]) -> Result<(), FourierError> {
        let got: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        if got != dims {
            return Err(FourierError::FrequencyShape(format!(
                "expected blocks of dimensions {dims:?}, got {got:?}"
            )));
        }
        Ok(())
    }
}

/// The measures the lab can transform.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    /// Surface measure on the unit sphere `S^{d-1}`.
    Sphere { d: usize },
    /// Pairs `(u, v)` in the plane with `|u| = |v| = |u - v| = 1`,
    /// parametrized by the angle of `u`, one unit of arc length per branch.
    Triangle2d,
    /// Pairs `(x, y)` with `|x| = r1`, `|y| = r2`, `|x - y| = t`.
    ChainSpheres { d: usize, r1: f64, r2: f64, t: f64 },
    /// Triples of vectors in the ball of radius `radius` with
    /// `det[u^1, u^2, u^3] = t`. Only `d = 3` is supported.
    DeterminantVariety { d: usize, t: f64, radius: f64 },
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<(), FourierError> {
        let bad = |m: String| Err(FourierError::InvalidSpec(m));
        match *self {
            Self::Sphere { d } if d < 2 => bad(format!("sphere needs d >= 2, got {d}")),
            Self::ChainSpheres { d, r1, r2, t } => {
                if d < 2 {
                    return bad(format!("chain needs d >= 2, got {d}"));
                }
                if !(r1 > 0.0 && r2 > 0.0 && t > 0.0) {
                    return bad("radii and distance must be positive".into());
                }
                if t < (r1 - r2).abs() || t > r1 + r2 {
                    return bad(format!("distance {t} violates the triangle inequality"));
                }
                Ok(())
            }
            Self::DeterminantVariety { d, t, radius } => {
                if d != 3 {
                    return bad(format!("determinant variety supported for d = 3 only, got {d}"));
                }
                if !(radius > 0.0) {
                    return bad("cutoff radius must be positive".into());
                }
                // Hadamard: |det| <= radius^3 on the ball.
                if t.abs() >= radius.powi(3) {
                    return bad(format!("|t| = {} is not attainable in the ball", t.abs()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Dimensions of the frequency blocks.
    pub fn block_dims(&self) -> Vec<usize> {
        match *self {
            Self::Sphere { d } => vec![d],
            Self::Triangle2d => vec![2, 2],
            Self::ChainSpheres { d, .. } => vec![d, d],
            Self::DeterminantVariety { d, .. } => vec![d; d],
        }
    }

    /// Total mass, where a closed form is known.
    pub fn total_mass(&self) -> Option<f64> {
        match *self {
            Self::Sphere { d } => Some(sphere_area(d)),
            Self::Triangle2d => Some(4.0 * std::f64::consts::PI),
            Self::ChainSpheres { d, r1, r2, t } => {
                let u = (r1 * r1 + r2 * r2 - t * t) / (2.0 * r1 * r2);
                if u.abs() >= 1.0 && d != 3 {
                    return None;
                }
                let density = sphere_area(d - 1) / sphere_area(d)
                    * (1.0 - u * u).powf((d as f64 - 3.0) / 2.0);
                let sd = sphere_area(d);
                let e = (d - 1) as i32;
                Some(sd * sd * r1.powi(e) * r2.powi(e) * density * t / (r1 * r2))
            }
            Self::DeterminantVariety { .. } => None,
        }
    }

    /// Decay order of the transform along the directions the lab fits.
    pub fn reference_exponent(&self) -> Option<f64> {
        match *self {
            Self::Sphere { d } | Self::ChainSpheres { d, .. } => Some((d as f64 - 1.0) / 2.0),
            Self::Triangle2d => Some(0.5),
            Self::DeterminantVariety { .. } => None,
        }
    }
}
