//! Desk-scale workbench for point-configuration problems in the unit cube.
//!
//! The crate is organized around the experiment pipeline:
//!
//! - [`pointgen`] builds structured point sets (lattices, Cantor products,
//!   homogeneous and random sets) and reads/writes them.
//! - [`energy`] evaluates the normalized discrete Riesz energy used to decide
//!   whether a set is s-adaptable.
//! - [`configcount`] counts δ-approximate configurations: simplices, volumes,
//!   areas, angles and generic Φ-configurations, plus congruence classes and
//!   box-counting dimension.
//! - [`expfit`] holds the dimensional thresholds and predicted count
//!   exponents and runs n-scans against them.
//! - [`fourierlab`] evaluates Fourier transforms of configuration measures,
//!   fits their decay, and checks the curvature facts behind that decay.

pub mod configcount;
pub mod energy;
pub mod expfit;
pub mod fourierlab;
pub mod pointgen;
pub mod regress;
mod reduce;

pub use pointgen::{PointMeta, PointSet};
