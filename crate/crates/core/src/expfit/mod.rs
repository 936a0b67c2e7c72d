//! Dimension thresholds, predicted count exponents and n-scans that compare
//! measured count growth against them.

mod fit;
mod scan;
mod threshold;

pub use fit::{fit_slope, SlopeFit};
pub use scan::{
    run_scan, write_scan, ScanFamily, ScanReport, ScanRow, ScanSpec, Verdict,
};
pub use threshold::{
    count_exponent, count_exponent_exact, threshold, threshold_entry, threshold_exact,
    ThresholdEntry,
};

use thiserror::Error;

use crate::configcount::CountError;
use crate::energy::EnergyError;
use crate::pointgen::PointGenError;
use crate::regress::RegressError;

#[derive(Debug, Error)]
pub enum ExpFitError {
    #[error("incompatible parameters: {0}")]
    Incompatible(String),
    #[error("exponent s must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("invalid n schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Regress(#[from] RegressError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    PointGen(#[from] PointGenError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
