//! Spectra of noisy correlation matrices.
//!
//! The crate simulates cluster factor models, computes exact spectra of
//! block correlation matrices, maps a true spectrum to the eigenvalue
//! density of its sample estimator in the large-`N`, large-`T` limit, fits
//! Marchenko-Pastur laws, and runs the cluster filtering and bootstrap
//! analysis used on empirical return panels.

pub mod cluster;
pub mod density;
pub mod error;
pub mod factor;
pub mod linalg;
pub mod rmt;
pub mod rng;
pub mod stats;

pub use density::{histogram, split_bulks, BulkSplit, DensityCurve};
pub use error::{Error, Result};
