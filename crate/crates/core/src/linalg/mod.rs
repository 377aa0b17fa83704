//! Matrix containers, return preprocessing, Pearson estimation and the
//! symmetric eigensolver.

pub mod eigen;
pub mod matrix;
pub mod pearson;
pub mod returns;

pub use eigen::{sym_eigen, EigenDecomposition};
pub use matrix::{dot, Matrix};
pub use pearson::{pearson_estimator, CorrelationEstimate};
pub use returns::{log_returns, standardize, PriceSeries, ReturnMatrix};
