//! Price series, log-returns and per-asset standardization.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Closing prices of one asset at `T + 1` equally spaced instants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    ticker: String,
    prices: Vec<f64>,
    timestamps: Option<Vec<String>>,
}

impl PriceSeries {
    pub fn new(ticker: impl Into<String>, prices: Vec<f64>) -> Result<Self> {
        validate_prices(&prices)?;
        Ok(Self {
            ticker: ticker.into(),
            prices,
            timestamps: None,
        })
    }

    pub fn with_timestamps(mut self, timestamps: Vec<String>) -> Result<Self> {
        if timestamps.len() != self.prices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.prices.len(),
                found: timestamps.len(),
            });
        }
        self.timestamps = Some(timestamps);
        Ok(self)
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn timestamps(&self) -> Option<&[String]> {
        self.timestamps.as_deref()
    }

    pub fn log_returns(&self) -> Vec<f64> {
        // prices were validated on construction
        self.prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect()
    }
}

fn validate_prices(prices: &[f64]) -> Result<()> {
    if prices.len() < 2 {
        return Err(Error::TooShort {
            what: "price series",
            len: prices.len(),
            min: 2,
        });
    }
    if let Some((index, &value)) = prices.iter().enumerate().find(|(_, p)| !(**p > 0.0)) {
        return Err(Error::NonPositivePrice { index, value });
    }
    Ok(())
}

/// `r_j = ln(S_{j+1} / S_j)`; `T + 1` prices give `T` returns.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    validate_prices(prices)?;
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// `N x T` panel of returns, row `i` holding asset `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnMatrix {
    data: Matrix,
    standardized: bool,
}

impl ReturnMatrix {
    pub fn new(data: Matrix) -> Result<Self> {
        if data.rows() == 0 {
            return Err(Error::EmptyInput("return matrix has no assets"));
        }
        if data.cols() == 0 {
            return Err(Error::EmptyInput("return matrix has no observations"));
        }
        Ok(Self {
            data,
            standardized: false,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_price_series(series: &[PriceSeries]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = series.iter().map(PriceSeries::log_returns).collect();
        Self::from_rows(&rows)
    }

    pub fn n_assets(&self) -> usize {
        self.data.rows()
    }

    pub fn n_obs(&self) -> usize {
        self.data.cols()
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.data.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        self.data.row_mut(i)
    }

    /// Rows `idx` in the given order. The standardized flag carries over.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let n = self.n_assets();
        let mut data = Vec::with_capacity(idx.len() * self.n_obs());
        for &i in idx {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(Self {
            data: Matrix::from_row_major(idx.len(), self.n_obs(), data)?,
            standardized: self.standardized,
        })
    }

    /// Subtracts each row's sample mean and divides by its sample standard
    /// deviation (denominator `T - 1`).
    pub fn standardize(&self) -> Result<ReturnMatrix> {
        let t = self.n_obs();
        if t < 2 {
            return Err(Error::TooShort {
                what: "return series",
                len: t,
                min: 2,
            });
        }
        let mut out = self.data.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            let (mean, var) = mean_var(row);
            if !(var > 0.0) || !var.is_finite() {
                return Err(Error::DegenerateSeries { row: i });
            }
            let sd = var.sqrt();
            for x in row.iter_mut() {
                *x = (*x - mean) / sd;
            }
        }
        Ok(ReturnMatrix {
            data: out,
            standardized: true,
        })
    }
}

/// Sample mean and variance with denominator `n - 1`, two-pass.
pub(crate) fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let mut ss = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let d = x - mean;
        ss += d * d;
        comp += d;
    }
    (mean, (ss - comp * comp / n) / (n - 1.0))
}

pub fn standardize(r: &ReturnMatrix) -> Result<ReturnMatrix> {
    r.standardize()
}
