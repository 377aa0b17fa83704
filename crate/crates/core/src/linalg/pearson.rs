use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::{sym_eigen, EigenDecomposition};
use super::matrix::{dot, Matrix};
use super::returns::ReturnMatrix;
use crate::error::{Error, Result};

/// A symmetric correlation matrix together with the rectangularity ratio
/// `q = N / T` of the sample it was estimated from (`0` for exact model
/// matrices).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    matrix: Matrix,
    rect_ratio: f64,
}

impl CorrelationEstimate {
    pub fn new(matrix: Matrix, rect_ratio: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        Ok(Self { matrix, rect_ratio })
    }

    /// An exact (noise-free) model matrix.
    pub fn exact(matrix: Matrix) -> Result<Self> {
        Self::new(matrix, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rect_ratio(&self) -> f64 {
        self.rect_ratio
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn eigen(&self, want_vectors: bool) -> Result<EigenDecomposition> {
        sym_eigen(&self.matrix, want_vectors)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigen(false)?.eigenvalues)
    }
}

const ROW_BLOCK: usize = 16;

/// `c = R R^T / T`, entry by entry.
///
/// Rows are processed in fixed blocks; every entry is one [`dot`] call, so
/// the result does not depend on the number of worker threads.
pub fn pearson_estimator(r: &ReturnMatrix) -> Result<CorrelationEstimate> {
    let (n, t) = (r.n_assets(), r.n_obs());
    if t < 2 {
        return Err(Error::TooShort {
            what: "return series",
            len: t,
            min: 2,
        });
    }
    let scale = 1.0 / t as f64;
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(ROW_BLOCK * n)
        .enumerate()
        .for_each(|(block, out)| {
            let start = block * ROW_BLOCK;
            for (local, out_row) in out.chunks_mut(n).enumerate() {
                let i = start + local;
                let ri = r.row(i);
                for (j, o) in out_row.iter_mut().enumerate().take(i + 1) {
                    *o = dot(ri, r.row(j)) * scale;
                }
            }
        });
    for i in 0..n {
        for j in (i + 1)..n {
            data[i * n + j] = data[j * n + i];
        }
    }
    CorrelationEstimate::new(
        Matrix::from_row_major(n, n, data)?,
        n as f64 / t as f64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_give_all_ones() {
        let r = ReturnMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let c = pearson_estimator(&r).unwrap();
        assert_eq!(c.matrix(), &Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap());
        assert_eq!(c.rect_ratio(), 1.0);
    }

    #[test]
    fn orthogonal_rows_give_identity() {
        let r = ReturnMatrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap();
        let c = pearson_estimator(&r).unwrap();
        assert_eq!(c.matrix(), &Matrix::identity(2));
    }

    #[test]
    fn single_observation_is_rejected() {
        let r = ReturnMatrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(matches!(pearson_estimator(&r), Err(Error::TooShort { .. })));
    }
}
