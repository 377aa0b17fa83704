//! Dense symmetric eigensolver.
//!
//! Small matrices (`n <= 64`) use cyclic Jacobi rotations. Larger ones are
//! reduced to tridiagonal form with Householder reflections and then
//! diagonalized with implicit-shift QL iterations. Both paths return
//! eigenvalues in ascending order.
//!
//! The Householder/QL path keeps the accumulated transform transposed
//! (row `j` holds what would be column `j`), which keeps every inner loop
//! on contiguous memory.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};

const JACOBI_MAX_DIM: usize = 64;
const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITER: usize = 64;
const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Option<Matrix>,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, j: usize) -> Option<Vec<f64>> {
        let v = self.eigenvectors.as_ref()?;
        Some((0..v.rows()).map(|i| v[(i, j)]).collect())
    }

    pub fn largest(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }
}

/// Eigen-decomposition of a symmetric matrix.
pub fn sym_eigen(a: &Matrix, want_vectors: bool) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let (i, j, diff) = a.max_asymmetry();
    if !(diff <= SYMMETRY_TOL * a.max_abs().max(1.0)) {
        return Err(Error::NotSymmetric { i, j, diff });
    }
    if let Some(p) = a.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "matrix entry",
            value: a.as_slice()[p],
            reason: "entries must be finite",
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: want_vectors.then(|| Matrix::zeros(0, 0)),
        });
    }
    let (values, rows) = if n <= JACOBI_MAX_DIM {
        jacobi(a, want_vectors)?
    } else {
        householder_ql(a, want_vectors)?
    };
    Ok(sorted(values, rows, n))
}

/// Sorts ascending (stable) and converts the row-stored vectors into columns.
fn sorted(values: Vec<f64>, rows: Option<Vec<f64>>, n: usize) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = rows.map(|w| Matrix::from_fn(n, n, |i, j| w[order[j] * n + i]));
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Cyclic Jacobi. Returns eigenvalues and, optionally, eigenvectors stored as
/// rows of a flat `n * n` buffer.
fn jacobi(a: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = a.rows();
    let mut m = a.as_slice().to_vec();
    // symmetrize exactly; the input is symmetric up to SYMMETRY_TOL
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let mut vecs = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let frob2: f64 = m.iter().map(|x| x * x).sum();
    let target = (f64::EPSILON * f64::EPSILON) * frob2;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off <= target || off == 0.0 {
            let values = (0..n).map(|i| m[i * n + i]).collect();
            return Ok((values, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // negligible relative to both diagonal entries
                if apq.abs() * 1e18 < app.abs().min(aqq.abs()) {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    m[k * n + p] = new_kp;
                    m[p * n + k] = new_kp;
                    m[k * n + q] = new_kq;
                    m[q * n + k] = new_kq;
                }
                if let Some(v) = vecs.as_mut() {
                    // rows p and q of v hold eigenvector candidates
                    for k in 0..n {
                        let vp = v[p * n + k];
                        let vq = v[q * n + k];
                        v[p * n + k] = c * vp - s * vq;
                        v[q * n + k] = s * vp + c * vq;
                    }
                }
            }
        }
    }
    Err(Error::EigenNoConvergence {
        iterations: JACOBI_MAX_SWEEPS,
    })
}

/// Householder tridiagonalization followed by implicit QL.
fn householder_ql(a: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = a.rows();
    // w[j * n + k] plays the role of V[k][j]; for symmetric input w = a
    let mut w = a.as_slice().to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (w[i * n + j] + w[j * n + i]);
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut w, &mut d, &mut e, n, want_vectors);
    ql_implicit(&mut d, &mut e, want_vectors.then_some(&mut w[..]), n)?;
    Ok((d, want_vectors.then_some(w)))
}

fn tridiagonalize(w: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, accumulate: bool) {
    for j in 0..n {
        d[j] = w[j * n + n - 1];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[j * n + i - 1];
                w[j * n + i] = 0.0;
                w[i * n + j] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                w[i * n + j] = f;
                let col = &w[j * n..j * n + i];
                g = e[j] + col[j] * f;
                for k in (j + 1)..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let (fj, gj) = (d[j], e[j]);
                let col = &mut w[j * n..j * n + i];
                for k in j..i {
                    col[k] -= fj * e[k] + gj * d[k];
                }
                d[j] = w[j * n + i - 1];
                w[j * n + i] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for j in 0..n {
            d[j] = w[j * n + j];
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n - 1 {
        w[i * n + n - 1] = w[i * n + i];
        w[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            let (head, tail) = w.split_at_mut((i + 1) * n);
            let u = &tail[..=i];
            for k in 0..=i {
                d[k] = u[k] / h;
            }
            for j in 0..=i {
                let col = &mut head[j * n..j * n + i + 1];
                let g: f64 = u.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        w[(i + 1) * n..(i + 1) * n + i + 1].fill(0.0);
    }
    for j in 0..n {
        d[j] = w[j * n + n - 1];
        w[j * n + n - 1] = 0.0;
    }
    w[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], mut w: Option<&mut [f64]>, n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::EigenNoConvergence { iterations: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(w) = w.as_deref_mut() {
                        let (lo, hi) = w.split_at_mut((i + 1) * n);
                        let vi = &mut lo[i * n..];
                        let vi1 = &mut hi[..n];
                        for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual_ok(a: &Matrix, dec: &EigenDecomposition) {
        let v = dec.eigenvectors.as_ref().unwrap();
        let n = a.rows();
        for (j, &lam) in dec.eigenvalues.iter().enumerate() {
            let x = dec.eigenvector(j).unwrap();
            let ax = a.mul_vec(&x);
            let res = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - lam * q).abs())
                .fold(0.0, f64::max);
            assert!(res < 1e-8 * lam.abs().max(1.0), "residual {res} for eigenvalue {lam}");
        }
        let vtv = v.transpose().matmul(v).unwrap();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[(i, j)] - target).abs() < 1e-8);
            }
        }
    }

    fn test_matrix(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            ((a + 1.0) * 0.37 + (b * 1.3).sin()).cos() + if i == j { 2.0 } else { 0.0 }
        })
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let dec = sym_eigen(&Matrix::identity(5), true).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0; 5]);
    }

    #[test]
    fn all_ones_matrix() {
        for m in [3, 10, 70] {
            let e = Matrix::from_fn(m, m, |_, _| 1.0);
            let dec = sym_eigen(&e, false).unwrap();
            for &x in &dec.eigenvalues[..m - 1] {
                assert!(x.abs() < 1e-10);
            }
            assert!((dec.eigenvalues[m - 1] - m as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn single_cluster_block() {
        let c = Matrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.5 });
        let dec = sym_eigen(&c, true).unwrap();
        let want = [0.5, 0.5, 0.5, 2.5];
        for (g, w) in dec.eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        residual_ok(&c, &dec);
    }

    #[test]
    fn both_paths_agree_and_satisfy_residuals() {
        for n in [7, 64, 65, 120] {
            let a = test_matrix(n);
            let dec = sym_eigen(&a, true).unwrap();
            residual_ok(&a, &dec);
            let vals_only = sym_eigen(&a, false).unwrap();
            for (x, y) in dec.eigenvalues.iter().zip(&vals_only.eigenvalues) {
                assert!((x - y).abs() < 1e-10);
            }
            assert!((dec.eigenvalues.iter().sum::<f64>() - a.trace()).abs() < 1e-8 * n as f64);
        }
        let a = test_matrix(90);
        let j = jacobi(&a, false).unwrap().0;
        let mut j = j;
        j.sort_by(f64::total_cmp);
        let q = sym_eigen(&a, false).unwrap().eigenvalues;
        for (x, y) in j.iter().zip(&q) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let mut a = Matrix::zeros(80, 80);
        for i in 0..80 {
            a[(i, i)] = (79 - i) as f64;
        }
        let dec = sym_eigen(&a, true).unwrap();
        assert_eq!(dec.eigenvalues, (0..80).map(f64::from).collect::<Vec<_>>());
        residual_ok(&a, &dec);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut a = Matrix::identity(3);
        a[(0, 2)] = 1e-6;
        assert!(matches!(sym_eigen(&a, false), Err(Error::NotSymmetric { .. })));
        a[(0, 2)] = 1e-11;
        assert!(sym_eigen(&a, false).is_ok());
    }
}
