//! Minimal sparse kernels for the structured-grid operators: CSR storage
//! and a banded Cholesky factorization. Node numbering on the structured
//! mesh keeps the stiffness/mass bandwidth at `cells_per_side + 1`, so a
//! band factorization is a direct solver with no fill outside the band.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Compressed sparse row matrix.
#[derive(Clone, Debug)]
pub struct CsrMatrix<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, mut trip: Vec<(usize, usize, T)>) -> Self {
        trip.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(trip.len());
        let mut values = Vec::with_capacity(trip.len());
        let mut prev: Option<(usize, usize)> = None;
        for (r, c, v) in trip {
            debug_assert!(r < nrows && c < ncols);
            if prev == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                prev = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of one row as (col, value) pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.col_idx[lo..hi].iter().copied().zip(self.values[lo..hi].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.row(r).find(|&(col, _)| col == c).map_or_else(T::zero, |(_, v)| v)
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for r in 0..self.nrows {
            let mut acc = T::zero();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    pub fn matvec_alloc(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// Exact structural + value symmetry check.
    pub fn is_symmetric(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                if self.get(c, r) != v {
                    return false;
                }
            }
        }
        true
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                bw = bw.max(r.abs_diff(self.col_idx[k]));
            }
        }
        bw
    }

    /// Dense copy, for small oracles and tests.
    pub fn to_dense(&self) -> nalgebra::DMatrix<T> {
        let mut d = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                d[(r, c)] = v;
            }
        }
        d
    }

    /// `A + c B` for identically sized matrices.
    pub fn add_scaled(&self, other: &CsrMatrix<T>, c: T) -> CsrMatrix<T> {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut trip = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            for (col, v) in self.row(r) {
                trip.push((r, col, v));
            }
            for (col, v) in other.row(r) {
                trip.push((r, col, c * v));
            }
        }
        CsrMatrix::from_triplets(self.nrows, self.ncols, trip)
    }
}

/// Banded Cholesky factorization `A = L L^T` of a symmetric positive
/// definite matrix. `bands[d][i]` stores `L[i][i-d]`.
#[derive(Clone, Debug)]
pub struct BandCholesky<T> {
    pub dim: usize,
    pub half_bandwidth: usize,
    bands: Vec<Vec<T>>,
}

impl<T: Scalar> BandCholesky<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        if a.nrows != a.ncols {
            return Err(Error::numerical("band factorization needs a square matrix"));
        }
        let n = a.nrows;
        let bw = a.bandwidth();
        let mut bands = vec![vec![T::zero(); n]; bw + 1];
        for r in 0..n {
            for (c, v) in a.row(r) {
                if c <= r {
                    bands[r - c][r] = v;
                }
            }
        }

        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut diag = bands[0][j];
            for k in lo..j {
                let l = bands[j - k][j];
                diag -= l * l;
            }
            if diag <= T::zero() {
                return Err(Error::Solver {
                    what: format!("Cholesky breakdown at pivot {j}: matrix not positive definite"),
                    residual: diag.to_f64c(),
                });
            }
            let dsqrt = diag.sqrt();
            bands[0][j] = dsqrt;
            let hi = (j + bw).min(n - 1);
            for i in j + 1..=hi {
                let mut s = bands[i - j][i];
                let klo = i.saturating_sub(bw).max(lo);
                for k in klo..j {
                    s -= bands[i - k][i] * bands[j - k][j];
                }
                bands[i - j][i] = s / dsqrt;
            }
        }

        Ok(BandCholesky { dim: n, half_bandwidth: bw, bands })
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [T]) {
        let n = self.dim;
        let bw = self.half_bandwidth;
        debug_assert_eq!(x.len(), n);
        // L y = b
        for i in 0..n {
            let mut s = x[i];
            let lo = i.saturating_sub(bw);
            for k in lo..i {
                s -= self.bands[i - k][i] * x[k];
            }
            x[i] = s / self.bands[0][i];
        }
        // L^T x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            let hi = (i + bw).min(n - 1);
            for j in i + 1..=hi {
                s -= self.bands[j - i][j] * x[j];
            }
            x[i] = s / self.bands[0][i];
        }
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Direct solve of an SPD sparse system with a residual guarantee:
/// `||A x - b||_2 <= 1e-10 ||b||_2` or an error reporting the residual.
pub fn solve_spd<T: Scalar>(a: &CsrMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    let chol = BandCholesky::factor(a)?;
    let x = chol.solve(rhs);
    let mut res = a.matvec_alloc(&x);
    for (r, b) in res.iter_mut().zip(rhs) {
        *r -= *b;
    }
    let rnorm = norm2(&res);
    let bnorm = norm2(rhs);
    let tol = T::from_f64c(1e-10);
    if rnorm > tol * bnorm && rnorm > tol {
        return Err(Error::Solver {
            what: "SPD solve residual above tolerance".into(),
            residual: rnorm.to_f64c(),
        });
    }
    Ok(x)
}

pub fn norm2<T: Scalar>(x: &[T]) -> T {
    let s: T = x.iter().map(|&v| v * v).sum();
    s.sqrt()
}

pub fn norm_inf<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn identity(n: usize) -> CsrMatrix<f64> {
        CsrMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect())
    }

    #[test]
    fn triplets_merge_duplicates() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 0, 2.0), (1, 0, 5.0)]);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 0), 5.0);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = identity(7);
        let b: Vec<f64> = (0..7).map(|i| i as f64 - 3.0).collect();
        let x = solve_spd(&a, &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-14);
        }
    }

    #[test]
    fn random_spd_matches_dense_cholesky_oracle() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let n = 5;
        // A = B^T B + n I is SPD.
        let b = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a_dense = b.transpose() * &b + nalgebra::DMatrix::identity(n, n) * n as f64;
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                trip.push((i, j, a_dense[(i, j)]));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, trip);
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();

        let x = solve_spd(&a, &rhs).unwrap();
        let oracle = a_dense
            .clone()
            .cholesky()
            .unwrap()
            .solve(&nalgebra::DVector::from_column_slice(&rhs));
        for i in 0..n {
            assert!((x[i] - oracle[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn indefinite_matrix_reports_breakdown() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, -1.0)]);
        match BandCholesky::factor(&a) {
            Err(Error::Solver { .. }) => {}
            other => panic!("expected breakdown, got {other:?}"),
        }
    }

    #[test]
    fn banded_tridiagonal_solve() {
        // Discrete 1-D Laplacian, solution recovered to machine precision.
        let n = 40;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, 2.0));
            if i + 1 < n {
                trip.push((i, i + 1, -1.0));
                trip.push((i + 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, trip);
        assert_eq!(a.bandwidth(), 1);
        let x_true: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        let b = a.matvec_alloc(&x_true);
        let x = solve_spd(&a, &b).unwrap();
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn add_scaled_combines_entries() {
        let a = identity(3);
        let b = CsrMatrix::from_triplets(3, 3, vec![(0, 1, 2.0), (2, 2, 1.0)]);
        let c = a.add_scaled(&b, 0.5);
        assert_eq!(c.get(0, 0), 1.0);
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(2, 2), 1.5);
    }
}
