//! Dense complex matrices and their singular values.
//!
//! Singular values come from Householder bidiagonalization followed by
//! Sturm-sequence bisection on the `2n × 2n` Golub–Kahan tridiagonal
//! `[[0, B], [B^H, 0]]`, whose eigenvalues are `±σ_i`.

use std::ops::{Index, IndexMut};

use crate::scalar::{cone, czero, Real, C};

/// Largest dimension accepted for dense truncations.
pub const MAX_DIM: usize = 2048;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * *b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(x).fold(czero(), |acc, (a, b)| acc + *a * *b)).collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(self)
    }

    /// Largest singular value (spectral norm).
    pub fn spectral_norm(&self) -> T {
        self.singular_values().first().copied().unwrap_or_else(T::zero)
    }

    pub fn min_singular_value(&self) -> T {
        self.singular_values().last().copied().unwrap_or_else(T::zero)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Householder vector `v` (with `v[0] = 1`) and `β` such that
/// `(I − β v v^H) x = α e_1`. Returns `None` when `x` is already zero.
fn householder<T: Real>(x: &[C<T>]) -> Option<(Vec<C<T>>, T)> {
    let norm = x.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    if norm == T::zero() {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.norm() == T::zero() { cone() } else { x0 / x0.norm() };
    let alpha = -phase * norm;
    let v0 = x0 - alpha;
    if v0.norm() == T::zero() {
        return None;
    }
    let mut v: Vec<C<T>> = x.iter().map(|&c| c / v0).collect();
    v[0] = cone();
    let vnorm2: T = v.iter().map(|c| c.norm_sqr()).sum();
    Some((v, T::lit(2.0) / vnorm2))
}

/// Bidiagonal `(diag, superdiag)` moduli of a matrix with `rows ≥ cols`.
fn bidiagonalize<T: Real>(mut a: CMatrix<T>) -> (Vec<T>, Vec<T>) {
    let (m, n) = (a.rows, a.cols);
    debug_assert!(m >= n);
    for k in 0..n {
        let col: Vec<C<T>> = (k..m).map(|i| a[(i, k)]).collect();
        if let Some((v, beta)) = householder(&col) {
            // A[k.., j] -= β v (v^H A[k.., j])
            for j in k..n {
                let s = (k..m).fold(czero(), |acc, i| acc + v[i - k].conj() * a[(i, j)]) * beta;
                for i in k..m {
                    let vi = v[i - k];
                    a[(i, j)] -= vi * s;
                }
            }
        }
        if k + 1 < n {
            let row: Vec<C<T>> = ((k + 1)..n).map(|j| a[(k, j)].conj()).collect();
            if let Some((v, beta)) = householder(&row) {
                // A[i, k+1..] -= β (A[i, k+1..] · v) v^H
                for i in k..m {
                    let s = ((k + 1)..n).fold(czero(), |acc, j| acc + a[(i, j)] * v[j - k - 1]) * beta;
                    for j in (k + 1)..n {
                        let vj = v[j - k - 1];
                        a[(i, j)] -= s * vj.conj();
                    }
                }
            }
        }
    }
    // a bidiagonal matrix is unitarily diagonally similar to its entrywise moduli
    let d = (0..n).map(|i| a[(i, i)].norm()).collect();
    let e = (0..n.saturating_sub(1)).map(|i| a[(i, i + 1)].norm()).collect();
    (d, e)
}

/// Number of eigenvalues `< x` of the symmetric tridiagonal with zero
/// diagonal and off-diagonal `off`.
fn sturm_count<T: Real>(off: &[T], x: T, pivmin: T) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < T::zero() {
        count += 1;
    }
    for &b in off {
        q = -x - b * b / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    if a.rows == 0 || a.cols == 0 {
        return Vec::new();
    }
    let a = if a.rows >= a.cols { a.clone() } else { a.conj_transpose() };
    let n = a.cols;
    let (d, e) = bidiagonalize(a);
    let mut off = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        off.push(d[i]);
        if i + 1 < n {
            off.push(e[i]);
        }
    }
    let bound = (0..off.len())
        .map(|i| off[i] + if i + 1 < off.len() { off[i + 1] } else { T::zero() })
        .fold(T::zero(), T::max)
        .max(d.iter().copied().fold(T::zero(), T::max));
    if bound == T::zero() {
        return vec![T::zero(); n];
    }
    let eps = T::epsilon();
    let pivmin = T::min_positive_value().sqrt() * bound.max(T::one());
    let tol = eps * bound * T::lit(2.0);
    // the 2n eigenvalues are ±σ_i; σ sorted ascending is the (n+j)-th eigenvalue
    let mut out: Vec<T> = (0..n)
        .map(|j| {
            let target = n + j + 1;
            let (mut lo, mut hi) = (T::zero(), bound * (T::one() + T::lit(4.0) * eps));
            for _ in 0..200 {
                if hi - lo <= tol {
                    break;
                }
                let mid = (lo + hi) * T::lit(0.5);
                if sturm_count(&off, mid, pivmin) >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (lo + hi) * T::lit(0.5)
        })
        .collect();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn diagonal_and_empty() {
        let m = CMatrix::from_rows(vec![vec![c(3.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -4.0)]]);
        let s = m.singular_values();
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
        assert!(CMatrix::<f64>::zeros(0, 3).singular_values().is_empty());
        assert_eq!(CMatrix::<f64>::zeros(2, 2).singular_values(), vec![0.0, 0.0]);
    }

    #[test]
    fn rank_one_wide() {
        // [1, i, 1] has the single singular value √3
        let m = CMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]]);
        let s = m.singular_values();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn symmetric_tridiagonal_toeplitz() {
        // eigenvalues of tridiag(1, 0, 1) are 2cos(jπ/(n+1))
        let n = 40;
        let m = CMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let s = m.singular_values();
        let mut expected: Vec<f64> =
            (1..=n).map(|j| (2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).abs()).collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in s.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn single_precision() {
        let m = CMatrix::<f32>::from_rows(vec![
            vec![C::new(2.0, 0.0), C::new(0.0, 0.0)],
            vec![C::new(0.0, 0.0), C::new(0.5, 0.0)],
        ]);
        let s = m.singular_values();
        assert!((s[0] - 2.0).abs() < 1e-5 && (s[1] - 0.5).abs() < 1e-5);
    }
}
