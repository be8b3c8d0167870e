//! Dense linear algebra over real and complex scalars.
//!
//! Deliberately plain: row-major storage, textbook Cholesky and LU, no
//! banded or blocked variants. Frame lengths stay at or below 4096, so dense
//! solves are cheap enough, and the real-vs-complex wall-clock comparison
//! relies on both element types running the exact same kernels.

use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

/// Scalar types the dense kernels are generic over (f64 and Complex64).
pub trait Scalar:
    Copy
    + PartialEq
    + std::fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    /// Squared modulus as a real number.
    fn abs_sq(self) -> f64;
    fn re(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn re(self) -> f64 {
        self
    }
    fn from_re(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    fn re(self) -> f64 {
        self.re
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMat = Mat<Complex64>;
pub type RMat = Mat<f64>;
pub type CVec = Vec<Complex64>;
pub type RVec = Vec<f64>;

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self[(i, i)];
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for j in 0..dst.len() {
                    dst[j] = dst[j] + a * src[j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "matvec {}x{} by vector of {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut s = T::zero();
                for k in 0..row.len() {
                    s = s + row[k] * v[k];
                }
                s
            })
            .collect())
    }

    /// Computes `Mᵀ v` without materializing the transpose.
    pub fn tr_mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.rows != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "transposed matvec {}x{} by vector of {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let vi = v[i];
            for j in 0..out.len() {
                out[j] = out[j] + row[j] * vi;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a - *b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * s;
        }
        out
    }

    /// `M + s·I` for square matrices.
    pub fn add_scaled_identity(&self, s: T) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("diagonal shift of non-square".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)] + s;
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }

    /// Max per-entry defect from `M = M†`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).abs());
            }
        }
        d
    }

    /// Max absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0f64; self.cols];
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                sums[j] += x.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: Mat<T>,
}

/// Factors `M = L L†`. Fails with `NotPositiveDefinite` when a pivot is not
/// strictly positive. Only the lower triangle of `M` is read.
pub fn cholesky<T: Scalar>(m: &Mat<T>) -> Result<Cholesky<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("cholesky of non-square".into()));
    }
    let n = m.rows();
    let mut l = Mat::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s = {
                let ri = &l.row(i)[..j];
                let rj = &l.row(j)[..j];
                let mut acc = T::zero();
                for k in 0..j {
                    acc = acc + ri[k] * rj[k].conj();
                }
                m[(i, j)] - acc
            };
            if i == j {
                let d = s.re();
                if !(d > 0.0) || !d.is_finite() {
                    return Err(Error::NotPositiveDefinite { pivot: i });
                }
                l[(i, j)] = T::from_re(d.sqrt());
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(Cholesky { l })
}

impl<T: Scalar> Cholesky<T> {
    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solves `M x = b` from the stored factor.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "solve with rhs of {} against {}x{}",
                b.len(),
                n,
                n
            )));
        }
        // L y = b
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.l.row(i)[..i];
            let mut s = y[i];
            for k in 0..i {
                s = s - row[k] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        // L† x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s = s - self.l[(k, i)].conj() * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        Ok(y)
    }

    /// Full inverse via forward/backward substitution against the identity.
    pub fn invert(&self) -> Mat<T> {
        let n = self.dim();
        let mut x = Mat::<T>::identity(n);
        // L Y = I, processed row-wise so the axpy runs over contiguous rows.
        for i in 0..n {
            let (head, tail) = x.data.split_at_mut(i * n);
            let xi = &mut tail[..n];
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik == T::zero() {
                    continue;
                }
                let xk = &head[k * n..k * n + n];
                for c in 0..n {
                    xi[c] = xi[c] - lik * xk[c];
                }
            }
            let d = T::one() / self.l[(i, i)];
            for v in xi.iter_mut() {
                *v = *v * d;
            }
        }
        // L† X = Y
        for i in (0..n).rev() {
            let (head, tail) = x.data.split_at_mut((i + 1) * n);
            let xi = &mut head[i * n..];
            for k in i + 1..n {
                let c = self.l[(k, i)].conj();
                if c == T::zero() {
                    continue;
                }
                let xk = &tail[(k - i - 1) * n..(k - i - 1) * n + n];
                for cc in 0..n {
                    xi[cc] = xi[cc] - c * xk[cc];
                }
            }
            let d = T::one() / self.l[(i, i)];
            for v in xi.iter_mut() {
                *v = *v * d;
            }
        }
        x
    }
}

fn check_hermitian<T: Scalar>(m: &Mat<T>) -> Result<()> {
    let defect = m.hermitian_defect();
    if defect > tol::HERMITIAN_DEFECT {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Solves `M x = b` for Hermitian positive-definite `M`.
pub fn solve_hpd<T: Scalar>(m: &Mat<T>, b: &[T]) -> Result<Vec<T>> {
    check_hermitian(m)?;
    cholesky(m)?.solve(b)
}

/// Inverts a Hermitian positive-definite matrix.
pub fn invert_hpd<T: Scalar>(m: &Mat<T>) -> Result<Mat<T>> {
    check_hermitian(m)?;
    Ok(cholesky(m)?.invert())
}

/// LU factorization with partial pivoting, for general square matrices.
/// Used only where a non-Hermitian inverse is genuinely required.
pub fn lu_invert<T: Scalar>(m: &Mat<T>) -> Result<Mat<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("lu of non-square".into()));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[(k, k)].abs();
        for i in k + 1..n {
            let mag = lu[(i, k)].abs();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if !(best_mag > 0.0) || !best_mag.is_finite() {
            return Err(Error::IllConditioned { cond: f64::INFINITY });
        }
        if best != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            piv.swap(k, best);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let s = lu[(k, j)];
                lu[(i, j)] = lu[(i, j)] - f * s;
            }
        }
    }
    // Solve for each unit column of the permuted identity.
    let mut inv = Mat::<T>::zeros(n, n);
    let mut col = vec![T::zero(); n];
    for e in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = if piv[i] == e { T::one() } else { T::zero() };
        }
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s = s - lu[(i, k)] * col[k];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s = s - lu[(i, k)] * col[k];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, e)] = col[i];
        }
    }
    Ok(inv)
}

/// 1-norm condition estimate from a matrix and its computed inverse.
pub fn cond_estimate<T: Scalar>(m: &Mat<T>, m_inv: &Mat<T>) -> f64 {
    m.one_norm() * m_inv.one_norm()
}

pub fn vec_max_abs<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn vec_norm2<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs_sq()).sum::<f64>().sqrt()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn vec_conj<T: Scalar>(v: &[T]) -> Vec<T> {
    v.iter().map(|x| x.conj()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_cvec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn random_cmat(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    /// Toy channel autocorrelation for h = [1, 0.5]: gamma(0)=1.25, gamma(±1)=0.5.
    fn gamma_two_tap(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let d = i as i64 - j as i64;
                m[(i, j)] = match d {
                    0 => c(1.25, 0.0),
                    1 | -1 => c(0.5, 0.0),
                    _ => c(0.0, 0.0),
                };
            }
        }
        m
    }

    /// Independent oracle: naive Gaussian elimination with partial pivoting.
    fn gauss_solve(a: &CMat, b: &[Complex64]) -> CVec {
        let n = a.rows();
        let mut m = a.clone();
        let mut rhs = b.to_vec();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if m[(i, k)].norm() > m[(p, k)].norm() {
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = m[(k, j)];
                    m[(k, j)] = m[(p, j)];
                    m[(p, j)] = t;
                }
                rhs.swap(k, p);
            }
            for i in k + 1..n {
                let f = m[(i, k)] / m[(k, k)];
                for j in k..n {
                    let s = m[(k, j)];
                    m[(i, j)] -= f * s;
                }
                let bk = rhs[k];
                rhs[i] -= f * bk;
            }
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for j in i + 1..n {
                s -= m[(i, j)] * rhs[j];
            }
            rhs[i] = s / m[(i, i)];
        }
        rhs
    }

    /// Independent oracle: 3x3 inverse by the adjugate formula.
    fn adjugate_inverse_3x3(m: &CMat) -> CMat {
        let a = |i: usize, j: usize| m[(i, j)];
        let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        let cof = |i: usize, j: usize| {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        let mut inv = CMat::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                // adjugate transposes the cofactor matrix
                inv[(i, j)] = cof(j, i) / det;
            }
        }
        inv
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = CMat::identity(4);
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let s = solve_hpd(&m, &b).unwrap();
        assert_eq!(s, b);
    }

    #[test]
    fn solve_scalar_matrix() {
        let m = CMat::identity(2).scale(c(2.0, 0.0));
        let s = solve_hpd(&m, &[c(4.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!(vec_max_abs(&vec_sub(&s, &[c(2.0, 0.0), c(0.0, 1.0)])) < 1e-15);
    }

    #[test]
    fn solve_matches_gauss_elimination_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 8;
        let m = gamma_two_tap(n).add_scaled_identity(c(0.1, 0.0)).unwrap();
        for _ in 0..5 {
            let b = random_cvec(&mut rng, n);
            let ours = solve_hpd(&m, &b).unwrap();
            let oracle = gauss_solve(&m, &b);
            assert!(vec_max_abs(&vec_sub(&ours, &oracle)) < tol::HPD_RESIDUAL);
            // residual contract
            let r = vec_sub(&m.mul_vec(&ours).unwrap(), &b);
            assert!(vec_norm2(&r) / vec_norm2(&b) <= tol::HPD_RESIDUAL);
        }
    }

    #[test]
    fn invert_identity() {
        let inv = invert_hpd(&CMat::identity(5)).unwrap();
        assert!(inv.max_abs_diff(&CMat::identity(5)) < 1e-15);
    }

    #[test]
    fn trace_of_diagonal() {
        let m = RMat::from_rows(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        assert_eq!(m.trace(), 6.0);
    }

    #[test]
    fn invert_matches_adjugate_oracle() {
        let m = gamma_two_tap(3).add_scaled_identity(c(1.0, 0.0)).unwrap();
        let ours = invert_hpd(&m).unwrap();
        let oracle = adjugate_inverse_3x3(&m);
        assert!(ours.max_abs_diff(&oracle) <= 1e-12);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        // random HPD: A A† + I
        let a = random_cmat(&mut rng, n);
        let m = a
            .matmul(&a.conj_transpose())
            .unwrap()
            .add_scaled_identity(c(1.0, 0.0))
            .unwrap();
        let inv = invert_hpd(&m).unwrap();
        let prod = inv.matmul(&m).unwrap();
        assert!(prod.max_abs_diff(&CMat::identity(n)) < tol::INVERSE_RESIDUAL);
    }

    #[test]
    fn invert_agrees_with_columnwise_solves() {
        let m = gamma_two_tap(6).add_scaled_identity(c(0.3, 0.0)).unwrap();
        let inv = invert_hpd(&m).unwrap();
        let n = m.rows();
        for j in 0..n {
            let mut e = vec![c(0.0, 0.0); n];
            e[j] = c(1.0, 0.0);
            let col = solve_hpd(&m, &e).unwrap();
            for i in 0..n {
                assert!((inv[(i, j)] - col[i]).norm() < tol::HPD_RESIDUAL);
            }
        }
    }

    #[test]
    fn conj_transpose_involution_and_product_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_cmat(&mut rng, 8);
        let n = random_cmat(&mut rng, 8);
        assert!(m.conj_transpose().conj_transpose().max_abs_diff(&m) == 0.0);
        let lhs = m.matmul(&n).unwrap().conj_transpose();
        let rhs = n.conj_transpose().matmul(&m.conj_transpose()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = RMat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match cholesky(&m) {
            Err(Error::NotPositiveDefinite { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn solve_rejects_non_hermitian() {
        let m = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(0.5, 0.1)],
            vec![c(0.5, 0.1), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            solve_hpd(&m, &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn solve_rejects_bad_dimensions() {
        let m = CMat::identity(3);
        assert!(matches!(
            solve_hpd(&m, &[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn lu_inverts_general_complex_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = random_cmat(&mut rng, 9)
            .add_scaled_identity(c(3.0, 0.0))
            .unwrap();
        let inv = lu_invert(&m).unwrap();
        let prod = inv.matmul(&m).unwrap();
        assert!(prod.max_abs_diff(&CMat::identity(9)) < 1e-10);
        assert!(cond_estimate(&m, &inv) < 1e4);
    }
}
