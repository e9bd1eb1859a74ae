//! Dense matrices over a [`Scalar`] field.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Whether `x` should be treated as zero during elimination.
fn negligible<F: Scalar>(x: &F, scale: f64) -> bool {
    match F::MODE {
        Mode::Exact => x.is_zero(),
        Mode::Numeric => x.magnitude() <= 1e-11 * scale.max(1.0),
    }
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diag(entries: Vec<F>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Column vector.
    pub fn column(v: Vec<F>) -> Self {
        Mat { rows: v.len(), cols: 1, data: v }
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

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|x| if x.is_zero() { F::zero() } else { x.clone() * c.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest entry magnitude of `self - other`; exact mode reports 0 or 1.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| match (a.is_zero(), b.is_zero()) {
                (true, _) => b.clone(),
                (_, true) => a.clone(),
                _ => a.clone() + b.clone(),
            })
            .collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map(|x| -x.clone()))
    }

    pub fn add_assign_scaled(&mut self, other: &Self, c: &F) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.clone() + b.clone() * c.clone();
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], F::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(F::zero(), |acc, k| {
                    let a = &self[(i, k)];
                    if a.is_zero() || v[k].is_zero() {
                        acc
                    } else {
                        acc + a.clone() * v[k].clone()
                    }
                })
            })
            .collect()
    }

    /// Kronecker product; the index of `self` is major.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * r2 + k, j * c2 + l)] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(blocks: &[&Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Mat { rows, cols, data }
    }

    fn scale_hint(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.scale_hint();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // partial pivoting by magnitude; exact mode takes the first nonzero
            let mut best: Option<usize> = None;
            let mut best_mag = 0.0;
            for i in r..m.rows {
                if negligible(&m[(i, c)], scale) {
                    continue;
                }
                let mag = m[(i, c)].magnitude();
                if best.is_none() || (F::MODE == Mode::Numeric && mag > best_mag) {
                    best = Some(i);
                    best_mag = mag;
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].clone() * inv.clone();
                }
            }
            m[(r, c)] = F::one();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in 0..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                }
                m[(i, c)] = F::zero();
            }
            if F::MODE == Mode::Numeric {
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        if negligible(&m[(i, j)], scale) {
                            m[(i, j)] = F::zero();
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, in reduced echelon form with a leading 1 at
    /// the first nonzero coordinate of each vector.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        let raw: Vec<Vec<F>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, fc)].clone();
                }
                v
            })
            .collect();
        let (basis, _) = Mat::from_rows(raw).rref();
        (0..free.len()).map(|i| basis.row(i)).collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Mat::hcat(&[self, &Mat::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Internal("singular matrix".into()));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }

    /// Solves `self * X = rhs`; the system may be overdetermined but must be
    /// consistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("solve: row counts differ".into()));
        }
        let aug = Mat::hcat(&[self, rhs]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Internal("inconsistent linear system".into()));
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    /// Frobenius pairing `sum_ij A_ij B_ij`.
    pub fn frobenius(&self, other: &Self) -> F {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(F::zero(), |acc, (a, b)| {
            if a.is_zero() || b.is_zero() {
                acc
            } else {
                acc + a.clone() * b.clone()
            }
        })
    }
}

impl Mat<crate::scalar::RatFunc> {
    /// Entrywise [`Scalar::from_exact`].
    pub fn lift<F: Scalar>(&self, ctx: &F::Ctx) -> Result<Mat<F>> {
        let data = self.data.iter().map(|x| F::from_exact(ctx, x)).collect::<Result<Vec<F>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }
}

impl Mat<crate::scalar::Num> {
    /// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
    /// as `(A + A^*)/2` first.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.rows;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| (self[(i, j)].0 + self[(j, i)].0.conj()) * 0.5);
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Num, RatFunc};

    fn r(n: i64) -> RatFunc {
        RatFunc::from_i64(n)
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat::from_rows(vec![vec![r(2), r(1)], vec![RatFunc::v_pow(1), r(3)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
    }

    #[test]
    fn kernel_has_leading_ones() {
        let a = Mat::from_rows(vec![vec![r(0), r(1), r(-1), r(0)]]);
        let k = a.kernel();
        assert_eq!(k.len(), 3);
        for v in &k {
            let first = v.iter().find(|x| !x.is_zero()).unwrap();
            assert!(first.is_one());
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = Mat::from_rows(vec![vec![r(1), r(2)]]);
        let b = Mat::from_rows(vec![vec![r(3)], vec![r(4)]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k[(1, 1)], r(8));
    }

    #[test]
    fn numeric_solve() {
        let a = Mat::from_rows(vec![vec![Num::real(1e-3), Num::real(1.0)], vec![Num::real(1.0), Num::real(1.0)]]);
        let b = Mat::column(vec![Num::real(1.0), Num::real(2.0)]);
        let x = a.solve(&b).unwrap();
        assert!(a.mul(&x).approx_eq(&b, 1e-12));
    }
}
