//! Dense matrices over exact rings and fields.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{format_rat, Degree, Poly, Rat, RatFunc};

/// Commutative ring with exact arithmetic.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Inverse of a nonzero element.
    fn inv(&self) -> Self;
    /// Size heuristic; elimination prefers pivots with small weight.
    fn weight(&self) -> usize;
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        self.recip()
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("nonzero pivot")
    }
    fn weight(&self) -> usize {
        let d = |p: &Poly| p.degree().finite().unwrap_or(0);
        let bits: usize = self.num().coeffs().iter().map(|c| c.weight()).sum();
        (d(self.num()) + d(self.den())) * 1024 + bits
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Matrix over the rationals.
pub type QMatrix = Mat<Rat>;
/// Matrix over polynomials in λ.
pub type PolyMatrix = Mat<Poly>;
/// Matrix over rational functions in λ.
pub type RatMatrix = Mat<RatFunc>;

impl<T> Mat<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone> Mat<T> {
    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn sub_matrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Mat::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Mat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Column-major vectorization.
    pub fn vec(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }

    /// Inverse of [`Mat::vec`].
    pub fn unvec(v: &[T], rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols);
        Mat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    pub fn from_col(v: &[T]) -> Self {
        Mat::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Mat::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.rows)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "add shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "sub shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "mul shape {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a.mul(b);
                        let cell: &mut T = &mut out[(i, j)];
                        *cell = cell.add(&t);
                    }
                }
            }
        }
        out
    }

    /// `[self rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack rows");
        Mat::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Mat { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn hcat(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows);
        parts.iter().fold(Mat::zeros(rows, 0), |acc, p| acc.hstack(p))
    }

    pub fn vcat(parts: &[&Self]) -> Self {
        let cols = parts.first().map_or(0, |p| p.cols);
        parts.iter().fold(Mat::zeros(0, cols), |acc, p| acc.vstack(p))
    }

    /// Block matrix from a grid of blocks with consistent shapes.
    pub fn block(grid: &[Vec<&Self>]) -> Self {
        let rows: Vec<Self> = grid.iter().map(|r| Mat::hcat(r)).collect();
        Mat::vcat(&rows.iter().collect::<Vec<_>>())
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Self) -> Self {
        Mat::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].mul(&rhs[(i % rhs.rows, j % rhs.cols)])
        })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(&self[(i, i)]))
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref<T> {
    pub reduced: Mat<T>,
    pub pivots: Vec<usize>,
}

impl<T: Field> Mat<T> {
    /// Reduced row echelon form with the pivot column indices.
    pub fn rref(&self) -> Rref<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by_key(|&i| m[(i, c)].weight());
            let Some(p) = best else { continue };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let v = m[(r, j)].mul(&inv);
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = m[(i, j)].sub(&f.mul(&m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space as columns (`cols × k`, possibly `k = 0`).
    pub fn nullspace(&self) -> Mat<T> {
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                out[(p, k)] = reduced[(r, f)].neg();
            }
        }
        out
    }

    /// Canonical basis of the column space (rows of the rref of the transpose).
    pub fn colspace(&self) -> Mat<T> {
        let Rref { reduced, pivots } = self.transpose().rref();
        reduced.sub_matrix(0, pivots.len(), 0, reduced.cols).transpose()
    }

    /// Indices of a maximal set of independent columns, chosen greedily left to right.
    pub fn independent_cols(&self) -> Vec<usize> {
        self.rref().pivots
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let Rref { reduced, pivots } = self.hstack(&Mat::identity(n)).rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
            return Err(Error::SingularMatrix);
        }
        Ok(reduced.sub_matrix(0, n, n, 2 * n))
    }

    /// Some `X` with `self · X = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "solve rows");
        let n = self.cols;
        let Rref { reduced, pivots } = self.hstack(b).rref();
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Mat::zeros(n, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = reduced[(r, n + j)].clone();
            }
        }
        Some(x)
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for c in 0..n {
            let best = (c..n).filter(|&i| !m[(i, c)].is_zero()).min_by_key(|&i| m[(i, c)].weight());
            let Some(p) = best else { return Ok(T::zero()) };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m[(c, c)].clone();
            det = det.mul(&piv);
            let inv = piv.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    if m[(c, j)].is_zero() {
                        continue;
                    }
                    let v = m[(i, j)].sub(&f.mul(&m[(c, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|s| s.chars().count()).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        f.write_str("]")
    }
}

impl QMatrix {
    /// Builds a rational matrix from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::ratpoly::int(x)).collect()).collect())
    }

    pub fn to_poly(&self) -> PolyMatrix {
        self.map(|x| Poly::constant(x.clone()))
    }

    pub fn to_ratfunc(&self) -> RatMatrix {
        self.map(|x| RatFunc::constant(x.clone()))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(crate::ratpoly::rat_to_f64).collect())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(format_rat).collect()).collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Rat {
        self.iter().map(|x| x.abs()).max().unwrap_or_else(<Rat as Zero>::zero)
    }
}

impl PolyMatrix {
    /// Highest degree among the entries.
    pub fn degree(&self) -> Degree {
        self.iter().map(|p| p.degree()).max().unwrap_or(Degree::NegInf)
    }

    /// Matrix of the coefficients of `λ^k`.
    pub fn coeff_matrix(&self, k: usize) -> QMatrix {
        self.map(|p| p.coeff(k))
    }

    /// Matrix polynomial `Σ_k C_k λ^k` from coefficient matrices.
    pub fn from_coeff_matrices(cs: &[QMatrix]) -> Self {
        let (r, c) = cs.first().map_or((0, 0), |m| m.shape());
        Mat::from_fn(r, c, |i, j| Poly::new(cs.iter().map(|m| m[(i, j)].clone()).collect()))
    }

    pub fn eval(&self, x: &Rat) -> QMatrix {
        self.map(|p| p.eval(x))
    }

    pub fn to_ratfunc(&self) -> RatMatrix {
        self.map(|p| RatFunc::from_poly(p.clone()))
    }

    /// Entries `p(-λ)`.
    pub fn reflect(&self) -> Self {
        self.map(|p| p.reflect())
    }
}

impl RatMatrix {
    /// Value at `x`, or `None` when `x` is a pole of some entry.
    pub fn eval(&self, x: &Rat) -> Option<QMatrix> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for f in &self.data {
            data.push(f.eval(x)?);
        }
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// Monic least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> Poly {
        self.iter().fold(Poly::one(), |acc, f| Poly::lcm(&acc, f.den()))
    }

    /// Returns `(N, d)` with `self = N / d` and `d` the common denominator.
    pub fn split_common_denominator(&self) -> (PolyMatrix, Poly) {
        let d = self.common_denominator();
        let n = self.map(|f| f.num() * &d.exact_div(f.den()).expect("lcm is a multiple"));
        (n, d)
    }

    /// Entries `f(-λ)`.
    pub fn reflect(&self) -> Self {
        self.map(|f| f.reflect())
    }

    /// Whether every entry is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.iter().all(|f| f.is_poly())
    }

    pub fn to_poly(&self) -> Option<PolyMatrix> {
        self.is_polynomial().then(|| self.map(|f| f.num().clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, rat};
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_ints(rows)
    }

    #[test]
    fn inverse_and_det() {
        let a = q(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det().unwrap(), int(1));
        assert_eq!(a.inverse().unwrap(), q(&[&[4, -1], &[-7, 2]]));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::SingularMatrix));
        assert_eq!(q(&[&[1, 2, 3]]).inverse(), Err(Error::NotSquare { rows: 1, cols: 3 }));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let n = a.nullspace();
        assert_eq!(n.shape(), (3, 2));
        assert!(a.mul(&n).is_zero());
        assert_eq!(a.colspace(), q(&[&[1], &[2]]));
        assert_eq!(QMatrix::zeros(0, 3).nullspace(), QMatrix::identity(3));
    }

    #[test]
    fn vec_is_column_major() {
        let a = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.vec(), vec![int(1), int(3), int(2), int(4)]);
        assert_eq!(QMatrix::unvec(&a.vec(), 2, 2), a);
    }

    #[test]
    fn kron_vec_identity() {
        let a = q(&[&[1, 2], &[0, -1], &[3, 1]]);
        let x = q(&[&[1, 0, 2], &[5, -1, 1]]);
        let b = q(&[&[2, 1], &[1, 1], &[0, 4]]);
        let lhs = a.mul(&x).mul(&b).vec();
        let rhs = b.transpose().kron(&a).mul(&QMatrix::from_col(&x.vec()));
        assert_eq!(QMatrix::from_col(&lhs), rhs);
    }

    #[test]
    fn solve_particular() {
        let a = q(&[&[1, 1], &[1, -1]]);
        let x = a.solve(&q(&[&[3], &[1]])).unwrap();
        assert_eq!(x, q(&[&[2], &[1]]));
        assert!(q(&[&[1, 1], &[1, 1]]).solve(&q(&[&[1], &[2]])).is_none());
        let _ = rat(1, 2);
    }

    fn arb_q(r: usize, c: usize) -> impl Strategy<Value = QMatrix> {
        prop::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| Mat::from_fn(r, c, |i, j| int(v[i * c + j])))
    }

    proptest! {
        #[test]
        fn rank_nullity(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_q(r, c))) {
            let n = a.nullspace();
            prop_assert_eq!(a.rank() + n.cols(), a.cols());
            prop_assert!(a.mul(&n).is_zero());
        }

        #[test]
        fn inverse_round_trip(a in arb_q(4, 4)) {
            if let Ok(inv) = a.inverse() {
                prop_assert!(a.mul(&inv).is_identity());
                prop_assert_eq!(a.det().unwrap() * inv.det().unwrap(), int(1));
            } else {
                prop_assert_eq!(a.det().unwrap(), int(0));
            }
        }
    }
}
