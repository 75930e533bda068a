//! Dense exact linear algebra with deterministic pivoting.
//!
//! Row reduction always picks the leftmost column with a nonzero entry and,
//! inside that column, the lowest row index. Every basis returned here is a
//! function of the input matrix alone.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            f.write_str(if r == 0 { " " } else { "; " })?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows have unequal length.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<F>> + '_ {
        (0..self.cols).map(move |c| self.column(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).add(&a.mul(b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    /// Horizontal concatenation; all blocks need `rows` rows.
    pub fn hstack(rows: usize, blocks: &[&Self]) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack shape");
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, off + c, b.get(r, c).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks need `cols` columns.
    pub fn vstack(cols: usize, blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack shape");
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).inv();
            if !inv.is_one() {
                for c in col..self.cols {
                    let v = self.get(row, c).mul(&inv);
                    self.set(row, c, v);
                }
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    if self.get(row, c).is_zero() {
                        continue;
                    }
                    let sub = self.get(row, c).mul(&f);
                    if !sub.is_zero() {
                        let v = self.get(r, c).sub(&sub);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one column per free variable in increasing order.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, F::one());
            for (row, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, r.get(row, fc).neg());
            }
        }
        out
    }

    /// Basis of the column space made of the pivot columns of `self`.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Solves `self * x = b`, or returns `y` with `y * self = 0` and `y . b != 0`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.put(0, 0, self);
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            let left = self.transpose().kernel();
            for y in left.columns() {
                let dot = y.iter().zip(b).fold(F::zero(), |acc, (p, q)| acc.add(&p.mul(q)));
                if !dot.is_zero() {
                    return Err(y);
                }
            }
            unreachable!("inconsistent system without a left certificate");
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(row, self.cols).clone();
        }
        Ok(x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Self) -> Option<Self> {
        let cols: Option<Vec<Vec<F>>> = rhs.columns().map(|b| self.solve(&b).ok()).collect();
        cols.map(|cols| Self::from_columns(self.cols, &cols))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&Self::identity(self.rows))
    }
}

/// A quotient `k^n / U` presented on the standard coordinates left free by
/// the row reduction of a spanning set of `U`.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    /// Coordinates of `k^n` that survive in the quotient, increasing.
    pub kept: Vec<usize>,
    /// `kept.len() x n` projection.
    pub projection: Matrix<F>,
}

impl<F: Field> Quotient<F> {
    /// `span` holds a spanning set of `U` as columns, `n` rows.
    pub fn new(span: &Matrix<F>) -> Self {
        let n = span.rows();
        let (red, pivots) = span.transpose().rref();
        let kept: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        // reduce e_j modulo the rows of `red`, then read off the kept coordinates
        let projection = Matrix::from_fn(kept.len(), n, |k, j| {
            let target = kept[k];
            if j == target {
                return F::one();
            }
            match pivots.iter().position(|&p| p == j) {
                Some(row) => red.get(row, target).neg(),
                None => F::zero(),
            }
        });
        Quotient { kept, projection }
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }
}

/// Basis of `{ v in span(domain) : map * v in span(target) }`, as columns in the
/// ambient coordinates of `domain`.
pub fn preimage<F: Field>(map: &Matrix<F>, domain: &Matrix<F>, target: &Matrix<F>) -> Matrix<F> {
    let image = map.mul(domain);
    let neg_target = target.scale(&F::one().neg());
    let system = Matrix::hstack(image.rows(), &[&image, &neg_target]);
    let ker = system.kernel();
    let coeffs = ker.select_rows(&(0..domain.cols()).collect::<Vec<_>>());
    domain.mul(&coeffs).column_space()
}

/// Column-space basis of the sum of two subspaces given by column bases.
pub fn subspace_sum<F: Field>(rows: usize, a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    Matrix::hstack(rows, &[a, b]).column_space()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(), cols)
    }

    #[test]
    fn rref_is_leftmost_lowest() {
        let a = m(&[&[0, 2, 4], &[0, 1, 2], &[3, 0, 3]]);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, m(&[&[1, 0, 1], &[0, 1, 2], &[0, 0, 0]]));
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[&[1, 1, 0, 2], &[0, 0, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_certificate() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let y = a.solve(&[q(1), q(3)]).unwrap_err();
        let ya: Vec<Q> = (0..2).map(|c| dot(&y, &a.column(c))).collect();
        assert!(ya.iter().all(|v| v.is_zero()));
        assert!(!dot(&y, &[q(1), q(3)]).is_zero());
        assert_eq!(a.solve(&[q(1), q(2)]).unwrap(), vec![q(1), q(0)]);
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let span = m(&[&[1], &[1], &[0]]);
        let quo = Quotient::new(&span);
        assert_eq!(quo.kept, vec![1, 2]);
        assert!(quo.projection.mul(&span).is_zero());
        assert_eq!(quo.projection.rank(), 2);
    }

    #[test]
    fn preimage_of_line() {
        let map = m(&[&[1, 0], &[0, 0]]);
        let dom = Matrix::identity(2);
        let target = Matrix::zeros(2, 0);
        let pre = preimage(&map, &dom, &target);
        assert_eq!(pre, m(&[&[0], &[1]]));
    }
}
