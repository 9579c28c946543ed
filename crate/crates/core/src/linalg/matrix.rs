use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Dense matrix over the integers with arbitrary-precision entries.
///
/// Stored row-major as a vector of rows so that row operations (the workhorse of
/// every normal-form computation) are cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged rows");
                r.as_ref().iter().map(|&v| BigInt::from(v)).collect()
            })
            .collect();
        Self { rows: data.len(), cols, data }
    }

    /// Like [`IntegerMatrix::from_rows`] but with an explicit column count, so
    /// that matrices with zero rows keep their width.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            for (j, &v) in r.as_ref().iter().enumerate() {
                m.data[i][j] = BigInt::from(v);
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i][j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.data.iter()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, r)| {
                r.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    t.data[j][i] = v.clone();
                }
            }
        }
        t
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let f = BigInt::from(factor);
        let data = self.data.iter().map(|r| r.iter().map(|v| v * &f).collect()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (k, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.data[k].iter().enumerate() {
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        self.data
            .iter()
            .map(|r| {
                r.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data: Vec<Vec<BigInt>> = rows.iter().map(|&i| self.data[i].clone()).collect();
        Self { rows: data.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let data = self.data.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
        Self { rows: self.rows, cols: cols.len(), data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        self.select_rows(rows).select_cols(cols)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Self { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[r0 + i][c0 + j] = block.data[i][j].clone();
            }
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().flat_map(|r| r.iter().map(|v| v.abs())).max().unwrap_or_else(BigInt::zero)
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.data.iter().map(|r| r.iter().map(|v| v.to_i64()).collect()).collect()
    }

    /// Determinant by fraction-free Bareiss elimination. Square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;

    fn mul(self, rhs: Self) -> IntegerMatrix {
        IntegerMatrix::mul(self, rhs)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.data.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        rows.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntegerMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(a.mul(&b), IntegerMatrix::from_rows(&[[2, 1], [4, 3]]));
        assert_eq!(a.transpose(), IntegerMatrix::from_rows(&[[1, 3], [2, 4]]));
    }

    #[test]
    fn determinant_small() {
        let a = IntegerMatrix::from_rows(&[[2, 4], [6, 8]]);
        assert_eq!(a.determinant(), BigInt::from(-8));
        let b = IntegerMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(b.determinant(), BigInt::from(-1));
        assert_eq!(IntegerMatrix::identity(0).determinant(), BigInt::one());
    }

    #[test]
    fn empty_shapes_survive() {
        let z = IntegerMatrix::zeros(0, 4);
        assert_eq!(z.ncols(), 4);
        assert_eq!(z.transpose().nrows(), 4);
        let p = IntegerMatrix::zeros(3, 0).mul(&IntegerMatrix::zeros(0, 2));
        assert_eq!((p.nrows(), p.ncols()), (3, 2));
        assert!(p.is_zero());
    }
}
