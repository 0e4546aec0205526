//! Exact linear algebra over prime fields GF(p).
//!
//! Matrices act on column vectors: a linear map GF(p)^n -> GF(p)^m is an
//! m x n matrix. All arithmetic is modular; there is no floating point
//! anywhere in this crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A scalar of GF(p), always kept in `0..p`.
pub type Scalar = u32;

pub const MAX_MODULUS: u32 = 251;

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&p) {
            return Err(Error::FieldOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        (a * b) % self.p
    }

    /// Multiplicative inverse via Fermat: a^(p-2).
    pub fn inv(self, a: Scalar) -> Result<Scalar> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut result = 1;
        let mut base = a;
        let mut exp = self.p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Ok(result)
    }

    /// Reduces an arbitrary integer into `0..p`.
    pub fn reduce(self, a: i64) -> Scalar {
        a.rem_euclid(self.p as i64) as Scalar
    }

    pub fn check_scalar(self, position: usize, value: u32) -> Result<Scalar> {
        if value < self.p {
            Ok(value)
        } else {
            Err(Error::BadCoordinate {
                position,
                value,
                p: self.p,
            })
        }
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// A dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for (i, &e) in entries.iter().enumerate() {
            field.check_scalar(i, e)?;
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows. `cols` is needed to give shape to
    /// matrices with zero rows.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<Scalar>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::new(field, rows.len(), cols, entries)
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    /// `k` times the n x n identity.
    pub fn scalar(field: FieldSpec, n: usize, k: Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = k % field.p();
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "column {c} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, field.check_scalar(r, v)?);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u64 * other.get(k, c) as u64;
                }
                out.set(r, c, (acc % p) as Scalar);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Self {
            entries,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Self {
            entries: self.entries.iter().map(|&a| f.neg(a)).collect(),
            ..self.clone()
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let p = self.field.p() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let acc: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (acc % p) as Scalar
            })
            .collect())
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix) -> Result<Matrix> {
        self.same_field(below)?;
        if self.cols != below.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns over {}",
                self.cols, below.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(Self {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Places `right` to the right of `self`.
    pub fn hstack(&self, right: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().vstack(&right.transpose())?.transpose())
    }

    /// The rows `start..end` of `self`.
    pub fn row_block(&self, start: usize, end: usize) -> Matrix {
        Self {
            field: self.field,
            rows: end - start,
            cols: self.cols,
            entries: self.entries[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of the null space {v : A v = 0}, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|fc| {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(r, fc));
            }
            v
        })
        .collect()
    }

    /// Some x with A x = b. Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let column = Matrix::from_columns(self.field, self.rows, &[b.to_vec()])?;
        let mut aug = self.hstack(&column)?;
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Ok(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = self.hstack(&Matrix::identity(self.field, n)).ok()?;
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Indices of a maximal set of linearly independent rows, chosen greedily
    /// from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut t = self.transpose();
        t.rref()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

pub fn ff_inv(a: Scalar, field: FieldSpec) -> Result<Scalar> {
    field.inv(a)
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.mul(b)
}

pub fn mat_rank(a: &Matrix) -> usize {
    a.rank()
}

pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Scalar>> {
    a.kernel_basis()
}

pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Vec<Scalar>> {
    a.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn m(p: u32, cols: usize, rows: &[&[u32]]) -> Matrix {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(gf(p), cols, &rows).unwrap()
    }

    #[test]
    fn field_rejects_composites_and_out_of_range() {
        assert_eq!(FieldSpec::new(6), Err(Error::NotPrime(6)));
        assert_eq!(FieldSpec::new(1), Err(Error::FieldOutOfRange(1)));
        assert_eq!(FieldSpec::new(257), Err(Error::FieldOutOfRange(257)));
        assert!(FieldSpec::new(251).is_ok());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ff_inv(1, gf(2)), Ok(1));
        assert_eq!(ff_inv(2, gf(5)), Ok(3));
        assert_eq!(ff_inv(0, gf(3)), Err(Error::ZeroInverse));
    }

    #[test]
    fn inverse_is_involutive_for_all_small_primes() {
        for p in [2, 3, 5, 7, 11, 13, 251] {
            let f = gf(p);
            for a in 1..p {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), 1);
                assert_eq!(f.inv(b).unwrap(), a);
            }
        }
    }

    #[test]
    fn mul_examples() {
        let id = Matrix::identity(gf(2), 2);
        assert_eq!(mat_mul(&id, &id).unwrap(), id);
        let a = m(2, 2, &[&[1, 0]]);
        let swap = m(2, 2, &[&[0, 1], &[1, 0]]);
        assert_eq!(mat_mul(&a, &swap).unwrap(), m(2, 2, &[&[0, 1]]));
        assert!(matches!(mat_mul(&a, &a), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn mul_rejects_mixed_fields() {
        let a = Matrix::identity(gf(2), 1);
        let b = Matrix::identity(gf(3), 1);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&Matrix::identity(gf(2), 2)), 2);
        assert_eq!(mat_rank(&m(2, 2, &[&[1, 0], &[1, 0]])), 1);
        assert_eq!(mat_rank(&m(2, 1, &[&[1], &[1]])), 1);
        assert_eq!(mat_rank(&Matrix::zeros(gf(3), 0, 4)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(2, 2, &[&[1, 1]])), vec![vec![1, 1]]);
        assert!(kernel_basis(&Matrix::identity(gf(3), 2)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(gf(2), 1, 2)).len(), 2);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(gf(2), 2);
        assert_eq!(solve_linear(&id, &[1, 0]), Ok(vec![1, 0]));
        let a = m(2, 2, &[&[1, 1]]);
        let x = solve_linear(&a, &[1]).unwrap();
        assert!(x == vec![1, 0] || x == vec![0, 1]);
        assert_eq!(x, vec![1, 0]);
        let z = Matrix::zeros(gf(2), 1, 1);
        assert_eq!(solve_linear(&z, &[1]), Err(Error::NoSolution));
        assert!(matches!(
            solve_linear(&id, &[1]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn inverse_matrix() {
        let a = m(5, 2, &[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(gf(5), 2));
        assert!(m(2, 2, &[&[1, 1], &[1, 1]]).inverse().is_none());
        assert_eq!(
            Matrix::zeros(gf(2), 0, 0).inverse(),
            Some(Matrix::zeros(gf(2), 0, 0))
        );
    }

    #[test]
    fn new_rejects_bad_entries() {
        assert!(matches!(
            Matrix::new(gf(2), 1, 2, vec![0, 2]),
            Err(Error::BadCoordinate { value: 2, .. })
        ));
        assert!(matches!(
            Matrix::new(gf(2), 1, 2, vec![0]),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
