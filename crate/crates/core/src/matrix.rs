//! Dense scalar matrices (gamma, Pauli and charge conjugation data) and
//! sparse matrices over a generic entry ring (the 100×100 supermatrices).

use std::collections::BTreeMap;
use std::fmt;

use crate::grassmann::Multivector;
use crate::scalar::{Field, Scalar, ScalarError};

/// Row-major dense matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for k in 0..n {
            m.set(k, k, field.one());
        }
        m
    }

    /// Builds a matrix from small integer entries scaled by `unit`.
    pub fn from_ints(field: Field, rows: &[&[i64]], unit: &Scalar) -> Mat {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = Mat::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, field.int(v).mul(unit));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.data[0].field()
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Mat {
        self.map(|s| s.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        self.map(|x| x.mul(s))
    }

    pub fn conj(&self) -> Mat {
        self.map(|x| x.conj())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let field = self.field();
        let mut out = Mat::zeros(field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Block matrix [[a, b], [c, d]] from four equal square blocks.
    pub fn blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        let n = a.rows;
        let mut m = Mat::zeros(a.field(), 2 * n, 2 * n);
        for (blk, (ro, co)) in [(a, (0, 0)), (b, (0, n)), (c, (n, 0)), (d, (n, n))] {
            for r in 0..n {
                for col in 0..n {
                    m.set(r + ro, col + co, blk.get(r, col).clone());
                }
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn inverse(&self) -> Result<Mat, ScalarError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let field = self.field();
        let mut a = self.clone();
        let mut inv = Mat::identity(field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(ScalarError::DivisionByZero)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.axpy_row(r, col, &f);
                    inv.axpy_row(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c).mul(s);
            self.set(r, c, v);
        }
    }

    /// row[r] -= f · row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c).sub(&self.get(src, c).mul(f));
            self.set(r, c, v);
        }
    }

    /// Basis of {x : self · x = 0}, each vector normalized so its last free
    /// coordinate is 1.
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>, ScalarError> {
        let field = self.field();
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            let inv = a.get(row, col).inv()?;
            a.scale_row(row, &inv);
            for r in 0..self.rows {
                if r != row && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.axpy_row(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&fc| {
                let mut v = vec![field.zero(); self.cols];
                v[fc] = field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = a.get(r, fc).neg();
                }
                v
            })
            .collect())
    }
}

/// Ring operations needed by sparse matrices.
pub trait Entry: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero_in(field: Field) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn is_zero_entry(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scaled(&self, s: &Scalar) -> Self;
}

impl Entry for Scalar {
    fn zero_in(field: Field) -> Self {
        field.zero()
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.mul(s)
    }
}

impl Entry for Multivector {
    fn zero_in(field: Field) -> Self {
        Multivector::zero(field)
    }
    fn from_scalar(s: Scalar) -> Self {
        Multivector::scalar(s)
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

/// Square sparse matrix stored as one ordered map per row.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<E: Entry> {
    field: Field,
    dim: usize,
    rows: Vec<BTreeMap<usize, E>>,
}

impl<E: Entry> fmt::Debug for SparseMatrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, {} nonzeros)", self.dim, self.dim, self.nnz())
    }
}

impl<E: Entry> SparseMatrix<E> {
    pub fn zero(field: Field, dim: usize) -> Self {
        SparseMatrix { field, dim, rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for k in 0..dim {
            m.set(k, k, E::from_scalar(field.one()));
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> E {
        self.rows[r].get(&c).cloned().unwrap_or_else(|| E::zero_in(self.field))
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        if v.is_zero_entry() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &E) {
        if v.is_zero_entry() {
            return;
        }
        let sum = match self.rows[r].get(&c) {
            Some(old) => old.plus(v),
            None => v.clone(),
        };
        self.set(r, c, sum);
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (r, c, v) in o.entries() {
            out.add_at(r, c, v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.negate())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.field, self.dim);
        }
        self.map(|v| v.scaled(s))
    }

    /// Multiplies every entry on the left by `x`.
    pub fn left_mul_entries(&self, x: &E) -> Self {
        self.map(|v| x.times(v))
    }

    pub fn map(&self, f: impl Fn(&E) -> E) -> Self {
        let mut out = Self::zero(self.field, self.dim);
        for (r, c, v) in self.entries() {
            out.set(r, c, f(v));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.field, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &o.rows[*k] {
                    out.add_at(i, *j, &a.times(b));
                }
            }
        }
        out
    }

    /// Writes a dense scalar block with its top-left corner at (r0, c0).
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.set(r0 + r, c0 + c, E::from_scalar(v.clone()));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::default()
    }

    #[test]
    fn inverse_round_trip() {
        let i = f().i();
        let m = Mat::from_ints(f(), &[&[0, 1], &[-1, 0]], &i);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(f(), 2));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Mat::from_ints(f(), &[&[1, 2]], &f().one());
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![f().int(-2), f().one()]);
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = Mat::from_ints(f(), &[&[1, 2], &[0, 3]], &f().one());
        let b = Mat::from_ints(f(), &[&[4, 0], &[5, 6]], &f().one());
        let mut sa = SparseMatrix::<Scalar>::zero(f(), 2);
        let mut sb = SparseMatrix::<Scalar>::zero(f(), 2);
        sa.put_block(0, 0, &a);
        sb.put_block(0, 0, &b);
        let mut expect = SparseMatrix::<Scalar>::zero(f(), 2);
        expect.put_block(0, 0, &a.mul(&b));
        assert_eq!(sa.mul(&sb), expect);
        assert!(sa.sub(&sa).is_zero());
    }
}
