//! Dense exact matrices over Q or F_p, with reduced row echelon form,
//! kernels, solving, and quotient (complement) bases.
//!
//! Zero-sized matrices (0 x n, n x 0) are legal everywhere and compose.

use crate::field::{Fp, FieldSpec, Scalar};
use num::rational::BigRational;
use num::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Data {
    Rat(Vec<BigRational>),
    Fp { fp: Fp, v: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Data,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("fields differ between operands")]
    FieldMismatch,
    #[error("matrix is not invertible")]
    NotInvertible,
}

pub struct Rref {
    pub reduced: Matrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// A complement of a subspace: representative indices, the projection onto
/// the quotient coordinates, and the inclusion of representatives.
pub struct Quotient {
    pub rep_indices: Vec<usize>,
    /// q x ambient; linear, kills the subspace, identity on representatives.
    pub project: Matrix,
    /// ambient x q; sends quotient coordinates to representative vectors.
    pub include: Matrix,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        let data = match field {
            FieldSpec::Rationals => Data::Rat(vec![BigRational::zero(); rows * cols]),
            FieldSpec::Prime(p) => Data::Fp {
                fp: Fp::new(p),
                v: vec![0; rows * cols],
            },
        };
        Matrix { rows, cols, data }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set_one(i, i);
        }
        m
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set_i64(i, j, x);
            }
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set_i64(i, j, f(i, j));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        match &self.data {
            Data::Rat(_) => FieldSpec::Rationals,
            Data::Fp { fp, .. } => FieldSpec::Prime(fp.p),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        match &self.data {
            Data::Rat(v) => Scalar::Rat(v[i * self.cols + j].clone()),
            Data::Fp { v, .. } => Scalar::Fp(v[i * self.cols + j]),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        let c = self.cols;
        match (&mut self.data, s) {
            (Data::Rat(v), Scalar::Rat(x)) => v[i * c + j] = x,
            (Data::Fp { fp, v }, Scalar::Fp(x)) => {
                debug_assert!(x < fp.p);
                v[i * c + j] = x;
            }
            _ => panic!("scalar kind does not match matrix field"),
        }
    }

    pub fn set_i64(&mut self, i: usize, j: usize, x: i64) {
        let c = self.cols;
        match &mut self.data {
            Data::Rat(v) => v[i * c + j] = BigRational::from(num::BigInt::from(x)),
            Data::Fp { fp, v } => v[i * c + j] = fp.from_i64(x),
        }
    }

    pub fn set_one(&mut self, i: usize, j: usize) {
        self.set_i64(i, j, 1);
    }

    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        match &self.data {
            Data::Rat(v) => v[i * self.cols + j].is_zero(),
            Data::Fp { v, .. } => v[i * self.cols + j] == 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Rat(v) => v.iter().all(|x| x.is_zero()),
            Data::Fp { v, .. } => v.iter().all(|&x| x == 0),
        }
    }

    /// Raw F_p entry access (panics over Q). Used by sparse interop.
    pub fn fp_entry(&self, i: usize, j: usize) -> u64 {
        match &self.data {
            Data::Fp { v, .. } => v[i * self.cols + j],
            Data::Rat(_) => panic!("fp_entry on rational matrix"),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.cols, self.rows);
        match (&self.data, &mut out.data) {
            (Data::Rat(a), Data::Rat(b)) => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        b[j * self.rows + i] = a[i * self.cols + j].clone();
                    }
                }
            }
            (Data::Fp { v: a, .. }, Data::Fp { v: b, .. }) => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        b[j * self.rows + i] = a[i * self.cols + j];
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape");
        assert_eq!(self.field(), other.field(), "matmul field");
        let mut out = Matrix::zero(self.field(), self.rows, other.cols);
        match (&self.data, &other.data, &mut out.data) {
            (Data::Rat(a), Data::Rat(b), Data::Rat(c)) => {
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = &a[i * self.cols + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let bkj = &b[k * other.cols + j];
                            if !bkj.is_zero() {
                                c[i * other.cols + j] += aik * bkj;
                            }
                        }
                    }
                }
            }
            (Data::Fp { fp, v: a }, Data::Fp { v: b, .. }, Data::Fp { v: c, .. }) => {
                let small = fp.p < (1 << 15);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = a[i * self.cols + k];
                        if aik == 0 {
                            continue;
                        }
                        let brow = &b[k * other.cols..(k + 1) * other.cols];
                        let crow = &mut c[i * other.cols..(i + 1) * other.cols];
                        if small {
                            // products < 2^30; defer reduction to a single pass
                            for (cv, &bv) in crow.iter_mut().zip(brow) {
                                *cv = fp.reduce(*cv + aik * bv);
                            }
                        } else {
                            for (cv, &bv) in crow.iter_mut().zip(brow) {
                                *cv = ((*cv as u128 + aik as u128 * bv as u128) % fp.p as u128) as u64;
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        match (&mut out.data, &other.data) {
            (Data::Rat(a), Data::Rat(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (Data::Fp { fp, v: a }, Data::Fp { v: b, .. }) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = fp.add(*x, *y);
                }
            }
            _ => panic!("field mismatch"),
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        match (&mut out.data, &other.data) {
            (Data::Rat(a), Data::Rat(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x -= y;
                }
            }
            (Data::Fp { fp, v: a }, Data::Fp { v: b, .. }) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = fp.sub(*x, *y);
                }
            }
            _ => panic!("field mismatch"),
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        match &mut out.data {
            Data::Rat(a) => {
                for x in a.iter_mut() {
                    *x = -x.clone();
                }
            }
            Data::Fp { fp, v } => {
                for x in v.iter_mut() {
                    *x = fp.neg(*x);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = self.clone();
        match (&mut out.data, s) {
            (Data::Rat(a), Scalar::Rat(c)) => {
                for x in a.iter_mut() {
                    *x *= c;
                }
            }
            (Data::Fp { fp, v }, Scalar::Fp(c)) => {
                for x in v.iter_mut() {
                    *x = fp.mul(*x, *c);
                }
            }
            _ => panic!("field mismatch"),
        }
        out
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field(), other.field());
        let mut out = Matrix::zero(self.field(), self.rows + other.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, other);
        out
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field(), other.field());
        let mut out = Matrix::zero(self.field(), self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        out
    }

    pub fn vstack_all(field: FieldSpec, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.paste(at, 0, m);
            at += m.rows;
        }
        out
    }

    pub fn hstack_all(field: FieldSpec, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.paste(0, at, m);
            at += m.cols;
        }
        out
    }

    pub fn block_diag(field: FieldSpec, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.paste(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    pub fn paste(&mut self, at_row: usize, at_col: usize, src: &Matrix) {
        assert!(at_row + src.rows <= self.rows && at_col + src.cols <= self.cols);
        let c = self.cols;
        match (&mut self.data, &src.data) {
            (Data::Rat(a), Data::Rat(b)) => {
                for i in 0..src.rows {
                    for j in 0..src.cols {
                        a[(at_row + i) * c + at_col + j] = b[i * src.cols + j].clone();
                    }
                }
            }
            (Data::Fp { v: a, .. }, Data::Fp { v: b, .. }) => {
                for i in 0..src.rows {
                    a[(at_row + i) * c + at_col..(at_row + i) * c + at_col + src.cols]
                        .copy_from_slice(&b[i * src.cols..(i + 1) * src.cols]);
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zero(self.field(), row_range.len(), col_range.len());
        for (oi, i) in row_range.clone().enumerate() {
            for (oj, j) in col_range.clone().enumerate() {
                out.set(oi, oj, self.get(i, j));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.submatrix(0..self.rows, j..j + 1)
    }

    /// Reduced row echelon form; row space preserved.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        match &mut m.data {
            Data::Rat(v) => {
                let cols = m.cols;
                let mut prow = 0usize;
                for col in 0..cols {
                    let Some(found) = (prow..m.rows).find(|&r| !v[r * cols + col].is_zero()) else {
                        continue;
                    };
                    if found != prow {
                        for j in 0..cols {
                            v.swap(found * cols + j, prow * cols + j);
                        }
                    }
                    let inv = v[prow * cols + col].recip();
                    for j in col..cols {
                        let x = &v[prow * cols + j] * &inv;
                        v[prow * cols + j] = x;
                    }
                    for r in 0..m.rows {
                        if r == prow || v[r * cols + col].is_zero() {
                            continue;
                        }
                        let f = v[r * cols + col].clone();
                        for j in col..cols {
                            let x = &v[r * cols + j] - &f * &v[prow * cols + j];
                            v[r * cols + j] = x;
                        }
                    }
                    pivot_cols.push(col);
                    prow += 1;
                    if prow == m.rows {
                        break;
                    }
                }
            }
            Data::Fp { fp, v } => {
                let fp = *fp;
                let cols = m.cols;
                let mut prow = 0usize;
                for col in 0..cols {
                    let Some(found) = (prow..m.rows).find(|&r| v[r * cols + col] != 0) else {
                        continue;
                    };
                    if found != prow {
                        let (lo, hi) = v.split_at_mut(found * cols);
                        lo[prow * cols..prow * cols + cols].swap_with_slice(&mut hi[..cols]);
                    }
                    let inv = fp.inv(v[prow * cols + col]).expect("pivot nonzero");
                    for j in col..cols {
                        v[prow * cols + j] = fp.mul(v[prow * cols + j], inv);
                    }
                    for r in 0..m.rows {
                        if r == prow {
                            continue;
                        }
                        let f = v[r * cols + col];
                        if f == 0 {
                            continue;
                        }
                        let fneg = fp.neg(f);
                        let (dst, src) = if r < prow {
                            let (a, b) = v.split_at_mut(prow * cols);
                            (&mut a[r * cols..(r + 1) * cols], &b[..cols])
                        } else {
                            let (a, b) = v.split_at_mut(r * cols);
                            (&mut b[..cols], &a[prow * cols..(prow + 1) * cols])
                        };
                        for j in col..cols {
                            dst[j] = fp.mul_add(dst[j], fneg, src[j]);
                        }
                    }
                    pivot_cols.push(col);
                    prow += 1;
                    if prow == m.rows {
                        break;
                    }
                }
            }
        }
        let rank = pivot_cols.len();
        Rref {
            reduced: m,
            pivot_cols,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, returned as the columns of a matrix.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref {
            reduced,
            pivot_cols,
            rank,
        } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut out = Matrix::zero(self.field(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set_one(fc, k);
            for (r, &pc) in pivot_cols.iter().enumerate().take(rank) {
                let x = reduced.get(r, fc);
                if !x.is_zero() {
                    out.set(pc, k, neg_scalar(&self.field(), x));
                }
            }
        }
        out
    }

    /// Solve self * x = b for a single column b; None if inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, MatrixError> {
        if b.rows != self.rows || b.cols != 1 {
            return Err(MatrixError::Dim(format!(
                "rhs is {}x{}, expected {}x1",
                b.rows, b.cols, self.rows
            )));
        }
        Ok(self.solve_many(b)?)
    }

    /// Solve self * X = B (multi right-hand side); None if any column is
    /// inconsistent.
    pub fn solve_many(&self, b: &Matrix) -> Result<Option<Matrix>, MatrixError> {
        if b.rows != self.rows {
            return Err(MatrixError::Dim("rhs row count".into()));
        }
        if self.field() != b.field() {
            return Err(MatrixError::FieldMismatch);
        }
        let aug = self.hstack(b);
        let Rref {
            reduced,
            pivot_cols,
            rank,
        } = aug.rref();
        // inconsistent iff some pivot lands in the rhs block
        if pivot_cols.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zero(self.field(), self.cols, b.cols);
        for r in 0..rank {
            let pc = pivot_cols[r];
            for j in 0..b.cols {
                x.set(pc, j, reduced.get(r, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotInvertible);
        }
        let id = Matrix::identity(self.field(), self.rows);
        match self.solve_many(&id)? {
            Some(x) => Ok(x),
            None => Err(MatrixError::NotInvertible),
        }
    }

    /// Representatives of a complement of the column space of `subspace`
    /// inside k^ambient, with projection and inclusion.
    pub fn quotient_basis(field: FieldSpec, ambient_dim: usize, subspace: &Matrix) -> Quotient {
        assert_eq!(subspace.rows, ambient_dim, "subspace vectors length");
        let rr = subspace.transpose().rref();
        let pivots = rr.pivot_cols.clone();
        let rep_indices: Vec<usize> = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
        let q = rep_indices.len();
        let mut project = Matrix::zero(field, q, ambient_dim);
        for (j, &rep) in rep_indices.iter().enumerate() {
            project.set_one(j, rep);
            for (r, &pc) in pivots.iter().enumerate() {
                let x = rr.reduced.get(r, rep);
                if !x.is_zero() {
                    project.set(j, pc, neg_scalar(&field, x));
                }
            }
        }
        let mut include = Matrix::zero(field, ambient_dim, q);
        for (j, &rep) in rep_indices.iter().enumerate() {
            include.set_one(rep, j);
        }
        Quotient {
            rep_indices,
            project,
            include,
        }
    }
}

fn neg_scalar(field: &FieldSpec, s: Scalar) -> Scalar {
    match (field, s) {
        (FieldSpec::Rationals, Scalar::Rat(r)) => Scalar::Rat(-r),
        (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(Fp::new(*p).neg(x)),
        _ => panic!("field mismatch"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both_fields() -> Vec<FieldSpec> {
        vec![FieldSpec::Rationals, FieldSpec::Prime(5), FieldSpec::Prime(32003)]
    }

    #[test]
    fn rref_identity() {
        for f in both_fields() {
            let m = Matrix::identity(f, 2);
            let r = m.rref();
            assert_eq!(r.rank, 2);
            assert_eq!(r.pivot_cols, vec![0, 1]);
        }
    }

    #[test]
    fn rref_zero() {
        for f in both_fields() {
            let m = Matrix::zero(f, 3, 4);
            let r = m.rref();
            assert_eq!(r.rank, 0);
            assert!(r.pivot_cols.is_empty());
        }
    }

    #[test]
    fn rref_dependent_rows_f5() {
        // second row is 2x the first over F_5
        let m = Matrix::from_i64_rows(FieldSpec::Prime(5), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_cases() {
        for f in both_fields() {
            assert_eq!(Matrix::identity(f, 3).kernel_basis().cols, 0);
            assert_eq!(Matrix::zero(f, 2, 3).kernel_basis().cols, 3);
        }
        let m = Matrix::from_i64_rows(FieldSpec::Rationals, &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 1);
        // proportional to (1, -1)
        assert_eq!(m.mul(&k).is_zero(), true);
        assert!(!k.is_zero());
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(FieldSpec::Rationals, 2);
        let b = Matrix::from_i64_rows(FieldSpec::Rationals, &[vec![3], vec![4]]);
        let x = id.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);

        let z = Matrix::zero(FieldSpec::Rationals, 2, 2);
        assert!(z.solve(&b).unwrap().is_none());

        let two = Matrix::from_i64_rows(FieldSpec::Rationals, &[vec![2]]);
        let one = Matrix::from_i64_rows(FieldSpec::Rationals, &[vec![1]]);
        let x = two.solve(&one).unwrap().unwrap();
        assert_eq!(x.get(0, 0).to_exact_string(), "1/2");

        let bad = Matrix::zero(FieldSpec::Rationals, 3, 1);
        assert!(id.solve(&bad).is_err());
    }

    #[test]
    fn quotient_cases() {
        let f = FieldSpec::Rationals;
        // ambient 3, subspace e0
        let mut s = Matrix::zero(f, 3, 1);
        s.set_one(0, 0);
        let q = Matrix::quotient_basis(f, 3, &s);
        assert_eq!(q.rep_indices.len(), 2);
        assert!(q.project.mul(&s).is_zero());

        // full space
        let q = Matrix::quotient_basis(f, 2, &Matrix::identity(f, 2));
        assert_eq!(q.rep_indices.len(), 0);

        // ambient 2, subspace span{(1,1)}
        let s = Matrix::from_i64_rows(f, &[vec![1], vec![1]]);
        let q = Matrix::quotient_basis(f, 2, &s);
        assert_eq!(q.rep_indices.len(), 1);
        assert!(q.project.mul(&s).is_zero());
        assert!(!q.project.mul(&q.include).is_zero());
        // project . include = identity on the quotient
        assert_eq!(q.project.mul(&q.include), Matrix::identity(f, 1));
    }

    #[test]
    fn inverse_round_trip() {
        for f in both_fields() {
            let m = Matrix::from_i64_rows(f, &[vec![1, 2], vec![3, 5]]);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        }
    }

    #[test]
    fn empty_shapes_compose() {
        let f = FieldSpec::Prime(32003);
        let a = Matrix::zero(f, 0, 3);
        let b = Matrix::zero(f, 3, 2);
        let c = a.mul(&b);
        assert_eq!((c.rows, c.cols), (0, 2));
        let d = Matrix::zero(f, 2, 0).mul(&Matrix::zero(f, 0, 5));
        assert_eq!((d.rows, d.cols), (2, 5));
        assert!(d.is_zero());
        assert_eq!(Matrix::zero(f, 0, 4).rank(), 0);
        assert_eq!(Matrix::zero(f, 4, 0).kernel_basis().cols, 0);
    }
}
