//! Sparse matrices over F_p and an incremental, fully reduced row echelon
//! engine.
//!
//! The big eliminations in this crate (ideal slices, chain maps) have rows
//! with a handful of nonzeros in spaces of dimension in the tens of
//! thousands; keeping rows as sorted (column, value) vectors and reducing
//! incrementally keeps them tractable. The engine maintains a full RREF
//! invariant: every stored row starts at its pivot column with coefficient 1
//! and contains no other pivot column.

use crate::field::Fp;
use crate::matrix::Matrix;
use crate::field::FieldSpec;

pub type SparseRow = Vec<(u32, u64)>;

/// w + c*r for sorted sparse rows; drops zeros.
pub fn row_axpy(fp: Fp, w: &SparseRow, c: u64, r: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(w.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() && j < r.len() {
        match w[i].0.cmp(&r[j].0) {
            std::cmp::Ordering::Less => {
                out.push(w[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = fp.mul(c, r[j].1);
                if v != 0 {
                    out.push((r[j].0, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = fp.mul_add(w[i].1, c, r[j].1);
                if v != 0 {
                    out.push((w[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&w[i..]);
    for &(col, v) in &r[j..] {
        let v = fp.mul(c, v);
        if v != 0 {
            out.push((col, v));
        }
    }
    out
}

pub fn row_scale(fp: Fp, w: &mut SparseRow, c: u64) {
    for e in w.iter_mut() {
        e.1 = fp.mul(e.1, c);
    }
}

#[derive(Debug, Clone)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SparseRow>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> SparseMat {
        SparseMat {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> SparseMat {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.data[i].push((i as u32, 1));
        }
        m
    }

    /// Build from (row, col, value) triples; values assumed canonical mod p.
    pub fn from_triples(rows: usize, cols: usize, triples: impl IntoIterator<Item = (usize, usize, u64)>) -> SparseMat {
        let mut m = SparseMat::zero(rows, cols);
        for (r, c, v) in triples {
            debug_assert!(r < rows && c < cols);
            if v != 0 {
                m.data[r].push((c as u32, v));
            }
        }
        for row in m.data.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out.data[c as usize].push((i as u32, v));
            }
        }
        out
    }

    pub fn mul(&self, fp: Fp, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMat::zero(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Vec::new();
            for &(k, v) in row {
                acc = row_axpy(fp, &acc, v, &other.data[k as usize]);
            }
            out.data[i] = acc;
        }
        out
    }

    /// Apply to a dense column-major block: self (r x c) * dense (c x k).
    pub fn mul_dense(&self, fp: Fp, dense: &Matrix) -> Matrix {
        assert_eq!(self.cols, dense.rows);
        let mut out = Matrix::zero(FieldSpec::Prime(fp.p), self.rows, dense.cols);
        for (i, row) in self.data.iter().enumerate() {
            for j in 0..dense.cols {
                let mut acc = 0u64;
                for &(k, v) in row {
                    acc = fp.mul_add(acc, v, dense.fp_entry(k as usize, j));
                }
                if acc != 0 {
                    out.set(i, j, crate::field::Scalar::Fp(acc));
                }
            }
        }
        out
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        let off = self.cols as u32;
        let mut out = SparseMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let mut row = self.data[i].clone();
            row.extend(other.data[i].iter().map(|&(c, v)| (c + off, v)));
            out.data[i] = row;
        }
        out
    }

    pub fn to_matrix(&self, fp: Fp) -> Matrix {
        let mut out = Matrix::zero(FieldSpec::Prime(fp.p), self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out.set(i, c as usize, crate::field::Scalar::Fp(v));
            }
        }
        out
    }

    pub fn from_matrix(m: &Matrix) -> SparseMat {
        let mut out = SparseMat::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = m.fp_entry(i, j);
                if v != 0 {
                    out.data[i].push((j as u32, v));
                }
            }
        }
        out
    }
}

/// Incremental fully reduced row echelon form over F_p.
pub struct SparseRref {
    pub fp: Fp,
    pub cols: usize,
    rows: Vec<SparseRow>,
    row_of_pivot: Vec<Option<u32>>,
    /// col -> indices of stored rows that (possibly) contain the column;
    /// entries may be stale and are validated on use.
    occupancy: Vec<Vec<u32>>,
}

impl SparseRref {
    pub fn new(fp: Fp, cols: usize) -> SparseRref {
        SparseRref {
            fp,
            cols,
            rows: Vec::new(),
            row_of_pivot: vec![None; cols],
            occupancy: vec![Vec::new(); cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_pivot[col].is_some()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.cols).filter(|&c| self.is_pivot(c)).collect();
        p.sort_unstable();
        p
    }

    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| !self.is_pivot(c)).collect()
    }

    pub fn stored_rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Reduce a vector against the current pivot rows. The residual is
    /// supported on non-pivot columns only.
    pub fn reduce(&self, mut v: SparseRow) -> SparseRow {
        let mut i = 0;
        while i < v.len() {
            let (c, a) = v[i];
            match self.row_of_pivot[c as usize] {
                Some(r) => {
                    // pivot row starts at c and its tail avoids all pivot
                    // columns, so earlier positions of v are untouched
                    v = row_axpy(self.fp, &v, self.fp.neg(a), &self.rows[r as usize]);
                }
                None => i += 1,
            }
        }
        v
    }

    /// Insert a row; returns its pivot column if it was independent.
    pub fn add_row(&mut self, v: SparseRow) -> Option<usize> {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return None;
        }
        let (pc, lead) = v[0];
        let inv = self.fp.inv(lead).expect("nonzero leading coefficient");
        row_scale(self.fp, &mut v, inv);
        let new_idx = self.rows.len() as u32;
        // back-substitute the new pivot column out of every older row
        let holders = std::mem::take(&mut self.occupancy[pc as usize]);
        for r in holders {
            let row = &self.rows[r as usize];
            let coeff = match row.binary_search_by_key(&pc, |e| e.0) {
                Ok(pos) => row[pos].1,
                Err(_) => continue, // stale occupancy entry
            };
            let updated = row_axpy(self.fp, row, self.fp.neg(coeff), &v);
            for &(c, _) in updated.iter() {
                if c != pc && !contains_col(&self.rows[r as usize], c) {
                    self.occupancy[c as usize].push(r);
                }
            }
            self.rows[r as usize] = updated;
        }
        for &(c, _) in v.iter().skip(1) {
            self.occupancy[c as usize].push(new_idx);
        }
        self.row_of_pivot[pc as usize] = Some(new_idx);
        self.rows.push(v);
        Some(pc as usize)
    }

    /// Kernel of the matrix whose rows were inserted, as sparse columns
    /// indexed by the free columns.
    pub fn kernel_basis(&self) -> Vec<(usize, SparseRow)> {
        let free = self.free_cols();
        let mut pos_of_free = vec![usize::MAX; self.cols];
        for (k, &f) in free.iter().enumerate() {
            pos_of_free[f] = k;
        }
        let mut kernel: Vec<(usize, SparseRow)> = free.iter().map(|&f| (f, vec![(f as u32, 1)])).collect();
        for row in &self.rows {
            let pc = row[0].0;
            for &(c, val) in row.iter().skip(1) {
                let k = pos_of_free[c as usize];
                debug_assert_ne!(k, usize::MAX);
                kernel[k].1.push((pc, self.fp.neg(val)));
            }
        }
        for (_, v) in kernel.iter_mut() {
            v.sort_unstable_by_key(|e| e.0);
        }
        kernel
    }
}

fn contains_col(row: &SparseRow, c: u32) -> bool {
    row.binary_search_by_key(&c, |e| e.0).is_ok()
}

/// Rank of a sparse matrix by incremental elimination.
pub fn sparse_rank(fp: Fp, m: &SparseMat) -> usize {
    let mut rr = SparseRref::new(fp, m.cols);
    for row in &m.data {
        rr.add_row(row.clone());
    }
    rr.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;

    fn fp() -> Fp {
        Fp::new(DEFAULT_PRIME)
    }

    #[test]
    fn axpy_merges() {
        let f = fp();
        let w = vec![(0, 1), (2, 5)];
        let r = vec![(1, 2), (2, f.neg(5))];
        let out = row_axpy(f, &w, 1, &r);
        assert_eq!(out, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rref_matches_dense() {
        let f = fp();
        let m = SparseMat::from_triples(
            4,
            5,
            vec![
                (0, 0, 1),
                (0, 3, 2),
                (1, 1, 4),
                (1, 3, 1),
                (2, 0, 2),
                (2, 3, 4), // row 2 = 2 * row 0
                (3, 2, 7),
                (3, 4, 1),
            ],
        );
        assert_eq!(sparse_rank(f, &m), 3);
        assert_eq!(m.to_matrix(f).rank(), 3);
    }

    #[test]
    fn kernel_annihilates() {
        let f = fp();
        let m = SparseMat::from_triples(2, 4, vec![(0, 0, 1), (0, 1, 1), (1, 2, 1), (1, 3, 5)]);
        let mut rr = SparseRref::new(f, 4);
        for row in &m.data {
            rr.add_row(row.clone());
        }
        let ker = rr.kernel_basis();
        assert_eq!(ker.len(), 2);
        for (_, kvec) in &ker {
            // m * k = 0
            for row in &m.data {
                let mut acc = 0u64;
                let mut i = 0;
                let mut j = 0;
                while i < row.len() && j < kvec.len() {
                    match row[i].0.cmp(&kvec[j].0) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            acc = f.mul_add(acc, row[i].1, kvec[j].1);
                            i += 1;
                            j += 1;
                        }
                    }
                }
                assert_eq!(acc, 0);
            }
        }
    }

    #[test]
    fn full_reduction_invariant() {
        let f = fp();
        let mut rr = SparseRref::new(f, 6);
        let rows = vec![
            vec![(1, 3), (4, 1)],
            vec![(0, 2), (1, 1), (5, 4)],
            vec![(0, 1), (2, 9)],
            vec![(1, 1), (2, 2), (3, 3)],
            vec![(4, 5), (5, 6)],
        ];
        for r in rows {
            rr.add_row(r);
        }
        for row in rr.stored_rows() {
            assert_eq!(row[0].1, 1);
            for &(c, _) in row.iter().skip(1) {
                assert!(!rr.is_pivot(c as usize), "tail entry on pivot column");
            }
        }
    }

    #[test]
    fn mul_and_transpose_agree_with_dense() {
        let f = fp();
        let a = SparseMat::from_triples(3, 4, vec![(0, 0, 2), (1, 2, 3), (2, 1, 5), (2, 3, 7)]);
        let b = SparseMat::from_triples(4, 2, vec![(0, 1, 1), (1, 0, 4), (2, 0, 6), (3, 1, 8)]);
        let c = a.mul(f, &b);
        assert_eq!(c.to_matrix(f), a.to_matrix(f).mul(&b.to_matrix(f)));
        assert_eq!(a.transpose().to_matrix(f), a.to_matrix(f).transpose());
    }
}
