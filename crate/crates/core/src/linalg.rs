//! Exact Gaussian elimination over the two coefficient fields.
//!
//! `FqMat` is a dense row-major matrix over F_q (scalars from the context
//! tables). The free functions at the bottom run the same elimination over
//! F_{q^m} itself, for the few places that need kernels or inverses of
//! matrices whose entries are field elements.

use crate::gfield::{Elt, FieldCtx, Fq};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqMat {
    rows: usize,
    cols: usize,
    d: Vec<Fq>,
}

impl FqMat {
    pub fn zero(rows: usize, cols: usize) -> FqMat {
        FqMat { rows, cols, d: vec![Fq(0); rows * cols] }
    }

    pub fn identity(n: usize) -> FqMat {
        let mut m = FqMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Fq(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> FqMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        FqMat { rows: r, cols: c, d: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.d[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.d[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.d[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> FqMat {
        let mut t = FqMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> FqMat {
        let mut out = FqMat::zero(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(r, j, self.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> FqMat {
        let mut out = FqMat::zero(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out.set(i, c, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &FqMat) -> FqMat {
        debug_assert_eq!(self.rows, other.rows);
        let mut out = FqMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn matmul(&self, ctx: &FieldCtx, other: &FqMat) -> FqMat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = FqMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Fq(0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.fq_add(out.get(i, j), ctx.fq_mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product on column coordinate vectors.
    pub fn apply(&self, ctx: &FieldCtx, v: &[Fq]) -> Vec<Fq> {
        debug_assert_eq!(self.cols, v.len());
        let mut out = vec![Fq(0); self.rows];
        for i in 0..self.rows {
            let mut acc = Fq(0);
            for j in 0..self.cols {
                acc = ctx.fq_add(acc, ctx.fq_mul(self.get(i, j), v[j]));
            }
            out[i] = acc;
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, ctx: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != Fq(0)) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let tmp = self.get(r, j);
                    self.set(r, j, self.get(pr, j));
                    self.set(pr, j, tmp);
                }
            }
            let inv = ctx.fq_inv(self.get(r, c)).unwrap();
            for j in 0..self.cols {
                self.set(r, j, ctx.fq_mul(self.get(r, j), inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == Fq(0) {
                    continue;
                }
                for j in 0..self.cols {
                    let v = ctx.fq_sub(self.get(i, j), ctx.fq_mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut c = self.clone();
        c.rref(ctx).len()
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Option<FqMat> {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&FqMat::identity(n));
        let pivots = aug.rref(ctx);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(aug.select_cols(&idx))
    }

    /// Solve self[.., ..cols-1] * x = last column; free variables set to zero.
    pub fn solve_single(&self, ctx: &FieldCtx) -> Option<Vec<Fq>> {
        let n = self.cols - 1;
        let mut red = self.clone();
        let pivots = red.rref(ctx);
        if pivots.contains(&n) {
            return None; // inconsistent
        }
        let mut x = vec![Fq(0); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, n);
        }
        Some(x)
    }

    /// Solve self * X = rhs for all columns at once; free variables zero.
    /// None if any column is inconsistent.
    pub fn solve_many(&self, ctx: &FieldCtx, rhs: &FqMat) -> Option<FqMat> {
        debug_assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref(ctx);
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FqMat::zero(self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, aug.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    /// Basis of the right kernel {v : self * v = 0}.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<Vec<Fq>> {
        let mut red = self.clone();
        let pivots = red.rref(ctx);
        let mut out = Vec::new();
        let is_pivot = |c: usize| pivots.contains(&c);
        for free in 0..self.cols {
            if is_pivot(free) {
                continue;
            }
            let mut v = vec![Fq(0); self.cols];
            v[free] = Fq(1);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = ctx.fq_neg(red.get(r, free));
            }
            out.push(v);
        }
        out
    }
}

// --- elimination over F_{q^m}: rows are Vec<Elt> ---

/// In-place RREF over the big field; returns pivot columns.
pub fn elt_rref(ctx: &FieldCtx, rows: &mut [Vec<Elt>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !ctx.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv_elt(&rows[r][c]).unwrap();
        for j in 0..ncols {
            rows[r][j] = ctx.mul(&rows[r][j], &inv);
        }
        for i in 0..nrows {
            if i == r || ctx.is_zero(&rows[i][c]) {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..ncols {
                let sub = ctx.mul(&f, &rows[r][j]);
                rows[i][j] = ctx.sub(&rows[i][j], &sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn elt_rank(ctx: &FieldCtx, rows: &[Vec<Elt>]) -> usize {
    let mut copy = rows.to_vec();
    elt_rref(ctx, &mut copy).len()
}

/// Basis of the right kernel over F_{q^m}.
pub fn elt_kernel(ctx: &FieldCtx, rows: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut red = rows.to_vec();
    let pivots = elt_rref(ctx, &mut red);
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![ctx.zero(); ncols];
        v[free] = ctx.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = ctx.neg(&red[r][free]);
        }
        out.push(v);
    }
    out
}

/// Inverse of a square matrix over F_{q^m}; None when singular. Entries that
/// lie in an intermediate subfield stay there, so this also serves for
/// elimination over intermediate fields.
pub fn elt_inverse(ctx: &FieldCtx, mat: &[Vec<Elt>]) -> Option<Vec<Vec<Elt>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Elt>> = Vec::with_capacity(n);
    for (i, row) in mat.iter().enumerate() {
        debug_assert_eq!(row.len(), n);
        let mut r = row.clone();
        for j in 0..n {
            r.push(if i == j { ctx.one() } else { ctx.zero() });
        }
        aug.push(r);
    }
    let pivots = elt_rref(ctx, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
