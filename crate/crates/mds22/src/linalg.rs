//! Dense matrix algebra over a [`FieldCtx`] for the tiny shapes used
//! throughout the crate (2x2, 2x4, 4x2, 4x4): determinant, rank, inverse,
//! kernel basis, block concatenation, non-zero-column count.
//!
//! Matrices are plain value types; shapes are small enough that views and
//! slicing would be noise. Elimination uses a fixed pivot convention (the
//! first non-zero entry in column order, no pivoting heuristics) so kernel
//! bases and echelon forms are reproducible.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::FieldCtx;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
}

/// A dense rows x cols matrix over a finite field, entries row-major.
#[derive(Debug, Clone)]
pub struct Mat {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    entries: Vec<u16>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && *self.ctx == *other.ctx
    }
}
impl Eq for Mat {}

impl Mat {
    pub fn new(ctx: Arc<FieldCtx>, rows: usize, cols: usize, entries: Vec<u16>) -> Result<Mat, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e as u32 >= ctx.q()) {
            return Err(LinalgError::ShapeMismatch("entry out of field range".into()));
        }
        Ok(Mat { ctx, rows, cols, entries })
    }

    /// Builds from signed integer literals, reducing mod p (handy for the
    /// explicit +-1 tables).
    pub fn from_ints(ctx: Arc<FieldCtx>, rows: usize, cols: usize, ints: &[i64]) -> Mat {
        let entries = ints.iter().map(|&v| ctx.from_int(v)).collect();
        Mat::new(ctx, rows, cols, entries).expect("literal shape")
    }

    pub fn zero(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> Mat {
        Mat { ctx, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Mat {
        let mut m = Mat::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_cols(ctx: Arc<FieldCtx>, cols: &[Vec<u16>]) -> Mat {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Mat::zero(ctx, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.entries[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn col(&self, j: usize) -> Vec<u16> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn same_field(&self, other: &Mat) -> Result<(), LinalgError> {
        if *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Mat::zero(self.ctx.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.add(&other.scale(self.ctx.neg(1)))
    }

    pub fn scale(&self, s: u16) -> Mat {
        let entries = self.entries.iter().map(|&a| self.ctx.mul(a, s)).collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.ctx.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch("hstack".into()));
        }
        let mut out = Mat::zero(self.ctx.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Row-reduces in place; returns the pivot columns. First non-zero
    /// pivot in column order, rows swapped downward only.
    fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.ctx.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let piv = (row..self.rows).find(|&r| self.get(r, col) != 0);
            let Some(piv) = piv else { continue };
            if piv != row {
                for j in 0..self.cols {
                    let a = self.get(row, j);
                    let b = self.get(piv, j);
                    self.set(row, j, b);
                    self.set(piv, j, a);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is non-zero");
            for j in 0..self.cols {
                self.set(row, j, f.mul(self.get(row, j), inv));
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for j in 0..self.cols {
                        let v = f.sub(self.get(r, j), f.mul(factor, self.get(row, j)));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce().len()
    }

    pub fn det(&self) -> Result<u16, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let f = self.ctx.clone();
        let mut work = self.clone();
        let n = self.rows;
        let mut det = 1u16;
        for col in 0..n {
            let piv = (col..n).find(|&r| work.get(r, col) != 0);
            let Some(piv) = piv else { return Ok(0) };
            if piv != col {
                for j in 0..n {
                    let a = work.get(col, j);
                    let b = work.get(piv, j);
                    work.set(col, j, b);
                    work.set(piv, j, a);
                }
                det = f.neg(det);
            }
            let pv = work.get(col, col);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is non-zero");
            for r in col + 1..n {
                let factor = f.mul(work.get(r, col), inv);
                if factor != 0 {
                    for j in col..n {
                        let v = f.sub(work.get(r, j), f.mul(factor, work.get(col, j)));
                        work.set(r, j, v);
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut work = self.hstack(&Mat::identity(self.ctx.clone(), n))?;
        let pivots = work.row_reduce();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(LinalgError::Singular);
        }
        let mut out = Mat::zero(self.ctx.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, work.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Basis of the right kernel, returned as columns. The basis is the
    /// deterministic one read off the reduced row echelon form, free
    /// variables taken in increasing column order.
    pub fn kernel_basis(&self) -> Mat {
        let f = self.ctx.clone();
        let mut work = self.clone();
        let pivots = work.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols: Vec<Vec<u16>> = Vec::with_capacity(free.len());
        for &fv in &free {
            let mut v = vec![0u16; self.cols];
            v[fv] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work.get(r, fv));
            }
            cols.push(v);
        }
        Mat::from_cols(self.ctx.clone(), &cols)
    }

    pub fn nz_columns(&self) -> usize {
        (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| self.get(i, j) != 0))
            .count()
    }

    /// Canonical form of the column span: the unique column-reduced
    /// echelon basis. Two matrices span the same subspace iff their
    /// canonical forms are equal.
    pub fn column_span_canonical(&self) -> Mat {
        let mut t = self.transpose();
        t.row_reduce();
        let rank = (0..t.rows)
            .filter(|&r| (0..t.cols).any(|c| t.get(r, c) != 0))
            .count();
        let mut out = Mat::zero(self.ctx.clone(), self.rows, rank);
        for r in 0..rank {
            for c in 0..t.cols {
                out.set(c, r, t.get(r, c));
            }
        }
        out
    }

    /// Whether the column vector v lies in the column span.
    pub fn span_contains(&self, v: &[u16]) -> bool {
        let vm = Mat::from_cols(self.ctx.clone(), &[v.to_vec()]);
        let combined = self.hstack(&vm).expect("same height");
        combined.rank() == self.rank()
    }
}

/// Scales a non-zero vector so its first non-zero coordinate is 1; the
/// canonical representative of a projective point.
pub fn normalize_direction(ctx: &FieldCtx, v: &[u16]) -> Vec<u16> {
    let lead = v.iter().copied().find(|&x| x != 0).expect("non-zero vector");
    let inv = ctx.inv(lead).expect("non-zero");
    v.iter().map(|&x| ctx.mul(x, inv)).collect()
}
