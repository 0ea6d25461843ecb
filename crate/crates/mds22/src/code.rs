//! The `(n, n-2, 2)` array-code object: n parity-check blocks of shape
//! 4x2 over a common field, with the MDS property meaning every pairwise
//! 4x4 concatenation `[H_i | H_j]` is invertible.
//!
//! Blocks are stored exactly as given; nothing is normalized implicitly.
//! The JSON interchange format is
//!
//! ```json
//! {"p": 3, "m": 2, "modulus": [1, 0, 1], "n": 9,
//!  "blocks": [[[1, 0], [0, 1], [1, 0], [6, 7]], ...],
//!  "columns": [[[1, 0, 1, 6], [0, 1, 0, 7]], ...]}
//! ```
//!
//! where field elements are base-p digit integers (see [`crate::gf`]),
//! the modulus is listed constant term first, each block is 4 rows of 2
//! entries, and the optional `columns` field carries the projective
//! column directions some constructions designate.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldCtx, GfError};
use crate::linalg::{normalize_direction, LinalgError, Mat};

pub const BLOCK_ROWS: usize = 4;
pub const BLOCK_COLS: usize = 2;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("block {0} does not have rank 2")]
    BlockRankDeficient(usize),
    #[error("a code needs at least 3 blocks, got {0}")]
    TooShort(usize),
    #[error("block {0} has the wrong shape")]
    ShapeError(usize),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("blocks belong to different fields")]
    FieldMismatch,
    #[error("transform matrix is singular")]
    Singular,
    #[error("code is not MDS (violating pair {0}, {1})")]
    NotMds(usize, usize),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An (n, n-2, 2) array code given by its parity-check blocks H_1..H_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayCode {
    ctx: Arc<FieldCtx>,
    blocks: Vec<Mat>,
}

/// Canonicalized projective directions of the two columns of each block.
pub type ColumnTags = Vec<[Vec<u16>; 2]>;

impl ArrayCode {
    pub fn new(ctx: Arc<FieldCtx>, blocks: Vec<Mat>) -> Result<ArrayCode, CodeError> {
        if blocks.len() < 3 {
            return Err(CodeError::TooShort(blocks.len()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.rows() != BLOCK_ROWS || b.cols() != BLOCK_COLS {
                return Err(CodeError::ShapeError(i));
            }
            if **b.ctx() != *ctx {
                return Err(CodeError::FieldMismatch);
            }
            if b.rank() != BLOCK_COLS {
                return Err(CodeError::BlockRankDeficient(i));
            }
        }
        Ok(ArrayCode { ctx, blocks })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.blocks.len()
    }
    pub fn block(&self, i: usize) -> &Mat {
        &self.blocks[i]
    }
    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    /// The smallest pair (i, j), i < j, with `[H_i | H_j]` singular.
    pub fn mds_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let stacked = self.blocks[i].hstack(&self.blocks[j]).expect("same field");
                if stacked.det().expect("square") == 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_mds(&self) -> bool {
        self.mds_violation().is_none()
    }

    /// Replaces each block H_i by U * H_i * V_i.
    pub fn transform(&self, u: &Mat, vs: &[Mat]) -> Result<ArrayCode, CodeError> {
        if vs.len() != self.n() {
            return Err(CodeError::ShapeError(vs.len()));
        }
        if !u.is_invertible() || vs.iter().any(|v| !v.is_invertible()) {
            return Err(CodeError::Singular);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(vs)
            .map(|(h, v)| u.mul(h)?.mul(v).map_err(CodeError::from))
            .collect::<Result<Vec<_>, _>>()?;
        ArrayCode::new(self.ctx.clone(), blocks)
    }

    /// Removes block i; MDS is preserved since the remaining family is a
    /// subfamily.
    pub fn puncture(&self, i: usize) -> Result<ArrayCode, CodeError> {
        if i >= self.n() {
            return Err(CodeError::IndexOutOfRange(i));
        }
        if self.n() <= 3 {
            return Err(CodeError::TooShort(self.n() - 1));
        }
        let mut blocks = self.blocks.clone();
        blocks.remove(i);
        ArrayCode::new(self.ctx.clone(), blocks)
    }

    /// Row-operates the whole parity-check matrix by `[H_{n-1} | H_n]^{-1}`
    /// so the last two blocks become `[I;0]` and `[0;I]`. Requires MDS.
    pub fn to_systematic(&self) -> Result<ArrayCode, CodeError> {
        if let Some((i, j)) = self.mds_violation() {
            return Err(CodeError::NotMds(i, j));
        }
        let n = self.n();
        let u = self.blocks[n - 2].hstack(&self.blocks[n - 1])?.inverse()?;
        let blocks = self
            .blocks
            .iter()
            .map(|h| u.mul(h).map_err(CodeError::from))
            .collect::<Result<Vec<_>, _>>()?;
        ArrayCode::new(self.ctx.clone(), blocks)
    }

    /// The projective directions of each block's two columns, scaled so
    /// the first non-zero coordinate is 1.
    pub fn column_tags(&self) -> ColumnTags {
        self.blocks
            .iter()
            .map(|b| {
                [
                    normalize_direction(&self.ctx, &b.col(0)),
                    normalize_direction(&self.ctx, &b.col(1)),
                ]
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        self.to_json_with_tags(None)
    }

    pub fn to_json_with_tags(&self, tags: Option<&ColumnTags>) -> String {
        let file = CodeFile {
            p: self.ctx.p(),
            m: self.ctx.m(),
            modulus: self.ctx.modulus().to_vec(),
            n: self.n(),
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    (0..BLOCK_ROWS)
                        .map(|r| (0..BLOCK_COLS).map(|c| b.get(r, c)).collect())
                        .collect()
                })
                .collect(),
            columns: tags.map(|t| t.iter().map(|[a, b]| vec![a.clone(), b.clone()]).collect()),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<(ArrayCode, Option<ColumnTags>), CodeError> {
        let file: CodeFile =
            serde_json::from_str(text).map_err(|e| CodeError::ParseError(e.to_string()))?;
        let ctx = Arc::new(FieldCtx::new(file.p, file.m, Some(file.modulus))?);
        if file.blocks.len() != file.n {
            return Err(CodeError::ParseError(format!(
                "header says n={}, found {} blocks",
                file.n,
                file.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(file.n);
        for (i, rows) in file.blocks.iter().enumerate() {
            if rows.len() != BLOCK_ROWS || rows.iter().any(|r| r.len() != BLOCK_COLS) {
                return Err(CodeError::ShapeError(i));
            }
            let entries: Vec<u16> = rows.iter().flatten().copied().collect();
            blocks.push(
                Mat::new(ctx.clone(), BLOCK_ROWS, BLOCK_COLS, entries)
                    .map_err(|_| CodeError::ShapeError(i))?,
            );
        }
        let tags = match file.columns {
            Some(cols) => {
                if cols.len() != file.n {
                    return Err(CodeError::ParseError("columns length != n".into()));
                }
                let mut tags: ColumnTags = Vec::with_capacity(cols.len());
                for c in cols {
                    let [a, b]: [Vec<u16>; 2] = c
                        .try_into()
                        .map_err(|_| CodeError::ParseError("each columns entry needs 2 directions".into()))?;
                    if a.len() != BLOCK_ROWS || b.len() != BLOCK_ROWS {
                        return Err(CodeError::ParseError("column direction needs 4 coordinates".into()));
                    }
                    tags.push([a, b]);
                }
                Some(tags)
            }
            None => None,
        };
        Ok((ArrayCode::new(ctx, blocks)?, tags))
    }
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    p: u32,
    m: u32,
    modulus: Vec<u16>,
    n: usize,
    blocks: Vec<Vec<Vec<u16>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<Vec<Vec<Vec<u16>>>>,
}
