//! Free Hilbert modules A^n over a multi-matrix algebra and their
//! adjointable operators.
//!
//! Since A = ⊕_k M_{n_k}(ℂ), the matrix algebra M_r×c(A) embeds exactly as
//! ⊕_k M_{r·n_k × c·n_k}(ℂ); a module map is stored directly in that
//! embedded form, one complex matrix per block of A, so composition,
//! adjoints, norms and spectra reduce to plain dense linear algebra with no
//! approximation. A module vector ξ ∈ A^n is the corresponding tall block
//! column, blocks[k] of shape (n·n_k) × n_k.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Result, TcdsError};
use crate::linalg::{self, CMat};
use num_complex::Complex64;
use rand::Rng;
use std::ops::{Add, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    algebra: Arc<MultiMatrixAlgebra>,
    rank: usize,
    blocks: Vec<CMat>,
}

impl ModuleVector {
    pub fn zeros(algebra: &Arc<MultiMatrixAlgebra>, rank: usize) -> Self {
        let blocks = algebra.block_dims().iter().map(|&n| CMat::zeros(rank * n, n)).collect();
        Self { algebra: algebra.clone(), rank, blocks }
    }

    pub fn from_entries(entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(TcdsError::ShapeMismatch("module vector needs at least one entry".into()));
        }
        let algebra = entries[0].algebra().clone();
        for e in &entries {
            if e.algebra() != &algebra {
                return Err(TcdsError::AlgebraMismatch);
            }
        }
        let rank = entries.len();
        let mut v = Self::zeros(&algebra, rank);
        for (i, e) in entries.iter().enumerate() {
            for (k, &n) in algebra.block_dims().iter().enumerate() {
                v.blocks[k].view_mut((i * n, 0), (n, n)).copy_from(e.block(k));
            }
        }
        Ok(v)
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize) -> AlgebraElement {
        let blocks = self
            .algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| self.blocks[k].view((i * n, 0), (n, n)).into_owned())
            .collect();
        self.algebra.from_blocks(blocks).expect("entry shape is valid by construction")
    }

    pub fn entries(&self) -> Vec<AlgebraElement> {
        (0..self.rank).map(|i| self.entry(i)).collect()
    }

    pub fn random<R: Rng>(algebra: &Arc<MultiMatrixAlgebra>, rank: usize, rng: &mut R) -> Self {
        let entries = (0..rank).map(|_| algebra.random_element(rng)).collect();
        Self::from_entries(entries).expect("random entries share the algebra")
    }

    /// A-valued inner product ⟨ξ,η⟩ = Σ_i ξ_i* η_i, conjugate-linear in ξ.
    pub fn inner(&self, other: &Self) -> AlgebraElement {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch in inner product");
        assert_eq!(self.rank, other.rank, "rank mismatch in inner product");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.adjoint() * b)
            .collect();
        self.algebra.from_blocks(blocks).expect("inner product shape")
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).norm().sqrt()
    }

    /// Right action (ξ·a)_i = ξ_i a.
    pub fn right_mul(&self, a: &AlgebraElement) -> Self {
        assert_eq!(a.algebra(), &self.algebra, "algebra mismatch in right action");
        let blocks =
            self.blocks.iter().zip(a.blocks()).map(|(v, b)| v * b).collect();
        Self { algebra: self.algebra.clone(), rank: self.rank, blocks }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            rank: self.rank,
            blocks: self.blocks.iter().map(|b| b.map(|x| x * c)).collect(),
        }
    }

    /// Rank-one operator θ_{ξ,η}: ζ ↦ ξ ⟨η, ζ⟩.
    pub fn outer(&self, other: &Self) -> ModuleMap {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch in outer product");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a * b.adjoint())
            .collect();
        ModuleMap { algebra: self.algebra.clone(), rows: self.rank, cols: other.rank, blocks }
    }
}

impl Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        assert_eq!(self.rank, rhs.rank, "rank mismatch in +");
        ModuleVector {
            algebra: self.algebra.clone(),
            rank: self.rank,
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        assert_eq!(self.rank, rhs.rank, "rank mismatch in -");
        ModuleVector {
            algebra: self.algebra.clone(),
            rank: self.rank,
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect(),
        }
    }
}

/// An adjointable operator in M_{rows×cols}(A), acting A^cols → A^rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    algebra: Arc<MultiMatrixAlgebra>,
    rows: usize,
    cols: usize,
    blocks: Vec<CMat>,
}

impl ModuleMap {
    pub fn zeros(algebra: &Arc<MultiMatrixAlgebra>, rows: usize, cols: usize) -> Self {
        let blocks =
            algebra.block_dims().iter().map(|&n| CMat::zeros(rows * n, cols * n)).collect();
        Self { algebra: algebra.clone(), rows, cols, blocks }
    }

    pub fn identity(algebra: &Arc<MultiMatrixAlgebra>, n: usize) -> Self {
        let blocks = algebra.block_dims().iter().map(|&nk| linalg::identity(n * nk)).collect();
        Self { algebra: algebra.clone(), rows: n, cols: n, blocks }
    }

    pub fn from_entries(
        algebra: &Arc<MultiMatrixAlgebra>,
        entries: &[Vec<AlgebraElement>],
    ) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 {
            return Err(TcdsError::ShapeMismatch("module map needs at least one row".into()));
        }
        let cols = entries[0].len();
        if cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(TcdsError::ShapeMismatch("ragged module map rows".into()));
        }
        let mut m = Self::zeros(algebra, rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.algebra() != algebra {
                    return Err(TcdsError::AlgebraMismatch);
                }
                for (k, &n) in algebra.block_dims().iter().enumerate() {
                    m.blocks[k].view_mut((i * n, j * n), (n, n)).copy_from(e.block(k));
                }
            }
        }
        Ok(m)
    }

    /// Diagonal operator with the given entries.
    pub fn diagonal(entries: &[AlgebraElement]) -> Result<Self> {
        if entries.is_empty() {
            return Err(TcdsError::ShapeMismatch("diagonal needs at least one entry".into()));
        }
        let algebra = entries[0].algebra().clone();
        let n = entries.len();
        let mut m = Self::zeros(&algebra, n, n);
        for (i, e) in entries.iter().enumerate() {
            if e.algebra() != &algebra {
                return Err(TcdsError::AlgebraMismatch);
            }
            m.set_entry(i, i, e);
        }
        Ok(m)
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn entry(&self, i: usize, j: usize) -> AlgebraElement {
        let blocks = self
            .algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| self.blocks[k].view((i * n, j * n), (n, n)).into_owned())
            .collect();
        self.algebra.from_blocks(blocks).expect("entry shape is valid by construction")
    }

    pub fn set_entry(&mut self, i: usize, j: usize, e: &AlgebraElement) {
        assert_eq!(e.algebra(), &self.algebra, "algebra mismatch in set_entry");
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            self.blocks[k].view_mut((i * n, j * n), (n, n)).copy_from(e.block(k));
        }
    }

    pub fn apply(&self, v: &ModuleVector) -> ModuleVector {
        assert_eq!(self.algebra, v.algebra, "algebra mismatch in apply");
        assert_eq!(self.cols, v.rank, "shape mismatch in apply");
        ModuleVector {
            algebra: self.algebra.clone(),
            rank: self.rows,
            blocks: self.blocks.iter().zip(&v.blocks).map(|(m, b)| m * b).collect(),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in compose");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in compose");
        Self {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: rhs.cols,
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            rows: self.cols,
            cols: self.rows,
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self.blocks.iter().map(|b| b.map(|x| x * c)).collect(),
        }
    }

    /// Operator norm: largest block spectral norm of the exact embedding.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Trace of the embedded complex matrix (square maps only).
    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace of a non-square map");
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// Independent route to the same norm: √‖T*T‖ with ‖T*T‖ read off the
    /// Hermitian spectrum instead of singular values.
    pub fn norm_via_gram(&self) -> f64 {
        let gram = self.adjoint().compose(self);
        gram.blocks
            .iter()
            .map(|b| {
                linalg::hermitian_eigenvalues(b).last().cloned().unwrap_or(0.0).max(0.0)
            })
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Least Hermitian eigenvalue across blocks.
    pub fn min_spectrum(&self) -> f64 {
        self.blocks.iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).norm()
    }

    pub fn unitarity_residual(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "unitarity needs a square map");
        let id = Self::identity(&self.algebra, self.rows);
        (&self.adjoint().compose(self) - &id)
            .norm()
            .max((&self.compose(&self.adjoint()) - &id).norm())
    }

    /// All embedded entries as one flat coordinate vector, used to compute
    /// ranks of linear maps into this operator space.
    pub fn flatten(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.push(b[(i, j)]);
                }
            }
        }
        out
    }

    /// Assembles a larger map from a grid of equally-sized cells.
    pub fn from_block_grid(grid: &[Vec<ModuleMap>]) -> Result<Self> {
        let grows = grid.len();
        if grows == 0 || grid[0].is_empty() {
            return Err(TcdsError::ShapeMismatch("empty block grid".into()));
        }
        let gcols = grid[0].len();
        let cell = &grid[0][0];
        let algebra = cell.algebra.clone();
        let (cr, cc) = (cell.rows, cell.cols);
        for row in grid {
            if row.len() != gcols {
                return Err(TcdsError::ShapeMismatch("ragged block grid".into()));
            }
            for c in row {
                if c.algebra != algebra || c.rows != cr || c.cols != cc {
                    return Err(TcdsError::ShapeMismatch("block grid cells disagree".into()));
                }
            }
        }
        let mut out = Self::zeros(&algebra, grows * cr, gcols * cc);
        for (bi, row) in grid.iter().enumerate() {
            for (bj, c) in row.iter().enumerate() {
                for (k, &n) in algebra.block_dims().iter().enumerate() {
                    out.blocks[k]
                        .view_mut((bi * cr * n, bj * cc * n), (cr * n, cc * n))
                        .copy_from(&c.blocks[k]);
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(cells: &[ModuleMap]) -> Result<Self> {
        if cells.is_empty() {
            return Err(TcdsError::ShapeMismatch("empty block diagonal".into()));
        }
        let algebra = cells[0].algebra.clone();
        let zero = Self::zeros(&algebra, cells[0].rows, cells[0].cols);
        let grid: Vec<Vec<ModuleMap>> = (0..cells.len())
            .map(|i| {
                (0..cells.len())
                    .map(|j| if i == j { cells[i].clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Self::from_block_grid(&grid)
    }

    fn check_diag_cells(cells: &[ModuleMap], algebra: &Arc<MultiMatrixAlgebra>, span: usize) -> Result<()> {
        let mut total = 0;
        for c in cells {
            if &c.algebra != algebra {
                return Err(TcdsError::AlgebraMismatch);
            }
            if c.rows != c.cols {
                return Err(TcdsError::ShapeMismatch("diagonal cells must be square".into()));
            }
            total += c.rows;
        }
        if total != span {
            return Err(TcdsError::DimensionMismatch { expected: span, got: total });
        }
        Ok(())
    }

    /// diag(cells) ∘ dense, multiplying chunk rows in place of the full
    /// square so a block-diagonal factor costs what its blocks cost.
    pub fn diag_compose(cells: &[ModuleMap], dense: &ModuleMap) -> Result<Self> {
        Self::check_diag_cells(cells, &dense.algebra, dense.rows)?;
        let mut out = Self::zeros(&dense.algebra, dense.rows, dense.cols);
        for (k, &n) in dense.algebra.block_dims().iter().enumerate() {
            let mut offset = 0;
            for c in cells {
                let span = c.rows * n;
                let product = &c.blocks[k] * dense.blocks[k].rows(offset, span);
                out.blocks[k].rows_mut(offset, span).copy_from(&product);
                offset += span;
            }
        }
        Ok(out)
    }

    /// dense ∘ diag(cells), the column-chunk mirror of [`Self::diag_compose`].
    pub fn compose_diag(dense: &ModuleMap, cells: &[ModuleMap]) -> Result<Self> {
        Self::check_diag_cells(cells, &dense.algebra, dense.cols)?;
        let mut out = Self::zeros(&dense.algebra, dense.rows, dense.cols);
        for (k, &n) in dense.algebra.block_dims().iter().enumerate() {
            let mut offset = 0;
            for c in cells {
                let span = c.cols * n;
                let product = dense.blocks[k].columns(offset, span) * &c.blocks[k];
                out.blocks[k].columns_mut(offset, span).copy_from(&product);
                offset += span;
            }
        }
        Ok(out)
    }
}

impl Add for &ModuleMap {
    type Output = ModuleMap;
    fn add(self, rhs: &ModuleMap) -> ModuleMap {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in +");
        ModuleMap {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ModuleMap {
    type Output = ModuleMap;
    fn sub(self, rhs: &ModuleMap) -> ModuleMap {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in -");
        ModuleMap {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect(),
        }
    }
}
