//! Finite-dimensional C*-algebras A = ⊕_k M_{n_k}(ℂ) and their elements.
//!
//! An element is stored block by block; the C*-norm is the largest block
//! operator norm. Coordinates flatten the blocks row-major in block order,
//! which fixes the basis used for linear-map representations of maps on A.

use crate::error::{Result, TcdsError};
use crate::linalg::{self, CMat};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiMatrixAlgebra {
    name: String,
    block_dims: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(name: impl Into<String>, block_dims: Vec<usize>) -> Result<Arc<Self>> {
        if block_dims.is_empty() || block_dims.iter().any(|&n| n == 0) {
            return Err(TcdsError::BadBuilder("algebra needs positive block dimensions".into()));
        }
        Ok(Arc::new(Self { name: name.into(), block_dims }))
    }

    pub fn scalars() -> Arc<Self> {
        Self::new("C", vec![1]).expect("scalar algebra")
    }

    pub fn full_matrix(n: usize) -> Arc<Self> {
        Self::new(format!("M{n}"), vec![n]).expect("matrix algebra")
    }

    pub fn direct_sum_of_scalars(copies: usize) -> Arc<Self> {
        Self::new(format!("C^{copies}"), vec![1; copies]).expect("diagonal algebra")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Linear dimension Σ_k n_k².
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Dimension of the defining representation space, Σ_k n_k.
    pub fn defining_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        let blocks = self.block_dims.iter().map(|&n| CMat::zeros(n, n)).collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        let blocks = self.block_dims.iter().map(|&n| linalg::identity(n)).collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    pub fn scalar(self: &Arc<Self>, c: Complex64) -> AlgebraElement {
        self.one().scale(c)
    }

    pub fn from_blocks(self: &Arc<Self>, blocks: Vec<CMat>) -> Result<AlgebraElement> {
        if blocks.len() != self.num_blocks() {
            return Err(TcdsError::DimensionMismatch {
                expected: self.num_blocks(),
                got: blocks.len(),
            });
        }
        for (b, &n) in blocks.iter().zip(&self.block_dims) {
            if b.nrows() != n || b.ncols() != n {
                return Err(TcdsError::DimensionMismatch { expected: n, got: b.nrows() });
            }
        }
        Ok(AlgebraElement { algebra: self.clone(), blocks })
    }

    /// Matrix-unit basis in coordinate order: block k, entry (i, j).
    pub fn basis(self: &Arc<Self>) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.block_dims.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let mut e = self.zero();
                    e.blocks[k][(i, j)] = Complex64::new(1.0, 0.0);
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn from_coordinates(self: &Arc<Self>, coords: &[Complex64]) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(TcdsError::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        let mut e = self.zero();
        let mut pos = 0;
        for (k, &n) in self.block_dims.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    e.blocks[k][(i, j)] = coords[pos];
                    pos += 1;
                }
            }
        }
        Ok(e)
    }

    /// Minimal central projection supported on block k.
    pub fn central_projection(self: &Arc<Self>, k: usize) -> AlgebraElement {
        let mut e = self.zero();
        let n = self.block_dims[k];
        e.blocks[k] = linalg::identity(n);
        e
    }

    /// Center dimension equals the number of blocks.
    pub fn center_dim(&self) -> usize {
        self.num_blocks()
    }

    pub fn random_element<R: Rng>(self: &Arc<Self>, rng: &mut R) -> AlgebraElement {
        let blocks = self
            .block_dims
            .iter()
            .map(|&n| linalg::random_complex_matrix(rng, n, n))
            .collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    pub fn random_hermitian<R: Rng>(self: &Arc<Self>, rng: &mut R) -> AlgebraElement {
        let a = self.random_element(rng);
        (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    pub fn random_unitary<R: Rng>(self: &Arc<Self>, rng: &mut R) -> AlgebraElement {
        let blocks = self.block_dims.iter().map(|&n| linalg::random_unitary(rng, n)).collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }
}

#[derive(Clone, PartialEq)]
pub struct AlgebraElement {
    algebra: Arc<MultiMatrixAlgebra>,
    blocks: Vec<CMat>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement[{}]{:?}", self.algebra.name(), self.blocks)
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut CMat {
        &mut self.blocks[k]
    }

    pub fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(TcdsError::AlgebraMismatch)
        }
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|x| x * c)).collect(),
        }
    }

    pub fn coordinates(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.push(b[(i, j)]);
                }
            }
        }
        out
    }

    /// Unnormalized trace Σ_k Tr(a_k).
    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.diagonal().sum()).sum()
    }

    /// The canonical tracial state: trace in the defining representation
    /// divided by its dimension.
    pub fn normalized_trace(&self) -> Complex64 {
        self.trace() / Complex64::new(self.algebra.defining_dim() as f64, 0.0)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).norm()
    }

    pub fn unitarity_residual(&self) -> f64 {
        let u_star_u = &self.adjoint() * self;
        let u_u_star = self * &self.adjoint();
        let one = self.algebra.one();
        (&u_star_u - &one).norm().max((&u_u_star - &one).norm())
    }

    /// Least Hermitian eigenvalue across blocks; ≥ −tol certifies positivity.
    pub fn min_spectrum(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_central(&self, tol: f64) -> bool {
        self.algebra
            .basis()
            .iter()
            .all(|b| (&(self * b) - &(b * self)).norm() <= tol)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Blockwise inverse; errors when any block is singular.
    pub fn inverse(&self) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let inv = b
                .clone()
                .try_inverse()
                .ok_or_else(|| TcdsError::ShapeMismatch("singular block has no inverse".into()))?;
            blocks.push(inv);
        }
        Ok(Self { algebra: self.algebra.clone(), blocks })
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in *");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
