//! *-automorphisms of a multi-matrix algebra in canonical form.
//!
//! Every *-automorphism of ⊕_k M_{n_k} factors as α = Ad(U) ∘ P where P
//! permutes blocks of equal dimension and U is unitary:
//!     α(a)_k = U_k · a_{p[k]} · U_k*.
//! Storing (p, U) instead of a dim×dim linear map keeps composition and
//! inversion exact and guarantees multiplicativity by construction.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Result, TcdsError};
use std::sync::Arc;

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    algebra: Arc<MultiMatrixAlgebra>,
    /// Target block k is fed from source block block_perm[k].
    block_perm: Vec<usize>,
    unitary: AlgebraElement,
}

impl Automorphism {
    pub fn new(
        algebra: Arc<MultiMatrixAlgebra>,
        block_perm: Vec<usize>,
        unitary: AlgebraElement,
    ) -> Result<Self> {
        let dims = algebra.block_dims();
        if block_perm.len() != dims.len() {
            return Err(TcdsError::NotAutomorphism("block permutation length mismatch".into()));
        }
        let mut seen = vec![false; dims.len()];
        for (k, &src) in block_perm.iter().enumerate() {
            if src >= dims.len() || seen[src] {
                return Err(TcdsError::NotAutomorphism("block map is not a permutation".into()));
            }
            seen[src] = true;
            if dims[k] != dims[src] {
                return Err(TcdsError::NotAutomorphism(format!(
                    "block {src} of dimension {} cannot map onto block {k} of dimension {}",
                    dims[src], dims[k]
                )));
            }
        }
        if unitary.algebra() != &algebra {
            return Err(TcdsError::AlgebraMismatch);
        }
        let residual = unitary.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(TcdsError::NotUnitary { residual, context: "automorphism unitary".into() });
        }
        Ok(Self { algebra, block_perm, unitary })
    }

    pub fn identity(algebra: &Arc<MultiMatrixAlgebra>) -> Self {
        Self {
            algebra: algebra.clone(),
            block_perm: (0..algebra.num_blocks()).collect(),
            unitary: algebra.one(),
        }
    }

    /// Ad(u): a ↦ u a u*.
    pub fn inner(u: AlgebraElement) -> Result<Self> {
        let algebra = u.algebra().clone();
        let perm = (0..algebra.num_blocks()).collect();
        Self::new(algebra, perm, u)
    }

    /// Pure block permutation with trivial unitary part.
    pub fn permutation(algebra: &Arc<MultiMatrixAlgebra>, block_perm: Vec<usize>) -> Result<Self> {
        Self::new(algebra.clone(), block_perm, algebra.one())
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn block_perm(&self) -> &[usize] {
        &self.block_perm
    }

    pub fn unitary(&self) -> &AlgebraElement {
        &self.unitary
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        assert_eq!(a.algebra(), &self.algebra, "algebra mismatch in automorphism");
        let mut out = self.algebra.zero();
        for k in 0..self.algebra.num_blocks() {
            let u = self.unitary.block(k);
            *out.block_mut(k) = u * a.block(self.block_perm[k]) * u.adjoint();
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch in composition");
        let n = self.algebra.num_blocks();
        let mut perm = vec![0usize; n];
        let mut unitary = self.algebra.zero();
        for k in 0..n {
            perm[k] = other.block_perm[self.block_perm[k]];
            *unitary.block_mut(k) =
                self.unitary.block(k) * other.unitary.block(self.block_perm[k]);
        }
        Self { algebra: self.algebra.clone(), block_perm: perm, unitary }
    }

    pub fn inverse(&self) -> Self {
        let n = self.algebra.num_blocks();
        let mut inv_perm = vec![0usize; n];
        for k in 0..n {
            inv_perm[self.block_perm[k]] = k;
        }
        let mut unitary = self.algebra.zero();
        for j in 0..n {
            *unitary.block_mut(j) = self.unitary.block(inv_perm[j]).adjoint();
        }
        Self { algebra: self.algebra.clone(), block_perm: inv_perm, unitary }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::identity(&self.algebra), tol)
    }

    /// Compares actions on the matrix-unit basis.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.algebra == other.algebra
            && self
                .algebra
                .basis()
                .iter()
                .all(|b| (&self.apply(b) - &other.apply(b)).norm() <= tol)
    }

    /// Largest deviation of α(a b) from α(a) α(b) and of α(a*) from α(a)*
    /// over the basis; zero up to roundoff by construction, exposed so
    /// validation suites can report it.
    pub fn homomorphism_residual(&self) -> f64 {
        let basis = self.algebra.basis();
        let mut worst: f64 = 0.0;
        for a in &basis {
            worst = worst.max((&self.apply(&a.adjoint()) - &self.apply(a).adjoint()).norm());
            for b in &basis {
                let lhs = self.apply(&(a * b));
                let rhs = &self.apply(a) * &self.apply(b);
                worst = worst.max((&lhs - &rhs).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn inner_automorphism_acts_by_conjugation() {
        let a = MultiMatrixAlgebra::full_matrix(2);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let u = a.random_unitary(&mut rng);
        let alpha = Automorphism::inner(u.clone()).unwrap();
        let x = a.random_element(&mut rng);
        let expect = &(&u * &x) * &u.adjoint();
        assert!((&alpha.apply(&x) - &expect).norm() < 1e-12);
    }

    #[test]
    fn swap_permutation_on_two_points() {
        let a = MultiMatrixAlgebra::direct_sum_of_scalars(2);
        let alpha = Automorphism::permutation(&a, vec![1, 0]).unwrap();
        let x = a
            .from_coordinates(&[Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)])
            .unwrap();
        let y = alpha.apply(&x);
        assert!((y.coordinates()[0] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        assert!((y.coordinates()[1] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(alpha.compose(&alpha).is_identity(1e-12));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = MultiMatrixAlgebra::new("M2+M2+C", vec![2, 2, 1]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let alpha = Automorphism::new(a.clone(), vec![1, 0, 2], a.random_unitary(&mut rng)).unwrap();
        let beta = Automorphism::new(a.clone(), vec![0, 1, 2], a.random_unitary(&mut rng)).unwrap();
        let composed = alpha.compose(&beta);
        for _ in 0..5 {
            let x = a.random_element(&mut rng);
            let lhs = composed.apply(&x);
            let rhs = alpha.apply(&beta.apply(&x));
            assert!((&lhs - &rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_the_action() {
        let a = MultiMatrixAlgebra::new("M2+M2", vec![2, 2]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let alpha = Automorphism::new(a.clone(), vec![1, 0], a.random_unitary(&mut rng)).unwrap();
        let inv = alpha.inverse();
        assert!(alpha.compose(&inv).is_identity(1e-12));
        assert!(inv.compose(&alpha).is_identity(1e-12));
        let x = a.random_element(&mut rng);
        assert!((&inv.apply(&alpha.apply(&x)) - &x).norm() < 1e-12);
    }

    #[test]
    fn automorphisms_preserve_star_product_and_norm() {
        let a = MultiMatrixAlgebra::new("M3+C", vec![3, 1]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let alpha = Automorphism::new(a.clone(), vec![0, 1], a.random_unitary(&mut rng)).unwrap();
        assert!(alpha.homomorphism_residual() < 1e-12);
        let x = a.random_element(&mut rng);
        assert!((alpha.apply(&x).norm() - x.norm()).abs() < 1e-10);
    }

    #[test]
    fn dimension_mismatched_permutation_is_rejected() {
        let a = MultiMatrixAlgebra::new("M2+C", vec![2, 1]).unwrap();
        match Automorphism::permutation(&a, vec![1, 0]) {
            Err(TcdsError::NotAutomorphism(_)) => {}
            other => panic!("expected NotAutomorphism, got {other:?}"),
        }
    }
}
