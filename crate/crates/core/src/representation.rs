//! Unital *-homomorphisms π: A → M_m(B) between multi-matrix algebras.
//!
//! A representation is stored through the images of the matrix-unit basis
//! of A, so applying it to an element is a linear combination of module
//! maps. The entrywise extension π_*: M_n(A) → M_{nm}(B) implements the
//! canonical homomorphism L(A^n) → L(A^n ⊗_π B^m) used by the absorption
//! arguments.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Result, TcdsError};
use crate::linalg;
use crate::module::ModuleMap;
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Representation {
    domain: Arc<MultiMatrixAlgebra>,
    codomain: Arc<MultiMatrixAlgebra>,
    size: usize,
    images: Vec<ModuleMap>,
}

impl Representation {
    /// Builds a representation from the images of the matrix-unit basis
    /// of the domain, in coordinate order.
    pub fn from_basis_images(
        domain: Arc<MultiMatrixAlgebra>,
        codomain: Arc<MultiMatrixAlgebra>,
        size: usize,
        images: Vec<ModuleMap>,
    ) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(TcdsError::DimensionMismatch {
                expected: domain.dim(),
                got: images.len(),
            });
        }
        for img in &images {
            if img.algebra() != &codomain {
                return Err(TcdsError::AlgebraMismatch);
            }
            if img.rows() != size || img.cols() != size {
                return Err(TcdsError::DimensionMismatch { expected: size, got: img.rows() });
            }
        }
        Ok(Self { domain, codomain, size, images })
    }

    /// The defining representation of A = ⊕_k M_{n_k} on ℂ^{Σ n_k}.
    pub fn defining(domain: &Arc<MultiMatrixAlgebra>) -> Self {
        Self::block_diagonal(domain, &vec![1; domain.num_blocks()])
            .expect("defining multiplicities are valid")
    }

    /// Left multiplication ℓ: A → M_1(A), the trivial-module picture.
    pub fn left_regular(domain: &Arc<MultiMatrixAlgebra>) -> Self {
        let images = domain
            .basis()
            .iter()
            .map(|b| ModuleMap::from_entries(domain, &[vec![b.clone()]]).expect("1x1 map"))
            .collect();
        Self {
            domain: domain.clone(),
            codomain: domain.clone(),
            size: 1,
            images,
        }
    }

    /// Direct sum of `mult[k]` copies of the k-th block representation,
    /// acting on ℂ^{Σ mult_k·n_k}. Faithful iff every multiplicity is
    /// positive; `mult` must give a positive total dimension.
    pub fn block_diagonal(domain: &Arc<MultiMatrixAlgebra>, mult: &[usize]) -> Result<Self> {
        if mult.len() != domain.num_blocks() {
            return Err(TcdsError::DimensionMismatch {
                expected: domain.num_blocks(),
                got: mult.len(),
            });
        }
        let size: usize =
            mult.iter().zip(domain.block_dims()).map(|(&m, &n)| m * n).sum();
        if size == 0 {
            return Err(TcdsError::BadBuilder("representation needs positive dimension".into()));
        }
        let scalars = MultiMatrixAlgebra::scalars();
        let mut images = Vec::with_capacity(domain.dim());
        for b in domain.basis() {
            let mut big = linalg::CMat::zeros(size, size);
            let mut offset = 0;
            for (k, (&m, &n)) in mult.iter().zip(domain.block_dims()).enumerate() {
                for _ in 0..m {
                    big.view_mut((offset, offset), (n, n)).copy_from(b.block(k));
                    offset += n;
                }
            }
            let entries: Vec<Vec<AlgebraElement>> = (0..size)
                .map(|i| {
                    (0..size)
                        .map(|j| scalars.scalar(big[(i, j)]))
                        .collect()
                })
                .collect();
            images.push(ModuleMap::from_entries(&scalars, &entries)?);
        }
        Ok(Self { domain: domain.clone(), codomain: scalars, size, images })
    }

    /// Conjugates the representation by a unitary module map.
    pub fn conjugate(&self, u: &ModuleMap) -> Result<Self> {
        if u.algebra() != &self.codomain || u.rows() != self.size || u.cols() != self.size {
            return Err(TcdsError::ShapeMismatch("conjugator shape mismatch".into()));
        }
        let residual = u.unitarity_residual();
        if residual > 1e-10 {
            return Err(TcdsError::NotUnitary { residual, context: "conjugator".into() });
        }
        let ua = u.adjoint();
        let images = self.images.iter().map(|m| u.compose(m).compose(&ua)).collect();
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            size: self.size,
            images,
        })
    }

    /// A Haar-conjugated block-diagonal representation over ℂ.
    pub fn random<R: Rng>(
        domain: &Arc<MultiMatrixAlgebra>,
        mult: &[usize],
        rng: &mut R,
    ) -> Result<Self> {
        let base = Self::block_diagonal(domain, mult)?;
        let scalars = base.codomain.clone();
        let u_mat = linalg::random_unitary(rng, base.size);
        let entries: Vec<Vec<AlgebraElement>> = (0..base.size)
            .map(|i| (0..base.size).map(|j| scalars.scalar(u_mat[(i, j)])).collect())
            .collect();
        let u = ModuleMap::from_entries(&scalars, &entries)?;
        base.conjugate(&u)
    }

    pub fn domain(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.codomain
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, a: &AlgebraElement) -> ModuleMap {
        assert_eq!(a.algebra(), &self.domain, "element not in the domain");
        let mut out = ModuleMap::zeros(&self.codomain, self.size, self.size);
        for (c, img) in a.coordinates().iter().zip(&self.images) {
            if c.norm() != 0.0 {
                out = &out + &img.scale(*c);
            }
        }
        out
    }

    /// Entrywise extension to matrices over the domain: a module map
    /// T ∈ M_{r×c}(A) becomes π_*(T) ∈ M_{rm×cm}(B) with cell (i,j) equal
    /// to π(T_ij).
    pub fn apply_map(&self, t: &ModuleMap) -> ModuleMap {
        assert_eq!(t.algebra(), &self.domain, "map not over the domain");
        let grid: Vec<Vec<ModuleMap>> = (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| self.apply(&t.entry(i, j))).collect())
            .collect();
        ModuleMap::from_block_grid(&grid).expect("grid cells share shape")
    }

    /// Worst residual of unitality, multiplicativity and star-compatibility
    /// over the matrix-unit basis.
    pub fn homomorphism_residual(&self) -> f64 {
        let basis = self.domain.basis();
        let id = ModuleMap::identity(&self.codomain, self.size);
        let mut worst = (&self.apply(&self.domain.one()) - &id).norm();
        for a in &basis {
            worst = worst.max((&self.apply(&a.adjoint()) - &self.apply(a).adjoint()).norm());
            for b in &basis {
                let lhs = self.apply(&(a * b));
                let rhs = self.apply(a).compose(&self.apply(b));
                worst = worst.max((&lhs - &rhs).norm());
            }
        }
        worst
    }

    /// Rank of the coordinate matrix of π; injective iff it equals dim A.
    pub fn is_injective(&self, tol: f64) -> bool {
        let dim = self.domain.dim();
        let cols: Vec<Vec<Complex64>> = self.images.iter().map(ModuleMap::flatten).collect();
        let rows = cols[0].len();
        let m = linalg::CMat::from_fn(rows, dim, |i, j| cols[j][i]);
        linalg::rank(&m, tol) == dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn test_algebra() -> Arc<MultiMatrixAlgebra> {
        MultiMatrixAlgebra::new("M2+C", vec![2, 1]).unwrap()
    }

    #[test]
    fn defining_representation_is_a_faithful_homomorphism() {
        let a = test_algebra();
        let pi = Representation::defining(&a);
        assert_eq!(pi.size(), 3);
        assert!(pi.homomorphism_residual() < 1e-12);
        assert!(pi.is_injective(1e-8));
        // norm preservation: the defining representation is isometric
        let mut rng = ChaCha20Rng::seed_from_u64(40);
        let x = a.random_element(&mut rng);
        assert!((pi.apply(&x).norm() - x.norm()).abs() < 1e-10);
    }

    #[test]
    fn left_regular_representation_multiplies_on_the_left() {
        let a = test_algebra();
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let ell = Representation::left_regular(&a);
        let x = a.random_element(&mut rng);
        assert!((&ell.apply(&x).entry(0, 0) - &x).norm() < 1e-13);
        assert!(ell.homomorphism_residual() < 1e-12);
        assert!(ell.is_injective(1e-8));
    }

    #[test]
    fn random_representation_validates_and_faithfulness_tracks_multiplicities() {
        let a = test_algebra();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let faithful = Representation::random(&a, &[2, 1], &mut rng).unwrap();
        assert!(faithful.homomorphism_residual() < 1e-10);
        assert!(faithful.is_injective(1e-8));
        assert_eq!(faithful.size(), 5);
        let lossy = Representation::random(&a, &[0, 2], &mut rng).unwrap();
        assert!(lossy.homomorphism_residual() < 1e-10);
        assert!(!lossy.is_injective(1e-8));
    }

    #[test]
    fn entrywise_extension_is_multiplicative() {
        let a = test_algebra();
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let pi = Representation::random(&a, &[1, 1], &mut rng).unwrap();
        let entries1: Vec<Vec<AlgebraElement>> = (0..2)
            .map(|_| (0..2).map(|_| a.random_element(&mut rng)).collect())
            .collect();
        let entries2: Vec<Vec<AlgebraElement>> = (0..2)
            .map(|_| (0..2).map(|_| a.random_element(&mut rng)).collect())
            .collect();
        let t1 = ModuleMap::from_entries(&a, &entries1).unwrap();
        let t2 = ModuleMap::from_entries(&a, &entries2).unwrap();
        let lhs = pi.apply_map(&t1.compose(&t2));
        let rhs = pi.apply_map(&t1).compose(&pi.apply_map(&t2));
        assert!((&lhs - &rhs).norm() < 1e-10);
        // and star-compatible
        assert!((&pi.apply_map(&t1.adjoint()) - &pi.apply_map(&t1).adjoint()).norm() < 1e-11);
    }
}
