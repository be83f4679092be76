//! Equivariant pairs (ρ, v) of a twisted system on free modules X = A^d.
//!
//! ρ: A → L(X) is a representation and v: G → I(X) consists of bounded
//! invertible ℂ-linear maps subject to
//!     (i)   ρ(α_g(a)) = v(g) ρ(a) v(g)⁻¹,
//!     (ii)  v(g) v(h) = ad_ρ(σ(g,h)) v(gh),  ad_ρ(s)x = (ρ(s)x)·s*,
//!     (iii) α_g(⟨x,x′⟩) = ⟨v(g)x, v(g)x′⟩,
//!     (iv)  v(g)(x·a) = (v(g)x)·α_g(a).
//! Each v(g) is stored in the canonical form v(g) = w_g ∘ α_g^entry with
//! w_g ∈ U(M_d(A)); (iii) and (iv) then hold identically and (i), (ii)
//! are validated as residuals.

use crate::algebra::AlgebraElement;
use crate::error::{Result, TcdsError};
use crate::group::GroupElement;
use crate::linalg;
use crate::module::{ModuleMap, ModuleVector};
use crate::representation::Representation;
use crate::system::TwistedSystem;
use num_complex::Complex64;
use std::sync::Arc;

const PAIR_TOL: f64 = 1e-9;

/// Worst residuals of the equivariant-pair relations. `inner_product` and
/// `module_action` correspond to (iii) and (iv); they vanish by
/// construction and are sampled only as a sanity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivarianceReport {
    pub unitarity: f64,
    pub representation: f64,
    pub covariance: f64,
    pub projective_relation: f64,
    pub inner_product: f64,
    pub module_action: f64,
}

impl EquivarianceReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity
            .max(self.representation)
            .max(self.covariance)
            .max(self.projective_relation)
            .max(self.inner_product)
            .max(self.module_action)
    }
}

#[derive(Debug, Clone)]
pub struct EquivariantPair {
    system: Arc<TwistedSystem>,
    rank: usize,
    rho: Representation,
    w: Vec<ModuleMap>,
}

impl EquivariantPair {
    pub fn new(
        system: Arc<TwistedSystem>,
        rho: Representation,
        w: Vec<ModuleMap>,
    ) -> Result<Self> {
        let algebra = system.algebra();
        if rho.domain() != algebra || rho.codomain() != algebra {
            return Err(TcdsError::AlgebraMismatch);
        }
        let rank = rho.size();
        if w.len() != system.order() {
            return Err(TcdsError::DimensionMismatch { expected: system.order(), got: w.len() });
        }
        for m in &w {
            if m.algebra() != algebra || m.rows() != rank || m.cols() != rank {
                return Err(TcdsError::ShapeMismatch("w_g shape disagrees with ρ".into()));
            }
        }
        let pair = Self { system, rank, rho, w };
        let report = pair.equivariance_report();
        if report.max_residual() > PAIR_TOL {
            return Err(TcdsError::NotHomomorphism(format!(
                "equivariant pair relations fail (max residual {:.3e})",
                report.max_residual()
            )));
        }
        Ok(pair)
    }

    /// The trivial pair (ℓ, α) on X = A.
    pub fn trivial(system: &Arc<TwistedSystem>) -> Self {
        let algebra = system.algebra();
        let rho = Representation::left_regular(algebra);
        let w = (0..system.order()).map(|_| ModuleMap::identity(algebra, 1)).collect();
        Self::new(system.clone(), rho, w).expect("trivial pair always satisfies the relations")
    }

    /// The regular pair (ℓ̌, α̌) on A^G: ℓ̌(a) = diag(a), and
    /// (α̌(g)ξ)(h) = α_g(ξ(g⁻¹h)) so w_g is the translation permutation.
    pub fn regular(system: &Arc<TwistedSystem>) -> Self {
        EquivariantPair::trivial(system).induced_regular()
    }

    /// The induced regular pair (ρ̌, v̌) on X^G = A^{d·|G|}:
    ///     (ρ̌(a)ξ)(h) = ρ(a)ξ(h),    (v̌(g)ξ)(h) = v(g)ξ(g⁻¹h).
    /// Slot (h, i) sits at index h·d + i.
    pub fn induced_regular(&self) -> Self {
        let system = self.system.clone();
        let algebra = system.algebra();
        let grp = system.group().clone();
        let n = grp.order();
        let d = self.rank;

        let zero = ModuleMap::zeros(algebra, d, d);
        let mut images = Vec::with_capacity(algebra.dim());
        for b in algebra.basis() {
            let cell = self.rho.apply(&b);
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n).map(|j| if h == j { cell.clone() } else { zero.clone() }).collect()
                })
                .collect();
            images.push(ModuleMap::from_block_grid(&grid).expect("diagonal grid"));
        }
        let rho_check = Representation::from_basis_images(
            algebra.clone(),
            algebra.clone(),
            n * d,
            images,
        )
        .expect("induced representation shape");

        let mut w_check = Vec::with_capacity(n);
        for g in grp.elements() {
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n)
                        .map(|j| {
                            if j == grp.mul(grp.inv(g), h) {
                                self.w[g].clone()
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            w_check.push(ModuleMap::from_block_grid(&grid).expect("translation grid"));
        }
        Self::new(system, rho_check, w_check)
            .expect("induced regular pair always satisfies the relations")
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn w(&self, g: GroupElement) -> &ModuleMap {
        &self.w[g]
    }

    pub fn rho_apply(&self, a: &AlgebraElement) -> ModuleMap {
        self.rho.apply(a)
    }

    /// Entrywise action of α_g on a module vector.
    fn alpha_entrywise(&self, g: GroupElement, x: &ModuleVector) -> ModuleVector {
        let entries = x.entries().iter().map(|e| self.system.alpha_apply(g, e)).collect();
        ModuleVector::from_entries(entries).expect("entries share the algebra")
    }

    fn alpha_inv_entrywise(&self, g: GroupElement, x: &ModuleVector) -> ModuleVector {
        let entries = x.entries().iter().map(|e| self.system.alpha_inv_apply(g, e)).collect();
        ModuleVector::from_entries(entries).expect("entries share the algebra")
    }

    /// Entrywise action of α_g on a module map.
    fn alpha_entrywise_map(&self, g: GroupElement, m: &ModuleMap) -> ModuleMap {
        let entries: Vec<Vec<AlgebraElement>> = (0..m.rows())
            .map(|i| {
                (0..m.cols()).map(|j| self.system.alpha_apply(g, &m.entry(i, j))).collect()
            })
            .collect();
        ModuleMap::from_entries(m.algebra(), &entries).expect("entries share the algebra")
    }

    /// v(g)x = w_g · α_g^entry(x).
    pub fn v_apply(&self, g: GroupElement, x: &ModuleVector) -> ModuleVector {
        self.w[g].apply(&self.alpha_entrywise(g, x))
    }

    /// v(g)⁻¹x = α_g⁻¹^entry(w_g* x).
    pub fn v_inv_apply(&self, g: GroupElement, x: &ModuleVector) -> ModuleVector {
        self.alpha_inv_entrywise(g, &self.w[g].adjoint().apply(x))
    }

    /// ad_ρ(s)x = (ρ(s)x)·s*.
    pub fn ad_rho(&self, s: &AlgebraElement, x: &ModuleVector) -> ModuleVector {
        self.rho.apply(s).apply(x).right_mul(&s.adjoint())
    }

    pub fn equivariance_report(&self) -> EquivarianceReport {
        let grp = self.system.group().clone();
        let algebra = self.system.algebra().clone();
        let basis = algebra.basis();
        let d = self.rank;

        let mut unitarity: f64 = 0.0;
        for m in &self.w {
            unitarity = unitarity.max(m.unitarity_residual());
        }
        unitarity = unitarity
            .max((&self.w[grp.identity()] - &ModuleMap::identity(&algebra, d)).norm());

        let representation = self.rho.homomorphism_residual();

        // spanning vectors e_i ⊙ b, enough to test ℂ-linear identities
        let mut span = Vec::new();
        for i in 0..d {
            for b in &basis {
                let mut entries = vec![algebra.zero(); d];
                entries[i] = b.clone();
                span.push(ModuleVector::from_entries(entries).expect("spanning vector"));
            }
        }

        // (i) as the matrix identity ρ(α_g(a)) = w_g · α_g^entry(ρ(a)) · w_g*
        let mut covariance: f64 = 0.0;
        for g in grp.elements() {
            for b in &basis {
                let lhs = self.rho.apply(&self.system.alpha_apply(g, b));
                let rhs = self.w[g]
                    .compose(&self.alpha_entrywise_map(g, &self.rho.apply(b)))
                    .compose(&self.w[g].adjoint());
                covariance = covariance.max((&lhs - &rhs).norm());
            }
        }

        // (ii) on the spanning vectors
        let mut projective: f64 = 0.0;
        for g in grp.elements() {
            for h in grp.elements() {
                let gh = grp.mul(g, h);
                let s = self.system.sigma(g, h);
                for x in &span {
                    let lhs = self.v_apply(g, &self.v_apply(h, x));
                    let rhs = self.ad_rho(s, &self.v_apply(gh, x));
                    projective = projective.max((&lhs - &rhs).norm());
                }
            }
        }

        // (iii), (iv) sampled on a few spanning pairs
        let mut inner_product: f64 = 0.0;
        let mut module_action: f64 = 0.0;
        for g in grp.elements() {
            for x in span.iter().take(3) {
                for y in span.iter().rev().take(3) {
                    let lhs = self.system.alpha_apply(g, &x.inner(y));
                    let rhs = self.v_apply(g, x).inner(&self.v_apply(g, y));
                    inner_product = inner_product.max((&lhs - &rhs).norm());
                }
                for b in basis.iter().take(2) {
                    let lhs = self.v_apply(g, &x.right_mul(b));
                    let rhs = self.v_apply(g, x).right_mul(&self.system.alpha_apply(g, b));
                    module_action = module_action.max((&lhs - &rhs).norm());
                }
            }
        }

        EquivarianceReport {
            unitarity,
            representation,
            covariance,
            projective_relation: projective,
            inner_product,
            module_action,
        }
    }

    /// ℂ-basis of the central part Z_X = {z ∈ X : ρ(a)z = z·a for all a},
    /// returned as orthonormal coordinate vectors re-assembled into module
    /// vectors.
    pub fn central_part(&self) -> Vec<ModuleVector> {
        let algebra = self.system.algebra().clone();
        let basis = algebra.basis();
        let d = self.rank;
        let dim_a = algebra.dim();
        let ncoords = d * dim_a;

        // coordinates of z: entry i has coordinates dim_a·i .. dim_a·(i+1)
        let coord_vec = |z: &ModuleVector| -> Vec<Complex64> {
            z.entries().iter().flat_map(|e| e.coordinates()).collect()
        };
        let from_coords = |c: &linalg::CVec| -> ModuleVector {
            let entries = (0..d)
                .map(|i| {
                    let coords: Vec<Complex64> =
                        (0..dim_a).map(|t| c[i * dim_a + t]).collect();
                    algebra.from_coordinates(&coords).expect("coordinate count")
                })
                .collect();
            ModuleVector::from_entries(entries).expect("entries share the algebra")
        };

        // stack the linear conditions ρ(b)z − z·b = 0 for every basis b
        let mut condition = linalg::CMat::zeros(basis.len() * ncoords, ncoords);
        for (bi, b) in basis.iter().enumerate() {
            let rho_b = self.rho.apply(b);
            for col in 0..ncoords {
                let mut unit = vec![Complex64::new(0.0, 0.0); ncoords];
                unit[col] = Complex64::new(1.0, 0.0);
                let z = from_coords(&linalg::CVec::from_vec(unit));
                let image = &rho_b.apply(&z) - &z.right_mul(b);
                for (r, val) in coord_vec(&image).into_iter().enumerate() {
                    condition[(bi * ncoords + r, col)] = val;
                }
            }
        }
        linalg::nullspace(&condition, 1e-9).iter().map(from_coords).collect()
    }
}

/// The central subsystem Σ′ = (Z(A), G, α′, 1) on Z(A) ≅ ℂ^{#blocks};
/// α′_g permutes center coordinates the way α_g permutes blocks.
pub fn central_subsystem(system: &Arc<TwistedSystem>) -> Arc<TwistedSystem> {
    let blocks = system.algebra().num_blocks();
    let center = crate::algebra::MultiMatrixAlgebra::direct_sum_of_scalars(blocks);
    let alpha = system
        .group()
        .elements()
        .map(|g| {
            crate::automorphism::Automorphism::permutation(
                &center,
                system.alpha(g).block_perm().to_vec(),
            )
            .expect("block permutation is valid on the center")
        })
        .collect();
    TwistedSystem::untwisted(
        format!("{}-center", system.name()),
        center,
        system.group().clone(),
        alpha,
    )
    .expect("center system satisfies the axioms")
}
