//! The reduced algebra acting on the module A^Σ, Fourier coefficients, and
//! the canonical conditional expectations.
//!
//! A^Σ is A^G with the twisted inner product ⟨ξ,η⟩_α = Σ_g α_g⁻¹(ξ(g)*η(g)).
//! The unitary J, (Jξ)(g) = α_g(ξ(g)), identifies the plain module A^G with
//! A^Σ and conjugates the canonical regular homomorphism Λ on A^G into the
//! homomorphism Λ_Σ, Λ_Σ(f)ξ = f∗ξ. An element x of the reduced algebra is
//! stored through its pullback J*xJ, a |G|×|G| matrix over A.
//!
//! The Fourier transform is x̂ = xξ₀ with ξ₀ = 1⊙δ_e, so x̂(h) = α_h(P_{h,e})
//! in terms of the pullback P. E_A(x) = x̂(e) is the canonical expectation
//! onto A and E_Σ = ℓ_Σ∘E_A the induced conditional expectation onto ℓ_Σ(A).

use crate::algebra::AlgebraElement;
use crate::conv::CcElement;
use crate::covariant::canonical_lambda;
use crate::error::{Result, TcdsError};
use crate::group::GroupElement;
use crate::module::{ModuleMap, ModuleVector};
use crate::system::TwistedSystem;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct ReducedOperator {
    system: Arc<TwistedSystem>,
    pullback: ModuleMap,
}

fn section_to_vector(f: &CcElement) -> ModuleVector {
    ModuleVector::from_entries(f.coeffs().to_vec()).expect("coefficients share the algebra")
}

fn vector_to_section(system: &Arc<TwistedSystem>, v: &ModuleVector) -> CcElement {
    CcElement::from_coeffs(system, v.entries().to_vec())
        .expect("entry count matches the group order")
}

impl ReducedOperator {
    /// Λ_Σ(f), stored through its pullback Λ(f).
    pub fn from_cc(f: &CcElement) -> Self {
        let system = f.system().clone();
        let pullback = canonical_lambda(&system).integrated(f);
        Self { system, pullback }
    }

    /// λ_Σ(g) = Λ_Σ(1⊙δ_g).
    pub fn lambda(system: &Arc<TwistedSystem>, g: GroupElement) -> Self {
        Self::from_cc(&CcElement::delta(system, g, system.algebra().one()))
    }

    /// ℓ_Σ(a) = Λ_Σ(a⊙δ_e).
    pub fn ell(system: &Arc<TwistedSystem>, a: AlgebraElement) -> Self {
        let e = system.group().identity();
        Self::from_cc(&CcElement::delta(system, e, a))
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    /// The pullback J*xJ acting on the plain module A^G.
    pub fn pullback(&self) -> &ModuleMap {
        &self.pullback
    }

    pub fn norm(&self) -> f64 {
        self.pullback.norm()
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert!(
            Arc::ptr_eq(&self.system, &other.system),
            "operators live over different systems"
        );
        Self { system: self.system.clone(), pullback: self.pullback.compose(&other.pullback) }
    }

    pub fn adjoint(&self) -> Self {
        Self { system: self.system.clone(), pullback: self.pullback.adjoint() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            Arc::ptr_eq(&self.system, &other.system),
            "operators live over different systems"
        );
        Self { system: self.system.clone(), pullback: &self.pullback + &other.pullback }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(
            Arc::ptr_eq(&self.system, &other.system),
            "operators live over different systems"
        );
        Self { system: self.system.clone(), pullback: &self.pullback - &other.pullback }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { system: self.system.clone(), pullback: self.pullback.scale(c) }
    }

    /// x ξ for a section ξ of A^Σ, computed as J(P(J*ξ)).
    pub fn apply_section(&self, xi: &CcElement) -> CcElement {
        let plain = section_to_vector(&xi.j_inv_map());
        vector_to_section(&self.system, &self.pullback.apply(&plain)).j_map()
    }

    /// The Fourier transform x̂ = xξ₀; x̂(h) = α_h(P_{h,e}).
    pub fn fourier(&self) -> CcElement {
        let e = self.system.group().identity();
        let coeffs = (0..self.system.order())
            .map(|h| self.system.alpha_apply(h, &self.pullback.entry(h, e)))
            .collect();
        CcElement::from_coeffs(&self.system, coeffs)
            .expect("one coefficient per group element")
    }

    /// E_A(x) = x̂(e).
    pub fn e_a(&self) -> AlgebraElement {
        let e = self.system.group().identity();
        self.pullback.entry(e, e)
    }

    /// E_Σ(x) = ℓ_Σ(E_A(x)), the canonical conditional expectation onto
    /// ℓ_Σ(A).
    pub fn e_sigma(&self) -> Self {
        Self::ell(&self.system, self.e_a())
    }

    /// Largest deviation of x from the ℂ-span of the Λ_Σ(a⊙δ_g); zero
    /// exactly when x lies in the reduced algebra.
    pub fn reduced_membership_residual(&self) -> f64 {
        let recovered = Self::from_cc(&self.fourier());
        (&self.pullback - &recovered.pullback).norm()
    }
}

/// ℂ-dimension of the reduced algebra inside L(A^G), computed as the rank
/// of Λ on the delta basis of C_c(Σ).
pub fn reduced_algebra_dim(system: &Arc<TwistedSystem>) -> Result<usize> {
    let algebra = system.algebra();
    let n = system.order();
    let dim = algebra.dim();
    let mut columns = Vec::with_capacity(n * dim);
    for g in 0..n {
        for b in algebra.basis() {
            let op = ReducedOperator::from_cc(&CcElement::delta(system, g, b));
            columns.push(op.pullback().flatten());
        }
    }
    let rows = columns.first().map(|c| c.len()).ok_or_else(|| {
        TcdsError::ShapeMismatch("reduced algebra over an empty basis".into())
    })?;
    let mut m = crate::linalg::CMat::zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    Ok(crate::linalg::rank(&m, 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiMatrixAlgebra;
    use crate::automorphism::Automorphism;
    use crate::covariant::reduced_norm;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn m2_inner_twist() -> Arc<TwistedSystem> {
        let a = MultiMatrixAlgebra::full_matrix(2);
        let z2 = FiniteGroup::cyclic(2);
        let u1 = a
            .from_blocks(vec![crate::linalg::CMat::from_diagonal(
                &nalgebra::DVector::from_vec(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                ]),
            )])
            .unwrap();
        TwistedSystem::inner_from_unitaries("m2-inner", z2, vec![a.one(), u1]).unwrap()
    }

    fn z4_bicharacter() -> Arc<TwistedSystem> {
        let a = MultiMatrixAlgebra::scalars();
        let z4 = FiniteGroup::cyclic(4);
        let i = Complex64::new(0.0, 1.0);
        let phases: Vec<Vec<Complex64>> =
            (0..4).map(|j| (0..4).map(|k| i.powu((j * k) as u32)).collect()).collect();
        TwistedSystem::scalar_cocycle("z4-bichar", a, z4, phases).unwrap()
    }

    fn pointswap() -> Arc<TwistedSystem> {
        let a = MultiMatrixAlgebra::direct_sum_of_scalars(2);
        let z2 = FiniteGroup::cyclic(2);
        let swap = Automorphism::permutation(&a, vec![1, 0]).unwrap();
        TwistedSystem::untwisted(
            "pointswap",
            a.clone(),
            z2,
            vec![Automorphism::identity(&a), swap],
        )
        .unwrap()
    }

    fn systems() -> Vec<Arc<TwistedSystem>> {
        vec![m2_inner_twist(), z4_bicharacter(), pointswap()]
    }

    #[test]
    fn fourier_recovers_convolution_coefficients() {
        let mut rng = ChaCha20Rng::seed_from_u64(70);
        for sys in systems() {
            for _ in 0..5 {
                let f = CcElement::random(&sys, &mut rng);
                let hat = ReducedOperator::from_cc(&f).fourier();
                for g in 0..sys.order() {
                    assert!((hat.coeff(g) - f.coeff(g)).norm() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn operator_action_is_convolution_by_the_transform() {
        let mut rng = ChaCha20Rng::seed_from_u64(71);
        for sys in systems() {
            let f = CcElement::random(&sys, &mut rng);
            let xi = CcElement::random(&sys, &mut rng);
            let x = ReducedOperator::from_cc(&f);
            let lhs = x.apply_section(&xi);
            let rhs = x.fourier().convolve(&xi);
            for g in 0..sys.order() {
                assert!((lhs.coeff(g) - rhs.coeff(g)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn transform_respects_products_and_star() {
        let mut rng = ChaCha20Rng::seed_from_u64(72);
        for sys in systems() {
            let f1 = CcElement::random(&sys, &mut rng);
            let f2 = CcElement::random(&sys, &mut rng);
            let x = ReducedOperator::from_cc(&f1);
            let y = ReducedOperator::from_cc(&f2);
            let prod_hat = x.compose(&y).fourier();
            let conv = x.fourier().convolve(&y.fourier());
            let star_hat = x.adjoint().fourier();
            let conv_star = x.fourier().star();
            for g in 0..sys.order() {
                assert!((prod_hat.coeff(g) - conv.coeff(g)).norm() < 1e-10);
                assert!((star_hat.coeff(g) - conv_star.coeff(g)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn norm_chain_sup_twisted_reduced() {
        let mut rng = ChaCha20Rng::seed_from_u64(73);
        for sys in systems() {
            for _ in 0..10 {
                let f = CcElement::random(&sys, &mut rng);
                let x = ReducedOperator::from_cc(&f);
                let hat = x.fourier();
                let sup = hat.sup_norm();
                let twisted = hat.twisted_norm();
                let reduced = x.norm();
                assert!(sup <= twisted + 1e-9, "sup {sup} vs twisted {twisted}");
                assert!(twisted <= reduced + 1e-9, "twisted {twisted} vs reduced {reduced}");
                assert!((reduced - reduced_norm(&f)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn expectation_reads_off_coefficients() {
        let mut rng = ChaCha20Rng::seed_from_u64(74);
        for sys in systems() {
            let f = CcElement::random(&sys, &mut rng);
            let x = ReducedOperator::from_cc(&f);
            let e = sys.group().identity();
            assert!((&x.e_a() - f.coeff(e)).norm() < 1e-12);
            // E_A(x λ_Σ(g)*) = x̂(g)
            for g in 0..sys.order() {
                let shifted = x.compose(&ReducedOperator::lambda(&sys, g).adjoint());
                assert!((&shifted.e_a() - x.fourier().coeff(g)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn expectation_is_positive_faithful_and_equivariant() {
        let mut rng = ChaCha20Rng::seed_from_u64(75);
        for sys in systems() {
            for _ in 0..5 {
                let f = CcElement::random(&sys, &mut rng);
                let x = ReducedOperator::from_cc(&f);
                let gram = x.adjoint().compose(&x).e_a();
                // E_A(x*x) = ⟨x̂, x̂⟩_α, positive, and vanishes only at x = 0
                let hat = x.fourier();
                assert!((&gram - &hat.twisted_inner(&hat)).norm() < 1e-10);
                assert!(gram.min_spectrum() > -1e-10);
                assert!(gram.norm() > 1e-8 * x.norm() * x.norm());
                // E_A(λ(g) x λ(g)*) = α_g(E_A(x))
                for g in 0..sys.order() {
                    let lam = ReducedOperator::lambda(&sys, g);
                    let conj = lam.compose(&x).compose(&lam.adjoint());
                    let expect = sys.alpha_apply(g, &x.e_a());
                    assert!((&conj.e_a() - &expect).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn e_sigma_is_a_conditional_expectation() {
        let mut rng = ChaCha20Rng::seed_from_u64(76);
        for sys in systems() {
            let f = CcElement::random(&sys, &mut rng);
            let x = ReducedOperator::from_cc(&f);
            let ex = x.e_sigma();
            // idempotent, contractive, kills λ(g) for g ≠ e
            assert!(ex.e_sigma().sub(&ex).norm() < 1e-11);
            assert!(ex.norm() <= x.norm() + 1e-9);
            for g in 1..sys.order() {
                assert!(ReducedOperator::lambda(&sys, g).e_sigma().norm() < 1e-12);
            }
            // ℓ(a)-bimodularity
            let a = sys.algebra().random_element(&mut rng);
            let b = sys.algebra().random_element(&mut rng);
            let la = ReducedOperator::ell(&sys, a);
            let lb = ReducedOperator::ell(&sys, b);
            let lhs = la.compose(&x).compose(&lb).e_sigma();
            let rhs = la.compose(&x.e_sigma()).compose(&lb);
            assert!(lhs.sub(&rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn reduced_algebra_has_full_dimension() {
        for sys in systems() {
            let dim = reduced_algebra_dim(&sys).unwrap();
            assert_eq!(dim, sys.order() * sys.algebra().dim());
        }
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        let sys = m2_inner_twist();
        let f = CcElement::random(&sys, &mut rng);
        let x = ReducedOperator::from_cc(&f);
        assert!(x.reduced_membership_residual() < 1e-10);
    }
}
