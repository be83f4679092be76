//! Covariant pairs (π, u) of a twisted system and their integrated forms.
//!
//! A pair consists of a representation π: A → M_m(B) and unitaries
//! u(g) ∈ M_m(B) satisfying
//!     u(g) u(h) = π(σ(g,h)) u(gh),
//!     π(α_g(a)) = u(g) π(a) u(g)*.
//! The integrated form (π×u)(f) = Σ_g π(f(g)) u(g) turns C_c(Σ) into
//! operators; the regular pair induced by π acts on Y^G and realizes the
//! reduced norm when π is faithful. The left-regular instance over B = A
//! is the canonical Λ.

use crate::conv::CcElement;
use crate::error::{Result, TcdsError};
use crate::group::GroupElement;
use crate::module::ModuleMap;
use crate::representation::Representation;
use crate::system::TwistedSystem;
use std::sync::Arc;

const PAIR_TOL: f64 = 1e-9;

/// Worst residuals of the defining relations of a covariant pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    pub unitarity: f64,
    pub projective_relation: f64,
    pub covariance: f64,
}

impl CovarianceReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity.max(self.projective_relation).max(self.covariance)
    }
}

#[derive(Debug, Clone)]
pub struct CovariantPair {
    system: Arc<TwistedSystem>,
    pi: Representation,
    u: Vec<ModuleMap>,
}

impl CovariantPair {
    pub fn new(
        system: Arc<TwistedSystem>,
        pi: Representation,
        u: Vec<ModuleMap>,
    ) -> Result<Self> {
        if pi.domain() != system.algebra() {
            return Err(TcdsError::AlgebraMismatch);
        }
        if u.len() != system.order() {
            return Err(TcdsError::DimensionMismatch { expected: system.order(), got: u.len() });
        }
        for m in &u {
            if m.algebra() != pi.codomain() || m.rows() != pi.size() || m.cols() != pi.size() {
                return Err(TcdsError::ShapeMismatch("unitary shape disagrees with π".into()));
            }
        }
        let pair = Self { system, pi, u };
        let report = pair.covariance_report();
        if report.max_residual() > PAIR_TOL {
            return Err(TcdsError::NotHomomorphism(format!(
                "covariant pair relations fail (unitarity {:.3e}, projective {:.3e}, covariance {:.3e})",
                report.unitarity, report.projective_relation, report.covariance
            )));
        }
        Ok(pair)
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    pub fn pi(&self) -> &Representation {
        &self.pi
    }

    pub fn u(&self, g: GroupElement) -> &ModuleMap {
        &self.u[g]
    }

    pub fn size(&self) -> usize {
        self.pi.size()
    }

    pub fn covariance_report(&self) -> CovarianceReport {
        let grp = self.system.group();
        let basis = self.system.algebra().basis();
        let mut unitarity: f64 = 0.0;
        for m in &self.u {
            unitarity = unitarity.max(m.unitarity_residual());
        }
        let mut projective: f64 = 0.0;
        for g in grp.elements() {
            for h in grp.elements() {
                let gh = grp.mul(g, h);
                let lhs = self.u[g].compose(&self.u[h]);
                let rhs = self.pi.apply(self.system.sigma(g, h)).compose(&self.u[gh]);
                projective = projective.max((&lhs - &rhs).norm());
            }
        }
        let mut covariance: f64 = 0.0;
        for g in grp.elements() {
            let ug_star = self.u[g].adjoint();
            for b in &basis {
                let lhs = self.pi.apply(&self.system.alpha_apply(g, b));
                let rhs = self.u[g].compose(&self.pi.apply(b)).compose(&ug_star);
                covariance = covariance.max((&lhs - &rhs).norm());
            }
        }
        CovarianceReport { unitarity, projective_relation: projective, covariance }
    }

    /// Integrated form (π×u)(f) = Σ_g π(f(g)) u(g).
    pub fn integrated(&self, f: &CcElement) -> ModuleMap {
        assert!(
            TwistedSystem::compatible(f.system(), &self.system),
            "element belongs to a different system"
        );
        let mut acc = ModuleMap::zeros(self.pi.codomain(), self.size(), self.size());
        for g in self.system.group().elements() {
            let c = f.coeff(g);
            if c.norm() > 0.0 {
                acc = &acc + &self.pi.apply(c).compose(&self.u[g]);
            }
        }
        acc
    }

    /// The regular covariant pair (π̃, λ̃_π) on Y^G induced by π:
    ///     π̃(a)            = diag_h π(α_h⁻¹(a)),
    ///     λ̃_π(g)[h, g⁻¹h] = π(α_h⁻¹(σ(g, g⁻¹h))).
    pub fn regular_from(pi: &Representation, system: &Arc<TwistedSystem>) -> Result<Self> {
        if pi.domain() != system.algebra() {
            return Err(TcdsError::AlgebraMismatch);
        }
        let grp = system.group().clone();
        let n = grp.order();
        let m = pi.size();
        let codomain = pi.codomain().clone();
        let big = |cells: &dyn Fn(usize, usize) -> Option<ModuleMap>| -> Result<ModuleMap> {
            let zero = ModuleMap::zeros(&codomain, m, m);
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|i| (0..n).map(|j| cells(i, j).unwrap_or_else(|| zero.clone())).collect())
                .collect();
            ModuleMap::from_block_grid(&grid)
        };

        let basis = system.algebra().basis();
        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            let cells = |i: usize, j: usize| -> Option<ModuleMap> {
                (i == j).then(|| pi.apply(&system.alpha_inv_apply(i, b)))
            };
            images.push(big(&cells)?);
        }
        let pi_tilde = Representation::from_basis_images(
            system.algebra().clone(),
            codomain.clone(),
            n * m,
            images,
        )?;

        let mut u = Vec::with_capacity(n);
        for g in grp.elements() {
            let cells = |h: usize, j: usize| -> Option<ModuleMap> {
                let src = grp.mul(grp.inv(g), h);
                (j == src).then(|| {
                    let s = system.sigma(g, src);
                    pi.apply(&system.alpha_inv_apply(h, s))
                })
            };
            u.push(big(&cells)?);
        }
        Self::new(system.clone(), pi_tilde, u)
    }

    /// Variant a): π̃′(a) = diag_h π(α_{h⁻¹}(a)) and
    /// λ̃′_π(g)[h, g⁻¹h] = π(σ(h⁻¹, g)).
    pub fn regular_variant_prime(
        pi: &Representation,
        system: &Arc<TwistedSystem>,
    ) -> Result<Self> {
        if pi.domain() != system.algebra() {
            return Err(TcdsError::AlgebraMismatch);
        }
        let grp = system.group().clone();
        let n = grp.order();
        let m = pi.size();
        let codomain = pi.codomain().clone();
        let zero = ModuleMap::zeros(&codomain, m, m);
        let basis = system.algebra().basis();

        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n)
                        .map(|j| {
                            if h == j {
                                pi.apply(&system.alpha_apply(grp.inv(h), b))
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            images.push(ModuleMap::from_block_grid(&grid)?);
        }
        let rep = Representation::from_basis_images(
            system.algebra().clone(),
            codomain.clone(),
            n * m,
            images,
        )?;

        let mut u = Vec::with_capacity(n);
        for g in grp.elements() {
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n)
                        .map(|j| {
                            if j == grp.mul(grp.inv(g), h) {
                                pi.apply(system.sigma(grp.inv(h), g))
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            u.push(ModuleMap::from_block_grid(&grid)?);
        }
        Self::new(system.clone(), rep, u)
    }

    /// Variant b): π̃″(a) = diag_h π(α_h(a)) and ρ̃_π(g)[h, hg] = π(σ(h, g)).
    pub fn regular_variant_rho(pi: &Representation, system: &Arc<TwistedSystem>) -> Result<Self> {
        if pi.domain() != system.algebra() {
            return Err(TcdsError::AlgebraMismatch);
        }
        let grp = system.group().clone();
        let n = grp.order();
        let m = pi.size();
        let codomain = pi.codomain().clone();
        let zero = ModuleMap::zeros(&codomain, m, m);
        let basis = system.algebra().basis();

        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n)
                        .map(|j| {
                            if h == j {
                                pi.apply(&system.alpha_apply(h, b))
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            images.push(ModuleMap::from_block_grid(&grid)?);
        }
        let rep = Representation::from_basis_images(
            system.algebra().clone(),
            codomain.clone(),
            n * m,
            images,
        )?;

        let mut u = Vec::with_capacity(n);
        for g in grp.elements() {
            let grid: Vec<Vec<ModuleMap>> = (0..n)
                .map(|h| {
                    (0..n)
                        .map(|j| {
                            if j == grp.mul(h, g) {
                                pi.apply(system.sigma(h, g))
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            u.push(ModuleMap::from_block_grid(&grid)?);
        }
        Self::new(system.clone(), rep, u)
    }

    /// The diagonal unitary S with S[h,h] = π(σ(h⁻¹, h)) conjugating
    /// (π̃ × λ̃_π) onto (π̃′ × λ̃′_π).
    pub fn s_unitary(pi: &Representation, system: &Arc<TwistedSystem>) -> Result<ModuleMap> {
        let grp = system.group();
        let entries: Vec<ModuleMap> = grp
            .elements()
            .map(|h| pi.apply(system.sigma(grp.inv(h), h)))
            .collect();
        ModuleMap::block_diag(&entries)
    }

    /// The involutive permutation T with T[h, h⁻¹] = 1 conjugating
    /// (π̃′ × λ̃′_π) onto (π̃″ × ρ̃_π).
    pub fn t_unitary(pi: &Representation, system: &Arc<TwistedSystem>) -> Result<ModuleMap> {
        let grp = system.group().clone();
        let n = grp.order();
        let m = pi.size();
        let codomain = pi.codomain().clone();
        let zero = ModuleMap::zeros(&codomain, m, m);
        let id = ModuleMap::identity(&codomain, m);
        let grid: Vec<Vec<ModuleMap>> = (0..n)
            .map(|h| {
                (0..n)
                    .map(|j| if j == grp.inv(h) { id.clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        ModuleMap::from_block_grid(&grid)
    }
}

/// The canonical regular homomorphism Λ = ℓ̃ × λ̃_ℓ on A^G.
pub fn canonical_lambda(system: &Arc<TwistedSystem>) -> CovariantPair {
    let ell = Representation::left_regular(system.algebra());
    CovariantPair::regular_from(&ell, system).expect("Λ always satisfies the pair relations")
}

/// Reduced norm ‖f‖_r = ‖Λ(f)‖.
pub fn reduced_norm(f: &CcElement) -> f64 {
    canonical_lambda(f.system()).integrated(f).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiMatrixAlgebra;
    use crate::group::FiniteGroup;
    use num_complex::Complex64;
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

    fn pointswap() -> Arc<TwistedSystem> {
        let a = MultiMatrixAlgebra::direct_sum_of_scalars(2);
        let z2 = FiniteGroup::cyclic(2);
        let swap = crate::automorphism::Automorphism::permutation(&a, vec![1, 0]).unwrap();
        TwistedSystem::untwisted(
            "pointswap",
            a.clone(),
            z2,
            vec![crate::automorphism::Automorphism::identity(&a), swap],
        )
        .unwrap()
    }

    #[test]
    fn regular_pair_from_defining_rep_validates() {
        for sys in [m2_inner_twist(), pointswap()] {
            let pi = Representation::defining(sys.algebra());
            let pair = CovariantPair::regular_from(&pi, &sys).unwrap();
            assert!(pair.covariance_report().max_residual() < 1e-12);
        }
    }

    #[test]
    fn integrated_form_is_a_star_homomorphism() {
        let sys = m2_inner_twist();
        let pi = Representation::defining(sys.algebra());
        let pair = CovariantPair::regular_from(&pi, &sys).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(50);
        for _ in 0..5 {
            let f1 = CcElement::random(&sys, &mut rng);
            let f2 = CcElement::random(&sys, &mut rng);
            let lhs = pair.integrated(&f1.convolve(&f2));
            let rhs = pair.integrated(&f1).compose(&pair.integrated(&f2));
            assert!((&lhs - &rhs).norm() < 1e-9);
            let star_lhs = pair.integrated(&f1.star());
            let star_rhs = pair.integrated(&f1).adjoint();
            assert!((&star_lhs - &star_rhs).norm() < 1e-10);
        }
        let one = CcElement::one(&sys);
        let id = ModuleMap::identity(pair.pi().codomain(), pair.size());
        assert!((&pair.integrated(&one) - &id).norm() < 1e-12);
    }

    #[test]
    fn canonical_lambda_matches_left_convolution() {
        // Λ pulled back to A^G acts as J* (f ∗ J(·)); verified by computing
        // Λ(f)ξ along both routes on random data
        let sys = m2_inner_twist();
        let lam = canonical_lambda(&sys);
        let mut rng = ChaCha20Rng::seed_from_u64(51);
        let f = CcElement::random(&sys, &mut rng);
        let xi = CcElement::random(&sys, &mut rng);
        // route 1: matrix action on the module vector of ξ
        let v = crate::module::ModuleVector::from_entries(xi.coeffs().to_vec()).unwrap();
        let image = lam.integrated(&f).apply(&v);
        // route 2: J*(f ∗ Jξ)
        let expect = f.convolve(&xi.j_map()).j_inv_map();
        for (g, e) in expect.coeffs().iter().enumerate() {
            assert!((&image.entry(g) - e).norm() < 1e-10, "slot {g}");
        }
    }

    #[test]
    fn variant_pairs_validate_and_conjugations_hold() {
        for sys in [m2_inner_twist(), pointswap()] {
            let pi = Representation::defining(sys.algebra());
            let plain = CovariantPair::regular_from(&pi, &sys).unwrap();
            let prime = CovariantPair::regular_variant_prime(&pi, &sys).unwrap();
            let rho = CovariantPair::regular_variant_rho(&pi, &sys).unwrap();
            let s = CovariantPair::s_unitary(&pi, &sys).unwrap();
            let t = CovariantPair::t_unitary(&pi, &sys).unwrap();
            assert!(s.unitarity_residual() < 1e-12);
            assert!(t.unitarity_residual() < 1e-12);
            assert!((&t.compose(&t) - &ModuleMap::identity(pi.codomain(), t.rows())).norm() < 1e-12);
            let mut rng = ChaCha20Rng::seed_from_u64(52);
            for _ in 0..4 {
                let f = CcElement::random(&sys, &mut rng);
                // S (π̃×λ̃_π)(f) S* = (π̃′×λ̃′_π)(f)
                let lhs = s.compose(&plain.integrated(&f)).compose(&s.adjoint());
                assert!((&lhs - &prime.integrated(&f)).norm() < 1e-10);
                // T (π̃′×λ̃′_π)(f) T = (π̃″×ρ̃_π)(f)
                let lhs2 = t.compose(&prime.integrated(&f)).compose(&t);
                assert!((&lhs2 - &rho.integrated(&f)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn faithful_representations_reproduce_the_reduced_norm() {
        let sys = pointswap();
        let mut rng = ChaCha20Rng::seed_from_u64(53);
        let defining = Representation::defining(sys.algebra());
        let pair_def = CovariantPair::regular_from(&defining, &sys).unwrap();
        let random_faithful = Representation::random(sys.algebra(), &[2, 1], &mut rng).unwrap();
        let pair_rand = CovariantPair::regular_from(&random_faithful, &sys).unwrap();
        let lossy = Representation::random(sys.algebra(), &[1, 0], &mut rng).unwrap();
        let pair_lossy = CovariantPair::regular_from(&lossy, &sys).unwrap();
        for _ in 0..5 {
            let f = CcElement::random(&sys, &mut rng);
            let r = reduced_norm(&f);
            let nd = pair_def.integrated(&f).norm();
            let nr = pair_rand.integrated(&f).norm();
            let nl = pair_lossy.integrated(&f).norm();
            assert!((nd - r).abs() < 1e-8 * r.max(1.0), "defining {nd} vs Λ {r}");
            assert!((nr - r).abs() < 1e-8 * r.max(1.0), "random faithful {nr} vs Λ {r}");
            assert!(nl <= r + 1e-9, "lossy rep must not exceed the reduced norm");
        }
    }
}
