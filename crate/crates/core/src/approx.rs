//! Approximation certificates for regularity of the reduced algebra.
//!
//! An equivariant pair (ρ, v) on X together with vectors ξ, η in X^G yields
//! the multiplier T(g, a) = ⟨ξ, ρ̌(a) v̌(g) η⟩ and the coefficient map
//! [T_c(f)](g) = T(g, f(g)). The induced map Λ_Σ(f) ↦ T_c(f) is bounded by
//! ‖ξ‖·‖η‖, and a sequence of such multipliers with uniformly bounded
//! ‖ξ_i‖·‖η_i‖ and ‖T_i(g,a) − a‖ → 0 certifies that every homomorphism of
//! the convolution algebra is weakly contained in the regular one.
//!
//! Two exact certificate flavors avoid floating error entirely: scalar
//! certificates with rational weights (finite groups; the uniform weight
//! gives deviation exactly 0) and cutoff certificates on lattice windows
//! whose deviations are the exact Følner ratios.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::conv::CcElement;
use crate::covariant::reduced_norm;
use crate::equivariant::EquivariantPair;
use crate::error::{Result, TcdsError};
use crate::group::GroupElement;
use crate::lattice::LatticeWindow;
use crate::module::ModuleVector;
use crate::representation::Representation;
use crate::system::TwistedSystem;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::sync::Arc;

/// One approximation stage: vectors ξ, η in X^G for an equivariant pair.
#[derive(Debug, Clone)]
pub struct Multiplier {
    base: EquivariantPair,
    induced: EquivariantPair,
    xi: ModuleVector,
    eta: ModuleVector,
}

impl Multiplier {
    pub fn new(base: &EquivariantPair, xi: ModuleVector, eta: ModuleVector) -> Result<Self> {
        let expected = base.rank() * base.system().order();
        if xi.rank() != expected {
            return Err(TcdsError::DimensionMismatch { expected, got: xi.rank() });
        }
        if eta.rank() != expected {
            return Err(TcdsError::DimensionMismatch { expected, got: eta.rank() });
        }
        Ok(Self { base: base.clone(), induced: base.induced_regular(), xi, eta })
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        self.base.system()
    }

    pub fn xi(&self) -> &ModuleVector {
        &self.xi
    }

    pub fn eta(&self) -> &ModuleVector {
        &self.eta
    }

    /// ‖ξ‖·‖η‖, the bound on the induced map of the reduced algebra.
    pub fn bound(&self) -> f64 {
        self.xi.norm() * self.eta.norm()
    }

    /// T(g, a) = ⟨ξ, ρ̌(a) v̌(g) η⟩.
    pub fn t_value(&self, g: GroupElement, a: &AlgebraElement) -> AlgebraElement {
        let moved = self.induced.rho_apply(a).apply(&self.induced.v_apply(g, &self.eta));
        self.xi.inner(&moved)
    }

    /// ⟨ξ, v̌(g) η⟩; for vectors with central entries T(g, a) = a·this.
    pub fn central_t_value(&self, g: GroupElement) -> AlgebraElement {
        self.xi.inner(&self.induced.v_apply(g, &self.eta))
    }

    /// The coefficient map [T_c(f)](g) = T(g, f(g)).
    pub fn apply_cc(&self, f: &CcElement) -> CcElement {
        let coeffs =
            (0..self.system().order()).map(|g| self.t_value(g, f.coeff(g))).collect();
        CcElement::from_coeffs(self.system(), coeffs).expect("one coefficient per element")
    }

    /// max over g and the algebra basis of ‖T(g, b) − b‖.
    pub fn deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for g in 0..self.system().order() {
            for b in self.system().algebra().basis() {
                worst = worst.max((&self.t_value(g, &b) - &b).norm());
            }
        }
        worst
    }
}

/// Verdict for a finite sequence of multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub bounds: Vec<f64>,
    pub deviations: Vec<f64>,
    pub max_bound: f64,
    pub final_deviation: f64,
    pub bounded: bool,
    pub converged: bool,
}

impl CertificateReport {
    pub fn accepted(&self) -> bool {
        self.bounded && self.converged
    }
}

/// A finite run of multipliers standing in for an approximation sequence.
#[derive(Debug, Clone)]
pub struct ApproxCertificate {
    stages: Vec<Multiplier>,
}

impl ApproxCertificate {
    pub fn new(stages: Vec<Multiplier>) -> Result<Self> {
        if stages.is_empty() {
            return Err(TcdsError::BadBuilder("a certificate needs at least one stage".into()));
        }
        for pair in stages.windows(2) {
            if !Arc::ptr_eq(pair[0].system(), pair[1].system()) {
                return Err(TcdsError::AlgebraMismatch);
            }
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[Multiplier] {
        &self.stages
    }

    pub fn verify(&self, bound_cap: f64, tol: f64) -> CertificateReport {
        let bounds: Vec<f64> = self.stages.iter().map(Multiplier::bound).collect();
        let deviations: Vec<f64> = self.stages.iter().map(Multiplier::deviation).collect();
        let max_bound = bounds.iter().cloned().fold(0.0, f64::max);
        let final_deviation = *deviations.last().expect("at least one stage");
        CertificateReport {
            bounded: max_bound <= bound_cap + 1e-12,
            converged: final_deviation <= tol,
            bounds,
            deviations,
            max_bound,
            final_deviation,
        }
    }
}

/// Exel-form multiplier value Σ_h ξ(gh)* a α_g(η(h)) over the trivial pair;
/// agrees with T(g, a) after reindexing h ↦ g⁻¹h.
pub fn exel_t_value(
    system: &Arc<TwistedSystem>,
    xi: &ModuleVector,
    eta: &ModuleVector,
    g: GroupElement,
    a: &AlgebraElement,
) -> AlgebraElement {
    let grp = system.group();
    let mut acc = system.algebra().zero();
    for h in grp.elements() {
        let term = &(&xi.entry(grp.mul(g, h)).adjoint() * a)
            * &system.alpha_apply(g, &eta.entry(h));
        acc = &acc + &term;
    }
    acc
}

/// Scalar certificate with rational weights over the trivial pair: ξ(h) =
/// q_ξ(h)·1. All derived quantities are exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarCertificate {
    system: Arc<TwistedSystem>,
    xi_weights: Vec<Ratio<i64>>,
    eta_weights: Vec<Ratio<i64>>,
}

impl ScalarCertificate {
    pub fn new(
        system: Arc<TwistedSystem>,
        xi_weights: Vec<Ratio<i64>>,
        eta_weights: Vec<Ratio<i64>>,
    ) -> Result<Self> {
        let n = system.order();
        if xi_weights.len() != n {
            return Err(TcdsError::DimensionMismatch { expected: n, got: xi_weights.len() });
        }
        if eta_weights.len() != n {
            return Err(TcdsError::DimensionMismatch { expected: n, got: eta_weights.len() });
        }
        Ok(Self { system, xi_weights, eta_weights })
    }

    /// ξ = 1 everywhere, η = 1/|G| everywhere: bound² = 1 and every
    /// deviation is exactly zero.
    pub fn uniform(system: &Arc<TwistedSystem>) -> Self {
        let n = system.order() as i64;
        Self {
            system: system.clone(),
            xi_weights: vec![Ratio::one(); n as usize],
            eta_weights: vec![Ratio::new(1, n); n as usize],
        }
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    /// c_g with T(g, a) = c_g·a.
    pub fn coefficient(&self, g: GroupElement) -> Ratio<i64> {
        let grp = self.system.group();
        let mut acc = Ratio::zero();
        for h in grp.elements() {
            acc += self.xi_weights[h] * self.eta_weights[grp.mul(grp.inv(g), h)];
        }
        acc
    }

    /// |c_g − 1| for every g, exactly.
    pub fn deviations(&self) -> Vec<Ratio<i64>> {
        (0..self.system.order())
            .map(|g| (self.coefficient(g) - Ratio::one()).abs())
            .collect()
    }

    /// ‖ξ‖²·‖η‖² = (Σ q_ξ²)(Σ q_η²), exactly.
    pub fn bound_squared(&self) -> Ratio<i64> {
        let sq = |w: &[Ratio<i64>]| w.iter().map(|q| q * q).fold(Ratio::zero(), |a, b| a + b);
        sq(&self.xi_weights) * sq(&self.eta_weights)
    }

    /// The same certificate as a floating-point multiplier over the trivial
    /// pair, for cross-checking the two evaluation routes.
    pub fn to_multiplier(&self) -> Multiplier {
        let algebra = self.system.algebra();
        let lift = |w: &[Ratio<i64>]| {
            let entries = w
                .iter()
                .map(|q| {
                    algebra.one().scale(Complex64::new(
                        *q.numer() as f64 / *q.denom() as f64,
                        0.0,
                    ))
                })
                .collect();
            ModuleVector::from_entries(entries).expect("entries share the algebra")
        };
        let trivial = EquivariantPair::trivial(&self.system);
        Multiplier::new(&trivial, lift(&self.xi_weights), lift(&self.eta_weights))
            .expect("weights have one entry per group element")
    }
}

/// Deviations of the cutoff certificate 1_F/|F|^{1/2} on a lattice window,
/// i.e. the exact Følner ratios of the window.
pub fn lattice_certificate_deviations(
    window: &LatticeWindow,
    shifts: &[Vec<i64>],
) -> Vec<Ratio<i64>> {
    shifts.iter().map(|s| window.folner_deviation(s)).collect()
}

/// A G-invariant unital subsystem together with an equivariant conditional
/// expectation onto it; approximation data transports along E.
#[derive(Debug, Clone)]
pub struct SubsystemEmbedding {
    parent: Arc<TwistedSystem>,
    sub: Arc<TwistedSystem>,
    embed: Representation,
    expect_images: Vec<AlgebraElement>,
}

const EMBED_TOL: f64 = 1e-9;

impl SubsystemEmbedding {
    pub fn new(
        parent: Arc<TwistedSystem>,
        sub: Arc<TwistedSystem>,
        embed: Representation,
        expect_images: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if embed.domain() != sub.algebra()
            || embed.codomain() != parent.algebra()
            || embed.size() != 1
        {
            return Err(TcdsError::AlgebraMismatch);
        }
        if expect_images.len() != parent.algebra().dim() {
            return Err(TcdsError::DimensionMismatch {
                expected: parent.algebra().dim(),
                got: expect_images.len(),
            });
        }
        for img in &expect_images {
            if img.algebra() != sub.algebra() {
                return Err(TcdsError::AlgebraMismatch);
            }
        }
        if !Arc::ptr_eq(parent.group(), sub.group()) && parent.group() != sub.group() {
            return Err(TcdsError::ShapeMismatch("subsystem over a different group".into()));
        }
        let this = Self { parent, sub, embed, expect_images };
        this.validate()?;
        Ok(this)
    }

    fn iota(&self, b: &AlgebraElement) -> AlgebraElement {
        self.embed.apply(b).entry(0, 0)
    }

    /// E(a), the expectation of a parent element in the subalgebra.
    pub fn expect(&self, a: &AlgebraElement) -> AlgebraElement {
        let coords = a.coordinates();
        let mut acc = self.sub.algebra().zero();
        for (c, img) in coords.iter().zip(&self.expect_images) {
            acc = &acc + &img.scale(*c);
        }
        acc
    }

    fn validate(&self) -> Result<()> {
        let fail = |what: &str, r: f64| {
            Err(TcdsError::AxiomFailure(format!("{what} fails (residual {r:.3e})")))
        };
        let hom = self.embed.homomorphism_residual();
        if hom > EMBED_TOL {
            return fail("embedding is not a unital *-homomorphism", hom);
        }
        if !self.embed.is_injective(EMBED_TOL) {
            return Err(TcdsError::AxiomFailure("embedding is not injective".into()));
        }
        let sub_basis = self.sub.algebra().basis();
        let parent_basis = self.parent.algebra().basis();
        let mut residual: f64 = 0.0;
        // E ∘ ι = id
        for b in &sub_basis {
            residual = residual.max((&self.expect(&self.iota(b)) - b).norm());
        }
        if residual > EMBED_TOL {
            return fail("expectation does not fix the subalgebra", residual);
        }
        // bimodularity E(ι(b1) a ι(b2)) = b1 E(a) b2
        residual = 0.0;
        for b1 in &sub_basis {
            for b2 in &sub_basis {
                for a in &parent_basis {
                    let lhs = self.expect(&(&(&self.iota(b1) * a) * &self.iota(b2)));
                    let rhs = &(b1 * &self.expect(a)) * b2;
                    residual = residual.max((&lhs - &rhs).norm());
                }
            }
        }
        if residual > EMBED_TOL {
            return fail("expectation is not bimodular", residual);
        }
        // positivity on a hermitian-spanning family of squares
        for (i, b1) in parent_basis.iter().enumerate() {
            for b2 in parent_basis.iter().skip(i) {
                for x in [b1 + b2, &b1.scale(Complex64::new(0.0, 1.0)) + b2] {
                    let low = self.expect(&(&x.adjoint() * &x)).min_spectrum();
                    if low < -EMBED_TOL {
                        return fail("expectation is not positive", -low);
                    }
                }
            }
        }
        // equivariance E ∘ α_g = β_g ∘ E
        residual = 0.0;
        for g in self.parent.group().elements() {
            for a in &parent_basis {
                let lhs = self.expect(&self.parent.alpha_apply(g, a));
                let rhs = self.sub.alpha_apply(g, &self.expect(a));
                residual = residual.max((&lhs - &rhs).norm());
            }
        }
        if residual > EMBED_TOL {
            return fail("expectation is not equivariant", residual);
        }
        // the subsystem carries the same twist and restricted action
        residual = 0.0;
        for g in self.parent.group().elements() {
            for h in self.parent.group().elements() {
                residual = residual
                    .max((&self.iota(self.sub.sigma(g, h)) - self.parent.sigma(g, h)).norm());
            }
            for b in &sub_basis {
                let lhs = self.iota(&self.sub.alpha_apply(g, b));
                let rhs = self.parent.alpha_apply(g, &self.iota(b));
                residual = residual.max((&lhs - &rhs).norm());
            }
        }
        if residual > EMBED_TOL {
            return fail("subsystem is not compatibly embedded", residual);
        }
        Ok(())
    }

    pub fn parent(&self) -> &Arc<TwistedSystem> {
        &self.parent
    }

    pub fn sub(&self) -> &Arc<TwistedSystem> {
        &self.sub
    }

    /// max over g and the subalgebra basis of ‖E(T(g, ι(b))) − b‖.
    pub fn transported_deviation(&self, mult: &Multiplier) -> f64 {
        let mut worst: f64 = 0.0;
        for g in 0..self.parent.order() {
            for b in self.sub.algebra().basis() {
                let t = mult.t_value(g, &self.iota(&b));
                worst = worst.max((&self.expect(&t) - &b).norm());
            }
        }
        worst
    }

    /// ‖E(⟨ξ,ξ⟩)‖^{1/2}·‖E(⟨η,η⟩)‖^{1/2}, the transported bound; never
    /// exceeds the original bound.
    pub fn transported_bound(&self, mult: &Multiplier) -> f64 {
        let gram = |v: &ModuleVector| self.expect(&v.inner(v)).norm().sqrt();
        gram(mult.xi()) * gram(mult.eta())
    }
}

/// A state on the coefficient algebra, stored through its density:
/// φ(a) = Σ_k tr(D_k a_k) with D ⪰ 0 and total trace 1.
#[derive(Debug, Clone)]
pub struct State {
    density: AlgebraElement,
}

impl State {
    pub fn new(density: AlgebraElement) -> Result<Self> {
        if density.hermitian_residual() > 1e-10 || density.min_spectrum() < -1e-10 {
            return Err(TcdsError::AxiomFailure("density is not positive".into()));
        }
        if (density.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(TcdsError::AxiomFailure("density does not have unit trace".into()));
        }
        Ok(Self { density })
    }

    /// The canonical tracial state a ↦ tr(a)/Σ n_k.
    pub fn tracial(algebra: &Arc<MultiMatrixAlgebra>) -> Self {
        let dim = algebra.defining_dim() as f64;
        Self { density: algebra.one().scale(Complex64::new(1.0 / dim, 0.0)) }
    }

    pub fn random<R: Rng>(algebra: &Arc<MultiMatrixAlgebra>, rng: &mut R) -> Self {
        let r = algebra.random_element(rng);
        let pos = &r.adjoint() * &r;
        let total = pos.trace().re;
        Self { density: pos.scale(Complex64::new(1.0 / total, 0.0)) }
    }

    pub fn value(&self, a: &AlgebraElement) -> Complex64 {
        (&self.density * a).trace()
    }

    pub fn is_tracial(&self, tol: f64) -> bool {
        let algebra = self.density.algebra();
        for x in algebra.basis() {
            for y in algebra.basis() {
                if (self.value(&(&x * &y)) - self.value(&(&y * &x))).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// max over g and the basis of |φ(α_g(b)) − φ(b)|.
    pub fn invariance_defect(&self, system: &Arc<TwistedSystem>) -> f64 {
        let mut worst: f64 = 0.0;
        for g in system.group().elements() {
            for b in system.algebra().basis() {
                worst = worst.max((self.value(&system.alpha_apply(g, &b)) - self.value(&b)).norm());
            }
        }
        worst
    }

    /// The group average φ̃(a) = (1/|G|) Σ_g φ(α_g(a)); its density is the
    /// average of the α_g⁻¹(D). Invariant whenever the α_g form a genuine
    /// homomorphism on the relevant part, in particular when σ is central
    /// or φ is tracial.
    pub fn averaged(&self, system: &Arc<TwistedSystem>) -> Self {
        let n = system.order() as f64;
        let mut acc = self.density.algebra().zero();
        for g in system.group().elements() {
            acc = &acc + &system.alpha_inv_apply(g, &self.density);
        }
        Self { density: acc.scale(Complex64::new(1.0 / n, 0.0)) }
    }
}

/// ℓ¹-style domination for the regularity criterion: the reduced distance
/// from f to its multiplied image is at most the sum of the coefficient
/// deviations, ‖Λ(T_c(f) − f)‖ ≤ Σ_g ‖T(g, f(g)) − f(g)‖.
pub fn multiplier_defect_bound(mult: &Multiplier, f: &CcElement) -> (f64, f64) {
    let mapped = mult.apply_cc(f);
    let lhs = reduced_norm(&(&mapped - f));
    let rhs: f64 = (0..f.system().order())
        .map(|g| (mapped.coeff(g) - f.coeff(g)).norm())
        .sum();
    (lhs, rhs)
}
