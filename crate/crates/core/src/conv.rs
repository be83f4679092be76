//! The twisted convolution *-algebra C_c(Σ) of a system Σ = (A, G, α, σ).
//!
//! Since G is finite, C_c(G, A) is all of A^G; an element stores one
//! coefficient per group element. The product and involution are
//!     (f₁ ∗ f₂)(h) = Σ_g f₁(g) α_g(f₂(g⁻¹h)) σ(g, g⁻¹h),
//!     f*(h) = σ(h, h⁻¹)* α_h(f(h⁻¹))*.
//! The same coefficient functions also serve as vectors of the Hilbert
//! modules A^G and A^Σ, so both inner products live here too.

use crate::algebra::AlgebraElement;
use crate::error::{Result, TcdsError};
use crate::group::GroupElement;
use crate::system::TwistedSystem;
use num_complex::Complex64;
use rand::Rng;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct CcElement {
    system: Arc<TwistedSystem>,
    coeffs: Vec<AlgebraElement>,
}

impl CcElement {
    pub fn zero(system: &Arc<TwistedSystem>) -> Self {
        let coeffs = (0..system.order()).map(|_| system.algebra().zero()).collect();
        Self { system: system.clone(), coeffs }
    }

    /// The unit 1 ⊙ δ_e.
    pub fn one(system: &Arc<TwistedSystem>) -> Self {
        Self::delta(system, system.group().identity(), system.algebra().one())
    }

    /// a ⊙ δ_g: the function supported at g with value a.
    pub fn delta(system: &Arc<TwistedSystem>, g: GroupElement, a: AlgebraElement) -> Self {
        assert_eq!(a.algebra(), system.algebra(), "coefficient must live in A");
        let mut f = Self::zero(system);
        f.coeffs[g] = a;
        f
    }

    pub fn from_coeffs(system: &Arc<TwistedSystem>, coeffs: Vec<AlgebraElement>) -> Result<Self> {
        if coeffs.len() != system.order() {
            return Err(TcdsError::DimensionMismatch {
                expected: system.order(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            if c.algebra() != system.algebra() {
                return Err(TcdsError::AlgebraMismatch);
            }
        }
        Ok(Self { system: system.clone(), coeffs })
    }

    pub fn random<R: Rng>(system: &Arc<TwistedSystem>, rng: &mut R) -> Self {
        let coeffs = (0..system.order()).map(|_| system.algebra().random_element(rng)).collect();
        Self { system: system.clone(), coeffs }
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    pub fn coeff(&self, g: GroupElement) -> &AlgebraElement {
        &self.coeffs[g]
    }

    pub fn coeff_mut(&mut self, g: GroupElement) -> &mut AlgebraElement {
        &mut self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn support(&self, tol: f64) -> Vec<GroupElement> {
        (0..self.coeffs.len()).filter(|&g| self.coeffs[g].norm() > tol).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            system: self.system.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            TwistedSystem::compatible(&self.system, &other.system),
            "elements belong to different systems"
        );
    }

    /// Twisted convolution product.
    pub fn convolve(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let grp = self.system.group();
        let mut out = Self::zero(&self.system);
        for g in grp.elements() {
            let fg = &self.coeffs[g];
            if fg.norm() == 0.0 {
                continue;
            }
            for k in grp.elements() {
                // contribute to h = g·k the term f₁(g) α_g(f₂(k)) σ(g,k)
                let h = grp.mul(g, k);
                let term =
                    &(fg * &self.system.alpha_apply(g, &other.coeffs[k])) * self.system.sigma(g, k);
                out.coeffs[h] = &out.coeffs[h] + &term;
            }
        }
        out
    }

    /// Involution f*(h) = σ(h,h⁻¹)* α_h(f(h⁻¹))*.
    pub fn star(&self) -> Self {
        let grp = self.system.group();
        let mut out = Self::zero(&self.system);
        for h in grp.elements() {
            let hi = grp.inv(h);
            out.coeffs[h] = &self.system.sigma(h, hi).adjoint()
                * &self.system.alpha_apply(h, &self.coeffs[hi]).adjoint();
        }
        out
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(AlgebraElement::norm).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(AlgebraElement::norm).fold(0.0, f64::max)
    }

    /// A^G inner product ⟨ξ,η⟩ = Σ_g ξ(g)* η(g).
    pub fn plain_inner(&self, other: &Self) -> AlgebraElement {
        self.check_compatible(other);
        let mut acc = self.system.algebra().zero();
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc = &acc + &(&a.adjoint() * b);
        }
        acc
    }

    /// A^Σ inner product ⟨ξ,η⟩_α = Σ_g α_g⁻¹(ξ(g)* η(g)).
    pub fn twisted_inner(&self, other: &Self) -> AlgebraElement {
        self.check_compatible(other);
        let mut acc = self.system.algebra().zero();
        for g in self.system.group().elements() {
            acc = &acc + &self.system.alpha_inv_apply(g, &(&self.coeffs[g].adjoint() * &other.coeffs[g]));
        }
        acc
    }

    pub fn plain_norm(&self) -> f64 {
        self.plain_inner(self).norm().sqrt()
    }

    pub fn twisted_norm(&self) -> f64 {
        self.twisted_inner(self).norm().sqrt()
    }

    /// A^G right action (ξ·a)(g) = ξ(g) a.
    pub fn right_mul_plain(&self, a: &AlgebraElement) -> Self {
        Self {
            system: self.system.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// A^Σ right action (ξ × a)(g) = ξ(g) α_g(a).
    pub fn right_mul_twisted(&self, a: &AlgebraElement) -> Self {
        let mut out = Self::zero(&self.system);
        for g in self.system.group().elements() {
            out.coeffs[g] = &self.coeffs[g] * &self.system.alpha_apply(g, a);
        }
        out
    }

    /// The unitary J: A^G → A^Σ, (Jξ)(g) = α_g(ξ(g)).
    pub fn j_map(&self) -> Self {
        let mut out = Self::zero(&self.system);
        for g in self.system.group().elements() {
            out.coeffs[g] = self.system.alpha_apply(g, &self.coeffs[g]);
        }
        out
    }

    /// J*: A^Σ → A^G, (J*ξ)(g) = α_g⁻¹(ξ(g)).
    pub fn j_inv_map(&self) -> Self {
        let mut out = Self::zero(&self.system);
        for g in self.system.group().elements() {
            out.coeffs[g] = self.system.alpha_inv_apply(g, &self.coeffs[g]);
        }
        out
    }
}

impl Add for &CcElement {
    type Output = CcElement;
    fn add(self, rhs: &CcElement) -> CcElement {
        self.check_compatible(rhs);
        CcElement {
            system: self.system.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CcElement {
    type Output = CcElement;
    fn sub(self, rhs: &CcElement) -> CcElement {
        self.check_compatible(rhs);
        CcElement {
            system: self.system.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CcElement {
    type Output = CcElement;
    fn neg(self) -> CcElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
