//! Twisted C*-dynamical systems Σ = (A, G, α, σ).
//!
//! A system couples a finite group G to a finite-dimensional C*-algebra A
//! through a map α: G → Aut(A) and a normalized α-cocycle
//! σ: G × G → U(A). Construction validates the defining axioms
//!     α_g ∘ α_h = Ad(σ(g,h)) ∘ α_{gh},
//!     σ(g,h) σ(gh,k) = α_g(σ(h,k)) σ(g,hk),
//!     σ(g,e) = σ(e,g) = 1,
//! so every value of this type is a genuine twisted system.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::automorphism::Automorphism;
use crate::error::{Result, TcdsError};
use crate::group::{FiniteGroup, GroupElement};
use num_complex::Complex64;
use std::sync::Arc;

pub const AXIOM_TOL: f64 = 1e-10;

/// Worst-case residual of each system axiom, measured in the C*-norm
/// over the matrix-unit basis of A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomReport {
    pub sigma_unitarity: f64,
    pub normalization: f64,
    pub identity_action: f64,
    pub twisted_action: f64,
    pub cocycle: f64,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.sigma_unitarity
            .max(self.normalization)
            .max(self.identity_action)
            .max(self.twisted_action)
            .max(self.cocycle)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSystem {
    name: String,
    algebra: Arc<MultiMatrixAlgebra>,
    group: Arc<FiniteGroup>,
    alpha: Vec<Automorphism>,
    alpha_inv: Vec<Automorphism>,
    sigma: Vec<Vec<AlgebraElement>>,
}

impl TwistedSystem {
    pub fn new(
        name: impl Into<String>,
        algebra: Arc<MultiMatrixAlgebra>,
        group: Arc<FiniteGroup>,
        alpha: Vec<Automorphism>,
        sigma: Vec<Vec<AlgebraElement>>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let n = group.order();
        if alpha.len() != n {
            return Err(TcdsError::DimensionMismatch { expected: n, got: alpha.len() });
        }
        if sigma.len() != n || sigma.iter().any(|row| row.len() != n) {
            return Err(TcdsError::DimensionMismatch { expected: n, got: sigma.len() });
        }
        for a in &alpha {
            if a.algebra() != &algebra {
                return Err(TcdsError::AlgebraMismatch);
            }
        }
        for row in &sigma {
            for s in row {
                if s.algebra() != &algebra {
                    return Err(TcdsError::AlgebraMismatch);
                }
            }
        }
        let alpha_inv = alpha.iter().map(Automorphism::inverse).collect();
        let sys = Self { name, algebra, group, alpha, alpha_inv, sigma };
        let report = sys.axiom_report();
        if report.sigma_unitarity > AXIOM_TOL {
            return Err(TcdsError::AxiomFailure(format!(
                "cocycle values are not unitary (residual {:.3e})",
                report.sigma_unitarity
            )));
        }
        if report.normalization > AXIOM_TOL {
            return Err(TcdsError::AxiomFailure(format!(
                "cocycle is not normalized at the identity (residual {:.3e})",
                report.normalization
            )));
        }
        if report.identity_action > AXIOM_TOL {
            return Err(TcdsError::AxiomFailure(format!(
                "identity element does not act trivially (residual {:.3e})",
                report.identity_action
            )));
        }
        if report.twisted_action > AXIOM_TOL {
            return Err(TcdsError::AxiomFailure(format!(
                "action is not multiplicative up to Ad(sigma) (residual {:.3e})",
                report.twisted_action
            )));
        }
        if report.cocycle > AXIOM_TOL {
            return Err(TcdsError::AxiomFailure(format!(
                "two-cocycle identity fails (residual {:.3e})",
                report.cocycle
            )));
        }
        Ok(Arc::new(sys))
    }

    /// σ ≡ 1: an ordinary (untwisted) dynamical system.
    pub fn untwisted(
        name: impl Into<String>,
        algebra: Arc<MultiMatrixAlgebra>,
        group: Arc<FiniteGroup>,
        alpha: Vec<Automorphism>,
    ) -> Result<Arc<Self>> {
        let n = group.order();
        let sigma = vec![vec![algebra.one(); n]; n];
        Self::new(name, algebra, group, alpha, sigma)
    }

    /// Trivial action with a scalar-valued cocycle σ(g,h) = phases[g][h]·1.
    pub fn scalar_cocycle(
        name: impl Into<String>,
        algebra: Arc<MultiMatrixAlgebra>,
        group: Arc<FiniteGroup>,
        phases: Vec<Vec<Complex64>>,
    ) -> Result<Arc<Self>> {
        let n = group.order();
        if phases.len() != n || phases.iter().any(|row| row.len() != n) {
            return Err(TcdsError::DimensionMismatch { expected: n, got: phases.len() });
        }
        let alpha = vec![Automorphism::identity(&algebra); n];
        let sigma = phases
            .iter()
            .map(|row| row.iter().map(|&c| algebra.scalar(c)).collect())
            .collect();
        Self::new(name, algebra, group, alpha, sigma)
    }

    /// Coboundary twist from a family of unitaries with u_e = 1:
    /// α_g = Ad(u_g) and σ(g,h) = u_g u_h u_{gh}*.
    pub fn inner_from_unitaries(
        name: impl Into<String>,
        group: Arc<FiniteGroup>,
        unitaries: Vec<AlgebraElement>,
    ) -> Result<Arc<Self>> {
        let n = group.order();
        if unitaries.len() != n {
            return Err(TcdsError::DimensionMismatch { expected: n, got: unitaries.len() });
        }
        let algebra = unitaries[0].algebra().clone();
        let alpha: Vec<Automorphism> = unitaries
            .iter()
            .map(|u| Automorphism::inner(u.clone()))
            .collect::<Result<_>>()?;
        let mut sigma = vec![vec![algebra.zero(); n]; n];
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                sigma[g][h] = &(&unitaries[g] * &unitaries[h]) * &unitaries[gh].adjoint();
            }
        }
        Self::new(name, algebra, group, alpha, sigma)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.algebra
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn alpha(&self, g: GroupElement) -> &Automorphism {
        &self.alpha[g]
    }

    pub fn alpha_inv(&self, g: GroupElement) -> &Automorphism {
        &self.alpha_inv[g]
    }

    pub fn alpha_apply(&self, g: GroupElement, a: &AlgebraElement) -> AlgebraElement {
        self.alpha[g].apply(a)
    }

    pub fn alpha_inv_apply(&self, g: GroupElement, a: &AlgebraElement) -> AlgebraElement {
        self.alpha_inv[g].apply(a)
    }

    pub fn sigma(&self, g: GroupElement, h: GroupElement) -> &AlgebraElement {
        &self.sigma[g][h]
    }

    pub fn is_twist_trivial(&self, tol: f64) -> bool {
        let one = self.algebra.one();
        self.sigma.iter().flatten().all(|s| (s - &one).norm() <= tol)
    }

    pub fn is_sigma_central(&self, tol: f64) -> bool {
        self.sigma.iter().flatten().all(|s| s.is_central(tol))
    }

    pub fn is_action_trivial(&self, tol: f64) -> bool {
        self.alpha.iter().all(|a| a.is_identity(tol))
    }

    pub fn axiom_report(&self) -> AxiomReport {
        let n = self.group.order();
        let e = self.group.identity();
        let one = self.algebra.one();
        let basis = self.algebra.basis();

        let mut sigma_unitarity: f64 = 0.0;
        for row in &self.sigma {
            for s in row {
                sigma_unitarity = sigma_unitarity.max(s.unitarity_residual());
            }
        }

        let mut normalization: f64 = 0.0;
        for g in 0..n {
            normalization = normalization
                .max((&self.sigma[g][e] - &one).norm())
                .max((&self.sigma[e][g] - &one).norm());
        }

        let identity_action = basis
            .iter()
            .map(|b| (&self.alpha[e].apply(b) - b).norm())
            .fold(0.0f64, f64::max);

        let mut twisted_action: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                let s = &self.sigma[g][h];
                for b in &basis {
                    let lhs = self.alpha[g].apply(&self.alpha[h].apply(b));
                    let rhs = &(s * &self.alpha[gh].apply(b)) * &s.adjoint();
                    twisted_action = twisted_action.max((&lhs - &rhs).norm());
                }
            }
        }

        let mut cocycle: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let gh = self.group.mul(g, h);
                    let hk = self.group.mul(h, k);
                    let lhs = &self.sigma[g][h] * &self.sigma[gh][k];
                    let rhs = &self.alpha[g].apply(&self.sigma[h][k]) * &self.sigma[g][hk];
                    cocycle = cocycle.max((&lhs - &rhs).norm());
                }
            }
        }

        AxiomReport { sigma_unitarity, normalization, identity_action, twisted_action, cocycle }
    }

    /// Two systems index the same data (used to guard mixed arithmetic).
    pub fn compatible(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

/// Residuals of consequences of the axioms, checked directly:
/// α_e = id, σ(g,g⁻¹) = α_g(σ(g⁻¹,g)), and the inverse formula
/// α_g⁻¹ = Ad(σ(g⁻¹,g)*) ∘ α_{g⁻¹}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedReport {
    pub identity_automorphism: f64,
    pub sigma_inverse_pair: f64,
    pub inverse_formula: f64,
}

impl DerivedReport {
    pub fn max_residual(&self) -> f64 {
        self.identity_automorphism.max(self.sigma_inverse_pair).max(self.inverse_formula)
    }
}

/// Check the derived identities on a validated system.
pub fn derived_identities_report(sys: &TwistedSystem) -> DerivedReport {
    let group = sys.group();
    let basis = sys.algebra().basis();
    let e = group.identity();

    let identity_automorphism =
        basis.iter().map(|b| (&sys.alpha_apply(e, b) - b).norm()).fold(0.0f64, f64::max);

    let mut sigma_inverse_pair: f64 = 0.0;
    let mut inverse_formula: f64 = 0.0;
    for g in group.elements() {
        let gi = group.inv(g);
        let lhs = sys.sigma(g, gi);
        let rhs = sys.alpha_apply(g, sys.sigma(gi, g));
        sigma_inverse_pair = sigma_inverse_pair.max((lhs - &rhs).norm());

        let s = sys.sigma(gi, g);
        for b in &basis {
            let candidate = &(&s.adjoint() * &sys.alpha_apply(gi, b)) * s;
            let roundtrip = sys.alpha_apply(g, &candidate);
            inverse_formula = inverse_formula.max((&roundtrip - b).norm());
        }
    }

    DerivedReport { identity_automorphism, sigma_inverse_pair, inverse_formula }
}

/// Scan raw system data for axiom violations without constructing the
/// system, reporting every failing instance with its witness tuple.
/// Empty output means the data passes all axioms at `AXIOM_TOL`.
pub fn axiom_witnesses(
    algebra: &Arc<MultiMatrixAlgebra>,
    group: &Arc<FiniteGroup>,
    alpha: &[Automorphism],
    sigma: &[Vec<AlgebraElement>],
) -> Vec<String> {
    let n = group.order();
    let e = group.identity();
    let one = algebra.one();
    let basis = algebra.basis();
    let mut witnesses = Vec::new();

    if alpha.len() != n || sigma.len() != n || sigma.iter().any(|row| row.len() != n) {
        witnesses.push(format!(
            "tables have the wrong shape: |G| = {n}, {} automorphisms, {} cocycle rows",
            alpha.len(),
            sigma.len()
        ));
        return witnesses;
    }

    for (g, row) in sigma.iter().enumerate() {
        for (h, s) in row.iter().enumerate() {
            let r = s.unitarity_residual();
            if r > AXIOM_TOL {
                witnesses.push(format!("sigma({g},{h}) is not unitary: residual {r:.3e}"));
            }
        }
    }
    for g in 0..n {
        let r = (&sigma[g][e] - &one).norm().max((&sigma[e][g] - &one).norm());
        if r > AXIOM_TOL {
            witnesses.push(format!("sigma is not normalized at ({g},e)/(e,{g}): residual {r:.3e}"));
        }
    }
    for b in &basis {
        let r = (&alpha[e].apply(b) - b).norm();
        if r > AXIOM_TOL {
            witnesses.push(format!("alpha_e is not the identity: residual {r:.3e}"));
            break;
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            let s = &sigma[g][h];
            let r = basis
                .iter()
                .map(|b| {
                    let lhs = alpha[g].apply(&alpha[h].apply(b));
                    let rhs = &(s * &alpha[gh].apply(b)) * &s.adjoint();
                    (&lhs - &rhs).norm()
                })
                .fold(0.0f64, f64::max);
            if r > AXIOM_TOL {
                witnesses.push(format!(
                    "alpha_{g} alpha_{h} differs from Ad(sigma({g},{h})) alpha_{gh}: residual {r:.3e}"
                ));
            }
        }
    }
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                let gh = group.mul(g, h);
                let hk = group.mul(h, k);
                let lhs = &sigma[g][h] * &sigma[gh][k];
                let rhs = &alpha[g].apply(&sigma[h][k]) * &sigma[g][hk];
                let r = (&lhs - &rhs).norm();
                if r > AXIOM_TOL {
                    witnesses.push(format!(
                        "two-cocycle identity fails at (g,h,k) = ({g},{h},{k}): residual {r:.3e}"
                    ));
                }
            }
        }
    }
    witnesses
}
