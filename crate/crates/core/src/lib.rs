//! Computational engine for discrete twisted C*-dynamical systems
//! Σ = (A, G, α, σ) with A a finite-dimensional C*-algebra and G a
//! finite group or lattice window.
//!
//! The crate builds the twisted convolution algebra of such a system,
//! realizes its regular representations as explicit matrices, computes
//! Fourier coefficients and conditional expectations, certifies Fell
//! absorption numerically, and checks approximation-property data
//! (multiplier bounds, Følner certificates, subsystem transport).

pub mod algebra;
pub mod approx;
pub mod automorphism;
pub mod builtin;
pub mod config;
pub mod conv;
pub mod covariant;
pub mod equivariant;
pub mod error;
pub mod fell;
pub mod fourier;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod module;
pub mod regularity;
pub mod report;
pub mod representation;
pub mod runner;
pub mod system;

pub use algebra::{AlgebraElement, MultiMatrixAlgebra};
pub use approx::{exel_t_value, lattice_certificate_deviations, multiplier_defect_bound, ApproxCertificate, CertificateReport, Multiplier, ScalarCertificate, State, SubsystemEmbedding};
pub use automorphism::Automorphism;
pub use equivariant::{central_subsystem, EquivariantPair};
pub use error::{Result, TcdsError};
pub use fell::{absorption_residual, absorption_unitary, kronecker_absorption, product_pair, regular_pair_of, Compression};
pub use fourier::{reduced_algebra_dim, ReducedOperator};
pub use group::{FiniteGroup, GroupElement};
pub use conv::CcElement;
pub use covariant::{canonical_lambda, reduced_norm, CovariantPair};
pub use lattice::LatticeWindow;
pub use module::{ModuleMap, ModuleVector};
pub use regularity::{classify, ExpectationData, RegularityReport};
pub use representation::Representation;
pub use system::{AxiomReport, TwistedSystem};
