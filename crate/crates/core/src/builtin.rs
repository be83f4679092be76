//! A small gallery of ready-made twisted systems used by the CLI, the FFI
//! layer, and the acceptance suite.
//!
//! | name            | A        | G        | action             | twist                     |
//! |-----------------|----------|----------|--------------------|---------------------------|
//! | trivial-z2      | ℂ        | Z₂       | trivial            | none                      |
//! | z4-bicharacter  | ℂ        | Z₄       | trivial            | σ(j,k) = i^{jk}           |
//! | pauli           | ℂ        | Z₂ × Z₂  | trivial            | σ((a,b),(c,d)) = (−1)^{bc}|
//! | pointswap-c2    | ℂ ⊕ ℂ    | Z₂       | coordinate swap    | none                      |
//! | m2-inner-twist  | M₂(ℂ)    | Z₂       | Ad(diag(1, i))     | σ(1,1) = diag(1, −1)      |
//! | s3-points       | ℂ³       | S₃       | permuting 3 points | none                      |
//!
//! `pauli` comes with a distinguished 2-dimensional covariant pair: the Klein
//! group twisted by the bicharacter above has twisted group algebra M₂(ℂ),
//! realised by u = (1, Z, X, XZ) with the Pauli matrices X and Z. The pair
//! (id, u) is covariant and its integrated form is a *-isomorphism onto M₂.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::MultiMatrixAlgebra;
use crate::automorphism::Automorphism;
use crate::covariant::CovariantPair;
use crate::error::{Result, TcdsError};
use crate::group::FiniteGroup;
use crate::linalg::CMat;
use crate::module::ModuleMap;
use crate::representation::Representation;
use crate::system::TwistedSystem;

/// Names of all gallery systems, in the order `all` returns them.
pub const NAMES: [&str; 6] = [
    "trivial-z2",
    "z4-bicharacter",
    "pauli",
    "pointswap-c2",
    "m2-inner-twist",
    "s3-points",
];

/// One-line descriptions aligned with `NAMES`.
pub const SUMMARIES: [&str; 6] = [
    "complex numbers with a trivial Z2 action and no twist",
    "complex numbers, trivial Z4 action, bicharacter twist sigma(j,k) = i^(jk)",
    "Klein group over the complex numbers with the Pauli bicharacter twist",
    "two points swapped by Z2, no twist",
    "2x2 matrices with the inner Z2 action Ad(diag(1,i)) and its coboundary twist",
    "three points permuted by the symmetric group S3, no twist",
];

/// ℂ with the trivial Z₂ action and no twist.
pub fn trivial_z2() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::scalars();
    let z2 = FiniteGroup::cyclic(2);
    TwistedSystem::untwisted(
        "trivial-z2",
        a.clone(),
        z2,
        vec![Automorphism::identity(&a), Automorphism::identity(&a)],
    )
    .expect("trivial system is valid")
}

/// ℂ with trivial Z₄ action and the bicharacter twist σ(j,k) = i^{jk}.
pub fn z4_bicharacter() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::scalars();
    let z4 = FiniteGroup::cyclic(4);
    let i = Complex64::new(0.0, 1.0);
    let phases: Vec<Vec<Complex64>> =
        (0..4).map(|j| (0..4).map(|k| i.powu((j * k) as u32)).collect()).collect();
    TwistedSystem::scalar_cocycle("z4-bicharacter", a, z4, phases)
        .expect("bicharacter is a cocycle")
}

/// ℂ with the Klein group Z₂ × Z₂, trivial action, and the bicharacter
/// σ((a,b),(c,d)) = (−1)^{bc}. Its twisted group algebra is M₂(ℂ).
pub fn pauli() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::scalars();
    let klein = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    // Element (a, b) of Z₂ × Z₂ is encoded as 2a + b.
    let phases: Vec<Vec<Complex64>> = (0..4)
        .map(|g| {
            (0..4)
                .map(|h| {
                    let b = g % 2;
                    let c = h / 2;
                    Complex64::new(if b * c == 1 { -1.0 } else { 1.0 }, 0.0)
                })
                .collect()
        })
        .collect();
    TwistedSystem::scalar_cocycle("pauli", a, klein, phases).expect("bicharacter is a cocycle")
}

/// The Pauli system with its defining 2-dimensional covariant pair
/// u = (1, Z, X, XZ), π = inclusion of ℂ into M₂(ℂ) as scalars.
pub fn pauli_pair() -> (Arc<TwistedSystem>, CovariantPair) {
    let sys = pauli();
    let target = MultiMatrixAlgebra::full_matrix(2);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mat = |entries: [[Complex64; 2]; 2]| {
        ModuleMap::from_entries(
            &target,
            &[vec![target
                .from_blocks(vec![CMat::from_row_slice(
                    2,
                    2,
                    &[entries[0][0], entries[0][1], entries[1][0], entries[1][1]],
                )])
                .unwrap()]],
        )
        .unwrap()
    };
    let x = mat([[zero, one], [one, zero]]);
    let z = mat([[one, zero], [zero, -one]]);
    let xz = mat([[zero, -one], [one, zero]]);
    let pi = Representation::from_basis_images(
        sys.algebra().clone(),
        target.clone(),
        1,
        vec![ModuleMap::identity(&target, 1)],
    )
    .expect("scalar inclusion is a representation");
    let pair = CovariantPair::new(
        sys.clone(),
        pi,
        vec![ModuleMap::identity(&target, 1), z, x, xz],
    )
    .expect("Pauli unitaries form a covariant pair");
    (sys, pair)
}

/// ℂ ⊕ ℂ with Z₂ swapping the two summands and no twist.
pub fn pointswap_c2() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::direct_sum_of_scalars(2);
    let z2 = FiniteGroup::cyclic(2);
    let swap = Automorphism::permutation(&a, vec![1, 0]).expect("swap is a permutation");
    TwistedSystem::untwisted(
        "pointswap-c2",
        a.clone(),
        z2,
        vec![Automorphism::identity(&a), swap],
    )
    .expect("swap action is valid")
}

/// M₂(ℂ) with the inner Z₂ action α₁ = Ad(diag(1, i)) and the coboundary
/// twist σ(g,h) = u_g u_h u_{gh}*, so σ(1,1) = diag(1, −1). Note α₁² ≠ id
/// even though the group element squares to e; only Ad(σ(1,1)) closes the gap.
pub fn m2_inner_twist() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::full_matrix(2);
    let z2 = FiniteGroup::cyclic(2);
    let u1 = a
        .from_blocks(vec![CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ]))])
        .expect("diagonal unitary");
    TwistedSystem::inner_from_unitaries("m2-inner-twist", z2, vec![a.one(), u1])
        .expect("inner action is valid")
}

/// ℂ³ (functions on three points) with S₃ acting by pushforward of the
/// natural permutation action, no twist. r^i s^k sends point j to
/// (−1)^k j + i (mod 3), and α_g(e_j) = e_{g·j}.
pub fn s3_points() -> Arc<TwistedSystem> {
    let a = MultiMatrixAlgebra::direct_sum_of_scalars(3);
    let s3 = FiniteGroup::dihedral(3);
    let mut alpha = Vec::with_capacity(6);
    for k in 0..2usize {
        for i in 0..3usize {
            let point_map = |j: usize| {
                if k == 0 {
                    (j + i) % 3
                } else {
                    (3 - j + i) % 3
                }
            };
            // α(a)_m = a_{p[m]} must read the source point g⁻¹·m.
            let mut perm = vec![0usize; 3];
            for j in 0..3 {
                perm[point_map(j)] = j;
            }
            alpha.push(Automorphism::permutation(&a, perm).expect("point permutation"));
        }
    }
    TwistedSystem::untwisted("s3-points", a, s3, alpha).expect("permutation action is valid")
}

/// All gallery systems, in the order of `NAMES`.
pub fn all() -> Vec<Arc<TwistedSystem>> {
    vec![
        trivial_z2(),
        z4_bicharacter(),
        pauli(),
        pointswap_c2(),
        m2_inner_twist(),
        s3_points(),
    ]
}

/// Look up a gallery system by name.
pub fn by_name(name: &str) -> Result<Arc<TwistedSystem>> {
    match name {
        "trivial-z2" => Ok(trivial_z2()),
        "z4-bicharacter" => Ok(z4_bicharacter()),
        "pauli" => Ok(pauli()),
        "pointswap-c2" => Ok(pointswap_c2()),
        "m2-inner-twist" => Ok(m2_inner_twist()),
        "s3-points" => Ok(s3_points()),
        other => Err(TcdsError::BadBuilder(format!(
            "unknown builtin system '{other}'; available: {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_is_complete_and_named_consistently() {
        let systems = all();
        assert_eq!(systems.len(), NAMES.len());
        assert_eq!(NAMES.len(), SUMMARIES.len());
        for (sys, name) in systems.iter().zip(NAMES) {
            assert_eq!(sys.name(), name);
            let looked_up = by_name(name).unwrap();
            assert_eq!(looked_up.name(), name);
            assert_eq!(looked_up.order(), sys.order());
        }
        assert!(by_name("no-such-system").is_err());
    }

    #[test]
    fn gallery_covers_the_intended_feature_matrix() {
        assert!(trivial_z2().is_twist_trivial(1e-12));
        assert!(trivial_z2().is_action_trivial(1e-12));

        assert!(!z4_bicharacter().is_twist_trivial(1e-12));
        assert!(z4_bicharacter().is_sigma_central(1e-12));
        assert!(z4_bicharacter().is_action_trivial(1e-12));

        assert!(!pauli().is_twist_trivial(1e-12));
        assert!(pauli().is_sigma_central(1e-12));

        assert!(pointswap_c2().is_twist_trivial(1e-12));
        assert!(!pointswap_c2().is_action_trivial(1e-12));

        assert!(!m2_inner_twist().is_twist_trivial(1e-12));
        assert!(!m2_inner_twist().is_sigma_central(1e-12));
        assert!(!m2_inner_twist().is_action_trivial(1e-12));

        let s3 = s3_points();
        assert!(s3.is_twist_trivial(1e-12));
        assert!(!s3.group().is_abelian());
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.algebra().num_blocks(), 3);
    }

    #[test]
    fn s3_action_composes_like_the_group() {
        let sys = s3_points();
        let g = sys.group().clone();
        // Nonabelian spot check: r·s ≠ s·r, and the action tracks the product.
        let r = 1usize; // r^1 s^0 at index 0·3 + 1
        let s = 3usize; // r^0 s^1 at index 1·3 + 0
        assert_ne!(g.mul(r, s), g.mul(s, r));
        for (x, y) in [(r, s), (s, r), (r, r), (s, s)] {
            let lhs = sys.alpha(x).compose(sys.alpha(y));
            let rhs = sys.alpha(g.mul(x, y));
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn pauli_pair_is_covariant_with_anticommuting_unitaries() {
        let (sys, pair) = pauli_pair();
        assert!(pair.covariance_report().max_residual() < 1e-12);
        // X and Z anticommute; index 1 carries Z, index 2 carries X.
        let zx = pair.u(1).compose(pair.u(2));
        let xz = pair.u(2).compose(pair.u(1));
        assert!((&zx + &xz).norm() < 1e-12);
        assert_eq!(sys.order(), 4);
    }
}
