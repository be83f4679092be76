//! Dense complex linear algebra helpers shared across the crate.
//!
//! Everything here operates on small `DMatrix<Complex<f64>>` blocks
//! (desk scale: a few hundred rows at most), so plain SVD is both
//! exact enough and fast enough for norms, ranks and nullspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest singular value; the operator norm on ℓ².
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = m.clone().singular_values();
    sv.iter().cloned().fold(0.0, f64::max)
}

/// All singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    spectral_norm(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is
/// symmetrized first so roundoff-level skew does not leak in.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().cloned().unwrap_or(0.0)
}

/// Numerical rank with an absolute singular-value cutoff.
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    singular_values(m).iter().filter(|s| **s > tol).count()
}

/// Orthonormal basis of the right nullspace, as columns.
pub fn nullspace(m: &CMat, tol: f64) -> Vec<CVec> {
    let ncols = m.ncols();
    if ncols == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..ncols)
            .map(|j| CVec::from_fn(ncols, |i, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }))
            .collect();
    }
    // thin SVD truncates v_t to min(rows, cols) rows; pad wide matrices
    // with zero rows so v_t spans all of ℂ^cols
    let padded = if m.nrows() < ncols {
        let mut p = CMat::zeros(ncols, ncols);
        p.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("svd with v_t requested");
    let sv = svd.singular_values;
    let r = (0..sv.len()).filter(|&i| sv[i] > tol).count();
    (r..vt.nrows())
        .map(|i| vt.row(i).adjoint())
        .collect()
}

/// Orthonormal basis of the column space.
pub fn column_space(m: &CMat, tol: f64) -> Vec<CVec> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let sv = svd.singular_values;
    (0..sv.len())
        .filter(|&i| sv[i] > tol)
        .map(|i| u.column(i).into_owned())
        .collect()
}

/// Residual of v after projecting onto the span of an orthonormal set.
pub fn projection_residual(basis: &[CVec], v: &CVec) -> f64 {
    let mut rem = v.clone();
    for b in basis {
        let coeff = b.dotc(&rem);
        rem -= b.map(|x| x * coeff);
    }
    rem.norm()
}

/// Subspace inclusion span(inner) ⊆ span(outer), both given as
/// orthonormal bases; vectors are assumed unit length.
pub fn subspace_contained(inner: &[CVec], outer: &[CVec], tol: f64) -> bool {
    inner.iter().all(|v| projection_residual(outer, v) <= tol)
}

/// Minimum-norm least-squares solve m·x = b.
pub fn lstsq(m: &CMat, b: &CVec, tol: f64) -> CVec {
    let svd = m.clone().svd(true, true);
    svd.solve(b, tol).expect("svd solve")
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
}

/// Haar-like random unitary from the QR factorization of a Gaussian-ish
/// ensemble, with the phase convention that makes R's diagonal positive.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let a = random_complex_matrix(rng, n, n);
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}
