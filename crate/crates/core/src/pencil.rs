//! Matrix pencils, homogeneous eigenvalues, and small dense-matrix utilities.
//!
//! A pencil is the one-parameter family `A - lambda B` for a pair of
//! same-shape complex matrices. Eigenvalues are kept in homogeneous form
//! `(alpha, beta)` with `lambda = alpha/beta`, so the point at infinity
//! (`beta = 0`) needs no IEEE infinities and survives every downstream
//! formula without NaN propagation.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMat = Mat<Complex64>;
/// Dense complex column vector.
pub type CVec = faer::Col<Complex64>;

/// A pair `(A, B)` of same-shape complex matrices, possibly rectangular.
#[derive(Clone, Debug)]
pub struct Pencil {
    a: CMat,
    b: CMat,
}

impl Pencil {
    /// Builds a pencil after checking that both matrices have the same
    /// nonempty shape and only finite entries.
    pub fn new(a: CMat, b: CMat) -> Result<Self> {
        if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::ShapeMismatch("empty pencil".into()));
        }
        for m in [&a, &b] {
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    let v = m[(i, j)];
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(Error::NonFinite);
                    }
                }
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Evaluates the homogeneous pencil `beta*A - alpha*B`.
    ///
    /// For a normalized `(alpha, beta)` this is the residual matrix whose
    /// near-null vectors witness the eigenvalue; at `beta = 0` it degenerates
    /// to `-alpha*B`, the correct limit form for an infinite eigenvalue.
    pub fn homogeneous(&self, v: ProjectiveValue) -> CMat {
        let (al, be) = (v.alpha_h(), v.beta_h());
        CMat::from_fn(self.nrows(), self.ncols(), |i, j| {
            be * self.a[(i, j)] - al * self.b[(i, j)]
        })
    }

    /// Frobenius norms of `(A, B)`, the scale reference for residual tests.
    pub fn norms(&self) -> (f64, f64) {
        (self.a.norm_l2(), self.b.norm_l2())
    }
}

/// Maximum column absolute sum (the matrix 1-norm).
pub fn one_norm(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let mut s = 0.0;
        for i in 0..m.nrows() {
            s += m[(i, j)].norm();
        }
        best = best.max(s);
    }
    best
}

/// Conjugate transpose as an owned matrix.
pub fn adjoint(m: &CMat) -> CMat {
    CMat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// Returns a pencil with at least as many rows as columns.
///
/// A wide pencil is replaced by its conjugate-transpose `(A^*, B^*)` and the
/// flag is set; the transpose pencil's eigenvalues are the complex conjugates
/// of the originals and its left/right structure is mirrored, so callers must
/// map results back.
pub fn to_tall(p: &Pencil) -> (Pencil, bool) {
    if p.nrows() >= p.ncols() {
        (p.clone(), false)
    } else {
        (
            Pencil {
                a: adjoint(&p.a),
                b: adjoint(&p.b),
            },
            true,
        )
    }
}

/// Rescales both matrices to unit 1-norm and reports the scale factors.
///
/// Eigenvalues of the scaled pencil map back via
/// `lambda_orig = (s_a/s_b) * lambda_scaled`.
pub fn one_norm_scale(p: &Pencil) -> Result<(Pencil, f64, f64)> {
    let sa = one_norm(&p.a);
    let sb = one_norm(&p.b);
    if sa == 0.0 || sb == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let a = CMat::from_fn(p.nrows(), p.ncols(), |i, j| p.a[(i, j)] / sa);
    let b = CMat::from_fn(p.nrows(), p.ncols(), |i, j| p.b[(i, j)] / sb);
    Ok((Pencil { a, b }, sa, sb))
}

/// Kronecker product `P (x) Q`.
///
/// Entry `[(i-1)p2+k, (j-1)q2+l] = P[i,j] * Q[k,l]` in 1-based indexing,
/// size `(p1 p2) x (q1 q2)`.
pub fn kron(p: &CMat, q: &CMat) -> CMat {
    let (p1, q1) = (p.nrows(), p.ncols());
    let (p2, q2) = (q.nrows(), q.ncols());
    let mut out = CMat::zeros(p1 * p2, q1 * q2);
    for i in 0..p1 {
        for j in 0..q1 {
            let pij = p[(i, j)];
            if pij == Complex64::ZERO {
                continue;
            }
            for k in 0..p2 {
                for l in 0..q2 {
                    out[(i * p2 + k, j * q2 + l)] = pij * q[(k, l)];
                }
            }
        }
    }
    out
}

/// Homogeneous eigenvalue `(alpha, beta)` with `lambda = alpha/beta`.
///
/// Stored normalized so that `|alpha|^2 + |beta|^2 = 1`, with the phase
/// canonicalized (beta real nonnegative, or alpha real positive when
/// `beta = 0`) so equal eigenvalues compare equal bit-for-bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveValue {
    alpha: Complex64,
    beta: Complex64,
}

impl ProjectiveValue {
    /// Normalizes a homogeneous pair. Fails on `(0, 0)` or non-finite input.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let s = alpha.norm().hypot(beta.norm());
        if s == 0.0 {
            return Err(Error::ZeroProjective);
        }
        let (mut alpha, mut beta) = (alpha / s, beta / s);
        // phase canonicalization
        let phase = if beta.norm() > 0.0 {
            beta.conj() / beta.norm()
        } else {
            alpha.conj() / alpha.norm()
        };
        alpha *= phase;
        beta *= phase;
        if beta.norm() > 0.0 {
            beta = Complex64::new(beta.norm(), 0.0);
        }
        Ok(Self { alpha, beta })
    }

    /// Encodes a finite eigenvalue.
    pub fn from_lambda(lambda: Complex64) -> Self {
        Self::new(lambda, Complex64::ONE).expect("finite lambda")
    }

    /// The point at infinity, `(1, 0)`.
    pub fn infinity() -> Self {
        Self {
            alpha: Complex64::ONE,
            beta: Complex64::ZERO,
        }
    }

    pub fn alpha_h(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta_h(&self) -> Complex64 {
        self.beta
    }

    /// `beta` is exactly zero: the backend produced a bona fide infinity.
    pub fn is_exactly_infinite(&self) -> bool {
        self.beta == Complex64::ZERO
    }

    /// Numerically infinite: `|beta| <= 100 eps |alpha|`.
    ///
    /// Huge finite representatives of infinite eigenvalues (from nilpotent
    /// blocks of size >= 2) do not pass this test; they are separated later
    /// by the finite/infinite classifier.
    pub fn is_numerically_infinite(&self) -> bool {
        self.beta.norm() <= 100.0 * f64::EPSILON * self.alpha.norm()
    }

    /// The affine representative `alpha/beta` (non-finite when `beta = 0`).
    pub fn lambda(&self) -> Complex64 {
        self.alpha / self.beta
    }

    /// Complex conjugate (the eigenvalue of the conjugate-transpose pencil).
    pub fn conj(&self) -> Self {
        Self::new(self.alpha.conj(), self.beta.conj()).expect("conjugate of valid value")
    }

    /// Chordal distance on the Riemann sphere,
    /// `|a1 b2 - a2 b1|` for unit-normalized pairs.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        (self.alpha * other.beta - other.alpha * self.beta).norm()
    }
}

/// Eigenvalue with unit right and left eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenTriplet {
    pub value: ProjectiveValue,
    pub right: CVec,
    pub left: CVec,
}
