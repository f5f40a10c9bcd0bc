//! Sequential dense kernels.
//!
//! Every faer entry point here passes `Par::Seq` explicitly, so results are
//! bit-identical across runs regardless of the global thread-pool
//! configuration; the operator overloads and convenience methods would pick
//! up the global rayon pool instead, whose blocking is thread-count
//! dependent. Reproducibility of seeded runs is part of this crate's
//! contract, so all internal linear algebra goes through this module.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::matmul::matmul;
use faer::linalg::svd::{svd, svd_scratch, ComputeSvdVectors, SvdParams};
use faer::{Accum, Auto, Par, Spec};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pencil::{CMat, CVec};

/// `a * b`, sequential.
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), b.ncols());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a.as_ref(),
        b.as_ref(),
        Complex64::ONE,
        Par::Seq,
    );
    out
}

/// `a * b * c`, sequential.
pub fn mul3(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    mul(&mul(a, b), c)
}

/// `a * x`, sequential.
pub fn matvec(a: &CMat, x: &CVec) -> CVec {
    let mut out = CVec::zeros(a.nrows());
    matmul(
        out.as_mat_mut(),
        Accum::Replace,
        a.as_ref(),
        x.as_mat(),
        Complex64::ONE,
        Par::Seq,
    );
    out
}

/// Singular values in nonincreasing order, sequential.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let size = m.nrows().min(m.ncols());
    if size == 0 {
        return Ok(Vec::new());
    }
    let mut s = faer::diag::Diag::<Complex64>::zeros(size);
    let params: Spec<SvdParams, Complex64> = Spec::new(Auto::<Complex64>::auto());
    let mut buf = MemBuffer::new(svd_scratch::<Complex64>(
        m.nrows(),
        m.ncols(),
        ComputeSvdVectors::No,
        ComputeSvdVectors::No,
        Par::Seq,
        params,
    ));
    svd(
        m.as_ref(),
        s.as_mut(),
        None,
        None,
        Par::Seq,
        MemStack::new(&mut buf),
        params,
    )
    .map_err(|e| Error::BackendFailure(format!("svd: {e:?}")))?;
    Ok((0..size).map(|i| s[i].re).collect())
}

/// Determinant by partial-pivot LU.
pub fn det(m: &CMat) -> Complex64 {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut lu = m.clone();
    let mut out = Complex64::ONE;
    for col in 0..n {
        let mut piv = col;
        let mut best = lu[(col, col)].norm();
        for r in col + 1..n {
            let v = lu[(r, col)].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::ZERO;
        }
        if piv != col {
            for c in 0..n {
                let t = lu[(col, c)];
                lu[(col, c)] = lu[(piv, c)];
                lu[(piv, c)] = t;
            }
            out = -out;
        }
        let d = lu[(col, col)];
        out *= d;
        for r in col + 1..n {
            let f = lu[(r, col)] / d;
            for c in col + 1..n {
                let sub = f * lu[(col, c)];
                lu[(r, c)] -= sub;
            }
        }
    }
    out
}

/// Solves `a x = b` by partial-pivot LU; `None` when a pivot vanishes.
pub fn solve(a: &CMat, b: &CVec) -> Option<CVec> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut piv = col;
        let mut best = lu[(col, col)].norm();
        for r in col + 1..n {
            let v = lu[(r, col)].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                let t = lu[(col, c)];
                lu[(col, c)] = lu[(piv, c)];
                lu[(piv, c)] = t;
            }
            let t = x[col];
            x[col] = x[piv];
            x[piv] = t;
        }
        let d = lu[(col, col)];
        for r in col + 1..n {
            let f = lu[(r, col)] / d;
            for c in col + 1..n {
                let sub = f * lu[(col, c)];
                lu[(r, c)] -= sub;
            }
            let sub = f * x[col];
            x[r] -= sub;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for c in col + 1..n {
            let sub = lu[(col, c)] * x[c];
            s -= sub;
        }
        x[col] = s / lu[(col, col)];
    }
    Some(x)
}

/// Orthonormalizes the columns of `g` in order (Gram-Schmidt, two passes).
///
/// The implied triangular factor has a positive real diagonal, so applying
/// this to a complex Gaussian matrix samples the Haar distribution.
pub fn orthonormalize(g: &CMat) -> CMat {
    let (n, k) = (g.nrows(), g.ncols());
    let mut q = g.clone();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let mut h = Complex64::ZERO;
                for r in 0..n {
                    h += q[(r, i)].conj() * q[(r, j)];
                }
                for r in 0..n {
                    let sub = h * q[(r, i)];
                    q[(r, j)] -= sub;
                }
            }
        }
        let mut nrm2 = 0.0;
        for r in 0..n {
            nrm2 += q[(r, j)].norm_sqr();
        }
        let nrm = nrm2.sqrt();
        if nrm == 0.0 {
            // measure-zero event for random input; restart from a basis vector
            q[(j % n, j)] = Complex64::ONE;
            let mut again = 1.0;
            for _ in 0..2 {
                for i in 0..j {
                    let mut h = Complex64::ZERO;
                    for r in 0..n {
                        h += q[(r, i)].conj() * q[(r, j)];
                    }
                    for r in 0..n {
                        let sub = h * q[(r, i)];
                        q[(r, j)] -= sub;
                    }
                }
                again = (0..n).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
            }
            for r in 0..n {
                q[(r, j)] /= again;
            }
            continue;
        }
        for r in 0..n {
            q[(r, j)] /= nrm;
        }
    }
    q
}
