//! Pencils with prescribed Kronecker structure, hidden behind random
//! equivalence transformations.
//!
//! The canonical form is assembled block-diagonally from Jordan blocks
//! `J_d(lambda0) - lambda I`, nilpotent blocks `I - lambda N_e`, right
//! singular blocks `L_m` of size `m x (m+1)`, and left singular blocks
//! `L_n^T` of size `(n+1) x n`, in that order. Since the structure (and so
//! the normal rank and true spectrum) is known exactly, generated pencils are
//! the test oracle for every extraction method.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pencil::{CMat, Pencil, ProjectiveValue};
use crate::sampling::{complex_gaussian, real_gaussian};

/// Structural description of a pencil by its Kronecker blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct KcfSpec {
    /// Sizes `m_i >= 0` of right singular blocks `L_{m_i}` (`m_i x (m_i+1)`).
    pub right_minimal_indices: Vec<usize>,
    /// Sizes `n_j >= 0` of left singular blocks `L_{n_j}^T` (`(n_j+1) x n_j`).
    pub left_minimal_indices: Vec<usize>,
    /// Finite eigenvalues with their Jordan block sizes.
    pub jordan_blocks: Vec<(Complex64, usize)>,
    /// Sizes of nilpotent blocks carrying the eigenvalue infinity.
    pub infinite_blocks: Vec<usize>,
}

impl KcfSpec {
    pub fn validate(&self) -> Result<()> {
        if self.jordan_blocks.iter().any(|&(_, d)| d == 0) {
            return Err(Error::InvalidSpec("Jordan block of size 0".into()));
        }
        if self.infinite_blocks.iter().any(|&e| e == 0) {
            return Err(Error::InvalidSpec("infinite block of size 0".into()));
        }
        if self.rows() == 0 || self.cols() == 0 {
            return Err(Error::InvalidSpec("structure has an empty side".into()));
        }
        for &(lam, _) in &self.jordan_blocks {
            if !lam.re.is_finite() || !lam.im.is_finite() {
                return Err(Error::InvalidSpec("non-finite Jordan eigenvalue".into()));
            }
        }
        Ok(())
    }

    pub fn regular_size(&self) -> usize {
        self.jordan_blocks.iter().map(|&(_, d)| d).sum::<usize>()
            + self.infinite_blocks.iter().sum::<usize>()
    }

    pub fn rows(&self) -> usize {
        self.right_minimal_indices.iter().sum::<usize>()
            + self
                .left_minimal_indices
                .iter()
                .map(|&n| n + 1)
                .sum::<usize>()
            + self.regular_size()
    }

    pub fn cols(&self) -> usize {
        self.right_minimal_indices
            .iter()
            .map(|&m| m + 1)
            .sum::<usize>()
            + self.left_minimal_indices.iter().sum::<usize>()
            + self.regular_size()
    }

    /// Normal rank: minimal indices plus the regular part.
    pub fn normal_rank(&self) -> usize {
        self.right_minimal_indices.iter().sum::<usize>()
            + self.left_minimal_indices.iter().sum::<usize>()
            + self.regular_size()
    }

    /// True eigenvalues with algebraic multiplicities, aggregating equal
    /// Jordan eigenvalues and all infinite blocks.
    pub fn true_eigenvalues(&self) -> Vec<(ProjectiveValue, usize)> {
        let mut out: Vec<(ProjectiveValue, usize)> = Vec::new();
        for &(lam, d) in &self.jordan_blocks {
            let v = ProjectiveValue::from_lambda(lam);
            match out
                .iter_mut()
                .find(|(w, _)| w.chordal_distance(&v) < 1e-14)
            {
                Some((_, mult)) => *mult += d,
                None => out.push((v, d)),
            }
        }
        let inf: usize = self.infinite_blocks.iter().sum();
        if inf > 0 {
            out.push((ProjectiveValue::infinity(), inf));
        }
        out
    }
}

/// A generated pencil together with the exact structural truth.
#[derive(Clone, Debug)]
pub struct GeneratedPencil {
    pub pencil: Pencil,
    pub spec: KcfSpec,
    pub nrank: usize,
    pub true_eigenvalues: Vec<(ProjectiveValue, usize)>,
}

/// Assembles the block-diagonal canonical pencil for a structure description.
pub fn build_canonical(spec: &KcfSpec) -> Result<Pencil> {
    spec.validate()?;
    let (rows, cols) = (spec.rows(), spec.cols());
    let mut a = CMat::zeros(rows, cols);
    let mut b = CMat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);

    for &(lam, d) in &spec.jordan_blocks {
        for i in 0..d {
            a[(r + i, c + i)] = lam;
            b[(r + i, c + i)] = Complex64::ONE;
            if i + 1 < d {
                a[(r + i, c + i + 1)] = Complex64::ONE;
            }
        }
        r += d;
        c += d;
    }
    for &e in &spec.infinite_blocks {
        for i in 0..e {
            a[(r + i, c + i)] = Complex64::ONE;
            if i + 1 < e {
                b[(r + i, c + i + 1)] = Complex64::ONE;
            }
        }
        r += e;
        c += e;
    }
    for &m in &spec.right_minimal_indices {
        // L_m = [0 I_m] - lambda [I_m 0], size m x (m+1)
        for i in 0..m {
            a[(r + i, c + i + 1)] = Complex64::ONE;
            b[(r + i, c + i)] = Complex64::ONE;
        }
        r += m;
        c += m + 1;
    }
    for &n in &spec.left_minimal_indices {
        // L_n^T, size (n+1) x n
        for i in 0..n {
            a[(r + i + 1, c + i)] = Complex64::ONE;
            b[(r + i, c + i)] = Complex64::ONE;
        }
        r += n + 1;
        c += n;
    }
    debug_assert_eq!((r, c), (rows, cols));
    Pencil::new(a, b)
}

/// Upper bound on acceptable condition numbers for the random transforms;
/// ill-conditioned transforms destroy the true/random residual separation.
const TRANSFORM_COND_LIMIT: f64 = 1e8;
const TRANSFORM_ATTEMPTS: usize = 10;

/// Hides the canonical structure behind random invertible transforms
/// `P * (A0 - lambda B0) * Q`, real Gaussian by default.
pub fn generate<R: Rng + ?Sized>(spec: &KcfSpec, rng: &mut R) -> Result<GeneratedPencil> {
    generate_with(spec, rng, false)
}

/// As [`generate`], with complex Gaussian transforms when `complex` is set.
pub fn generate_with<R: Rng + ?Sized>(
    spec: &KcfSpec,
    rng: &mut R,
    complex: bool,
) -> Result<GeneratedPencil> {
    let canonical = build_canonical(spec)?;
    let (rows, cols) = (canonical.nrows(), canonical.ncols());
    let p = sample_well_conditioned(rng, rows, complex)?;
    let q = sample_well_conditioned(rng, cols, complex)?;
    let a = crate::dense::mul3(&p, canonical.a(), &q);
    let b = crate::dense::mul3(&p, canonical.b(), &q);
    Ok(GeneratedPencil {
        pencil: Pencil::new(a, b)?,
        spec: spec.clone(),
        nrank: spec.normal_rank(),
        true_eigenvalues: spec.true_eigenvalues(),
    })
}

fn sample_well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> Result<CMat> {
    for _ in 0..TRANSFORM_ATTEMPTS {
        let m = if complex {
            complex_gaussian(rng, n, n)
        } else {
            real_gaussian(rng, n, n)
        };
        let Ok(s) = crate::dense::singular_values(&m) else {
            continue;
        };
        let (smax, smin) = (s[0], s[n - 1]);
        if smin > 0.0 && smax / smin <= TRANSFORM_COND_LIMIT {
            return Ok(m);
        }
    }
    Err(Error::SingularTransform(TRANSFORM_ATTEMPTS))
}
