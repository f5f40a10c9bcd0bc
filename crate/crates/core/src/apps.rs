//! Application drivers that reduce three problem classes to singular
//! generalized eigenvalue problems.
//!
//! - Bivariate polynomial systems given by determinantal representations:
//!   the lambda parts of the roots are the finite regular eigenvalues of the
//!   operator-determinant pencil built from two Kronecker products.
//! - Double-eigenvalue location: values `lambda` such that `A + lambda B`
//!   has a (non-semisimple) double eigenvalue, via a structured pencil of
//!   size `2n^2` and normal rank `2n^2 - n`.
//! - Transmission zeros of a state-space system: finite regular eigenvalues
//!   of the rectangular system pencil, solved by the projection method's
//!   native rectangular path.

use num_complex::Complex64;
use rand::Rng;

use crate::backend::eig_triplets;
use crate::classify::{extract_finite, ClassifierConfig};
use crate::error::{Error, Result};
use crate::nrank::estimate_normal_rank;
use crate::pencil::{kron, to_tall, CMat, Pencil, ProjectiveValue};
use crate::solvers::{project_solve, SolverConfig};

/// Matrices of a determinantal representation
/// `p_i(lambda, mu) = det(A_i + lambda B_i + mu C_i)`, `i = 1, 2`.
#[derive(Clone, Debug)]
pub struct DeterminantalRep {
    pub a1: CMat,
    pub b1: CMat,
    pub c1: CMat,
    pub a2: CMat,
    pub b2: CMat,
    pub c2: CMat,
    /// Total degree when the representation follows the uniform construction
    /// (blocks of size `2d - 1`); enables the known rank bookkeeping.
    pub uniform_degree: Option<usize>,
}

impl DeterminantalRep {
    pub fn new(a1: CMat, b1: CMat, c1: CMat, a2: CMat, b2: CMat, c2: CMat) -> Result<Self> {
        let size = a1.nrows();
        for m in [&a1, &b1, &c1, &a2, &b2, &c2] {
            if m.nrows() != size || m.ncols() != size {
                return Err(Error::ShapeMismatch(
                    "all six blocks must be square of equal size".into(),
                ));
            }
        }
        Ok(Self {
            a1,
            b1,
            c1,
            a2,
            b2,
            c2,
            uniform_degree: None,
        })
    }

    /// Marks the representation as the uniform construction of total degree
    /// `d`; the blocks must then have size `2d - 1`.
    pub fn with_uniform_degree(
        a1: CMat,
        b1: CMat,
        c1: CMat,
        a2: CMat,
        b2: CMat,
        c2: CMat,
        d: usize,
    ) -> Result<Self> {
        let mut rep = Self::new(a1, b1, c1, a2, b2, c2)?;
        if d == 0 || rep.size() != 2 * d - 1 {
            return Err(Error::ShapeMismatch(format!(
                "uniform degree {d} needs blocks of size {}, got {}",
                2 * d - 1,
                rep.size()
            )));
        }
        rep.uniform_degree = Some(d);
        Ok(rep)
    }

    pub fn size(&self) -> usize {
        self.a1.nrows()
    }

    fn eval(&self, first: bool, l: Complex64, m: Complex64) -> CMat {
        let (a, b, c) = if first {
            (&self.a1, &self.b1, &self.c1)
        } else {
            (&self.a2, &self.b2, &self.c2)
        };
        CMat::from_fn(self.size(), self.size(), |i, j| {
            a[(i, j)] + l * b[(i, j)] + m * c[(i, j)]
        })
    }

    /// `|det(A_i + lambda B_i + mu C_i)|` scaled by the Frobenius norm to the
    /// matrix size, a dimensionless root residual.
    pub fn residual(&self, first: bool, l: Complex64, m: Complex64) -> f64 {
        let mat = self.eval(first, l, m);
        let det = crate::dense::det(&mat).norm();
        let scale = mat.norm_l2().powi(self.size() as i32).max(f64::MIN_POSITIVE);
        det / scale
    }
}

/// Operator-determinant pencil of a two-parameter problem.
#[derive(Clone, Debug)]
pub struct DeltaPencils {
    pub delta1: CMat,
    pub delta0: CMat,
    /// Known normal rank, when the construction guarantees one.
    pub expected_nrank: Option<usize>,
}

impl DeltaPencils {
    pub fn pencil(&self) -> Result<Pencil> {
        Pencil::new(self.delta1.clone(), self.delta0.clone())
    }

    pub fn size(&self) -> usize {
        self.delta1.nrows()
    }
}

/// `Delta_1 = C1 (x) A2 - A1 (x) C2`, `Delta_0 = B1 (x) C2 - C1 (x) B2`.
///
/// For the uniform construction of total degree `d` the pencil has size
/// `(2d-1)^2` and rank-completion dimension `(d-1)^2`.
pub fn build_delta_pencils(rep: &DeterminantalRep) -> Result<DeltaPencils> {
    let delta1 = kron(&rep.c1, &rep.a2) - kron(&rep.a1, &rep.c2);
    let delta0 = kron(&rep.b1, &rep.c2) - kron(&rep.c1, &rep.b2);
    let expected_nrank = rep.uniform_degree.map(|d| {
        let n = (2 * d - 1) * (2 * d - 1);
        n - (d - 1) * (d - 1)
    });
    Ok(DeltaPencils {
        delta1,
        delta0,
        expected_nrank,
    })
}

/// A solved root of the bivariate system with its per-polynomial residuals.
#[derive(Clone, Debug)]
pub struct Root2D {
    pub lambda: Complex64,
    pub mu: Complex64,
    pub residuals: (f64, f64),
}

/// Chordal tolerance for matching mu candidates across the two pencils.
const MU_MATCH_TOL: f64 = 1e-6;

/// Roots `(lambda, mu)` of the bivariate system: lambda from the projected
/// operator-determinant pencil, mu recovered per lambda.
///
/// Candidate lambdas whose mu recovery finds no agreeing value are dropped
/// as spurious.
pub fn solve_bivariate_lambda<R: Rng + ?Sized>(
    rep: &DeterminantalRep,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<Vec<Root2D>> {
    let deltas = build_delta_pencils(rep)?;
    let pencil = deltas.pencil()?;
    let n = deltas.size();
    let nrank = match deltas.expected_nrank {
        Some(r) => r,
        None => estimate_normal_rank(&pencil, 3, rng).nrank,
    };
    let k = n - nrank;
    let spectrum = project_solve(&pencil, k, cfg, rng)?;
    let report = extract_finite(&spectrum.true_gamma_pairs(), &ClassifierConfig::default());
    let mut roots = Vec::new();
    for v in &report.finite {
        let lambda = v.lambda();
        match recover_mu(rep, lambda) {
            Ok(mus) => {
                for mu in mus {
                    roots.push(Root2D {
                        lambda,
                        mu,
                        residuals: (rep.residual(true, lambda, mu), rep.residual(false, lambda, mu)),
                    });
                }
            }
            Err(Error::NoCommonMu) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(roots)
}

/// Recovers mu values for a fixed lambda: finite eigenvalues of
/// `(A_1 + lambda B_1, -C_1)` that agree with one of `(A_2 + lambda B_2,
/// -C_2)` within the chordal matching tolerance (greedy, closest pair first).
pub fn recover_mu(rep: &DeterminantalRep, lambda: Complex64) -> Result<Vec<Complex64>> {
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let mu_candidates = |first: bool| -> Result<Vec<Complex64>> {
        let (a, b, c) = if first {
            (&rep.a1, &rep.b1, &rep.c1)
        } else {
            (&rep.a2, &rep.b2, &rep.c2)
        };
        let n = rep.size();
        let m = CMat::from_fn(n, n, |i, j| a[(i, j)] + lambda * b[(i, j)]);
        let neg_c = CMat::from_fn(n, n, |i, j| -c[(i, j)]);
        let spec = eig_triplets(&Pencil::new(m, neg_c)?)?;
        Ok(spec
            .triplets
            .iter()
            .filter(|t| !t.value.is_numerically_infinite())
            .map(|t| t.value.lambda())
            .collect())
    };
    let mus1 = mu_candidates(true)?;
    let mus2 = mu_candidates(false)?;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &m1) in mus1.iter().enumerate() {
        let v1 = ProjectiveValue::from_lambda(m1);
        for (j, &m2) in mus2.iter().enumerate() {
            let d = v1.chordal_distance(&ProjectiveValue::from_lambda(m2));
            if d <= MU_MATCH_TOL {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used1 = vec![false; mus1.len()];
    let mut used2 = vec![false; mus2.len()];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if used1[i] || used2[j] {
            continue;
        }
        used1[i] = true;
        used2[j] = true;
        out.push((mus1[i] + mus2[j]) * 0.5);
    }
    if out.is_empty() {
        return Err(Error::NoCommonMu);
    }
    Ok(out)
}

/// Structured pencil whose finite regular eigenvalues are the values
/// `lambda` where `A + lambda B` has a non-semisimple double eigenvalue.
///
/// Size `2n^2`, normal rank `2n^2 - n`. Semisimple double eigenvalues
/// (non-generic) are invisible to this formulation.
pub fn build_double_eig_pencil(a: &CMat, b: &CMat) -> Result<DeltaPencils> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::ShapeMismatch(
            "double-eigenvalue search needs square same-size A, B".into(),
        ));
    }
    let id_n = CMat::identity(n, n);
    let id_2n = CMat::identity(2 * n, 2 * n);
    // second block equation couples a Jordan chain of length 2
    let mut a_tilde = CMat::zeros(2 * n, 2 * n);
    let mut b_tilde = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            a_tilde[(i, j)] = a[(i, j)];
            a_tilde[(n + i, n + j)] = a[(i, j)];
            b_tilde[(i, j)] = b[(i, j)];
            b_tilde[(n + i, n + j)] = b[(i, j)];
        }
        a_tilde[(n + j, j)] = -Complex64::ONE;
    }
    let delta1 = kron(a, &id_2n) - kron(&id_n, &a_tilde);
    let delta0 = kron(&id_n, &b_tilde) - kron(b, &id_2n);
    Ok(DeltaPencils {
        delta1,
        delta0,
        expected_nrank: Some(2 * n * n - n),
    })
}

/// Values `lambda` at which `A + lambda B` has a double eigenvalue;
/// generically `n(n-1)` of them.
pub fn find_double_eigs<R: Rng + ?Sized>(
    a: &CMat,
    b: &CMat,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let deltas = build_double_eig_pencil(a, b)?;
    let n = a.nrows();
    let pencil = deltas.pencil()?;
    let k = deltas.size() - deltas.expected_nrank.unwrap_or(deltas.size() - n);
    let spectrum = project_solve(&pencil, k, cfg, rng)?;
    let report = extract_finite(&spectrum.true_gamma_pairs(), &ClassifierConfig::default());
    let mut out = Vec::with_capacity(report.finite.len());
    for v in &report.finite {
        out.push(refine_double_eig(a, b, v.lambda()));
    }
    Ok(out)
}

/// Split of the closest eigenvalue pair of `A + lambda B`, with the pair's
/// triplets for the derivative estimate.
fn closest_pair(
    a: &CMat,
    b: &CMat,
    lambda: Complex64,
) -> Result<(f64, Complex64, (usize, usize), crate::backend::SpectrumResult)> {
    let n = a.nrows();
    let m = CMat::from_fn(n, n, |i, j| a[(i, j)] + lambda * b[(i, j)]);
    let spec = eig_triplets(&Pencil::new(m, CMat::identity(n, n))?)?;
    let mut best = (f64::INFINITY, Complex64::ZERO, (0usize, 0usize));
    for i in 0..n {
        for j in 0..i {
            let gi = spec.triplets[i].value.lambda();
            let gj = spec.triplets[j].value.lambda();
            let g = gi - gj;
            if g.norm() < best.0 {
                best = (g.norm(), g, (i, j));
            }
        }
    }
    Ok((best.0, best.1, best.2, spec))
}

/// One guarded Newton-type refinement loop for a double-eigenvalue candidate.
///
/// Near a non-semisimple double eigenvalue the closest-pair split behaves
/// like `2c sqrt(lambda - lambda*)`, so the Newton step on the *squared*
/// split, `-g / (2 g')`, lands on the target in one move under the model.
fn refine_double_eig(a: &CMat, b: &CMat, lambda0: Complex64) -> Complex64 {
    let mut lam = lambda0;
    let Ok((mut best_split, _, _, _)) = closest_pair(a, b, lam) else {
        return lam;
    };
    for _ in 0..4 {
        let Ok((split, g, (i, j), spec)) = closest_pair(a, b, lam) else {
            break;
        };
        if split < 1e-12 {
            break;
        }
        let dmu = |idx: usize| -> Option<Complex64> {
            let t = &spec.triplets[idx];
            let mut denom = Complex64::ZERO;
            let mut numer = Complex64::ZERO;
            let n = a.nrows();
            for r in 0..n {
                denom += t.left[r].conj() * t.right[r];
                let mut brow = Complex64::ZERO;
                for c in 0..n {
                    brow += b[(r, c)] * t.right[c];
                }
                numer += t.left[r].conj() * brow;
            }
            (denom.norm() > 1e-300).then(|| numer / denom)
        };
        let (Some(di), Some(dj)) = (dmu(i), dmu(j)) else {
            break;
        };
        let gp = di - dj;
        if gp.norm() < 1e-300 {
            break;
        }
        let cand = lam - g / (gp * 2.0);
        match closest_pair(a, b, cand) {
            Ok((s, _, _, _)) if s < best_split => {
                best_split = s;
                lam = cand;
            }
            _ => break,
        }
    }
    lam
}

/// Assembles the system pencil of a state-space system: the pair `(X, Y)`
/// with `X = [[-A, B], [-C, D]]`, `Y = [[-I, 0], [0, 0]]`, so that
/// `X - lambda Y = [[lambda I - A, B], [-C, D]]`.
pub fn system_pencil(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> Result<Pencil> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch("state matrix must be square".into()));
    }
    let p = b.ncols();
    let q = c.nrows();
    if b.nrows() != n || c.ncols() != n || d.nrows() != q || d.ncols() != p {
        return Err(Error::ShapeMismatch(format!(
            "inconsistent system dimensions: A {n}x{n}, B {}x{}, C {}x{}, D {}x{}",
            b.nrows(),
            b.ncols(),
            c.nrows(),
            c.ncols(),
            d.nrows(),
            d.ncols()
        )));
    }
    let x = CMat::from_fn(n + q, n + p, |i, j| match (i < n, j < n) {
        (true, true) => -a[(i, j)],
        (true, false) => b[(i, j - n)],
        (false, true) => -c[(i - n, j)],
        (false, false) => d[(i - n, j - n)],
    });
    let y = CMat::from_fn(n + q, n + p, |i, j| {
        if i < n && i == j {
            -Complex64::ONE
        } else {
            Complex64::ZERO
        }
    });
    Pencil::new(x, y)
}

/// Transmission zeros: finite regular eigenvalues of the (generally
/// rectangular) system pencil.
pub fn transmission_zeros<R: Rng + ?Sized>(
    a: &CMat,
    b: &CMat,
    c: &CMat,
    d: &CMat,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let s = system_pencil(a, b, c, d)?;
    let (tall, transposed) = to_tall(&s);
    let nrank = estimate_normal_rank(&tall, 3, rng).nrank;
    let k = tall.nrows() - nrank;
    let spectrum = project_solve(&tall, k, cfg, rng)?;
    let report = extract_finite(&spectrum.true_gamma_pairs(), &ClassifierConfig::default());
    Ok(report
        .finite
        .iter()
        .map(|v| {
            let lam = v.lambda();
            if transposed {
                lam.conj()
            } else {
                lam
            }
        })
        .collect())
}
