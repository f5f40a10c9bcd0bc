//! Normal-rank estimation and rank-health diagnosis.
//!
//! `nrank(A, B) = max_zeta rank(A - zeta B)` is reached for every `zeta`
//! outside the finite set of eigenvalues, so evaluating the rank at a few
//! random points and taking the maximum is reliable; a miss happens only when
//! a sample lands next to an eigenvalue, which repeating the draw fixes.
//! After a solve, the class counts reveal whether the rank fed to the solver
//! was wrong: a projection must produce no prescribed-type eigenvalues at
//! all, and an overestimated rank collapses every residual to zero.

use num_complex::Complex64;
use rand::Rng;

use crate::pencil::{one_norm_scale, CMat, Pencil};
use crate::sampling::unit_circle;
use crate::solvers::{ClassifiedSpectrum, EigClass, Method};

/// Result of the randomized normal-rank estimation.
#[derive(Clone, Debug)]
pub struct RankEstimate {
    /// Maximum rank over all trials.
    pub nrank: usize,
    pub trials: usize,
    pub sample_points: Vec<Complex64>,
    pub per_trial_ranks: Vec<usize>,
}

/// Numerical rank by SVD with threshold `max(n, m) * eps * sigma_max`.
pub fn numerical_rank(m: &CMat) -> usize {
    let Ok(s) = crate::dense::singular_values(m) else {
        return 0;
    };
    if s.is_empty() {
        return 0;
    }
    let thr = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * s[0];
    s.iter().filter(|&&v| v > thr).count()
}

/// Estimates `nrank(A, B)` from `trials` random evaluations of
/// `rank(A + eta B)` with `|eta| = 1` on the 1-norm-scaled pencil.
pub fn estimate_normal_rank<R: Rng + ?Sized>(
    p: &Pencil,
    trials: usize,
    rng: &mut R,
) -> RankEstimate {
    let trials = trials.max(1);
    // scaling keeps eta away from eigenvalues near 0 and infinity
    let scaled = one_norm_scale(p).map(|(s, _, _)| s).unwrap_or_else(|_| p.clone());
    let mut sample_points = Vec::with_capacity(trials);
    let mut per_trial_ranks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let eta = unit_circle(rng);
        let m = CMat::from_fn(p.nrows(), p.ncols(), |i, j| {
            scaled.a()[(i, j)] + eta * scaled.b()[(i, j)]
        });
        sample_points.push(eta);
        per_trial_ranks.push(numerical_rank(&m));
    }
    RankEstimate {
        nrank: per_trial_ranks.iter().copied().max().unwrap_or(0),
        trials,
        sample_points,
        per_trial_ranks,
    }
}

/// Verdict of the rank-health check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankVerdict {
    Consistent,
    LikelyUnderestimate,
    PossibleOverestimate,
}

/// Diagnosis with the evidence counts it was based on.
#[derive(Clone, Debug)]
pub struct RankDiagnosis {
    pub verdict: RankVerdict,
    /// Eigenvalues whose both residuals stayed above the threshold.
    pub prescribed_count: usize,
    /// Eigenvalues whose both residuals vanished (classified true).
    pub zero_residual_count: usize,
}

/// Checks solver output for the signatures of a wrong normal rank.
///
/// More prescribed-type eigenvalues than the method injects means the rank
/// was underestimated (a projection injects none). When every eigenvalue
/// comes back with vanishing residuals, the solved pencil was still singular:
/// with a known regular-part size this is confirmed by a surplus of true
/// eigenvalues; without it, the absence of random eigenvalues is reported as
/// a possible overestimate (pencils whose singular blocks are all of minimal
/// index zero produce no random eigenvalues and trip this hint by design).
pub fn diagnose_rank(
    spectrum: &ClassifiedSpectrum,
    k_used: usize,
    expected_regular: Option<usize>,
) -> RankDiagnosis {
    let prescribed = spectrum.count(EigClass::Prescribed);
    let true_count = spectrum.regular_count();
    let random = spectrum.count(EigClass::RandomLeft) + spectrum.count(EigClass::RandomRight);
    let injected = match spectrum.method {
        Method::Project | Method::ProjectPermutation => 0,
        Method::Augment | Method::AugmentSimple => 2 * k_used,
        Method::Perturb => k_used,
    };
    let verdict = if prescribed > injected {
        RankVerdict::LikelyUnderestimate
    } else if prescribed == 0 && random == 0 && k_used > 0 {
        match expected_regular {
            Some(r) if true_count > r => RankVerdict::PossibleOverestimate,
            Some(_) => RankVerdict::Consistent,
            None => RankVerdict::PossibleOverestimate,
        }
    } else {
        RankVerdict::Consistent
    };
    RankDiagnosis {
        verdict,
        prescribed_count: prescribed,
        zero_residual_count: true_count,
    }
}
