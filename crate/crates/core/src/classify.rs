//! Finite/infinite classification of regular eigenvalues.
//!
//! A multiple finite eigenvalue is computed as a cluster of simple ones with
//! small reciprocal condition numbers `gamma_i` *and* small relative gaps,
//! while a (multiple) infinite eigenvalue shows up as a huge value with
//! `gamma_i` near zero and gap near 1. Two sufficient criteria flag infinite
//! eigenvalues; everything unflagged is returned as finite.

use crate::pencil::ProjectiveValue;

/// Thresholds of the finite/infinite classifier.
#[derive(Clone, Copy, Debug)]
pub struct ClassifierConfig {
    /// Gamma bound of the large-gap criterion. Default `eps^(1/2)`.
    pub delta1: f64,
    /// Gamma bound of the near-zero criterion. Default `100 eps`.
    pub delta2: f64,
    /// Gap bound of the large-gap criterion. Default `0.95`.
    pub xi1: f64,
    /// Gap bound of the near-zero criterion. Default `0.01`.
    pub xi2: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            delta1: f64::EPSILON.sqrt(),
            delta2: 100.0 * f64::EPSILON,
            xi1: 0.95,
            xi2: 0.01,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.delta2 > 0.0 && self.delta2 < self.delta1 && self.delta1 < 1.0) {
            return Err(crate::Error::InvalidConfig(
                "need 0 < delta2 < delta1 < 1".into(),
            ));
        }
        if !(self.xi2 > 0.0 && self.xi2 < self.xi1 && self.xi1 <= 1.0) {
            return Err(crate::Error::InvalidConfig(
                "need 0 < xi2 < xi1 <= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Why an entry was flagged infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagReason {
    /// Small gamma with a large gap.
    Line2,
    /// Gamma indistinguishable from zero with a non-tiny gap.
    Line3,
    /// The backend returned `beta = 0` exactly.
    ExactInfinity,
}

/// Classifier output: finite eigenvalues plus per-entry diagnostics.
#[derive(Clone, Debug)]
pub struct FiniteInfiniteReport {
    pub finite: Vec<ProjectiveValue>,
    pub infinite_count: usize,
    /// `(value, gamma, gap, flag)` for every input entry, in input order.
    pub per_entry: Vec<(ProjectiveValue, f64, f64, Option<FlagReason>)>,
}

/// Relative gaps `min_{j != i} |lambda_j - lambda_i| / (1 + |lambda_i|^2)^(1/2)`.
///
/// Evaluated in homogeneous form, `|a_j b_i - a_i b_j| / |b_j|` for
/// unit-normalized pairs, which never overflows. Exact infinities take their
/// limit values: an infinite neighbor contributes +inf to a finite entry, a
/// finite neighbor contributes 1 to an infinite entry, and two exact
/// infinities have gap 0. A single value has gap 1 by convention.
pub fn compute_gaps(values: &[ProjectiveValue]) -> Vec<f64> {
    let r = values.len();
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let vi = values[i];
        let mut best = f64::INFINITY;
        for j in 0..r {
            if j == i {
                continue;
            }
            let vj = values[j];
            let g = if vi.is_exactly_infinite() && vj.is_exactly_infinite() {
                0.0
            } else if vi.is_exactly_infinite() {
                1.0
            } else if vj.is_exactly_infinite() {
                f64::INFINITY
            } else {
                (vj.alpha_h() * vi.beta_h() - vi.alpha_h() * vj.beta_h()).norm()
                    / vj.beta_h().norm()
            };
            best = best.min(g);
        }
        // lone entry, or a finite entry whose neighbors are all infinite
        out.push(if best.is_finite() { best } else { 1.0 });
    }
    out
}

/// Splits regular eigenvalues into finite and infinite ones.
///
/// Entries with `beta = 0` are pre-flagged: they would otherwise evade both
/// gap criteria whenever two of them are present (their mutual gap is 0).
pub fn extract_finite(
    entries: &[(ProjectiveValue, f64)],
    cfg: &ClassifierConfig,
) -> FiniteInfiniteReport {
    let values: Vec<ProjectiveValue> = entries.iter().map(|e| e.0).collect();
    let gaps = compute_gaps(&values);
    let mut per_entry = Vec::with_capacity(entries.len());
    let mut finite = Vec::new();
    let mut infinite_count = 0;
    for (&(value, gamma), &gap) in entries.iter().zip(&gaps) {
        let flag = if value.is_exactly_infinite() {
            Some(FlagReason::ExactInfinity)
        } else if gamma < cfg.delta1 && gap > cfg.xi1 {
            Some(FlagReason::Line2)
        } else if gamma < cfg.delta2 && gap > cfg.xi2 {
            Some(FlagReason::Line3)
        } else {
            None
        };
        match flag {
            Some(_) => infinite_count += 1,
            None => finite.push(value),
        }
        per_entry.push((value, gamma, gap, flag));
    }
    FiniteInfiniteReport {
        finite,
        infinite_count,
        per_entry,
    }
}
