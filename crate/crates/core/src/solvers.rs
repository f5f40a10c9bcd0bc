//! The three extraction methods: projection onto the normal rank,
//! augmentation by a bordered pencil, and rank-completing perturbation.
//!
//! Each method turns the singular pencil into a regular problem whose
//! spectrum contains the true eigenvalues of the original regular part.
//! Per-eigenvalue residual diagnostics `alpha_i`, `beta_i` then separate the
//! true eigenvalues from the method's own artifacts (random eigenvalues from
//! the singular blocks and, for augmentation/perturbation, the prescribed
//! eigenvalues that were injected on purpose). Residuals are evaluated in
//! homogeneous form `beta*A - alpha*B`, so huge finite representatives of
//! infinite eigenvalues are diagnosed at the right scale.

use num_complex::Complex64;
use rand::seq::index::sample as index_sample;
use rand::Rng;

use crate::backend::eig_triplets;
use crate::classify::compute_gaps;
use crate::dense::{matvec, mul3};
use crate::error::{Error, Result};
use crate::pencil::{adjoint, one_norm_scale, CMat, CVec, Pencil, ProjectiveValue};
use crate::sampling::{complex_gaussian, distinct_uniform, haar_unitary, random_orthonormal};

/// Extraction method selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Project,
    ProjectPermutation,
    Augment,
    AugmentSimple,
    Perturb,
}

/// Thresholds and knobs shared by all solvers.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub method: Method,
    /// Residual threshold separating true eigenvalues. Default `eps^(1/2)`.
    pub delta: f64,
    /// Perturbation strength for [`perturb_solve`]. Default `1e-2`.
    pub tau: f64,
    /// Seed echo for reporting; solvers draw from the generator they are given.
    pub seed: u64,
    /// Manual rank-completion dimension, when the caller overrides estimation.
    pub k_override: Option<usize>,
    /// Retain eigenvectors in the output (needed by the reducing-subspace
    /// extraction and by the application drivers).
    pub keep_vectors: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Project,
            delta: f64::EPSILON.sqrt(),
            tau: 1e-2,
            seed: 0,
            k_override: None,
            keep_vectors: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig("need 0 < delta < 1".into()));
        }
        if matches!(self.method, Method::Perturb) && self.tau == 0.0 {
            return Err(Error::InvalidConfig("tau must be nonzero".into()));
        }
        Ok(())
    }
}

/// Eigenvalue provenance within a solved spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigClass {
    /// Eigenvalue of the original pencil's regular part.
    TrueRegular,
    /// Artifact of the right singular blocks (right residual vanishes).
    RandomRight,
    /// Artifact of the left singular blocks (left residual vanishes).
    RandomLeft,
    /// Injected by the augmentation or perturbation construction.
    Prescribed,
}

/// One eigenvalue with its residual diagnostics and class tag.
#[derive(Clone, Debug)]
pub struct ClassifiedEigenvalue {
    pub value: ProjectiveValue,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Relative gap to the nearest other eigenvalue of the same solve.
    pub gap: f64,
    pub class: EigClass,
    /// Right/left eigenvectors in the solved problem's coordinates
    /// (projected, augmented, or perturbed), when retained.
    pub right: Option<CVec>,
    pub left: Option<CVec>,
}

/// Unitary frames of the projection method.
///
/// `[W W_perp]` and `[Zhat Zhat_perp]` are `n x n` unitary; `Z` and `Z_perp`
/// keep the top `m` rows of `Zhat` and `Zhat_perp`.
#[derive(Clone, Debug)]
pub struct ProjectionFrame {
    pub w: CMat,
    pub w_perp: CMat,
    pub zhat: CMat,
    pub zhat_perp: CMat,
    pub z: CMat,
    pub z_perp: CMat,
}

impl ProjectionFrame {
    /// Two independent Haar-random unitary frames.
    pub fn sample<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> Self {
        let q1 = haar_unitary(rng, n);
        let q2 = haar_unitary(rng, n);
        Self::from_unitaries(&q1, &q2, n, m, k)
    }

    fn from_unitaries(q1: &CMat, q2: &CMat, n: usize, m: usize, k: usize) -> Self {
        let w = q1.get(.., ..n - k).to_owned();
        let w_perp = q1.get(.., n - k..).to_owned();
        let zhat = q2.get(.., ..n - k).to_owned();
        let zhat_perp = q2.get(.., n - k..).to_owned();
        let z = zhat.get(..m, ..).to_owned();
        let z_perp = zhat_perp.get(..m, ..).to_owned();
        Self {
            w,
            w_perp,
            zhat,
            zhat_perp,
            z,
            z_perp,
        }
    }

    /// Frames made of standard basis vectors: projection by row/column
    /// selection at zero cost. `rows` picks `n-k` pencil rows; `cols` picks
    /// `n-k` pencil columns and must stay below `m`, otherwise `Z` would
    /// contain a zero column.
    pub fn from_selection(
        n: usize,
        m: usize,
        k: usize,
        rows: &[usize],
        cols: &[usize],
    ) -> Result<Self> {
        if rows.len() != n - k || cols.len() != n - k {
            return Err(Error::InvalidRank(format!(
                "need {} selected rows and columns",
                n - k
            )));
        }
        let mut seen_r = vec![false; n];
        for &r in rows {
            if r >= n || seen_r[r] {
                return Err(Error::InvalidConfig("bad row selection".into()));
            }
            seen_r[r] = true;
        }
        let mut seen_c = vec![false; n];
        for &c in cols {
            if c >= m || seen_c[c] {
                return Err(Error::InvalidConfig("bad column selection".into()));
            }
            seen_c[c] = true;
        }
        let basis = CMat::identity(n, n);
        let pick = |idx: &[usize]| {
            let mut out = CMat::zeros(n, idx.len());
            for (j, &i) in idx.iter().enumerate() {
                out[(i, j)] = Complex64::ONE;
            }
            out
        };
        let _ = basis;
        let rows_c: Vec<usize> = (0..n).filter(|i| !seen_r[*i]).collect();
        let cols_c: Vec<usize> = (0..n).filter(|i| !seen_c[*i]).collect();
        let w = pick(rows);
        let w_perp = pick(&rows_c);
        let zhat = pick(cols);
        let zhat_perp = pick(&cols_c);
        let z = zhat.get(..m, ..).to_owned();
        let z_perp = zhat_perp.get(..m, ..).to_owned();
        Ok(Self {
            w,
            w_perp,
            zhat,
            zhat_perp,
            z,
            z_perp,
        })
    }
}

/// Orthonormal borders and diagonal blocks of the augmented pencil.
#[derive(Clone, Debug)]
pub struct AugmentationData {
    pub u: CMat,
    pub v: CMat,
    pub t_a: Vec<f64>,
    pub t_b: Vec<f64>,
    pub s_a: Vec<f64>,
    pub s_b: Vec<f64>,
}

impl AugmentationData {
    /// Random orthonormal `U`, `V` plus diagonals uniform in `[1, 2]`
    /// (resampled until all `2k` prescribed eigenvalues are pairwise
    /// distinct). The simplified variant fixes `T_A = S_A = I`,
    /// `T_B = S_B = 0`, which prescribes all `2k` eigenvalues at infinity.
    pub fn sample<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R, simple: bool) -> Self {
        let u = random_orthonormal(rng, n, k);
        let v = random_orthonormal(rng, n, k);
        if simple {
            return Self {
                u,
                v,
                t_a: vec![1.0; k],
                t_b: vec![0.0; k],
                s_a: vec![1.0; k],
                s_b: vec![0.0; k],
            };
        }
        loop {
            let t_a = distinct_uniform(rng, k, 1.0, 2.0);
            let t_b = distinct_uniform(rng, k, 1.0, 2.0);
            let s_a = distinct_uniform(rng, k, 1.0, 2.0);
            let s_b = distinct_uniform(rng, k, 1.0, 2.0);
            let mut vals: Vec<f64> = (0..k).map(|i| t_a[i] / t_b[i]).collect();
            vals.extend((0..k).map(|i| s_a[i] / s_b[i]));
            let mut ok = true;
            for i in 0..vals.len() {
                for j in 0..i {
                    if (vals[i] - vals[j]).abs() < 1e-6 {
                        ok = false;
                    }
                }
            }
            if ok {
                return Self {
                    u,
                    v,
                    t_a,
                    t_b,
                    s_a,
                    s_b,
                };
            }
        }
    }

    /// The `2k` eigenvalues injected by the construction.
    pub fn prescribed_values(&self) -> Vec<ProjectiveValue> {
        let k = self.t_a.len();
        let mut out = Vec::with_capacity(2 * k);
        for i in 0..k {
            out.push(
                ProjectiveValue::new(self.t_a[i].into(), self.t_b[i].into())
                    .expect("diagonal entries nonzero"),
            );
        }
        for i in 0..k {
            out.push(
                ProjectiveValue::new(self.s_a[i].into(), self.s_b[i].into())
                    .expect("diagonal entries nonzero"),
            );
        }
        out
    }
}

/// Random factors of the rank-completing perturbation.
#[derive(Clone, Debug)]
pub struct PerturbationData {
    pub u: CMat,
    pub v: CMat,
    pub d_a: Vec<f64>,
    pub d_b: Vec<f64>,
    pub tau: f64,
}

impl PerturbationData {
    /// Complex Gaussian `U`, `V` and a regular diagonal pencil
    /// `(diag(d_a), I)` with distinct entries in `[1, 2]`.
    pub fn sample<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R, tau: f64) -> Self {
        let u = complex_gaussian(rng, n, k);
        let v = complex_gaussian(rng, n, k);
        let d_a = distinct_uniform(rng, k, 1.0, 2.0);
        let d_b = vec![1.0; k];
        Self { u, v, d_a, d_b, tau }
    }

    pub fn prescribed_values(&self) -> Vec<ProjectiveValue> {
        self.d_a
            .iter()
            .zip(&self.d_b)
            .map(|(&a, &b)| ProjectiveValue::new(a.into(), b.into()).expect("regular diagonal"))
            .collect()
    }
}

/// Method-specific data retained for verification and reuse.
#[derive(Clone, Debug)]
pub enum SolverAux {
    Projection(ProjectionFrame),
    Augmentation(AugmentationData),
    Perturbation(PerturbationData),
}

/// Solved and classified spectrum of one extraction run.
#[derive(Clone, Debug)]
pub struct ClassifiedSpectrum {
    pub entries: Vec<ClassifiedEigenvalue>,
    pub method: Method,
    pub k: usize,
    pub config: SolverConfig,
    pub aux: SolverAux,
}

impl ClassifiedSpectrum {
    /// Number of eigenvalues classified as true regular eigenvalues.
    pub fn regular_count(&self) -> usize {
        self.count(EigClass::TrueRegular)
    }

    pub fn count(&self, class: EigClass) -> usize {
        self.entries.iter().filter(|e| e.class == class).count()
    }

    pub fn true_values(&self) -> Vec<ProjectiveValue> {
        self.entries
            .iter()
            .filter(|e| e.class == EigClass::TrueRegular)
            .map(|e| e.value)
            .collect()
    }

    /// `(value, gamma)` of the true eigenvalues, the classifier's input.
    pub fn true_gamma_pairs(&self) -> Vec<(ProjectiveValue, f64)> {
        self.entries
            .iter()
            .filter(|e| e.class == EigClass::TrueRegular)
            .map(|e| (e.value, e.gamma))
            .collect()
    }

    /// Maps results of a solve on the conjugate-transpose pencil back to the
    /// original: eigenvalues conjugate, the left/right structure mirrors.
    pub fn conjugate_transpose_back(&mut self) {
        for e in &mut self.entries {
            e.value = e.value.conj();
            std::mem::swap(&mut e.alpha, &mut e.beta);
            std::mem::swap(&mut e.right, &mut e.left);
            e.class = match e.class {
                EigClass::RandomLeft => EigClass::RandomRight,
                EigClass::RandomRight => EigClass::RandomLeft,
                other => other,
            };
        }
    }
}

fn inner(y: &CVec, x: &CVec) -> Complex64 {
    let mut s = Complex64::ZERO;
    for i in 0..y.nrows() {
        s += y[i].conj() * x[i];
    }
    s
}

fn col_norm(v: &CVec) -> f64 {
    v.norm_l2()
}

/// Deviation from 1 below which a trailing-block mass marks a prescribed
/// eigenvalue of the augmented pencil.
const PRESCRIBED_MASS_TOL: f64 = 1e-6;

fn quadrant_class(alpha: f64, beta: f64, thr: f64) -> EigClass {
    let a_small = alpha < thr;
    let b_small = beta < thr;
    match (a_small, b_small) {
        (true, true) => EigClass::TrueRegular,
        (false, true) => EigClass::RandomLeft,
        (true, false) => EigClass::RandomRight,
        (false, false) => EigClass::Prescribed,
    }
}

fn attach_gaps(entries: &mut [ClassifiedEigenvalue]) {
    let values: Vec<ProjectiveValue> = entries.iter().map(|e| e.value).collect();
    let gaps = compute_gaps(&values);
    for (e, g) in entries.iter_mut().zip(gaps) {
        e.gap = g;
    }
}

/// Dispatches on `cfg.method`.
pub fn run_method<R: Rng + ?Sized>(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<ClassifiedSpectrum> {
    match cfg.method {
        Method::Project => project_solve(p, k, cfg, rng),
        Method::ProjectPermutation => project_solve_permutation(p, k, cfg, rng),
        Method::Augment => augment_solve(p, k, cfg, rng, false),
        Method::AugmentSimple => augment_solve(p, k, cfg, rng, true),
        Method::Perturb => perturb_solve(p, k, cfg, rng),
    }
}

/// Projection method: solve `W^*(A - lambda B)Z` of size `(n-k) x (n-k)`
/// for Haar-random unitary frames.
pub fn project_solve<R: Rng + ?Sized>(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<ClassifiedSpectrum> {
    check_projection_dims(p, k)?;
    let frame = ProjectionFrame::sample(p.nrows(), p.ncols(), k, rng);
    project_solve_with(p, k, cfg, frame, Method::Project)
}

/// Projection with row/column selection frames drawn from a random
/// permutation: the projected pencil is a sub-pencil, built at zero cost.
///
/// Fails with [`Error::DegenerateSelection`] when the selected sub-pencil is
/// itself singular (possible for structured pencils); callers should fall
/// back to [`project_solve`].
pub fn project_solve_permutation<R: Rng + ?Sized>(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<ClassifiedSpectrum> {
    check_projection_dims(p, k)?;
    let (n, m) = (p.nrows(), p.ncols());
    let rows: Vec<usize> = index_sample(rng, n, n - k).into_iter().collect();
    let cols: Vec<usize> = index_sample(rng, m, n - k).into_iter().collect();
    let frame = ProjectionFrame::from_selection(n, m, k, &rows, &cols)?;
    // a singular sub-pencil means the selection hit the complement of the
    // generic set; probe its normal rank before trusting QZ output
    let wh = adjoint(&frame.w);
    let ap = mul3(&wh, p.a(), &frame.z);
    let bp = mul3(&wh, p.b(), &frame.z);
    for _ in 0..2 {
        let eta = crate::sampling::unit_circle(rng);
        let probe = CMat::from_fn(n - k, n - k, |i, j| ap[(i, j)] + eta * bp[(i, j)]);
        if crate::nrank::numerical_rank(&probe) < n - k {
            return Err(Error::DegenerateSelection);
        }
    }
    project_solve_with(p, k, cfg, frame, Method::ProjectPermutation)
}

fn check_projection_dims(p: &Pencil, k: usize) -> Result<()> {
    let (n, m) = (p.nrows(), p.ncols());
    if n < m {
        return Err(Error::InvalidRank(
            "projection expects a tall pencil; apply to_tall first".into(),
        ));
    }
    if k > n || n - k > m {
        return Err(Error::InvalidRank(format!(
            "rank-completion dimension k={k} incompatible with a {n}x{m} pencil"
        )));
    }
    Ok(())
}

/// Projection with caller-supplied frames.
pub fn project_solve_with(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    frame: ProjectionFrame,
    method: Method,
) -> Result<ClassifiedSpectrum> {
    cfg.validate()?;
    check_projection_dims(p, k)?;
    let (na, nb) = p.norms();

    let wh = adjoint(&frame.w);
    let wph = adjoint(&frame.w_perp);
    let ap = mul3(&wh, p.a(), &frame.z);
    let bp = mul3(&wh, p.b(), &frame.z);
    // residuals are linear in (alpha, beta): precompute the four blocks
    let a_pz = mul3(&wph, p.a(), &frame.z);
    let b_pz = mul3(&wph, p.b(), &frame.z);
    let a_wz = mul3(&wh, p.a(), &frame.z_perp);
    let b_wz = mul3(&wh, p.b(), &frame.z_perp);

    let spectrum = eig_triplets(&Pencil::new(ap.clone(), bp.clone())?)?;
    let mut entries = Vec::with_capacity(spectrum.triplets.len());
    for t in &spectrum.triplets {
        let (al, be) = (t.value.alpha_h(), t.value.beta_h());
        let res_right = CMat::from_fn(k, frame.z.ncols(), |i, j| {
            be * a_pz[(i, j)] - al * b_pz[(i, j)]
        });
        let alpha_i = col_norm(&matvec(&res_right, &t.right));
        let res_left = CMat::from_fn(frame.w.ncols(), k, |i, j| {
            be * a_wz[(i, j)] - al * b_wz[(i, j)]
        });
        let beta_i = col_norm(&matvec(&adjoint(&res_left), &t.left));
        let gamma = inner(&t.left, &matvec(&bp, &t.right)).norm() * t.value.beta_h().norm();
        let thr = cfg.delta * (be.norm() * na + al.norm() * nb);
        let class = quadrant_class(alpha_i, beta_i, thr);
        entries.push(ClassifiedEigenvalue {
            value: t.value,
            alpha: alpha_i,
            beta: beta_i,
            gamma,
            gap: 0.0,
            class,
            right: cfg.keep_vectors.then(|| t.right.clone()),
            left: cfg.keep_vectors.then(|| t.left.clone()),
        });
    }
    attach_gaps(&mut entries);
    Ok(ClassifiedSpectrum {
        entries,
        method,
        k,
        config: *cfg,
        aux: SolverAux::Projection(frame),
    })
}

/// Augmentation method: solve the `(n+k) x (n+k)` bordered pencil
/// `[[A, U T_A], [S_A V^*, 0]] - lambda [[B, U T_B], [S_B V^*, 0]]`.
///
/// The simplified variant (`simple = true`) borders with constant blocks and
/// prescribes all `2k` extra eigenvalues at infinity; the true infinite
/// eigenvalues then merge with them, which is harmless when only finite
/// eigenvalues are wanted.
pub fn augment_solve<R: Rng + ?Sized>(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    rng: &mut R,
    simple: bool,
) -> Result<ClassifiedSpectrum> {
    let n = p.nrows();
    if k == 0 || k >= n {
        return Err(Error::InvalidRank(format!(
            "augmentation needs 0 < k < n, got k={k}, n={n}"
        )));
    }
    let data = AugmentationData::sample(n, k, rng, simple);
    augment_solve_with(p, k, cfg, data, simple)
}

/// Augmentation with caller-supplied borders.
pub fn augment_solve_with(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    data: AugmentationData,
    simple: bool,
) -> Result<ClassifiedSpectrum> {
    cfg.validate()?;
    let p = square_up(p)?;
    let n = p.nrows();
    if k == 0 || k >= n {
        return Err(Error::InvalidRank(format!(
            "augmentation needs 0 < k < n, got k={k}, n={n}"
        )));
    }

    let assemble = |m: &CMat, diag_t: &[f64], diag_s: &[f64]| {
        let mut out = CMat::zeros(n + k, n + k);
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] = m[(i, j)];
            }
        }
        for j in 0..k {
            for i in 0..n {
                out[(i, n + j)] = data.u[(i, j)] * diag_t[j];
            }
        }
        for i in 0..k {
            for j in 0..n {
                out[(n + i, j)] = data.v[(j, i)].conj() * diag_s[i];
            }
        }
        out
    };
    let aa = assemble(p.a(), &data.t_a, &data.s_a);
    let ba = assemble(p.b(), &data.t_b, &data.s_b);

    let spectrum = eig_triplets(&Pencil::new(aa, ba)?)?;
    let mut entries = Vec::with_capacity(spectrum.triplets.len());
    for t in &spectrum.triplets {
        let x2 = t.right.get(n..).to_owned();
        let y2 = t.left.get(n..).to_owned();
        let alpha_i = col_norm(&x2);
        let beta_i = col_norm(&y2);
        let x1 = t.right.get(..n).to_owned();
        let y1 = t.left.get(..n).to_owned();
        let gamma = inner(&y1, &matvec(p.b(), &x1)).norm() * t.value.beta_h().norm();
        // a prescribed eigenvector lies entirely in the trailing block, so
        // exactly one trailing mass is 1; a random eigenvalue has one mass 0
        // while the other side is unconstrained and can be large, so only
        // the mass-1 signature identifies prescribed entries
        let class = if alpha_i.max(beta_i) < cfg.delta {
            EigClass::TrueRegular
        } else if (alpha_i - 1.0).abs() <= PRESCRIBED_MASS_TOL
            || (beta_i - 1.0).abs() <= PRESCRIBED_MASS_TOL
        {
            EigClass::Prescribed
        } else {
            quadrant_class(alpha_i, beta_i, cfg.delta)
        };
        entries.push(ClassifiedEigenvalue {
            value: t.value,
            alpha: alpha_i,
            beta: beta_i,
            gamma,
            gap: 0.0,
            class,
            right: cfg.keep_vectors.then(|| t.right.clone()),
            left: cfg.keep_vectors.then(|| t.left.clone()),
        });
    }
    if simple {
        mark_prescribed_infinities(&mut entries, 2 * k);
    }
    attach_gaps(&mut entries);
    let mut config = *cfg;
    config.method = if simple {
        Method::AugmentSimple
    } else {
        Method::Augment
    };
    Ok(ClassifiedSpectrum {
        entries,
        method: config.method,
        k,
        config,
        aux: SolverAux::Augmentation(data),
    })
}

/// The simplified bordering prescribes all `2k` eigenvalues at infinity by
/// construction, but inside the merged infinite eigenspace the individual
/// labels are arbitrary (the eigenvector basis is not unique), so the `2k`
/// exactly-infinite entries with the largest border mass are tagged as the
/// prescribed ones.
fn mark_prescribed_infinities(entries: &mut [ClassifiedEigenvalue], want: usize) {
    let mut already = 0;
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if !e.value.is_exactly_infinite() {
            continue;
        }
        if e.class == EigClass::Prescribed {
            already += 1;
        } else {
            candidates.push((e.alpha.max(e.beta), i));
        }
    }
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    for &(_, i) in candidates.iter().take(want.saturating_sub(already)) {
        entries[i].class = EigClass::Prescribed;
    }
}

/// Rank-completing perturbation: solve
/// `A - lambda B + tau U (D_A - lambda D_B) V^*` at full size `n x n`.
///
/// The pencil is 1-norm scaled before perturbing; eigenvalues are mapped back
/// to the original coordinates, so the `k` prescribed eigenvalues appear at
/// `(s_a/s_b) * d_a[i]`.
pub fn perturb_solve<R: Rng + ?Sized>(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<ClassifiedSpectrum> {
    let n = p.nrows();
    if k >= n {
        return Err(Error::InvalidRank(format!(
            "perturbation needs k < n, got k={k}, n={n}"
        )));
    }
    let data = PerturbationData::sample(n, k, rng, cfg.tau);
    perturb_solve_with(p, k, cfg, data)
}

/// Perturbation with caller-supplied factors.
pub fn perturb_solve_with(
    p: &Pencil,
    k: usize,
    cfg: &SolverConfig,
    data: PerturbationData,
) -> Result<ClassifiedSpectrum> {
    cfg.validate()?;
    let p = square_up(p)?;
    let n = p.nrows();
    if k >= n {
        return Err(Error::InvalidRank(format!(
            "perturbation needs k < n, got k={k}, n={n}"
        )));
    }
    let (scaled, sa, sb) = one_norm_scale(&p)?;
    let tau = data.tau;
    let perturbed = |m: &CMat, d: &[f64]| {
        let mut out = m.clone();
        for j in 0..n {
            for i in 0..n {
                let mut s = Complex64::ZERO;
                for l in 0..k {
                    s += data.u[(i, l)] * d[l] * data.v[(j, l)].conj();
                }
                out[(i, j)] += tau * s;
            }
        }
        out
    };
    let at = perturbed(scaled.a(), &data.d_a);
    let bt = perturbed(scaled.b(), &data.d_b);

    let spectrum = eig_triplets(&Pencil::new(at, bt)?)?;
    let mut entries = Vec::with_capacity(spectrum.triplets.len());
    for t in &spectrum.triplets {
        let alpha_i = col_norm(&matvec(&adjoint(&data.v), &t.right));
        let beta_i = col_norm(&matvec(&adjoint(&data.u), &t.left));
        // map the eigenvalue back through the scaling
        let value = ProjectiveValue::new(
            t.value.alpha_h() * sa,
            t.value.beta_h() * sb,
        )?;
        // reciprocal condition proxy against the original B
        let gamma = inner(&t.left, &matvec(p.b(), &t.right)).norm() * value.beta_h().norm();
        let class = quadrant_class(alpha_i, beta_i, cfg.delta);
        entries.push(ClassifiedEigenvalue {
            value,
            alpha: alpha_i,
            beta: beta_i,
            gamma,
            gap: 0.0,
            class,
            right: cfg.keep_vectors.then(|| t.right.clone()),
            left: cfg.keep_vectors.then(|| t.left.clone()),
        });
    }
    attach_gaps(&mut entries);
    let mut config = *cfg;
    config.method = Method::Perturb;
    Ok(ClassifiedSpectrum {
        entries,
        method: Method::Perturb,
        k,
        config,
        aux: SolverAux::Perturbation(data),
    })
}

/// Pads a tall rectangular pencil with zero columns to make it square.
fn square_up(p: &Pencil) -> Result<Pencil> {
    let (n, m) = (p.nrows(), p.ncols());
    if n == m {
        return Ok(p.clone());
    }
    if n < m {
        return Err(Error::InvalidRank(
            "wide pencil: apply to_tall before squaring up".into(),
        ));
    }
    let pad = |src: &CMat| {
        CMat::from_fn(n, n, |i, j| {
            if j < m {
                src[(i, j)]
            } else {
                Complex64::ZERO
            }
        })
    };
    Pencil::new(pad(p.a()), pad(p.b()))
}

/// Bases of the minimal right and left reducing subspaces from a
/// perturbation-method spectrum with retained eigenvectors.
///
/// The right basis collects right eigenvectors whose triplet has `U^* y != 0`
/// (prescribed plus the random eigenvalues of right-block origin), `k + M`
/// columns in total; the left basis mirrors this with `V^* x != 0`, giving
/// `k + N` columns.
pub fn reducing_subspace_basis(spectrum: &ClassifiedSpectrum) -> Result<(CMat, CMat)> {
    if spectrum.method != Method::Perturb {
        return Err(Error::InvalidConfig(
            "reducing subspaces are extracted from the perturbation method".into(),
        ));
    }
    let mut right_cols = Vec::new();
    let mut left_cols = Vec::new();
    for e in &spectrum.entries {
        let (x, y) = match (&e.right, &e.left) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::MissingVectors),
        };
        if matches!(e.class, EigClass::Prescribed | EigClass::RandomRight) {
            right_cols.push(x.clone());
        }
        if matches!(e.class, EigClass::Prescribed | EigClass::RandomLeft) {
            left_cols.push(y.clone());
        }
    }
    let n = spectrum
        .entries
        .first()
        .and_then(|e| e.right.as_ref())
        .map(|v| v.nrows())
        .unwrap_or(0);
    let stack = |cols: &[CVec]| {
        let mut m = CMat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        m
    };
    Ok((stack(&right_cols), stack(&left_cols)))
}
