//! Application drivers: bivariate polynomial systems, double-eigenvalue
//! location, and transmission zeros.

use num_complex::Complex64;
use singpencil::apps::*;
use singpencil::backend::eig_triplets;
use singpencil::classify::{extract_finite, ClassifierConfig};
use singpencil::dense;
use singpencil::fixtures;
use singpencil::sampling::{complex_gaussian, real_gaussian, rng_from_seed};
use singpencil::solvers::{perturb_solve, SolverConfig};
use singpencil::{CMat, Pencil, ProjectiveValue};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn delta_pencils_have_known_shape_and_rank() {
    let rep = fixtures::cubic_rep();
    let deltas = build_delta_pencils(&rep).unwrap();
    assert_eq!(deltas.size(), 25);
    assert_eq!(deltas.expected_nrank, Some(21));

    // the uniform construction leaves (d-1)^2 zero rows and columns in the
    // first operator determinant
    let zero_rows = (0..25)
        .filter(|&i| (0..25).all(|j| deltas.delta1[(i, j)] == Complex64::ZERO))
        .count();
    let zero_cols = (0..25)
        .filter(|&j| (0..25).all(|i| deltas.delta1[(i, j)] == Complex64::ZERO))
        .count();
    assert_eq!(zero_rows, 4);
    assert_eq!(zero_cols, 4);
    assert_eq!(singpencil::nrank::numerical_rank(&deltas.delta1), 21);
    assert_eq!(singpencil::nrank::numerical_rank(&deltas.delta0), 16);

    let mut rng = rng_from_seed(1);
    let est = singpencil::nrank::estimate_normal_rank(&deltas.pencil().unwrap(), 3, &mut rng);
    assert_eq!(est.nrank, 21);
}

#[test]
fn degenerate_rep_without_mu_terms_gives_zero_delta0() {
    let mut rng = rng_from_seed(2);
    let a1 = complex_gaussian(&mut rng, 3, 3);
    let b1 = complex_gaussian(&mut rng, 3, 3);
    let a2 = complex_gaussian(&mut rng, 3, 3);
    let b2 = complex_gaussian(&mut rng, 3, 3);
    let z = CMat::zeros(3, 3);
    let rep = DeterminantalRep::new(a1, b1, z.clone(), a2, b2, z).unwrap();
    let deltas = build_delta_pencils(&rep).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            assert_eq!(deltas.delta0[(i, j)], Complex64::ZERO);
        }
    }
}

#[test]
fn rep_shapes_are_checked() {
    let a = CMat::zeros(3, 3);
    let bad = CMat::zeros(2, 2);
    assert!(DeterminantalRep::new(
        a.clone(),
        a.clone(),
        a.clone(),
        bad,
        a.clone(),
        a.clone()
    )
    .is_err());
    assert!(DeterminantalRep::with_uniform_degree(
        a.clone(),
        a.clone(),
        a.clone(),
        a.clone(),
        a.clone(),
        a,
        3
    )
    .is_err());
}

#[test]
fn determinant_equals_polynomial_at_random_points() {
    let rep = fixtures::cubic_rep();
    let mut rng = rng_from_seed(3);
    for _ in 0..20 {
        let l = c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let m = c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let m1 = CMat::from_fn(5, 5, |i, j| {
            rep.a1[(i, j)] + l * rep.b1[(i, j)] + m * rep.c1[(i, j)]
        });
        let m2 = CMat::from_fn(5, 5, |i, j| {
            rep.a2[(i, j)] + l * rep.b2[(i, j)] + m * rep.c2[(i, j)]
        });
        let p1 = fixtures::cubic_p1(l, m);
        let p2 = fixtures::cubic_p2(l, m);
        assert!((dense::det(&m1) - p1).norm() <= 1e-8 * p1.norm());
        assert!((dense::det(&m2) - p2).norm() <= 1e-8 * p2.norm());
    }
}

use rand::Rng;

#[test]
fn cubic_system_has_nine_roots_with_small_residuals() {
    let rep = fixtures::cubic_rep();
    let cfg = SolverConfig::default();
    let mut rng = rng_from_seed(9);
    let roots = solve_bivariate_lambda(&rep, &cfg, &mut rng).unwrap();
    assert_eq!(roots.len(), 9);
    for r in &roots {
        assert!(r.residuals.0 <= 1e-6, "p1 residual {:.2e}", r.residuals.0);
        assert!(r.residuals.1 <= 1e-6, "p2 residual {:.2e}", r.residuals.1);
    }
    // roots are closed under conjugation for real coefficients: one real,
    // four conjugate pairs
    let real_count = roots.iter().filter(|r| r.lambda.im.abs() < 1e-8).count();
    assert_eq!(real_count, 1);
}

#[test]
fn mu_recovery_for_identity_mu_blocks_reduces_to_plain_eig() {
    // with C1 = C2 = I the mu candidates are plain eigenvalues, and every
    // recovered mu satisfies det(A_i + lambda B_i + mu) = 0
    let mut rng = rng_from_seed(4);
    let n = 4;
    let a1 = complex_gaussian(&mut rng, n, n);
    let b1 = complex_gaussian(&mut rng, n, n);
    let a2 = complex_gaussian(&mut rng, n, n);
    let b2 = complex_gaussian(&mut rng, n, n);
    let id = CMat::identity(n, n);
    // identical first and second blocks make the candidate lists agree
    let rep = DeterminantalRep::new(
        a1.clone(),
        b1.clone(),
        id.clone(),
        a1.clone(),
        b1.clone(),
        id.clone(),
    )
    .unwrap();
    let _ = (a2, b2);
    let lambda = c(0.37, -0.81);
    let mus = recover_mu(&rep, lambda).unwrap();
    assert_eq!(mus.len(), n);
    for mu in mus {
        let m = CMat::from_fn(n, n, |i, j| {
            rep.a1[(i, j)] + lambda * rep.b1[(i, j)] + mu * id[(i, j)]
        });
        let sv = dense::singular_values(&m).unwrap();
        assert!(sv[n - 1] <= 1e-8 * sv[0]);
    }
}

#[test]
fn mu_recovery_rejects_non_roots() {
    let rep = fixtures::cubic_rep();
    // a generic lambda is not the lambda-part of any root
    let bogus = c(0.123456, 0.654321);
    assert!(matches!(
        recover_mu(&rep, bogus),
        Err(singpencil::Error::NoCommonMu)
    ));
}

#[test]
fn double_eig_pencil_matches_hand_expansion_for_n_2() {
    let mut rng = rng_from_seed(5);
    let a = real_gaussian(&mut rng, 2, 2);
    let b = real_gaussian(&mut rng, 2, 2);
    let deltas = build_double_eig_pencil(&a, &b).unwrap();
    assert_eq!(deltas.size(), 8);
    assert_eq!(deltas.expected_nrank, Some(6));

    // independent index-formula expansion of the two Kronecker sums
    let n = 2;
    let at = |i: usize, j: usize| a[(i, j)];
    let bt = |i: usize, j: usize| b[(i, j)];
    for i in 0..2 * n * n {
        for j in 0..2 * n * n {
            let (p, r) = (i / (2 * n), i % (2 * n));
            let (q, s) = (j / (2 * n), j % (2 * n));
            // A (x) I_2n
            let t1 = if r == s { at(p, q) } else { Complex64::ZERO };
            // I_n (x) [[A, 0], [-I, A]]
            let inner = if p == q {
                let (ri, rj) = (r / n, s / n);
                let (ii, jj) = (r % n, s % n);
                match (ri, rj) {
                    (0, 0) | (1, 1) => at(ii, jj),
                    (1, 0) => {
                        if ii == jj {
                            -Complex64::ONE
                        } else {
                            Complex64::ZERO
                        }
                    }
                    _ => Complex64::ZERO,
                }
            } else {
                Complex64::ZERO
            };
            assert_eq!(deltas.delta1[(i, j)], t1 - inner);

            // I_n (x) diag(B, B) - B (x) I_2n
            let d0a = if p == q {
                let (ri, rj) = (r / n, s / n);
                let (ii, jj) = (r % n, s % n);
                if ri == rj {
                    bt(ii, jj)
                } else {
                    Complex64::ZERO
                }
            } else {
                Complex64::ZERO
            };
            let d0b = if r == s { bt(p, q) } else { Complex64::ZERO };
            assert_eq!(deltas.delta0[(i, j)], d0a - d0b);
        }
    }
}

#[test]
fn double_eig_pencil_is_degenerate_for_commuting_identity_input() {
    let id = CMat::identity(3, 3);
    let deltas = build_double_eig_pencil(&id, &id).unwrap();
    let mut all_zero = true;
    for i in 0..18 {
        for j in 0..18 {
            if deltas.delta0[(i, j)] != Complex64::ZERO {
                all_zero = false;
            }
        }
    }
    assert!(all_zero, "identity input collapses the second determinant");
}

#[test]
fn no_finite_double_eig_candidates_when_b_is_zero() {
    let mut a = CMat::zeros(2, 2);
    a[(0, 0)] = c(1.0, 0.0);
    a[(1, 1)] = c(2.0, 0.0);
    let b = CMat::zeros(2, 2);
    let cfg = SolverConfig::default();
    let mut rng = rng_from_seed(6);
    let lams = find_double_eigs(&a, &b, &cfg, &mut rng).unwrap();
    assert!(lams.is_empty(), "degenerate input must yield nothing");
}

#[test]
fn double_eigs_found_where_eigenvalues_coalesce() {
    let mut rng = rng_from_seed(12);
    let n = 6;
    let a = real_gaussian(&mut rng, n, n);
    let b = real_gaussian(&mut rng, n, n);
    let cfg = SolverConfig::default();
    let lams = find_double_eigs(&a, &b, &cfg, &mut rng).unwrap();
    assert_eq!(lams.len(), n * (n - 1));
    for &l in &lams {
        let m = CMat::from_fn(n, n, |i, j| a[(i, j)] + l * b[(i, j)]);
        let spec = eig_triplets(&Pencil::new(m, CMat::identity(n, n)).unwrap()).unwrap();
        let mut dmin = f64::INFINITY;
        for i in 0..n {
            for j in 0..i {
                dmin = dmin
                    .min((spec.triplets[i].value.lambda() - spec.triplets[j].value.lambda()).norm());
            }
        }
        assert!(dmin <= 1e-6, "no coalescence at {l}: split {dmin:.2e}");
    }
}

#[test]
fn double_eigs_are_similarity_invariant() {
    let mut rng = rng_from_seed(7);
    let n = 4;
    let a = real_gaussian(&mut rng, n, n);
    let b = real_gaussian(&mut rng, n, n);
    let cfg = SolverConfig::default();
    let lams1 = find_double_eigs(&a, &b, &cfg, &mut rng).unwrap();

    // simultaneous similarity preserves the coalescence locations
    let t = singpencil::sampling::haar_unitary(&mut rng, n);
    let th = singpencil::pencil::adjoint(&t);
    let a2 = dense::mul3(&th, &a, &t);
    let b2 = dense::mul3(&th, &b, &t);
    let lams2 = find_double_eigs(&a2, &b2, &cfg, &mut rng).unwrap();
    assert_eq!(lams1.len(), lams2.len());
    let mut avail: Vec<Complex64> = lams2.clone();
    for l in &lams1 {
        let v = ProjectiveValue::from_lambda(*l);
        let (pos, d) = avail
            .iter()
            .enumerate()
            .map(|(i, w)| (i, v.chordal_distance(&ProjectiveValue::from_lambda(*w))))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        assert!(d <= 1e-6, "unmatched {l}, nearest {d:.2e}");
        avail.remove(pos);
    }
}

#[test]
fn transmission_zeros_of_the_control_fixture() {
    let (a, b, c_, d) = fixtures::control_system();
    let cfg = SolverConfig::default();
    let mut rng = rng_from_seed(8);
    let zeros = transmission_zeros(&a, &b, &c_, &d, &cfg, &mut rng).unwrap();
    assert_eq!(zeros.len(), 2);
    let mut re: Vec<f64> = zeros.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 4.0).abs() <= 1e-8);
    assert!((re[1] - 3.0).abs() <= 1e-8);
    for z in &zeros {
        assert!(z.im.abs() <= 1e-8);
    }
}

#[test]
fn siso_zeros_match_transfer_function_numerator() {
    // n = 2, single input, single output with C = B^*: the transfer function
    // numerator C adj(sI - A) B is a quadratic with closed-form roots
    let mut rng = rng_from_seed(10);
    let a = real_gaussian(&mut rng, 2, 2);
    let b = real_gaussian(&mut rng, 2, 1);
    let c_ = singpencil::pencil::adjoint(&b);
    let d = CMat::zeros(1, 1);

    // numerator coefficients: C adj(sI-A) B = alpha2 s^2? (degree <= 1 here)
    // adj([s-a00, -a01; -a10, s-a11]) = [s-a11, a01; a10, s-a00]
    let c0 = c_[(0, 0)];
    let c1 = c_[(0, 1)];
    let b0 = b[(0, 0)];
    let b1 = b[(1, 0)];
    // numerator(s) = c0*(s-a11)*b0 + c0*a01*b1 + c1*a10*b0 + c1*(s-a00)*b1
    let lin = c0 * b0 + c1 * b1;
    let cst = -c0 * a[(1, 1)] * b0 + c0 * a[(0, 1)] * b1 + c1 * a[(1, 0)] * b0
        - c1 * a[(0, 0)] * b1;
    let root = -cst / lin;

    let cfg = SolverConfig::default();
    let zeros = transmission_zeros(&a, &b, &c_, &d, &cfg, &mut rng).unwrap();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0] - root).norm() <= 1e-8, "{} vs {root}", zeros[0]);
}

#[test]
fn square_system_pencil_agrees_with_perturbation_route() {
    // full-rank D with as many inputs as outputs: the system pencil is
    // square; the projection-based zeros must match the finite true
    // eigenvalues that the perturbation method extracts
    let mut rng = rng_from_seed(11);
    let n = 4;
    let a = real_gaussian(&mut rng, n, n);
    let b = real_gaussian(&mut rng, n, 2);
    let c_ = real_gaussian(&mut rng, 2, n);
    let d = real_gaussian(&mut rng, 2, 2);
    let cfg = SolverConfig::default();
    let zeros = transmission_zeros(&a, &b, &c_, &d, &cfg, &mut rng).unwrap();

    let s = system_pencil(&a, &b, &c_, &d).unwrap();
    // the square pencil here is regular (D has full rank): plain solve works
    let est = singpencil::nrank::estimate_normal_rank(&s, 3, &mut rng);
    let k = s.nrows() - est.nrank;
    let spectrum = if k == 0 {
        let trip = eig_triplets(&s).unwrap();
        trip.triplets.iter().map(|t| (t.value, 1.0)).collect::<Vec<_>>()
    } else {
        perturb_solve(&s, k, &cfg, &mut rng)
            .unwrap()
            .true_gamma_pairs()
    };
    let report = extract_finite(&spectrum, &ClassifierConfig::default());
    let mut other: Vec<Complex64> = report.finite.iter().map(|v| v.lambda()).collect();
    assert_eq!(other.len(), zeros.len());
    for z in &zeros {
        let (pos, d) = other
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        assert!(d <= 1e-7);
        other.remove(pos);
    }
}

#[test]
fn system_pencil_shape_checks() {
    let a = CMat::zeros(3, 3);
    let b = CMat::zeros(3, 2);
    let c_ = CMat::zeros(2, 3);
    let d_bad = CMat::zeros(3, 3);
    assert!(system_pencil(&a, &b, &c_, &d_bad).is_err());
    let d = CMat::zeros(2, 2);
    let s = system_pencil(&a, &b, &c_, &d).unwrap();
    assert_eq!((s.nrows(), s.ncols()), (5, 5));
}
