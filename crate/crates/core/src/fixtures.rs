//! Hand-built test pencils and systems with known structure.
//!
//! These are shared by the unit, integration, and acceptance suites and are
//! exposed so the CLI examples can write them to disk.

use num_complex::Complex64;

use crate::apps::DeterminantalRep;
use crate::pencil::{CMat, Pencil};

fn mat(rows: &[&[f64]]) -> CMat {
    CMat::from_fn(rows.len(), rows[0].len(), |i, j| {
        Complex64::new(rows[i][j], 0.0)
    })
}

/// 7x7 singular pencil of normal rank 6.
///
/// Kronecker structure: Jordan blocks at 1/2 and 1/3, one nilpotent block,
/// one right singular block of index 1, one left singular block of index 2.
/// Regular eigenvalues: {1/2, 1/3, infinity}.
pub fn pencil_7x7() -> Pencil {
    let a = mat(&[
        &[-1., -1., -1., -1., -1., -1., -1.],
        &[1., 0., 0., 0., 0., 0., 0.],
        &[1., 2., 1., 1., 1., 1., 1.],
        &[1., 2., 3., 3., 3., 3., 3.],
        &[1., 2., 3., 2., 2., 2., 2.],
        &[1., 2., 3., 4., 3., 3., 3.],
        &[1., 2., 3., 4., 5., 5., 4.],
    ]);
    let b = mat(&[
        &[-2., -2., -2., -2., -2., -2., -2.],
        &[2., -1., -1., -1., -1., -1., -1.],
        &[2., 5., 5., 5., 5., 5., 5.],
        &[2., 5., 5., 4., 4., 4., 4.],
        &[2., 5., 5., 6., 5., 5., 5.],
        &[2., 5., 5., 6., 7., 7., 7.],
        &[2., 5., 5., 6., 7., 6., 6.],
    ]);
    Pencil::new(a, b).expect("fixture is well formed")
}

/// 5x5 singular pencil of normal rank 4 whose regular eigenvalues are
/// {1, 2}; plain QZ on it returns nothing close to either.
pub fn pencil_5x5() -> Pencil {
    let a = mat(&[
        &[1., -2., 100., 0., 0.],
        &[1., 0., -1., 0., 0.],
        &[0., 0., 0., 1., -75.],
        &[0., 0., 0., 0., 2.],
        &[0., 0., 0., 0., 0.],
    ]);
    let b = mat(&[
        &[0., 1., 0., 0., 0.],
        &[0., 0., 1., 0., 0.],
        &[0., 0., 0., 1., 0.],
        &[0., 0., 0., 0., 1.],
        &[0., 0., 0., 0., 0.],
    ]);
    Pencil::new(a, b).expect("fixture is well formed")
}

/// Determinantal representation of a pair of dense bivariate cubics,
/// `p_i(lambda, mu) = det(A_i + lambda B_i + mu C_i)` with 5x5 blocks.
///
/// The cubics are [`cubic_p1`] and [`cubic_p2`]; the system has 9 roots.
pub fn cubic_rep() -> DeterminantalRep {
    let a1 = mat(&[
        &[0., 0., 4., 1., 0.],
        &[0., 5., 2., 0., 1.],
        &[6., 3., 1., 0., 0.],
        &[1., 0., 0., 0., 0.],
        &[0., 1., 0., 0., 0.],
    ]);
    let b1 = mat(&[
        &[0., 0., 7., 0., 0.],
        &[0., 8., 0., -1., 0.],
        &[9., 0., 0., 0., -1.],
        &[0., 0., 0., 0., 0.],
        &[0., 0., 0., 0., 0.],
    ]);
    let c1 = mat(&[
        &[0., 0., 0., 0., 0.],
        &[0., 0., 0., 0., 0.],
        &[10., 0., 0., 0., 0.],
        &[0., -1., 0., 0., 0.],
        &[0., 0., -1., 0., 0.],
    ]);
    let a2 = mat(&[
        &[0., 0., 7., 1., 0.],
        &[0., 6., 9., 0., 1.],
        &[5., 8., 10., 0., 0.],
        &[1., 0., 0., 0., 0.],
        &[0., 1., 0., 0., 0.],
    ]);
    let b2 = mat(&[
        &[0., 0., 4., 0., 0.],
        &[0., 3., 0., -1., 0.],
        &[2., 0., 0., 0., -1.],
        &[0., 0., 0., 0., 0.],
        &[0., 0., 0., 0., 0.],
    ]);
    let c2 = mat(&[
        &[0., 0., 0., 0., 0.],
        &[0., 0., 0., 0., 0.],
        &[1., 0., 0., 0., 0.],
        &[0., -1., 0., 0., 0.],
        &[0., 0., -1., 0., 0.],
    ]);
    DeterminantalRep::with_uniform_degree(a1, b1, c1, a2, b2, c2, 3)
        .expect("fixture is well formed")
}

/// First cubic of the [`cubic_rep`] system, coefficients 1..10 over
/// `1, l, m, l^2, lm, m^2, l^3, l^2 m, l m^2, m^3`.
pub fn cubic_p1(l: Complex64, m: Complex64) -> Complex64 {
    1.0 + 2.0 * l + 3.0 * m + 4.0 * l * l + 5.0 * l * m + 6.0 * m * m
        + 7.0 * l * l * l + 8.0 * l * l * m + 9.0 * l * m * m + 10.0 * m * m * m
}

/// Second cubic of the [`cubic_rep`] system, coefficients 10..1.
pub fn cubic_p2(l: Complex64, m: Complex64) -> Complex64 {
    10.0 + 9.0 * l + 8.0 * m + 7.0 * l * l + 6.0 * l * m + 5.0 * m * m
        + 4.0 * l * l * l + 3.0 * l * l * m + 2.0 * l * m * m + m * m * m
}

/// State-space system (A, B, C, D) with 5 states, 2 inputs, 3 outputs and
/// transmission zeros {3, -4}; its system pencil is rectangular (8x7).
pub fn control_system() -> (CMat, CMat, CMat, CMat) {
    let a = mat(&[
        &[2., 6., -3., 7., -6.],
        &[0., 5., -4., 4., -8.],
        &[0., -2., 0., -2., 2.],
        &[0., -6., 3., -5., 6.],
        &[0., 2., -2., 2., -5.],
    ]);
    let b = mat(&[
        &[-2., 7.],
        &[-8., -5.],
        &[-3., 0.],
        &[1., 5.],
        &[-8., 0.],
    ]);
    let c = mat(&[
        &[0., -1., 2., -1., -1.],
        &[1., 1., 1., 0., -1.],
        &[0., 3., -2., 3., -1.],
    ]);
    let d = CMat::zeros(3, 2);
    (a, b, c, d)
}
