//! Regular eigenvalues of singular matrix pencils.
//!
//! A square pencil `A - lambda B` is singular when `det(A - lambda B)`
//! vanishes identically (any non-square pencil is singular). Plain QZ on such
//! a pencil is meaningless, yet the pencil still has a well-defined regular
//! part carrying finitely many true eigenvalues. This crate extracts them by
//! three routes and then splits them into finite and infinite ones:
//!
//! - **projection** onto the normal rank ([`solvers::project_solve`]),
//! - **augmentation** by a bordered pencil ([`solvers::augment_solve`]),
//! - **rank-completing perturbation** ([`solvers::perturb_solve`]),
//!
//! followed by the gamma/gap classifier in [`classify`]. Supporting pieces:
//! a normal-rank estimator ([`nrank`]), a Kronecker-structure test generator
//! ([`kcf`]), and application drivers ([`apps`]) for bivariate polynomial
//! systems, double-eigenvalue location, and transmission zeros of rectangular
//! system pencils.

pub mod apps;
pub mod backend;
pub mod classify;
pub mod dense;
pub mod error;
pub mod fixtures;
pub mod kcf;
pub mod nrank;
pub mod pencil;
pub mod sampling;
pub mod solvers;

pub use error::{Error, Result};
pub use pencil::{CMat, CVec, EigenTriplet, Pencil, ProjectiveValue};
