//! Seeded random sampling of the matrices the extraction methods consume.
//!
//! Every method draws all of its randomness from an explicit generator, so a
//! fixed seed reproduces the full run bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::pencil::CMat;

/// The generator used across the crate for reproducible runs.
pub type SeededRng = ChaCha12Rng;

/// Builds the crate's deterministic generator from a seed.
pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Matrix with independent standard real Gaussian entries (zero imaginary part).
pub fn real_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(n, m);
    // column-major fill so the draw order matches the storage order
    for j in 0..m {
        for i in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            out[(i, j)] = Complex64::new(re, 0.0);
        }
    }
    out
}

/// Matrix with independent standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    out
}

/// Haar-distributed random unitary matrix: orthonormalized complex Gaussian.
///
/// The orthonormalization keeps the implied triangular factor's diagonal
/// positive, which is what makes the distribution Haar.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    crate::dense::orthonormalize(&complex_gaussian(rng, n, n))
}

/// Matrix with orthonormal columns spanning a Haar-random subspace.
pub fn random_orthonormal<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMat {
    crate::dense::orthonormalize(&complex_gaussian(rng, n, k))
}

/// `k` values uniform in `[lo, hi]`, resampled until pairwise separated.
pub fn distinct_uniform<R: Rng + ?Sized>(rng: &mut R, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let min_sep = (hi - lo) * 1e-6;
    'outer: loop {
        let vals: Vec<f64> = (0..k).map(|_| rng.random_range(lo..hi)).collect();
        for i in 0..k {
            for j in 0..i {
                if (vals[i] - vals[j]).abs() < min_sep {
                    continue 'outer;
                }
            }
        }
        return vals;
    }
}

/// Random point on the complex unit circle.
pub fn unit_circle<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let g = Complex64::new(re, im);
        if g.norm() > 1e-6 {
            return g / g.norm();
        }
    }
}
