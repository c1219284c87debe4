//! Seeded random matrices. Every randomized routine in the crate draws from a
//! `ChaCha8Rng` so that a fixed seed reproduces results bit for bit.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::c64;
use super::matrix::*;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_complex(rng: &mut Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            let re = normal(rng);
            let im = normal(rng);
            m[(i, j)] = c64::new(re, im);
        }
    }
    m
}

pub fn random_real_vector(rng: &mut Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

/// GUE-like Hermitian matrix.
pub fn random_hermitian(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = random_complex(rng, n, n);
    scale_real(&(&g + g.adjoint()), 0.5)
}

/// Haar-ish unitary from the QR factorisation of a Ginibre matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = random_complex(rng, n, n);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        q[(i, j)] * phase
    })
}

/// Positive-definite matrix with eigenvalues bounded away from zero.
pub fn random_positive_definite(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = random_complex(rng, n, n);
    &g * g.adjoint() + scale_real(&identity(n), 0.1 * n as f64)
}

/// Faithful density matrix (unit trace, strictly positive).
pub fn random_density(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let p = random_positive_definite(rng, n);
    let t = trace(&p).re;
    scale_real(&p, 1.0 / t)
}
