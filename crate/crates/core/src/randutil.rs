//! Seeded random generators for matrices, states and channels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{cr, CMat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Ginibre matrix (i.i.d. standard complex Gaussians).
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = ginibre(rng, dim, dim);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cr(1.0) };
        for i in 0..dim {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

/// Random Hermitian matrix with entries of order 1.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = ginibre(rng, dim, dim);
    (&g + g.adjoint()) * cr(0.5)
}

/// Random full-rank density matrix (normalized Wishart).
pub fn random_density(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = ginibre(rng, dim, dim);
    let w = &g * g.adjoint();
    let t = w.trace().re;
    w * cr(1.0 / t)
}

/// Random pure-state density matrix.
pub fn random_pure_density(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = ginibre(rng, dim, 1);
    let n2 = g.norm_squared();
    &g * g.adjoint() * cr(1.0 / n2)
}

/// Projector onto a Haar-random subspace of the given rank.
pub fn random_projector(rng: &mut impl Rng, dim: usize, rank: usize) -> CMat {
    let u = haar_unitary(rng, dim);
    let mut p = CMat::zeros(dim, dim);
    for k in 0..rank.min(dim) {
        let col = u.column(k);
        p += &col * col.adjoint();
    }
    p
}

/// Random channel on a `dim`-dimensional system with `n_kraus` Kraus operators,
/// built from a Stinespring isometry.
pub fn random_channel(rng: &mut impl Rng, dim: usize, n_kraus: usize) -> Vec<CMat> {
    // Isometry dim*n_kraus × dim from QR of a tall Ginibre matrix.
    let g = ginibre(rng, dim * n_kraus, dim);
    let qr = g.qr();
    let q = qr.q(); // (dim*n_kraus) × dim, isometry
    (0..n_kraus)
        .map(|k| {
            DMatrix::from_fn(dim, dim, |i, j| q[(k * dim + i, j)])
        })
        .collect()
}
