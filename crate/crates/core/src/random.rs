//! Seeded random states, points and channels.
//!
//! Everything draws from ChaCha20 seeded with a `u64`, so a seed reproduces
//! the same instance on every platform.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channel::Channel;
use crate::manifold::{EnsemblePoint, TangentVector};
use crate::numerics::{inner_product, vector_norm, ComplexMatrix, HermitianMatrix};
use crate::{Result, StateVector, C64};

pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unit vector in `C^d` (normalized complex Gaussian).
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> StateVector {
    loop {
        let v: StateVector = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = vector_norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random orthonormal basis of `C^d`, by Gram–Schmidt on complex
/// Gaussian vectors (two orthogonalization passes).
pub fn haar_basis<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<StateVector> {
    let mut basis: Vec<StateVector> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: StateVector = (0..d).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let c = inner_product(b, &v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let norm = vector_norm(&v);
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Uniform point of the probability simplex (normalized exponential
/// variates).
pub fn uniform_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Random full-rank density matrix `G G† / tr(G G†)` with Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let gg = g.matmul(&g.adjoint()).expect("square");
    let h = HermitianMatrix::from_matrix(gg).expect("square");
    let t = h.trace();
    h.scale(1.0 / t)
}

/// Random Hermitian matrix with standard Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
    HermitianMatrix::from_matrix(ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng)))
        .expect("square")
}

/// `d`-dimensional entanglement-breaking channel with Kraus operators
/// `|w_i⟩⟨v_i|`, Haar-random `w_i` and a Haar-random basis `v_i`.
pub fn random_eb_parts(d: usize, seed: u64) -> (Vec<StateVector>, Vec<StateVector>) {
    let mut rng = seeded_rng(seed);
    let ws = (0..d).map(|_| haar_state(&mut rng, d)).collect();
    let vs = haar_basis(&mut rng, d);
    (ws, vs)
}

pub fn random_eb_channel(d: usize, seed: u64) -> Result<Channel> {
    let (ws, vs) = random_eb_parts(d, seed);
    Channel::entanglement_breaking(&ws, &vs)
}

/// Haar-random pure output states for a cq channel over `letters` inputs.
pub fn random_cq_states(letters: usize, d_out: usize, seed: u64) -> Vec<HermitianMatrix> {
    let mut rng = seeded_rng(seed);
    (0..letters)
        .map(|_| HermitianMatrix::projector(&haar_state(&mut rng, d_out)))
        .collect()
}

pub fn random_cq_channel(letters: usize, d_out: usize, seed: u64) -> Result<Channel> {
    Channel::cq(random_cq_states(letters, d_out, seed))
}

/// Random unit tangent vector at `m` (Gaussian ambient draw, projected and
/// normalized in the Euclidean product metric). Zero when the tangent space
/// is trivial (one member, and no state or `d = 1`).
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, m: &EnsemblePoint) -> TangentVector {
    if m.len() <= 1 && m.dim() <= 1 {
        return TangentVector::zeros_at(m);
    }
    loop {
        let dp: Vec<f64> = (0..m.len()).map(|_| rng.sample(StandardNormal)).collect();
        let dstates: Vec<StateVector> = (0..m.states().len())
            .map(|_| (0..m.dim()).map(|_| complex_gaussian(rng)).collect())
            .collect();
        let v = m.proj_tangent(&dp, &dstates).expect("shapes match the point");
        let norm = m.grad_norm(&v).expect("shapes match the point");
        if norm > 1e-12 {
            return v.scaled(1.0 / norm);
        }
    }
}
