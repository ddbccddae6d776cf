//! Hermitian eigendecomposition.
//!
//! The matrix is reduced to a real symmetric tridiagonal form by Householder
//! reflections followed by a diagonal phase rescaling, then diagonalized with
//! implicit-shift QL iterations. Rotations from the QL stage are real and are
//! applied directly to the complex columns of the accumulated reduction.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::math;
use crate::{Error, Result, C64};

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues (ascending) and the unitary whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &w) in fl.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        HermitianMatrix::symmetrize(out)
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_eigenvalues(|l| l)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn herm_eig(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.as_matrix().as_slice().to_vec();
    let mut q = ComplexMatrix::identity(n).into_vec();
    let (diag, off) = tridiagonalize(&mut a, n, Some(&mut q));
    let (mut d, mut e) = (diag, real_offdiagonal(&off, n, Some(&mut q)));
    tql2(&mut d, &mut e, n, Some(&mut q))?;
    let order = ascending_order(&d);
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| q[r * n + order[c]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub fn herm_eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut a = h.as_matrix().as_slice().to_vec();
    let (mut d, off) = tridiagonalize(&mut a, n, None);
    let mut e = real_offdiagonal(&off, n, None);
    tql2(&mut d, &mut e, n, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction `A = Q T Q†` in place. Returns the real diagonal and
/// the complex subdiagonal `T[i+1][i]`.
fn tridiagonalize(a: &mut [C64], n: usize, mut q: Option<&mut Vec<C64>>) -> (Vec<f64>, Vec<C64>) {
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let tail: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = math::sqrt(x0.norm_sqr() + tail);
        let x0abs = math::cabs(x0);
        let phase = if x0abs > 0.0 { x0 / x0abs } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] -= alpha;
        let tau = 1.0 / (xnorm * (xnorm + x0abs));

        // p = τ A_sub v
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let s: C64 = row.iter().zip(&v[..m]).map(|(&x, &y)| x * y).sum();
            p[i] = s * tau;
        }
        // w = p − (τ/2)(v†p) v, with v†p real
        let vp: f64 = v[..m].iter().zip(&p[..m]).map(|(a, b)| (a.conj() * b).re).sum();
        let kappa = 0.5 * tau * vp;
        for i in 0..m {
            p[i] -= v[i] * kappa;
        }
        // A_sub −= v w† + w v†
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for i in k + 2..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
        // Q ← Q H
        if let Some(q) = q.as_deref_mut() {
            for r in 0..n {
                let row = &mut q[r * n + k + 1..r * n + n];
                let s: C64 = row.iter().zip(&v[..m]).map(|(&x, &y)| x * y).sum::<C64>() * tau;
                for (x, &vj) in row.iter_mut().zip(&v[..m]) {
                    *x -= s * vj.conj();
                }
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    (diag, off)
}

/// Rescales by `D = diag(φ)` so the subdiagonal becomes `|e_i|`, folding `D`
/// into the columns of `Q`. The returned vector has length `n` with a
/// trailing zero.
fn real_offdiagonal(off: &[C64], n: usize, q: Option<&mut Vec<C64>>) -> Vec<f64> {
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for (i, &z) in off.iter().enumerate() {
        let r = math::cabs(z);
        e[i] = r;
        phases[i + 1] = if r > 0.0 { phases[i] * (z / r) } else { phases[i] };
    }
    if let Some(q) = q {
        for r in 0..n {
            for (c, &ph) in phases.iter().enumerate() {
                q[r * n + c] *= ph;
            }
        }
    }
    e
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// superdiagonal `e` (`e[n−1] = 0`). Rotations are applied to the columns of
/// `z` when present.
fn tql2(d: &mut [f64], e: &mut [f64], n: usize, mut z: Option<&mut Vec<C64>>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut shift = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(math::abs(d[l]) + math::abs(e[l]));
        let mut m = l;
        while m < n - 1 {
            if math::abs(e[m]) <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::EigenNoConvergence {
                        iterations: iter - 1,
                        residual: math::abs(e[l]),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = math::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                shift += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = math::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zi1 = z[k * n + i + 1];
                            let zi = z[k * n + i];
                            z[k * n + i + 1] = zi * s + zi1 * c;
                            z[k * n + i] = zi * c - zi1 * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if math::abs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift;
        e[l] = 0.0;
    }
    Ok(())
}

fn ascending_order(d: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    order
}
