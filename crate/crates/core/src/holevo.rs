//! The Holevo cost `f(m) = Σ p_i H(σ_i) − H(σ)` on the product manifold and
//! its Riemannian gradient.
//!
//! With `σ_i = N(|ψ_i⟩⟨ψ_i|)`, `σ = Σ p_i σ_i` and `D_i = D(σ_i‖σ)`, the
//! Euclidean partials are
//!
//! ```text
//! ∂f/∂p_i  = 1/ln 2 − D_i
//! ∂f/∂ψ_i  = 2 p_i N†(log σ − log σ_i) |ψ_i⟩
//! ```
//!
//! (the constant in `∂f/∂p_i` comes from `tr σ = 1` and drops out of every
//! tangent direction). Projecting the state partial onto the tangent space
//! of the sphere uses `⟨ψ_i|N†(log σ − log σ_i)|ψ_i⟩ = −D_i`, giving
//!
//! ```text
//! [grad f]_i = 2 p_i [N†(log σ − log σ_i) + D_i I] |ψ_i⟩.
//! ```
//!
//! All logarithms are binary. Each evaluation diagonalizes `σ` and every
//! `σ_i` once; `D_i` reuses those logarithms.

use alloc::vec::Vec;

use crate::channel::{Channel, ChannelKind, QuantumMap, SmoothedChannel};
use crate::manifold::{EnsemblePoint, SimplexGeometry, TangentVector};
use crate::numerics::{
    entropy_of_spectrum, herm_eig, herm_eigenvalues, kron_vec, HermitianMatrix, DEFAULT_LOG_FLOOR,
};
use crate::{math, Error, Result, StateVector, C64};

/// Default cap on the input dimension of a tensor-product channel built by
/// [`product_grad_residual`].
pub const DEFAULT_PRODUCT_DIM_CAP: usize = 64;

/// Value of the Holevo cost at a point together with the quantities it is
/// built from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostReport {
    /// `Σ p_i H(σ_i) − H(σ)` in bits.
    pub f: f64,
    /// `−f`, a lower bound on the Holevo capacity.
    pub chi: f64,
    pub per_state_entropies: Vec<f64>,
    pub mixture_entropy: f64,
    /// `D(σ_i‖σ)` for every ensemble member.
    pub rel_entropies: Vec<f64>,
}

/// Everything the gradient needs at one point.
#[derive(Debug, Clone)]
pub struct Evaluation {
    report: CostReport,
    mixture_log: HermitianMatrix,
    /// `log σ_i`; empty for cq channels.
    output_logs: Vec<HermitianMatrix>,
}

impl Evaluation {
    pub fn report(&self) -> &CostReport {
        &self.report
    }

    pub fn f(&self) -> f64 {
        self.report.f
    }

    pub fn into_report(self) -> CostReport {
        self.report
    }

    /// Simplex component of the gradient in the requested geometry.
    pub fn simplex_gradient(&self, probs: &[f64], geometry: SimplexGeometry) -> Vec<f64> {
        let d = &self.report.rel_entropies;
        let weighted: f64 = probs.iter().zip(d).map(|(p, x)| p * x).sum();
        match geometry {
            SimplexGeometry::Euclidean => {
                let mean = d.iter().sum::<f64>() / d.len() as f64;
                d.iter().map(|x| mean - x).collect()
            }
            SimplexGeometry::PaperQ => probs
                .iter()
                .zip(d)
                .map(|(p, x)| 1.0 - x + p * (weighted - 1.0))
                .collect(),
            SimplexGeometry::Fisher => probs.iter().zip(d).map(|(p, x)| p * (weighted - x)).collect(),
        }
    }
}

struct CqCache {
    smoothed_states: Vec<HermitianMatrix>,
    entropies: Vec<f64>,
}

/// The Holevo cost of a fixed smoothed channel, with per-letter quantities of
/// cq channels computed once.
pub struct HolevoObjective<'a> {
    channel: &'a SmoothedChannel,
    cq: Option<CqCache>,
}

impl<'a> HolevoObjective<'a> {
    pub fn new(channel: &'a SmoothedChannel) -> Result<Self> {
        let cq = match channel.base().cq_states() {
            None => None,
            Some(states) => {
                let d_out = channel.d_out();
                let smoothed_states: Vec<HermitianMatrix> = (0..states.len())
                    .map(|x| {
                        let mut e = alloc::vec![C64::new(0.0, 0.0); states.len()];
                        e[x] = C64::new(1.0, 0.0);
                        channel.apply_pure(&e)
                    })
                    .collect::<Result<_>>()?;
                let entropies = smoothed_states
                    .iter()
                    .map(|s| herm_eigenvalues(s).map(|v| entropy_of_spectrum(&v)))
                    .collect::<Result<_>>()?;
                debug_assert!(smoothed_states.iter().all(|s| s.dim() == d_out));
                Some(CqCache {
                    smoothed_states,
                    entropies,
                })
            }
        };
        Ok(Self { channel, cq })
    }

    pub fn channel(&self) -> &SmoothedChannel {
        self.channel
    }

    fn check_point(&self, m: &EnsemblePoint) -> Result<()> {
        match self.channel.base().kind() {
            ChannelKind::Cq => {
                if !m.is_simplex_only() {
                    return Err(Error::DimensionMismatch {
                        context: "cq point (states must be absent)",
                        expected: 0,
                        found: m.dim(),
                    });
                }
                if m.len() != self.channel.d_in() {
                    return Err(Error::DimensionMismatch {
                        context: "cq point alphabet size",
                        expected: self.channel.d_in(),
                        found: m.len(),
                    });
                }
            }
            ChannelKind::Kraus => {
                if m.dim() != self.channel.d_in() {
                    return Err(Error::DimensionMismatch {
                        context: "point state dimension",
                        expected: self.channel.d_in(),
                        found: m.dim(),
                    });
                }
            }
        }
        Ok(())
    }

    fn outputs(&self, m: &EnsemblePoint) -> Result<Vec<HermitianMatrix>> {
        m.states()
            .iter()
            .map(|psi| self.channel.apply_pure(psi))
            .collect()
    }

    fn mixture<'b>(
        &self,
        probs: &[f64],
        outputs: impl Iterator<Item = &'b HermitianMatrix>,
    ) -> HermitianMatrix {
        let mut sigma = HermitianMatrix::zeros(self.channel.d_out());
        for (p, s) in probs.iter().zip(outputs) {
            sigma.add_scaled_assign(*p, s);
        }
        sigma
    }

    /// Cost only; uses eigenvalues without eigenvectors.
    pub fn value(&self, m: &EnsemblePoint) -> Result<f64> {
        self.check_point(m)?;
        let probs = m.probs();
        match &self.cq {
            Some(cache) => {
                let sigma = self.mixture(probs, cache.smoothed_states.iter());
                let h_mix = entropy_of_spectrum(&herm_eigenvalues(&sigma)?);
                let avg: f64 = probs.iter().zip(&cache.entropies).map(|(p, h)| p * h).sum();
                Ok(avg - h_mix)
            }
            None => {
                let outputs = self.outputs(m)?;
                let mut avg = 0.0;
                for (p, s) in probs.iter().zip(&outputs) {
                    avg += p * entropy_of_spectrum(&herm_eigenvalues(s)?);
                }
                let sigma = self.mixture(probs, outputs.iter());
                Ok(avg - entropy_of_spectrum(&herm_eigenvalues(&sigma)?))
            }
        }
    }

    /// Cost, entropies, relative entropies and the logarithms the gradient
    /// needs.
    pub fn evaluate(&self, m: &EnsemblePoint) -> Result<Evaluation> {
        self.check_point(m)?;
        let probs = m.probs();
        let (sigma, per_state_entropies, output_logs, outputs) = match &self.cq {
            Some(cache) => (
                self.mixture(probs, cache.smoothed_states.iter()),
                cache.entropies.clone(),
                Vec::new(),
                None,
            ),
            None => {
                let outputs = self.outputs(m)?;
                let mut entropies = Vec::with_capacity(outputs.len());
                let mut logs = Vec::with_capacity(outputs.len());
                for s in &outputs {
                    let eig = herm_eig(s)?;
                    entropies.push(entropy_of_spectrum(&eig.eigenvalues));
                    logs.push(log_of(&eig)?);
                }
                (self.mixture(probs, outputs.iter()), entropies, logs, Some(outputs))
            }
        };
        let eig = herm_eig(&sigma)?;
        let mixture_entropy = entropy_of_spectrum(&eig.eigenvalues);
        let mixture_log = log_of(&eig)?;

        let outputs_ref: &[HermitianMatrix] = match (&outputs, &self.cq) {
            (Some(o), _) => o,
            (None, Some(cache)) => &cache.smoothed_states,
            (None, None) => unreachable!(),
        };
        // D(σ_i‖σ) = −H(σ_i) − tr σ_i log σ
        let rel_entropies: Vec<f64> = outputs_ref
            .iter()
            .zip(&per_state_entropies)
            .map(|(s, h)| -h - s.trace_product(&mixture_log))
            .collect();
        let avg: f64 = probs
            .iter()
            .zip(&per_state_entropies)
            .map(|(p, h)| p * h)
            .sum();
        let f = avg - mixture_entropy;
        Ok(Evaluation {
            report: CostReport {
                f,
                chi: -f,
                per_state_entropies,
                mixture_entropy,
                rel_entropies,
            },
            mixture_log,
            output_logs,
        })
    }

    /// Riemannian gradient at `m` from a prior [`evaluate`](Self::evaluate)
    /// of the same point.
    pub fn gradient(
        &self,
        eval: &Evaluation,
        m: &EnsemblePoint,
        geometry: SimplexGeometry,
    ) -> Result<TangentVector> {
        let dp = eval.simplex_gradient(m.probs(), geometry);
        let mut dstates = Vec::with_capacity(m.states().len());
        for (i, psi) in m.states().iter().enumerate() {
            let p = m.probs()[i];
            let diff = eval.mixture_log.sub(&eval.output_logs[i])?;
            let applied = self.channel.adjoint_apply_to(&diff, psi)?;
            let d_i = eval.report.rel_entropies[i];
            let g: StateVector = applied
                .iter()
                .zip(psi)
                .map(|(&a, &z)| (a + z * d_i) * (2.0 * p))
                .collect();
            dstates.push(g);
        }
        Ok(TangentVector { dp, dstates })
    }
}

fn log_of(eig: &crate::numerics::EigenDecomposition) -> Result<HermitianMatrix> {
    if let Some(&l) = eig.eigenvalues.first() {
        if l < -crate::numerics::PSD_TOLERANCE {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: l });
        }
    }
    Ok(eig.map_eigenvalues(|l| math::log2(l.max(DEFAULT_LOG_FLOOR))))
}

/// `Df(m)[v]` along the retraction curve `t ↦ R_m(t v)`, given the Euclidean
/// Riemannian gradient `grad` at `m`.
///
/// `v` need not be tangent: the curve's velocity is `(v_p − p Σ v_p,
/// v_ψ − Re⟨ψ|v_ψ⟩ψ)`.
pub fn directional_derivative(m: &EnsemblePoint, grad: &TangentVector, v: &TangentVector) -> f64 {
    let total: f64 = v.dp.iter().sum();
    let simplex: f64 = grad
        .dp
        .iter()
        .zip(&v.dp)
        .zip(m.probs())
        .map(|((g, x), p)| g * (x - p * total))
        .sum();
    let sphere: f64 = grad
        .dstates
        .iter()
        .zip(&v.dstates)
        .zip(m.states())
        .map(|((g, x), psi)| {
            let radial = crate::numerics::inner_product(psi, x).re;
            g.iter()
                .zip(x)
                .zip(psi)
                .map(|((gi, xi), pi)| (gi.conj() * (xi - pi * radial)).re)
                .sum::<f64>()
        })
        .sum();
    simplex + sphere
}

/// Holevo cost report at `m`.
pub fn cost(channel: &SmoothedChannel, m: &EnsemblePoint) -> Result<CostReport> {
    Ok(HolevoObjective::new(channel)?.evaluate(m)?.into_report())
}

/// Riemannian gradient of the Holevo cost at `m`.
pub fn riemannian_grad(
    channel: &SmoothedChannel,
    m: &EnsemblePoint,
    geometry: SimplexGeometry,
) -> Result<TangentVector> {
    let objective = HolevoObjective::new(channel)?;
    let eval = objective.evaluate(m)?;
    objective.gradient(&eval, m, geometry)
}

/// Simplex gradient for a classical-quantum channel at the distribution `p`.
pub fn cq_grad(channel: &SmoothedChannel, p: &[f64], geometry: SimplexGeometry) -> Result<Vec<f64>> {
    if channel.base().kind() != ChannelKind::Cq {
        return Err(Error::InvalidConfig("cq_grad requires a classical-quantum channel"));
    }
    let m = EnsemblePoint::simplex(p.to_vec())?;
    let objective = HolevoObjective::new(channel)?;
    let eval = objective.evaluate(&m)?;
    Ok(eval.simplex_gradient(m.probs(), geometry))
}

/// Ensemble `{p_i q_j, |ψ_i⟩ ⊗ |φ_j⟩}` for a tensor-product channel.
pub fn product_point(a: &EnsemblePoint, b: &EnsemblePoint) -> Result<EnsemblePoint> {
    let mut probs = Vec::with_capacity(a.len() * b.len());
    let mut states = Vec::with_capacity(a.len() * b.len());
    for (p, psi) in a.probs().iter().zip(a.states()) {
        for (q, phi) in b.probs().iter().zip(b.states()) {
            probs.push(p * q);
            states.push(kron_vec(psi, phi));
        }
    }
    EnsemblePoint::new(probs, states)
}

/// Gradient norm of the Holevo cost of `N ⊗ N'` at the product of two
/// ensembles, measured in `geometry`. For ensembles that are `ε`-critical
/// for their factors in the Fisher geometry the result is at most about
/// `2ε`; the Euclidean simplex norm additionally grows with the square root
/// of the factor ensemble sizes.
///
/// The tensor channel is smoothed with `left.delta()`. Fails with
/// [`Error::DimensionCap`] when `d_in(N)·d_in(N')` exceeds `dim_cap`.
pub fn product_grad_residual(
    left: &SmoothedChannel,
    right: &SmoothedChannel,
    m_left: &EnsemblePoint,
    m_right: &EnsemblePoint,
    geometry: SimplexGeometry,
    dim_cap: usize,
) -> Result<f64> {
    let dim = left.d_in() * right.d_in();
    if dim > dim_cap {
        return Err(Error::DimensionCap { dim, cap: dim_cap });
    }
    let tensor = Channel::tensor(left.base(), right.base())?;
    let smoothed = SmoothedChannel::new(tensor, left.delta())?;
    let m = product_point(m_left, m_right)?;
    let grad = riemannian_grad(&smoothed, &m, geometry)?;
    m.grad_norm_with(&grad, geometry)
}
