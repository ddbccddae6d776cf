//! Geometry of `M = Δ₊^{n−1} × (S^{d−1})^n`: ensemble points, tangent
//! vectors, the product metric, tangent projections and the retraction.
//!
//! A point of a classical-quantum problem carries only the simplex factor
//! (`dim() == 0`, no states).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::numerics::{inner_product, vector_norm};
use crate::random::{haar_state, seeded_rng, uniform_simplex};
use crate::{Error, Result, StateVector, C64};

/// Probabilities are clipped below at this value when a random point is
/// drawn.
pub const INIT_PROBABILITY_FLOOR: f64 = 1e-6;

/// Accepted deviation of `Σ p_i` and `‖ψ_i‖` from 1 when constructing a point.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// Metric (and hence gradient) used on the simplex factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SimplexGeometry {
    /// Euclidean metric `Σ ṗ_i q̇_i`; the gradient is the mean-subtracted
    /// vector of partial derivatives.
    Euclidean,
    /// The closed-form simplex vector `q_j = 1 − D_j + p_j(Σ_k p_k D_k − 1)`
    /// used verbatim. It is not a Riemannian gradient for any metric and need
    /// not sum to zero.
    PaperQ,
    /// Fisher–Rao metric `Σ ṗ_i q̇_i / p_i`.
    Fisher,
}

impl SimplexGeometry {
    pub const ALL: [SimplexGeometry; 3] = [Self::Euclidean, Self::PaperQ, Self::Fisher];

    pub fn name(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::PaperQ => "paper_q",
            Self::Fisher => "fisher",
        }
    }

    /// Whether the geometry yields a true Riemannian gradient (so that
    /// `Df(m)[v] = ⟨grad f, v⟩_m`).
    pub fn is_gradient(self) -> bool {
        !matches!(self, Self::PaperQ)
    }
}

impl core::str::FromStr for SimplexGeometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Self::Euclidean),
            "paper_q" => Ok(Self::PaperQ),
            "fisher" => Ok(Self::Fisher),
            _ => Err(Error::InvalidConfig(
                "simplex geometry must be one of euclidean, paper_q, fisher",
            )),
        }
    }
}

/// A point `m = (p, ψ₀, …, ψ_{n−1})` of the product manifold.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawPoint", into = "RawPoint"))]
pub struct EnsemblePoint {
    probs: Vec<f64>,
    states: Vec<StateVector>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    probabilities: Vec<f64>,
    #[serde(default)]
    states: Vec<StateVector>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawPoint> for EnsemblePoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        if raw.states.is_empty() {
            EnsemblePoint::simplex(raw.probabilities)
        } else {
            EnsemblePoint::new(raw.probabilities, raw.states)
        }
    }
}

#[cfg(feature = "serde")]
impl From<EnsemblePoint> for RawPoint {
    fn from(p: EnsemblePoint) -> Self {
        RawPoint {
            probabilities: p.probs,
            states: p.states,
        }
    }
}

fn normalize_probs(probs: &mut [f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "ensemble size",
            expected: 1,
            found: 0,
        });
    }
    if let Some(&bad) = probs.iter().find(|&&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::InvalidState(format!(
            "ensemble probability {bad} is not strictly positive"
        )));
    }
    let total: f64 = probs.iter().sum();
    if math::abs(total - 1.0) > POINT_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "ensemble probabilities sum to {total}"
        )));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(())
}

impl EnsemblePoint {
    /// Validates and renormalizes an ensemble of `n` probabilities and `n`
    /// unit vectors of a common dimension `d ≥ 1`.
    pub fn new(mut probs: Vec<f64>, mut states: Vec<StateVector>) -> Result<Self> {
        normalize_probs(&mut probs)?;
        if states.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                context: "ensemble states",
                expected: probs.len(),
                found: states.len(),
            });
        }
        let d = states[0].len();
        if d == 0 {
            return Err(Error::DimensionMismatch {
                context: "state dimension",
                expected: 1,
                found: 0,
            });
        }
        for psi in &mut states {
            if psi.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "state dimension",
                    expected: d,
                    found: psi.len(),
                });
            }
            let norm = vector_norm(psi);
            if math::abs(norm - 1.0) > POINT_TOLERANCE {
                return Err(Error::InvalidState(format!("state has norm {norm}")));
            }
            psi.iter_mut().for_each(|z| *z /= norm);
        }
        Ok(Self { probs, states })
    }

    /// Simplex-only point for classical-quantum problems.
    pub fn simplex(mut probs: Vec<f64>) -> Result<Self> {
        normalize_probs(&mut probs)?;
        Ok(Self {
            probs,
            states: Vec::new(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// Number of ensemble members `n`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// State dimension `d`, or 0 for simplex-only points.
    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn is_simplex_only(&self) -> bool {
        self.states.is_empty()
    }

    fn check_tangent_shape(&self, v: &TangentVector) -> Result<()> {
        if v.dp.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "tangent simplex component",
                expected: self.len(),
                found: v.dp.len(),
            });
        }
        if v.dstates.len() != self.states.len() {
            return Err(Error::DimensionMismatch {
                context: "tangent sphere components",
                expected: self.states.len(),
                found: v.dstates.len(),
            });
        }
        for s in &v.dstates {
            if s.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    context: "tangent sphere dimension",
                    expected: self.dim(),
                    found: s.len(),
                });
            }
        }
        Ok(())
    }

    /// Euclidean product metric `Σ (ṗ_i q̇_i + Re⟨ψ̇_i|φ̇_i⟩)`.
    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        self.inner_with(u, v, SimplexGeometry::Euclidean)
    }

    /// Product metric with the simplex factor measured in `geometry`
    /// (`PaperQ` uses the Euclidean metric).
    pub fn inner_with(
        &self,
        u: &TangentVector,
        v: &TangentVector,
        geometry: SimplexGeometry,
    ) -> Result<f64> {
        self.check_tangent_shape(u)?;
        self.check_tangent_shape(v)?;
        Ok(self.metric(u, v, geometry))
    }

    pub(crate) fn metric(&self, u: &TangentVector, v: &TangentVector, geometry: SimplexGeometry) -> f64 {
        let simplex: f64 = match geometry {
            SimplexGeometry::Fisher => u
                .dp
                .iter()
                .zip(&v.dp)
                .zip(&self.probs)
                .map(|((a, b), p)| a * b / p)
                .sum(),
            _ => u.dp.iter().zip(&v.dp).map(|(a, b)| a * b).sum(),
        };
        let sphere: f64 = u
            .dstates
            .iter()
            .zip(&v.dstates)
            .map(|(a, b)| inner_product(a, b).re)
            .sum();
        simplex + sphere
    }

    /// `√⟨v, v⟩_m` in the Euclidean product metric.
    pub fn grad_norm(&self, v: &TangentVector) -> Result<f64> {
        self.grad_norm_with(v, SimplexGeometry::Euclidean)
    }

    pub fn grad_norm_with(&self, v: &TangentVector, geometry: SimplexGeometry) -> Result<f64> {
        Ok(math::sqrt(self.inner_with(v, v, geometry)?.max(0.0)))
    }

    /// Orthogonal projection of ambient arrays onto the tangent space:
    /// subtract the mean from `dp`, apply `I − |ψ_i⟩⟨ψ_i|` to each
    /// `dstates[i]`.
    pub fn proj_tangent(&self, dp: &[f64], dstates: &[StateVector]) -> Result<TangentVector> {
        let ambient = TangentVector {
            dp: dp.to_vec(),
            dstates: dstates.to_vec(),
        };
        self.check_tangent_shape(&ambient)?;
        let mean = dp.iter().sum::<f64>() / dp.len() as f64;
        let dp = dp.iter().map(|x| x - mean).collect();
        let dstates = self
            .states
            .iter()
            .zip(dstates)
            .map(|(psi, v)| project_sphere(psi, v))
            .collect();
        Ok(TangentVector { dp, dstates })
    }

    /// `R_m(step · v)`.
    ///
    /// Simplex: `p̂_i = p_i + ṗ_i + ṗ_i²/(2p_i)` then normalize, with
    /// `ṗ = step · v.dp`; since `p̂_i = (p_i + ṗ_i)²/(2p_i) + p_i/2 ≥ p_i/2`
    /// the result stays in the open simplex. Sphere: `(ψ + ψ̇)/‖ψ + ψ̇‖`.
    pub fn retract(&self, v: &TangentVector, step: f64) -> Result<EnsemblePoint> {
        self.check_tangent_shape(v)?;
        if step == 0.0 {
            return Ok(self.clone());
        }
        let mut probs: Vec<f64> = self
            .probs
            .iter()
            .zip(&v.dp)
            .map(|(&p, &dp)| {
                let s = step * dp;
                p + s + s * s / (2.0 * p)
            })
            .collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let states = self
            .states
            .iter()
            .zip(&v.dstates)
            .map(|(psi, dpsi)| {
                let moved: StateVector = psi.iter().zip(dpsi).map(|(&a, &b)| a + b * step).collect();
                let norm = vector_norm(&moved);
                moved.into_iter().map(|z| z / norm).collect()
            })
            .collect();
        Ok(EnsemblePoint { probs, states })
    }
}

/// `(I − |ψ⟩⟨ψ|)|v⟩`.
pub fn project_sphere(psi: &[C64], v: &[C64]) -> StateVector {
    let c = inner_product(psi, v);
    v.iter().zip(psi).map(|(&x, &p)| x - p * c).collect()
}

/// Random point: Haar-random states, a uniform simplex draw clipped below at
/// [`INIT_PROBABILITY_FLOOR`] and renormalized. Deterministic in `seed`.
pub fn random_point(d: usize, n: usize, seed: u64) -> Result<EnsemblePoint> {
    if d == 0 || n == 0 {
        return Err(Error::DimensionMismatch {
            context: "random point shape",
            expected: 1,
            found: 0,
        });
    }
    let mut rng = seeded_rng(seed);
    let probs = clipped_simplex(uniform_simplex(&mut rng, n));
    let states = (0..n).map(|_| haar_state(&mut rng, d)).collect();
    Ok(EnsemblePoint { probs, states })
}

/// Random simplex-only point (classical-quantum problems).
pub fn random_simplex_point(n: usize, seed: u64) -> Result<EnsemblePoint> {
    if n == 0 {
        return Err(Error::DimensionMismatch {
            context: "random point shape",
            expected: 1,
            found: 0,
        });
    }
    let mut rng = seeded_rng(seed);
    Ok(EnsemblePoint {
        probs: clipped_simplex(uniform_simplex(&mut rng, n)),
        states: Vec::new(),
    })
}

fn clipped_simplex(mut probs: Vec<f64>) -> Vec<f64> {
    probs
        .iter_mut()
        .for_each(|p| *p = p.max(INIT_PROBABILITY_FLOOR));
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    probs
}

/// Tangent vector `(ṗ, ψ̇₀, …)`; also used for unconstrained ambient
/// directions before projection.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangentVector {
    pub dp: Vec<f64>,
    pub dstates: Vec<StateVector>,
}

impl TangentVector {
    pub fn zeros_at(m: &EnsemblePoint) -> Self {
        Self {
            dp: vec![0.0; m.len()],
            dstates: vec![vec![C64::new(0.0, 0.0); m.dim()]; m.states.len()],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dp: self.dp.iter().map(|x| x * s).collect(),
            dstates: self
                .dstates
                .iter()
                .map(|v| v.iter().map(|z| z * s).collect())
                .collect(),
        }
    }

    /// Largest `|Σ ṗ_i|` and `|⟨ψ_i|ψ̇_i⟩|` violation of the tangent
    /// conditions at `m`.
    pub fn tangency_error(&self, m: &EnsemblePoint) -> f64 {
        let simplex = math::abs(self.dp.iter().sum::<f64>());
        m.states()
            .iter()
            .zip(&self.dstates)
            .map(|(psi, v)| math::cabs(inner_product(psi, v)))
            .fold(simplex, f64::max)
    }
}
