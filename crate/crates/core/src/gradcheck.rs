//! Finite-difference validation of the analytic gradient.
//!
//! For a point `m` and unit tangent `v`, the central difference
//! `(f(R_m(tv)) − f(R_m(−tv)))/(2t)` is compared with `⟨grad f, v⟩_m`.

use alloc::vec::Vec;

use crate::channel::{ChannelKind, QuantumMap, SmoothedChannel};
use crate::holevo::HolevoObjective;
use crate::manifold::{random_point, random_simplex_point, EnsemblePoint, SimplexGeometry, TangentVector};
use crate::random::{random_tangent, seeded_rng};
use crate::{math, Result};

/// Step of the central difference.
pub const FD_STEP: f64 = 1e-6;

/// Directional derivatives smaller than this are compared absolutely.
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-3;

/// Pass threshold on the relative error.
pub const PASS_THRESHOLD: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradCheckSample {
    pub trial: usize,
    pub direction: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradCheckReport {
    pub geometry: SimplexGeometry,
    pub samples: Vec<GradCheckSample>,
}

impl GradCheckReport {
    pub fn max_rel_error(&self) -> f64 {
        self.samples.iter().map(|s| s.rel_error).fold(0.0, f64::max)
    }

    /// Largest relative error among the samples of one trial.
    pub fn trial_max(&self, trial: usize) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.trial == trial)
            .map(|s| s.rel_error)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_rel_error() <= PASS_THRESHOLD
    }
}

/// `|numeric − analytic| / max(|analytic|, RELATIVE_ERROR_FLOOR)`.
pub fn relative_error(numeric: f64, analytic: f64) -> f64 {
    math::abs(numeric - analytic) / math::abs(analytic).max(RELATIVE_ERROR_FLOOR)
}

/// Central difference of `f` along the retraction curve `t ↦ R_m(t v)`.
pub fn central_difference(
    objective: &HolevoObjective<'_>,
    m: &EnsemblePoint,
    v: &TangentVector,
    t: f64,
) -> Result<f64> {
    let forward = objective.value(&m.retract(v, t)?)?;
    let backward = objective.value(&m.retract(&v.scaled(-1.0), t)?)?;
    Ok((forward - backward) / (2.0 * t))
}

/// `trials` random points (seeds `seed + trial`) times `directions` random
/// unit tangents each. `ensemble_size` defaults to `d_in²`; it is ignored for
/// classical-quantum channels.
pub fn grad_check(
    channel: &SmoothedChannel,
    geometry: SimplexGeometry,
    trials: usize,
    directions: usize,
    seed: u64,
    ensemble_size: Option<usize>,
) -> Result<GradCheckReport> {
    let objective = HolevoObjective::new(channel)?;
    let d = channel.d_in();
    let mut samples = Vec::with_capacity(trials * directions);
    let mut rng = seeded_rng(seed);
    for trial in 0..trials {
        let point_seed = seed.wrapping_add(trial as u64);
        let m = match channel.base().kind() {
            ChannelKind::Cq => random_simplex_point(d, point_seed)?,
            ChannelKind::Kraus => random_point(d, ensemble_size.unwrap_or(d * d), point_seed)?,
        };
        let eval = objective.evaluate(&m)?;
        let grad = objective.gradient(&eval, &m, geometry)?;
        for direction in 0..directions {
            let v = random_tangent(&mut rng, &m);
            let analytic = m.inner_with(&grad, &v, geometry)?;
            let numeric = central_difference(&objective, &m, &v, FD_STEP)?;
            samples.push(GradCheckSample {
                trial,
                direction,
                analytic,
                numeric,
                rel_error: relative_error(numeric, analytic),
            });
        }
    }
    Ok(GradCheckReport { geometry, samples })
}
