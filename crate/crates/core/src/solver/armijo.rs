use crate::holevo::HolevoObjective;
use crate::manifold::{EnsemblePoint, TangentVector};
use crate::{Error, Result};

/// Backtracking line-search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ArmijoConfig {
    pub initial_step: f64,
    pub contraction: f64,
    pub sufficient_decrease: f64,
    pub max_backtracks: usize,
}

impl Default for ArmijoConfig {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            contraction: 0.5,
            sufficient_decrease: 1e-4,
            max_backtracks: 50,
        }
    }
}

impl ArmijoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidConfig("armijo initial_step must be positive"));
        }
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return Err(Error::InvalidConfig("armijo contraction must lie in (0, 1)"));
        }
        if !(self.sufficient_decrease > 0.0 && self.sufficient_decrease < 1.0) {
            return Err(Error::InvalidConfig(
                "armijo sufficient_decrease must lie in (0, 1)",
            ));
        }
        Ok(())
    }
}

/// An accepted line-search step.
#[derive(Debug, Clone)]
pub struct ArmijoStep {
    pub step: f64,
    pub point: EnsemblePoint,
    pub f: f64,
}

/// Largest `step = initial_step · contractionᵏ`, `k ≤ max_backtracks`, with
/// `f(R_m(step · direction)) ≤ f_m + sufficient_decrease · step · slope`.
///
/// `slope` is the directional derivative of `f` along `direction` and must
/// be negative. Exhausting the backtracks yields
/// [`Error::BacktrackExhausted`].
pub fn armijo_step(
    objective: &HolevoObjective<'_>,
    m: &EnsemblePoint,
    direction: &TangentVector,
    f_m: f64,
    slope: f64,
    cfg: &ArmijoConfig,
) -> Result<ArmijoStep> {
    if !(slope < 0.0) {
        return Err(Error::NotDescentDirection { slope });
    }
    let mut step = cfg.initial_step;
    for _ in 0..=cfg.max_backtracks {
        let point = m.retract(direction, step)?;
        let f = objective.value(&point)?;
        if f <= f_m + cfg.sufficient_decrease * step * slope {
            return Ok(ArmijoStep { step, point, f });
        }
        step *= cfg.contraction;
    }
    Err(Error::BacktrackExhausted {
        backtracks: cfg.max_backtracks,
    })
}
