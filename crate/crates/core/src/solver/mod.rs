//! Riemannian gradient descent with Armijo backtracking and random restarts.

mod armijo;
mod sweep;

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::channel::{Channel, ChannelKind, QuantumMap, SmoothedChannel, DEFAULT_DELTA};
use crate::holevo::{directional_derivative, HolevoObjective};
use crate::manifold::{random_point, random_simplex_point, EnsemblePoint, SimplexGeometry, TangentVector};
use crate::{math, Error, Result};

pub use armijo::{armijo_step, ArmijoConfig, ArmijoStep};
pub use sweep::{sweep, Observer, Sweep, SweepPoint};

/// Number of iterations over which the relative decrease of `f` is measured
/// for stall detection.
pub const STALL_WINDOW: usize = 100;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the gradient norm (in the simplex geometry's metric) is at
    /// most this.
    pub grad_tol: f64,
    pub armijo: ArmijoConfig,
    pub restarts: usize,
    /// Restart `r` starts from the random point seeded with `seed + r`.
    pub seed: u64,
    pub delta: f64,
    /// Number of ensemble members; `None` means `d_in²`. Must be `None` or
    /// `|X|` for classical-quantum channels.
    pub ensemble_size: Option<usize>,
    /// Defaults to Fisher: its gradient norm vanishes at optima where some
    /// `p_i → 0`, which the Euclidean one does not.
    pub simplex_geometry: SimplexGeometry,
    /// Stop when `f` decreased by at most `stall_tol · |f|` over
    /// [`STALL_WINDOW`] iterations.
    pub stall_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            grad_tol: 1e-6,
            armijo: ArmijoConfig::default(),
            restarts: 5,
            seed: 0,
            delta: DEFAULT_DELTA,
            ensemble_size: None,
            simplex_geometry: SimplexGeometry::Fisher,
            stall_tol: 1e-12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.armijo.validate()?;
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::InvalidConfig("delta must lie in [0, 1)"));
        }
        if self.ensemble_size == Some(0) {
            return Err(Error::InvalidConfig("ensemble_size must be at least 1"));
        }
        if !(self.stall_tol >= 0.0) {
            return Err(Error::InvalidConfig("stall_tol must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TerminationReason {
    GradTol,
    MaxIters,
    Stall,
    BacktrackExhausted,
}

impl TerminationReason {
    pub fn name(self) -> &'static str {
        match self {
            Self::GradTol => "grad_tol",
            Self::MaxIters => "max_iters",
            Self::Stall => "stall",
            Self::BacktrackExhausted => "backtrack_exhausted",
        }
    }
}

/// One row of a convergence trace. `step` is the accepted step that led to
/// this iterate (0 for the starting point).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    pub iteration: usize,
    pub f: f64,
    pub grad_norm: f64,
    pub step: f64,
}

/// Outcome of one restart. `seed` is `None` for a warm start.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RestartRecord {
    pub seed: Option<u64>,
    pub chi: Option<f64>,
    pub grad_norm: Option<f64>,
    pub iterations: usize,
    pub termination_reason: Option<TerminationReason>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveResult {
    /// Largest `−f` over all successful restarts.
    pub chi_lower_bound: f64,
    pub best_point: EnsemblePoint,
    pub grad_norm_final: f64,
    pub iterations: usize,
    pub termination_reason: TerminationReason,
    /// Trace of the best restart.
    pub trace: Vec<TraceEntry>,
    pub best_restart: usize,
    pub restart_results: Vec<RestartRecord>,
}

impl SolveResult {
    pub fn f_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|t| t.f).collect()
    }
}

/// A single descent run.
#[derive(Debug, Clone)]
pub struct Run {
    pub point: EnsemblePoint,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub termination_reason: TerminationReason,
    pub trace: Vec<TraceEntry>,
}

/// Runs gradient descent from `start` until one of the stopping rules fires.
pub fn descend(
    objective: &HolevoObjective<'_>,
    start: EnsemblePoint,
    cfg: &SolverConfig,
) -> Result<Run> {
    let geometry = cfg.simplex_geometry;
    let mut m = start;
    let mut eval = objective.evaluate(&m)?;
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut step = 0.0;
    let mut iteration = 0;
    loop {
        let f = eval.f();
        let grad = objective.gradient(&eval, &m, geometry)?;
        let grad_norm = m.grad_norm_with(&grad, geometry)?;
        trace.push(TraceEntry {
            iteration,
            f,
            grad_norm,
            step,
        });

        let reason = if grad_norm <= cfg.grad_tol {
            Some(TerminationReason::GradTol)
        } else if iteration >= cfg.max_iters {
            Some(TerminationReason::MaxIters)
        } else if iteration >= STALL_WINDOW && {
            let old = trace[iteration - STALL_WINDOW].f;
            old - f <= cfg.stall_tol * math::abs(old)
        } {
            Some(TerminationReason::Stall)
        } else {
            None
        };
        if let Some(termination_reason) = reason {
            return Ok(Run {
                point: m,
                f,
                grad_norm,
                iterations: iteration,
                termination_reason,
                trace,
            });
        }

        let direction = grad.scaled(-1.0);
        let slope = if geometry.is_gradient() {
            -grad_norm * grad_norm
        } else {
            let exact = TangentVector {
                dp: eval.simplex_gradient(m.probs(), SimplexGeometry::Euclidean),
                dstates: grad.dstates,
            };
            directional_derivative(&m, &exact, &direction)
        };
        let accepted = match armijo_step(objective, &m, &direction, f, slope, &cfg.armijo) {
            Ok(s) => s,
            Err(Error::BacktrackExhausted { .. } | Error::NotDescentDirection { .. }) => {
                return Ok(Run {
                    point: m,
                    f,
                    grad_norm,
                    iterations: iteration,
                    termination_reason: TerminationReason::BacktrackExhausted,
                    trace,
                });
            }
            Err(e) => return Err(e),
        };
        m = accepted.point;
        step = accepted.step;
        eval = objective.evaluate(&m)?;
        iteration += 1;
    }
}

fn ensemble_size(channel: &SmoothedChannel, cfg: &SolverConfig) -> Result<usize> {
    let d_in = channel.d_in();
    match channel.base().kind() {
        ChannelKind::Cq => match cfg.ensemble_size {
            None => Ok(d_in),
            Some(n) if n == d_in => Ok(n),
            Some(_) => Err(Error::InvalidConfig(
                "ensemble_size must equal the alphabet size for a classical-quantum channel",
            )),
        },
        ChannelKind::Kraus => Ok(cfg.ensemble_size.unwrap_or(d_in * d_in)),
    }
}

/// Random starting point for restart seed `seed`.
pub fn initial_point(channel: &SmoothedChannel, cfg: &SolverConfig, seed: u64) -> Result<EnsemblePoint> {
    let n = ensemble_size(channel, cfg)?;
    match channel.base().kind() {
        ChannelKind::Cq => random_simplex_point(n, seed),
        ChannelKind::Kraus => random_point(channel.d_in(), n, seed),
    }
}

/// Solves `max χ` for `channel` with `cfg.restarts` random restarts.
pub fn rgd(channel: &Channel, cfg: &SolverConfig) -> Result<SolveResult> {
    rgd_warm(channel, cfg, None)
}

/// As [`rgd`], with an additional run started from `warm`.
pub fn rgd_warm(
    channel: &Channel,
    cfg: &SolverConfig,
    warm: Option<&EnsemblePoint>,
) -> Result<SolveResult> {
    rgd_observed(channel, cfg, warm, &mut |_, _| {})
}

/// As [`rgd_warm`], calling `observer` with the record and full trace of
/// every run (the trace is empty for a failed run).
pub fn rgd_observed(
    channel: &Channel,
    cfg: &SolverConfig,
    warm: Option<&EnsemblePoint>,
    observer: &mut dyn FnMut(&RestartRecord, &[TraceEntry]),
) -> Result<SolveResult> {
    cfg.validate()?;
    let smoothed = SmoothedChannel::new(channel.clone(), cfg.delta)?;
    let objective = HolevoObjective::new(&smoothed)?;
    ensemble_size(&smoothed, cfg)?;

    let mut starts: Vec<(Option<u64>, Result<EnsemblePoint>)> = Vec::new();
    if let Some(w) = warm {
        starts.push((None, Ok(w.clone())));
    }
    for r in 0..cfg.restarts {
        let seed = cfg.seed.wrapping_add(r as u64);
        starts.push((Some(seed), initial_point(&smoothed, cfg, seed)));
    }

    let mut best: Option<(usize, Run)> = None;
    let mut records = Vec::with_capacity(starts.len());
    let mut first_error = None;
    for (index, (seed, start)) in starts.into_iter().enumerate() {
        match start.and_then(|m| descend(&objective, m, cfg)) {
            Ok(run) => {
                let record = RestartRecord {
                    seed,
                    chi: Some(-run.f),
                    grad_norm: Some(run.grad_norm),
                    iterations: run.iterations,
                    termination_reason: Some(run.termination_reason),
                    error: None,
                };
                observer(&record, &run.trace);
                records.push(record);
                if best.as_ref().is_none_or(|(_, b)| run.f < b.f) {
                    best = Some((index, run));
                }
            }
            Err(e) => {
                let record = RestartRecord {
                    seed,
                    chi: None,
                    grad_norm: None,
                    iterations: 0,
                    termination_reason: None,
                    error: Some(e.to_string()),
                };
                observer(&record, &[]);
                records.push(record);
                first_error.get_or_insert(e);
            }
        }
    }
    match best {
        Some((best_restart, run)) => Ok(SolveResult {
            chi_lower_bound: -run.f,
            best_point: run.point,
            grad_norm_final: run.grad_norm,
            iterations: run.iterations,
            termination_reason: run.termination_reason,
            trace: run.trace,
            best_restart,
            restart_results: records,
        }),
        None => Err(Error::AllRestartsFailed {
            restarts: records.len(),
            first: Box::new(first_error.expect("at least one restart")),
        }),
    }
}
