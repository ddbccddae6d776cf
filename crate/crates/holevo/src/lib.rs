//! File formats and command implementations behind the `holevo` binary.
//!
//! Channels are read from JSON (see [`spec`]), solved with
//! [`holevo_core::solver`], and reported as JSON ([`output::RunReport`]) or
//! CSV.

pub mod grid;
pub mod output;
pub mod spec;

use std::cell::Cell;
use std::time::Instant;

use holevo_core::channel::SmoothedChannel;
use holevo_core::gradcheck::{grad_check, GradCheckReport};
use holevo_core::manifold::SimplexGeometry;
use holevo_core::solver::{rgd, SolverConfig, Sweep};
use serde_json::Value;

use output::{platform, version, RunReport, SweepRow};
use spec::{substitute, DimensionCaps, SpecFile};

/// Failure classes, mapped to process exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// The solver produced no result (exit 3).
    #[error("solver aborted: {0}")]
    Solver(String),
    /// A check ran and did not pass (exit 1).
    #[error("check failed: {0}")]
    CheckFailed(String),
    /// Output could not be written (exit 1).
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Solver(_) => 3,
            Self::CheckFailed(_) | Self::Output(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Output(e.to_string())
    }
}

/// Solver settings given on the command line; each overrides the spec
/// file's `"solver"` object, which overrides the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverFlags {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub delta: Option<f64>,
    pub ensemble_size: Option<usize>,
    pub simplex_geometry: Option<SimplexGeometry>,
    pub max_iters: Option<usize>,
}

impl SolverFlags {
    pub fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = self.tol {
            cfg.grad_tol = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if self.ensemble_size.is_some() {
            cfg.ensemble_size = self.ensemble_size;
        }
        if let Some(v) = self.simplex_geometry {
            cfg.simplex_geometry = v;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        cfg
    }

    fn config(&self, file: Option<&SolverConfig>) -> Result<SolverConfig, CliError> {
        let cfg = self.apply(file.cloned().unwrap_or_default());
        cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(cfg)
    }
}

fn solver_error(e: holevo_core::Error) -> CliError {
    match e {
        holevo_core::Error::AllRestartsFailed { .. } => CliError::Solver(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

pub fn read_spec(path: &std::path::Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    SpecFile::parse(&text)
}

/// `solve`: best-of-restarts χ lower bound with a full report.
pub fn solve(spec: &SpecFile, flags: &SolverFlags, caps: DimensionCaps) -> Result<RunReport, CliError> {
    let config = flags.config(spec.solver.as_ref())?;
    spec.channel.check_caps(caps)?;
    let channel = spec.channel.build()?;
    let start = Instant::now();
    let result = rgd(&channel, &config).map_err(solver_error)?;
    Ok(RunReport {
        channel: spec.channel.summary()?,
        config,
        result,
        wall_seconds: start.elapsed().as_secs_f64(),
        version: version(),
        platform: platform(),
    })
}

/// `sweep`: solves `template` with `$param` replaced by each grid value in
/// order, calling `on_row` as rows complete. Returns whether any row failed.
pub fn sweep(
    template: &Value,
    param: &str,
    grid: &[f64],
    flags: &SolverFlags,
    caps: DimensionCaps,
    mut on_row: impl FnMut(SweepRow) -> Result<(), CliError>,
) -> Result<bool, CliError> {
    let mut probe = substitute(template, param, 0.0)?;
    let file_solver = match probe.as_object_mut() {
        Some(obj) => obj
            .remove("solver")
            .map(serde_json::from_value::<SolverConfig>)
            .transpose()
            .map_err(|e| CliError::Input(format!("invalid solver overrides: {e}")))?,
        None => return Err(CliError::Input("template must be a JSON object".into())),
    };
    let config = flags.config(file_solver.as_ref())?;

    // Channel build errors are reported as-is rather than wrapped.
    let build_error = Cell::new(None);
    let family = |x: f64| -> holevo_core::Result<holevo_core::channel::Channel> {
        let build = || -> Result<_, CliError> {
            let spec = SpecFile::from_value(substitute(template, param, x)?)?;
            spec.channel.check_caps(caps)?;
            spec.channel.build()
        };
        build().map_err(|e| {
            let msg = e.to_string();
            build_error.set(Some(msg.clone()));
            holevo_core::Error::InvalidState(msg)
        })
    };
    let mut points = Sweep::new(family, grid.to_vec(), config);
    let mut failed = false;
    loop {
        let start = Instant::now();
        let Some(point) = points.next() else { break };
        let seconds = start.elapsed().as_secs_f64();
        let outcome = point
            .outcome
            .map_err(|e| build_error.take().unwrap_or_else(|| e.to_string()));
        failed |= outcome.is_err();
        on_row(SweepRow::from_result(point.parameter, &outcome, seconds))?;
    }
    Ok(failed)
}

/// `gradcheck`: finite-difference validation for each requested geometry.
pub fn gradcheck(
    spec: &SpecFile,
    flags: &SolverFlags,
    geometries: &[SimplexGeometry],
    trials: usize,
    directions: usize,
    caps: DimensionCaps,
) -> Result<Vec<GradCheckReport>, CliError> {
    let config = flags.config(spec.solver.as_ref())?;
    spec.channel.check_caps(caps)?;
    let channel = SmoothedChannel::new(spec.channel.build()?, config.delta)
        .map_err(|e| CliError::Input(e.to_string()))?;
    geometries
        .iter()
        .map(|&g| {
            grad_check(&channel, g, trials, directions, config.seed, config.ensemble_size)
                .map_err(|e| CliError::Solver(e.to_string()))
        })
        .collect()
}

/// Whether every gradient geometry passed (`paper_q` is informational).
pub fn gradcheck_passed(reports: &[GradCheckReport]) -> bool {
    reports
        .iter()
        .filter(|r| r.geometry.is_gradient())
        .all(GradCheckReport::passed)
}
