//! Run reports (JSON) and CSV tables.

use std::io::Write;

use holevo_core::gradcheck::GradCheckReport;
use holevo_core::manifold::SimplexGeometry;
use holevo_core::solver::{SolveResult, SolverConfig, TraceEntry};
use serde::{Deserialize, Serialize};

use crate::spec::ChannelSummary;

pub const TRACE_HEADER: [&str; 4] = ["iteration", "f", "grad_norm", "step"];
pub const SWEEP_HEADER: [&str; 5] = ["parameter", "chi", "grad_norm", "seconds", "status"];
pub const GRADCHECK_HEADER: [&str; 4] = ["geometry", "trial", "max_rel_error", "status"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub channel: ChannelSummary,
    pub config: SolverConfig,
    pub result: SolveResult,
    pub wall_seconds: f64,
    pub version: String,
    pub platform: String,
}

pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

pub fn platform() -> String {
    format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS)
}

/// Capacities are printed with 8 decimals (round-off below that prints as
/// zero, not `-0.00000000`).
pub fn format_chi(chi: f64) -> String {
    let chi = if chi.abs() < 5e-9 { 0.0 } else { chi };
    format!("{chi:.8}")
}

pub fn write_trace<W: Write>(out: W, trace: &[TraceEntry]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for t in trace {
        w.write_record([
            t.iteration.to_string(),
            format!("{:e}", t.f),
            format!("{:e}", t.grad_norm),
            format!("{:e}", t.step),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One sweep row; `outcome` is `(chi, grad_norm)` or an error message.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub parameter: f64,
    pub outcome: Result<(f64, f64), String>,
    pub seconds: f64,
}

impl SweepRow {
    pub fn from_result(parameter: f64, result: &Result<SolveResult, String>, seconds: f64) -> Self {
        Self {
            parameter,
            outcome: result
                .as_ref()
                .map(|r| (r.chi_lower_bound, r.grad_norm_final))
                .map_err(Clone::clone),
            seconds,
        }
    }
}

/// Streaming CSV writer for sweep rows.
pub struct SweepWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> SweepWriter<W> {
    pub fn new(out: W) -> csv::Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(SWEEP_HEADER)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, row: &SweepRow) -> csv::Result<()> {
        let (chi, grad, status) = match &row.outcome {
            Ok((chi, g)) => (format_chi(*chi), format!("{g:.3e}"), "ok".to_string()),
            Err(e) => (String::new(), String::new(), format!("error: {e}")),
        };
        self.inner.write_record([
            row.parameter.to_string(),
            chi,
            grad,
            format!("{:.3}", row.seconds),
            status,
        ])?;
        self.inner.flush()?;
        Ok(())
    }
}

/// Rows `geometry,trial,max_rel_error,status`; `paper_q` rows are marked
/// `info` since that vector is not a gradient.
pub fn write_gradcheck<W: Write>(out: W, reports: &[GradCheckReport], trials: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRADCHECK_HEADER)?;
    for report in reports {
        for trial in 0..trials {
            let err = report.trial_max(trial);
            let status = if report.geometry == SimplexGeometry::PaperQ {
                "info"
            } else if err <= holevo_core::gradcheck::PASS_THRESHOLD {
                "pass"
            } else {
                "fail"
            };
            w.write_record([
                report.geometry.name().to_string(),
                trial.to_string(),
                format!("{err:.3e}"),
                status.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
