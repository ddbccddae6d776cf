use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{rgd_observed, RestartRecord, SolveResult, SolverConfig, TraceEntry};
use crate::channel::Channel;
use crate::manifold::EnsemblePoint;
use crate::Result;

/// Callback receiving the grid value, record and trace of every run.
pub type Observer<'a> = Box<dyn FnMut(f64, &RestartRecord, &[TraceEntry]) + 'a>;

/// Result at one grid value.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub parameter: f64,
    pub outcome: Result<SolveResult>,
}

/// Solves a one-parameter channel family over a grid, in grid order.
///
/// Each grid value runs the configured random restarts plus one run
/// warm-started from the best point of the previous successful grid value.
/// A failing grid value is reported and the sweep continues.
pub struct Sweep<'a, F> {
    family: F,
    grid: Vec<f64>,
    next: usize,
    cfg: SolverConfig,
    warm: Option<EnsemblePoint>,
    observer: Option<Observer<'a>>,
}

impl<'a, F> Sweep<'a, F>
where
    F: FnMut(f64) -> Result<Channel>,
{
    pub fn new(family: F, grid: Vec<f64>, cfg: SolverConfig) -> Self {
        Self {
            family,
            grid,
            next: 0,
            cfg,
            warm: None,
            observer: None,
        }
    }

    pub fn with_observer(mut self, observer: impl FnMut(f64, &RestartRecord, &[TraceEntry]) + 'a) -> Self {
        self.observer = Some(Box::new(observer));
        self
    }
}

impl<F> Iterator for Sweep<'_, F>
where
    F: FnMut(f64) -> Result<Channel>,
{
    type Item = SweepPoint;

    fn next(&mut self) -> Option<SweepPoint> {
        let parameter = *self.grid.get(self.next)?;
        self.next += 1;
        let observer = &mut self.observer;
        let mut forward = |record: &RestartRecord, trace: &[TraceEntry]| {
            if let Some(o) = observer.as_mut() {
                o(parameter, record, trace);
            }
        };
        let outcome = (self.family)(parameter).and_then(|channel| {
            rgd_observed(&channel, &self.cfg, self.warm.as_ref(), &mut forward)
        });
        if let Ok(result) = &outcome {
            self.warm = Some(result.best_point.clone());
        }
        Some(SweepPoint { parameter, outcome })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.grid.len() - self.next;
        (left, Some(left))
    }
}

/// Collects a whole sweep.
pub fn sweep<F>(family: F, grid: &[f64], cfg: &SolverConfig) -> Vec<SweepPoint>
where
    F: FnMut(f64) -> Result<Channel>,
{
    Sweep::new(family, grid.to_vec(), cfg.clone()).collect()
}
