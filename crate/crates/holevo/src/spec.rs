//! JSON channel specifications.
//!
//! ```json
//! {"kind": "depolarizing", "d": 2, "lambda": 0.3333333333}
//! {"kind": "kraus", "d_in": 1, "d_out": 1, "kraus": [[[1.0, 0.0]]]}
//! {"kind": "compose", "outer": {...}, "inner": {...}}
//! ```
//!
//! Matrices are flat row-major lists of `[re, im]` pairs; vectors are lists
//! of `[re, im]` pairs. A top-level document may carry a `"solver"` object
//! with [`SolverConfig`] fields.

use holevo_core::channel::Channel;
use holevo_core::numerics::{ComplexMatrix, HermitianMatrix};
use holevo_core::random::{random_cq_states, random_eb_parts};
use holevo_core::solver::SolverConfig;
use holevo_core::C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Default cap on `d_in` of Kraus channels.
pub const DEFAULT_MAX_DIM: usize = 64;
/// Default cap on the alphabet size of cq channels.
pub const DEFAULT_MAX_LETTERS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Kraus {
        d_in: usize,
        d_out: usize,
        kraus: Vec<Vec<C64>>,
    },
    Cq {
        states: Vec<Vec<C64>>,
    },
    Identity {
        d: usize,
    },
    Depolarizing {
        d: usize,
        lambda: f64,
    },
    Pauli {
        p_x: f64,
        p_y: f64,
        p_z: f64,
    },
    QutritWd {
        alpha: f64,
    },
    EntanglementBreaking {
        ws: Vec<Vec<C64>>,
        vs: Vec<Vec<C64>>,
    },
    Compose {
        outer: Box<ChannelSpec>,
        inner: Box<ChannelSpec>,
    },
    Tensor {
        left: Box<ChannelSpec>,
        right: Box<ChannelSpec>,
    },
}

/// Input dimension cap per channel kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionCaps {
    pub max_dim: usize,
    pub max_letters: usize,
}

impl Default for DimensionCaps {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            max_letters: DEFAULT_MAX_LETTERS,
        }
    }
}

/// Kind and dimensions of a channel, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSummary {
    pub kind: String,
    pub constructor: String,
    pub d_in: usize,
    pub d_out: usize,
}

fn square_side(len: usize) -> Option<usize> {
    let side = (len as f64).sqrt().round() as usize;
    (side * side == len).then_some(side)
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Kraus { .. } => "kraus",
            Self::Cq { .. } => "cq",
            Self::Identity { .. } => "identity",
            Self::Depolarizing { .. } => "depolarizing",
            Self::Pauli { .. } => "pauli",
            Self::QutritWd { .. } => "qutrit_wd",
            Self::EntanglementBreaking { .. } => "entanglement_breaking",
            Self::Compose { .. } => "compose",
            Self::Tensor { .. } => "tensor",
        }
    }

    pub fn is_cq(&self) -> bool {
        matches!(self, Self::Cq { .. })
    }

    /// `(d_in, d_out)` computed from the document alone, so oversized
    /// channels are rejected before any matrix is built.
    pub fn dims(&self) -> Result<(usize, usize), CliError> {
        Ok(match self {
            Self::Kraus { d_in, d_out, .. } => (*d_in, *d_out),
            Self::Cq { states } => {
                let first = states.first().ok_or_else(|| input("cq channel needs at least one state"))?;
                let d = square_side(first.len())
                    .ok_or_else(|| input("cq state entry count is not a perfect square"))?;
                (states.len(), d)
            }
            Self::Identity { d } | Self::Depolarizing { d, .. } => (*d, *d),
            Self::Pauli { .. } => (2, 2),
            Self::QutritWd { .. } => (3, 3),
            Self::EntanglementBreaking { ws, .. } => {
                (ws.len(), ws.first().map_or(0, Vec::len))
            }
            Self::Compose { outer, inner } => (inner.dims()?.0, outer.dims()?.1),
            Self::Tensor { left, right } => {
                let (a, b) = left.dims()?;
                let (c, d) = right.dims()?;
                let mul = |x: usize, y: usize| {
                    x.checked_mul(y)
                        .ok_or_else(|| input("tensor product dimension overflows"))
                };
                (mul(a, c)?, mul(b, d)?)
            }
        })
    }

    pub fn check_caps(&self, caps: DimensionCaps) -> Result<(), CliError> {
        let (d_in, _) = self.dims()?;
        let (cap, what) = if self.is_cq() {
            (caps.max_letters, "cq alphabet size")
        } else {
            (caps.max_dim, "input dimension")
        };
        if d_in > cap {
            return Err(input(format!(
                "{what} {d_in} exceeds the cap {cap} (raise it with --max-dim / --max-letters)"
            )));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Channel, CliError> {
        let core = |e: holevo_core::Error| CliError::Input(format!("{} channel: {e}", self.name()));
        match self {
            Self::Kraus { d_in, d_out, kraus } => {
                let ops = kraus
                    .iter()
                    .map(|k| ComplexMatrix::from_vec(*d_out, *d_in, k.clone()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(core)?;
                Channel::from_kraus(ops).map_err(core)
            }
            Self::Cq { states } => {
                let (_, d) = self.dims()?;
                let states = states
                    .iter()
                    .map(|s| {
                        let m = ComplexMatrix::from_vec(d, d, s.clone())?;
                        hermitian_exact(m)
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(core)?;
                Channel::cq(states).map_err(core)
            }
            Self::Identity { d } => {
                if *d == 0 {
                    return Err(input("identity channel needs d ≥ 1"));
                }
                Ok(Channel::identity(*d))
            }
            Self::Depolarizing { d, lambda } => Channel::depolarizing(*d, *lambda).map_err(core),
            Self::Pauli { p_x, p_y, p_z } => Channel::pauli(*p_x, *p_y, *p_z).map_err(core),
            Self::QutritWd { alpha } => Channel::qutrit_wd(*alpha).map_err(core),
            Self::EntanglementBreaking { ws, vs } => {
                Channel::entanglement_breaking(ws, vs).map_err(core)
            }
            Self::Compose { outer, inner } => {
                Channel::compose(&outer.build()?, &inner.build()?).map_err(core)
            }
            Self::Tensor { left, right } => {
                Channel::tensor(&left.build()?, &right.build()?).map_err(core)
            }
        }
    }

    pub fn summary(&self) -> Result<ChannelSummary, CliError> {
        let (d_in, d_out) = self.dims()?;
        Ok(ChannelSummary {
            kind: if self.is_cq() { "cq" } else { "kraus" }.to_string(),
            constructor: self.name().to_string(),
            d_in,
            d_out,
        })
    }

    /// Haar-random entanglement-breaking channel on `C^d`.
    pub fn random_eb(d: usize, seed: u64) -> Self {
        let (ws, vs) = random_eb_parts(d, seed);
        Self::EntanglementBreaking { ws, vs }
    }

    /// cq channel with `letters` Haar-random pure outputs in `C^d_out`.
    pub fn random_cq(letters: usize, d_out: usize, seed: u64) -> Self {
        let states = random_cq_states(letters, d_out, seed)
            .into_iter()
            .map(|s| s.into_matrix().into_vec())
            .collect();
        Self::Cq { states }
    }
}

/// Rejects non-Hermitian input instead of silently symmetrizing it.
fn hermitian_exact(m: ComplexMatrix) -> Result<HermitianMatrix, holevo_core::Error> {
    let deviation = m.sub(&m.adjoint())?.frobenius_norm();
    if deviation > 1e-9 {
        return Err(holevo_core::Error::InvalidState(format!(
            "state is not Hermitian (‖ρ − ρ†‖_F = {deviation:e})"
        )));
    }
    HermitianMatrix::from_matrix(m)
}

/// A parsed spec document.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub channel: ChannelSpec,
    pub solver: Option<SolverConfig>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| input(format!("malformed JSON: {e}")))?;
        Self::from_value(value)
    }

    pub fn from_value(mut value: Value) -> Result<Self, CliError> {
        let solver = match value.as_object_mut() {
            Some(obj) => obj.remove("solver"),
            None => return Err(input("channel spec must be a JSON object")),
        };
        let channel: ChannelSpec = serde_json::from_value(value)
            .map_err(|e| input(format!("invalid channel spec: {e}")))?;
        let solver = solver
            .map(|s| {
                serde_json::from_value::<SolverConfig>(s)
                    .map_err(|e| input(format!("invalid solver overrides: {e}")))
            })
            .transpose()?;
        Ok(Self { channel, solver })
    }
}

/// Replaces every string equal to `$param` in `template` by `value`.
/// Integral values are written as JSON integers so they can fill count
/// fields such as `d`. Errors if the placeholder does not occur.
pub fn substitute(template: &Value, param: &str, value: f64) -> Result<Value, CliError> {
    let placeholder = format!("${param}");
    let number = if value.fract() == 0.0 && value.abs() < 9.0e15 {
        serde_json::Number::from(value as i64)
    } else {
        serde_json::Number::from_f64(value)
            .ok_or_else(|| input(format!("grid value {value} is not finite")))?
    };
    let mut count = 0;
    let out = replace(template, &placeholder, &Value::Number(number), &mut count);
    if count == 0 {
        return Err(input(format!(
            "template does not contain the placeholder \"{placeholder}\""
        )));
    }
    Ok(out)
}

fn replace(v: &Value, placeholder: &str, with: &Value, count: &mut usize) -> Value {
    match v {
        Value::String(s) if s == placeholder => {
            *count += 1;
            with.clone()
        }
        Value::Array(items) => Value::Array(
            items
                .iter()
                .map(|x| replace(x, placeholder, with, count))
                .collect(),
        ),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, x)| (k.clone(), replace(x, placeholder, with, count)))
                .collect(),
        ),
        other => other.clone(),
    }
}
