//! Quantum channels in Kraus form or as classical-quantum state tables, the
//! δ-smoothed mixture with the fully depolarizing channel, and the standard
//! constructors used in experiments.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::numerics::{herm_eigenvalues, inner_product, ComplexMatrix, HermitianMatrix};
use crate::{Error, Result, StateVector, C64};

/// Tolerance on `‖Σ K†K − I‖_F`.
pub const TP_TOLERANCE: f64 = 1e-9;

/// Tolerance on trace and positivity of cq output states.
pub const DENSITY_TOLERANCE: f64 = 1e-9;

/// Tolerance on the norm of pure input states.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Default smoothing weight of the fully depolarizing component.
pub const DEFAULT_DELTA: f64 = 1e-9;

/// Linear maps from `d_in × d_in` to `d_out × d_out` Hermitian matrices.
pub trait QuantumMap {
    fn d_in(&self) -> usize;

    fn d_out(&self) -> usize;

    /// `N(ρ)`.
    fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix>;

    /// `N(|ψ⟩⟨ψ|)` for a unit vector, without forming the projector.
    fn apply_pure(&self, psi: &[C64]) -> Result<HermitianMatrix>;

    /// Heisenberg-picture adjoint `N†(H)`.
    fn adjoint_apply(&self, h: &HermitianMatrix) -> Result<HermitianMatrix>;

    /// `N†(H)|ψ⟩` without forming `N†(H)`.
    fn adjoint_apply_to(&self, h: &HermitianMatrix, psi: &[C64]) -> Result<StateVector>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ChannelKind {
    Kraus,
    Cq,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Kraus(Vec<ComplexMatrix>),
    Cq(Vec<HermitianMatrix>),
}

/// Completely positive trace-preserving map.
///
/// A cq channel `x ↦ ρ_x` acts on diagonal inputs: off-diagonal entries of
/// the input are discarded, so it is the measure-and-prepare channel
/// `ρ ↦ Σ_x ⟨x|ρ|x⟩ ρ_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    repr: Repr,
}

fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        });
    }
    Ok(())
}

fn check_unit(psi: &[C64]) -> Result<()> {
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if math::abs(norm2 - 1.0) > UNIT_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "input vector has squared norm {norm2}, expected 1"
        )));
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![real(0.0), real(1.0), real(1.0), real(0.0)]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        vec![real(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), real(0.0)],
    )
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

impl Channel {
    /// Channel from Kraus operators `K_k` (each `d_out × d_in`), validated
    /// against `Σ K_k† K_k = I`.
    pub fn from_kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::DimensionMismatch {
            context: "Kraus operator count",
            expected: 1,
            found: 0,
        })?;
        let (d_out, d_in) = (first.rows(), first.cols());
        for k in &ops {
            check_dim("Kraus operator rows", d_out, k.rows())?;
            check_dim("Kraus operator columns", d_in, k.cols())?;
        }
        let channel = Self {
            d_in,
            d_out,
            repr: Repr::Kraus(ops),
        };
        let deviation = channel.tp_deviation();
        if !(deviation <= TP_TOLERANCE) {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(channel)
    }

    /// Classical-quantum channel `x ↦ states[x]`.
    pub fn cq(states: Vec<HermitianMatrix>) -> Result<Self> {
        let d_out = states
            .first()
            .ok_or(Error::DimensionMismatch {
                context: "cq alphabet size",
                expected: 1,
                found: 0,
            })?
            .dim();
        for (x, rho) in states.iter().enumerate() {
            check_dim("cq output state", d_out, rho.dim())?;
            let t = rho.trace();
            if math::abs(t - 1.0) > DENSITY_TOLERANCE {
                return Err(Error::InvalidState(format!("cq output {x} has trace {t}")));
            }
            let min = herm_eigenvalues(rho)?.first().copied().unwrap_or(0.0);
            if min < -DENSITY_TOLERANCE {
                return Err(Error::InvalidState(format!(
                    "cq output {x} has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self {
            d_in: states.len(),
            d_out,
            repr: Repr::Cq(states),
        })
    }

    /// Noiseless channel on `C^d`.
    pub fn identity(d: usize) -> Self {
        Self {
            d_in: d,
            d_out: d,
            repr: Repr::Kraus(vec![ComplexMatrix::identity(d)]),
        }
    }

    /// `ρ ↦ (1−λ)ρ + λ tr(ρ) I/d`, realized by `√(1−λ) I` and the `d²`
    /// operators `√(λ/d) |i⟩⟨j|`.
    pub fn depolarizing(d: usize, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must lie in [0, 1]",
            });
        }
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                value: 0.0,
                reason: "dimension must be positive",
            });
        }
        let mut ops = Vec::with_capacity(d * d + 1);
        if lambda < 1.0 {
            ops.push(ComplexMatrix::identity(d).scale(real(math::sqrt(1.0 - lambda))));
        }
        if lambda > 0.0 {
            let w = real(math::sqrt(lambda / d as f64));
            for i in 0..d {
                for j in 0..d {
                    let mut k = ComplexMatrix::zeros(d, d);
                    k[(i, j)] = w;
                    ops.push(k);
                }
            }
        }
        Self::from_kraus(ops)
    }

    /// Qubit Pauli channel
    /// `ρ ↦ (1−q)ρ + p_X XρX + p_Y YρY + p_Z ZρZ`, `q = p_X + p_Y + p_Z`.
    pub fn pauli(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        for (name, p) in [("p_x", p_x), ("p_y", p_y), ("p_z", p_z)] {
            if !(p >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: p,
                    reason: "probability must be non-negative",
                });
            }
        }
        let q = p_x + p_y + p_z;
        if q > 1.0 {
            return Err(Error::InvalidParameter {
                name: "p_x + p_y + p_z",
                value: q,
                reason: "total flip probability exceeds 1",
            });
        }
        let weighted = |m: ComplexMatrix, w: f64| m.scale(real(math::sqrt(w)));
        Self::from_kraus(vec![
            weighted(ComplexMatrix::identity(2), 1.0 - q),
            weighted(pauli_x(), p_x),
            weighted(pauli_y(), p_y),
            weighted(pauli_z(), p_z),
        ])
    }

    /// Entanglement-breaking channel with rank-one Kraus operators
    /// `|w_i⟩⟨v_i|` for an orthonormal basis `{v_i}` of the input space.
    pub fn entanglement_breaking(ws: &[StateVector], vs: &[StateVector]) -> Result<Self> {
        let d = vs.len();
        check_dim("entanglement-breaking output count", d, ws.len())?;
        if d == 0 {
            return Err(Error::DimensionMismatch {
                context: "entanglement-breaking basis size",
                expected: 1,
                found: 0,
            });
        }
        for v in vs {
            check_dim("entanglement-breaking basis vector", d, v.len())?;
        }
        let d_out = ws[0].len();
        for w in ws {
            check_dim("entanglement-breaking output vector", d_out, w.len())?;
            check_unit(w)?;
        }
        let mut deviation2: f64 = 0.0;
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                deviation2 += (inner_product(a, b) - real(expected)).norm_sqr();
            }
        }
        let deviation = math::sqrt(deviation2);
        if deviation > TP_TOLERANCE {
            return Err(Error::NotOrthonormal { deviation });
        }
        let ops = ws
            .iter()
            .zip(vs)
            .map(|(w, v)| ComplexMatrix::outer(w, v))
            .collect();
        Self::from_kraus(ops)
    }

    /// Qutrit channel with Kraus operators
    /// `E = sin α |0⟩⟨1| + |1⟩⟨2|` and `D = cos α |2⟩⟨1| + |1⟩⟨0|`,
    /// `0 < α ≤ π/4`. Its Holevo capacity is 1.
    pub fn qutrit_wd(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= core::f64::consts::FRAC_PI_4) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in (0, π/4]",
            });
        }
        let mut e = ComplexMatrix::zeros(3, 3);
        e[(0, 1)] = real(math::sin(alpha));
        e[(1, 2)] = real(1.0);
        let mut d = ComplexMatrix::zeros(3, 3);
        d[(2, 1)] = real(math::cos(alpha));
        d[(1, 0)] = real(1.0);
        Self::from_kraus(vec![e, d])
    }

    /// `outer ∘ inner`: Kraus set `{B_j A_i}`.
    pub fn compose(outer: &Channel, inner: &Channel) -> Result<Self> {
        let (a_ops, b_ops) = match (&inner.repr, &outer.repr) {
            (Repr::Kraus(a), Repr::Kraus(b)) => (a, b),
            _ => return Err(Error::UnsupportedForCq { operation: "compose" }),
        };
        check_dim("composition", inner.d_out, outer.d_in)?;
        let mut ops = Vec::with_capacity(a_ops.len() * b_ops.len());
        for b in b_ops {
            for a in a_ops {
                ops.push(b.matmul(a)?);
            }
        }
        Self::from_kraus(ops)
    }

    /// `left ⊗ right`: Kraus set `{K_i ⊗ K'_j}`.
    pub fn tensor(left: &Channel, right: &Channel) -> Result<Self> {
        let (l_ops, r_ops) = match (&left.repr, &right.repr) {
            (Repr::Kraus(l), Repr::Kraus(r)) => (l, r),
            _ => return Err(Error::UnsupportedForCq { operation: "tensor" }),
        };
        let mut ops = Vec::with_capacity(l_ops.len() * r_ops.len());
        for l in l_ops {
            for r in r_ops {
                ops.push(l.kron(r));
            }
        }
        Self::from_kraus(ops)
    }

    pub fn kind(&self) -> ChannelKind {
        match self.repr {
            Repr::Kraus(_) => ChannelKind::Kraus,
            Repr::Cq(_) => ChannelKind::Cq,
        }
    }

    pub fn kraus_ops(&self) -> Option<&[ComplexMatrix]> {
        match &self.repr {
            Repr::Kraus(ops) => Some(ops),
            Repr::Cq(_) => None,
        }
    }

    pub fn cq_states(&self) -> Option<&[HermitianMatrix]> {
        match &self.repr {
            Repr::Cq(states) => Some(states),
            Repr::Kraus(_) => None,
        }
    }

    /// `‖Σ K†K − I‖_F` for Kraus channels; the largest `|tr ρ_x − 1|` for cq.
    pub fn tp_deviation(&self) -> f64 {
        match &self.repr {
            Repr::Kraus(ops) => {
                let mut acc = ComplexMatrix::zeros(self.d_in, self.d_in);
                for k in ops {
                    let kk = k.adjoint().matmul(k).expect("consistent Kraus dims");
                    acc = acc.add(&kk).expect("consistent Kraus dims");
                }
                acc.sub(&ComplexMatrix::identity(self.d_in))
                    .expect("square")
                    .frobenius_norm()
            }
            Repr::Cq(states) => states
                .iter()
                .map(|s| math::abs(s.trace() - 1.0))
                .fold(0.0, f64::max),
        }
    }
}

impl QuantumMap for Channel {
    fn d_in(&self) -> usize {
        self.d_in
    }

    fn d_out(&self) -> usize {
        self.d_out
    }

    fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_dim("channel input", self.d_in, rho.dim())?;
        match &self.repr {
            Repr::Kraus(ops) => {
                let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
                let r = rho.as_matrix();
                for k in ops {
                    let krk = k.matmul(r)?.matmul(&k.adjoint())?;
                    out = out.add(&krk)?;
                }
                HermitianMatrix::from_matrix(out)
            }
            Repr::Cq(states) => {
                let mut out = HermitianMatrix::zeros(self.d_out);
                for (x, s) in states.iter().enumerate() {
                    out.add_scaled_assign(rho[(x, x)].re, s);
                }
                Ok(out)
            }
        }
    }

    fn apply_pure(&self, psi: &[C64]) -> Result<HermitianMatrix> {
        check_dim("channel input vector", self.d_in, psi.len())?;
        check_unit(psi)?;
        let mut out = HermitianMatrix::zeros(self.d_out);
        match &self.repr {
            Repr::Kraus(ops) => {
                for k in ops {
                    out.add_outer_assign(1.0, &k.mul_vec(psi)?);
                }
            }
            Repr::Cq(states) => {
                for (s, z) in states.iter().zip(psi) {
                    out.add_scaled_assign(z.norm_sqr(), s);
                }
            }
        }
        Ok(out)
    }

    fn adjoint_apply(&self, h: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_dim("channel adjoint input", self.d_out, h.dim())?;
        match &self.repr {
            Repr::Kraus(ops) => {
                let mut out = ComplexMatrix::zeros(self.d_in, self.d_in);
                for k in ops {
                    let khk = k.adjoint().matmul(h.as_matrix())?.matmul(k)?;
                    out = out.add(&khk)?;
                }
                HermitianMatrix::from_matrix(out)
            }
            Repr::Cq(states) => {
                let diag: Vec<f64> = states.iter().map(|s| s.trace_product(h)).collect();
                Ok(HermitianMatrix::from_real_diagonal(&diag))
            }
        }
    }

    fn adjoint_apply_to(&self, h: &HermitianMatrix, psi: &[C64]) -> Result<StateVector> {
        check_dim("channel adjoint input", self.d_out, h.dim())?;
        check_dim("channel input vector", self.d_in, psi.len())?;
        let mut out = vec![C64::new(0.0, 0.0); self.d_in];
        match &self.repr {
            Repr::Kraus(ops) => {
                for k in ops {
                    let back = k.adjoint_mul_vec(&h.mul_vec(&k.mul_vec(psi)?)?)?;
                    for (o, b) in out.iter_mut().zip(back) {
                        *o += b;
                    }
                }
            }
            Repr::Cq(states) => {
                for ((o, s), &z) in out.iter_mut().zip(states).zip(psi) {
                    *o = z * s.trace_product(h);
                }
            }
        }
        Ok(out)
    }
}

/// `N' = (1−δ) N + δ D`, with `D(ρ) = tr(ρ) I/d_out` the fully depolarizing
/// channel. The mixture is applied analytically; no Kraus operators are
/// added.
///
/// `δ = 0` is accepted and yields the unsmoothed channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedChannel {
    base: Channel,
    delta: f64,
}

impl SmoothedChannel {
    pub fn new(base: Channel, delta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "smoothing weight must lie in [0, 1)",
            });
        }
        Ok(Self { base, delta })
    }

    pub fn with_default_delta(base: Channel) -> Self {
        Self {
            base,
            delta: DEFAULT_DELTA,
        }
    }

    pub fn base(&self) -> &Channel {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn smooth(&self, mut out: HermitianMatrix, trace: f64) -> HermitianMatrix {
        if self.delta > 0.0 {
            out = out.scale(1.0 - self.delta);
            out.add_identity_assign(self.delta * trace / self.base.d_out as f64);
        }
        out
    }
}

impl QuantumMap for SmoothedChannel {
    fn d_in(&self) -> usize {
        self.base.d_in
    }

    fn d_out(&self) -> usize {
        self.base.d_out
    }

    fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        let out = self.base.apply(rho)?;
        Ok(self.smooth(out, rho.trace()))
    }

    fn apply_pure(&self, psi: &[C64]) -> Result<HermitianMatrix> {
        let out = self.base.apply_pure(psi)?;
        Ok(self.smooth(out, 1.0))
    }

    fn adjoint_apply(&self, h: &HermitianMatrix) -> Result<HermitianMatrix> {
        let mut out = self.base.adjoint_apply(h)?;
        if self.delta > 0.0 {
            out = out.scale(1.0 - self.delta);
            out.add_identity_assign(self.delta * h.trace() / self.base.d_out as f64);
        }
        Ok(out)
    }

    fn adjoint_apply_to(&self, h: &HermitianMatrix, psi: &[C64]) -> Result<StateVector> {
        let mut out = self.base.adjoint_apply_to(h, psi)?;
        if self.delta > 0.0 {
            let w = self.delta * h.trace() / self.base.d_out as f64;
            for (o, &z) in out.iter_mut().zip(psi) {
                *o = *o * (1.0 - self.delta) + z * w;
            }
        }
        Ok(out)
    }
}
