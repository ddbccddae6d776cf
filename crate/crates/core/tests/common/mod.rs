//! Reference implementations that share no numerical code with the crate:
//! a cyclic Jacobi eigensolver on the real embedding of a Hermitian matrix,
//! dense channel actions, and closed-form capacities.
#![allow(dead_code)]

use holevo_core::channel::Channel;
use holevo_core::random::{random_cq_channel, random_eb_channel};
use holevo_core::{StateVector, C64};

/// Row-major dense square matrix.
#[derive(Debug, Clone)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<C64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    pub fn add_outer(&mut self, u: &[C64], w: f64) {
        for i in 0..self.n {
            for j in 0..self.n {
                self.a[i * self.n + j] += u[i] * u[j].conj() * w;
            }
        }
    }

    pub fn mix_with_identity(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for z in &mut out.a {
            *z *= 1.0 - delta;
        }
        for i in 0..self.n {
            out.a[i * self.n + i] += delta / self.n as f64;
        }
        out
    }

    pub fn trace_product(&self, other: &Dense) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.at(i, j) * other.at(j, i);
            }
        }
        acc.re
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi on the
/// `2n × 2n` real symmetric embedding `[[Re, −Im], [Im, Re]]`.
pub fn jacobi_eigenvalues(h: &Dense) -> Vec<f64> {
    let n = h.n;
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h.at(i, j);
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut doubled: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

pub fn entropy_bits(rho: &Dense) -> f64 {
    jacobi_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > 1e-15)
        .map(|l| -l * l.log2())
        .sum()
}

/// `N(|ψ⟩⟨ψ|)` from the channel's Kraus operators.
pub fn kraus_output(channel: &Channel, psi: &[C64]) -> Dense {
    let ops = channel.kraus_ops().expect("Kraus channel");
    let d_out = ops[0].rows();
    let mut out = Dense::zeros(d_out);
    for k in ops {
        let v: Vec<C64> = (0..d_out)
            .map(|r| (0..psi.len()).map(|c| k[(r, c)] * psi[c]).sum())
            .collect();
        out.add_outer(&v, 1.0);
    }
    out
}

pub fn cq_output(channel: &Channel, x: usize) -> Dense {
    let s = &channel.cq_states().expect("cq channel")[x];
    let n = s.dim();
    let mut out = Dense::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.a[i * n + j] = s[(i, j)];
        }
    }
    out
}

/// `Σ p_i H(σ_i) − H(Σ p_i σ_i)` with smoothed outputs. `states` is ignored
/// for classical-quantum channels.
pub fn oracle_cost(channel: &Channel, delta: f64, probs: &[f64], states: &[StateVector]) -> f64 {
    let outputs: Vec<Dense> = (0..probs.len())
        .map(|i| {
            let raw = match channel.cq_states() {
                Some(_) => cq_output(channel, i),
                None => kraus_output(channel, &states[i]),
            };
            raw.mix_with_identity(delta)
        })
        .collect();
    let n = outputs[0].n;
    let mut mixture = Dense::zeros(n);
    let mut weighted = 0.0;
    for (p, s) in probs.iter().zip(&outputs) {
        for (m, z) in mixture.a.iter_mut().zip(&s.a) {
            *m += z * p;
        }
        weighted += p * entropy_bits(s);
    }
    weighted - entropy_bits(&mixture)
}

/// The retraction written out directly: `p + ṗ + ṗ²/(2p)` then normalize,
/// `(ψ + ψ̇)/‖ψ + ψ̇‖`.
pub fn oracle_retract(
    probs: &[f64],
    states: &[StateVector],
    dp: &[f64],
    dstates: &[StateVector],
    t: f64,
) -> (Vec<f64>, Vec<StateVector>) {
    let raw: Vec<f64> = probs
        .iter()
        .zip(dp)
        .map(|(&p, &v)| p + t * v + (t * v) * (t * v) / (2.0 * p))
        .collect();
    let total: f64 = raw.iter().sum();
    let probs = raw.iter().map(|x| x / total).collect();
    let states = states
        .iter()
        .zip(dstates)
        .map(|(psi, v)| {
            let moved: Vec<C64> = psi.iter().zip(v).map(|(a, b)| a + b * t).collect();
            let norm = moved.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            moved.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    (probs, states)
}

/// Holevo capacity of the `d`-dimensional depolarizing channel
/// `ρ ↦ (1−λ)ρ + λ I/d`, in bits.
pub fn depolarizing_chi(d: usize, lambda: f64) -> f64 {
    let df = d as f64;
    let top = 1.0 - lambda + lambda / df;
    let rest = lambda / df;
    let xlogx = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    df.log2() + xlogx(top) + (df - 1.0) * xlogx(rest)
}

/// Capacity of the binary channel with pure outputs of overlap `|⟨a|b⟩| = c`,
/// by grid search over the input distribution at resolution `1e-6` using the
/// closed-form eigenvalues `(1 ± √(1 − 4p(1−p)(1−c²)))/2` of the mixture.
pub fn binary_cq_oracle(c: f64) -> f64 {
    let h = |p: f64| {
        let r = (1.0 - 4.0 * p * (1.0 - p) * (1.0 - c * c)).max(0.0).sqrt();
        let xlogx = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        xlogx((1.0 + r) / 2.0) + xlogx((1.0 - r) / 2.0)
    };
    (0..=1_000_000).map(|k| h(k as f64 * 1e-6)).fold(f64::NEG_INFINITY, f64::max)
}

/// Two pure qubit states with overlap `c`: `|0⟩` and `c|0⟩ + √(1−c²)|1⟩`.
pub fn binary_cq_channel(c: f64) -> Channel {
    use holevo_core::numerics::HermitianMatrix;
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let b = [C64::new(c, 0.0), C64::new((1.0 - c * c).sqrt(), 0.0)];
    Channel::cq(vec![HermitianMatrix::projector(&a), HermitianMatrix::projector(&b)]).unwrap()
}

/// Amplitude damping, built from raw Kraus operators.
pub fn amplitude_damping(gamma: f64) -> Channel {
    use holevo_core::numerics::ComplexMatrix;
    let r = |x: f64| C64::new(x, 0.0);
    let k0 = ComplexMatrix::from_vec(2, 2, vec![r(1.0), r(0.0), r(0.0), r((1.0 - gamma).sqrt())]).unwrap();
    let k1 = ComplexMatrix::from_vec(2, 2, vec![r(0.0), r(gamma.sqrt()), r(0.0), r(0.0)]).unwrap();
    Channel::from_kraus(vec![k0, k1]).unwrap()
}

/// One instance of every channel constructor.
pub fn channel_zoo() -> Vec<(&'static str, Channel)> {
    vec![
        ("kraus", amplitude_damping(0.3)),
        ("identity", Channel::identity(2)),
        ("depolarizing", Channel::depolarizing(3, 0.4).unwrap()),
        ("pauli", Channel::pauli(1.0 / 7.0, 0.1, 0.25).unwrap()),
        ("qutrit_wd", Channel::qutrit_wd(0.5).unwrap()),
        ("entanglement_breaking", random_eb_channel(3, 11).unwrap()),
        ("cq", random_cq_channel(4, 3, 12).unwrap()),
        (
            "compose",
            Channel::compose(&Channel::depolarizing(3, 0.2).unwrap(), &Channel::qutrit_wd(0.5).unwrap())
                .unwrap(),
        ),
        (
            "tensor",
            Channel::tensor(&Channel::depolarizing(2, 1.0 / 3.0).unwrap(), &amplitude_damping(0.2)).unwrap(),
        ),
    ]
}

/// Monotone descent and termination for one observed run.
pub fn check_run(
    record: &holevo_core::solver::RestartRecord,
    trace: &[holevo_core::solver::TraceEntry],
    max_iters: usize,
) -> Result<(), String> {
    if let Some(e) = &record.error {
        return Err(format!("run failed: {e}"));
    }
    if record.termination_reason.is_none() {
        return Err("no termination reason recorded".into());
    }
    if record.iterations > max_iters {
        return Err(format!("{} iterations > {max_iters}", record.iterations));
    }
    if trace.len() != record.iterations + 1 {
        return Err(format!("trace has {} rows for {} iterations", trace.len(), record.iterations));
    }
    for (k, w) in trace.windows(2).enumerate() {
        if w[1].f > w[0].f + 1e-12 {
            return Err(format!("f increased at iteration {}: {} -> {}", k + 1, w[0].f, w[1].f));
        }
        if w[1].iteration != w[0].iteration + 1 {
            return Err("trace iterations are not consecutive".into());
        }
    }
    Ok(())
}
