mod common;

use common::{channel_zoo, oracle_cost, oracle_retract};
use holevo_core::channel::{Channel, ChannelKind, QuantumMap, SmoothedChannel};
use holevo_core::holevo::{cost, cq_grad, product_grad_residual, riemannian_grad, DEFAULT_PRODUCT_DIM_CAP};
use holevo_core::manifold::{random_point, random_simplex_point, EnsemblePoint, SimplexGeometry};
use holevo_core::numerics::{inner_product, relative_entropy};
use holevo_core::random::{random_tangent, seeded_rng};
use holevo_core::solver::{rgd, SolverConfig};
use holevo_core::C64;
use proptest::prelude::*;

const DELTA: f64 = 1e-9;

fn point_for(ch: &Channel, seed: u64) -> EnsemblePoint {
    match ch.kind() {
        ChannelKind::Cq => random_simplex_point(ch.d_in(), seed).unwrap(),
        ChannelKind::Kraus => random_point(ch.d_in(), ch.d_in() * ch.d_in(), seed).unwrap(),
    }
}

fn smoothed(ch: &Channel) -> SmoothedChannel {
    SmoothedChannel::new(ch.clone(), DELTA).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cost_matches_oracle(which in 0usize..9, seed in any::<u64>()) {
        let (name, ch) = channel_zoo().swap_remove(which);
        let m = point_for(&ch, seed);
        let report = cost(&smoothed(&ch), &m).unwrap();
        let expected = oracle_cost(&ch, DELTA, m.probs(), m.states());
        prop_assert!((report.f - expected).abs() <= 1e-9, "{name}: {} vs {expected}", report.f);
        prop_assert!(report.chi >= -1e-9 && report.chi <= (ch.d_out() as f64).log2() + 1e-9);
    }

    #[test]
    fn cost_identity_holds(which in 0usize..9, seed in any::<u64>()) {
        let (name, ch) = channel_zoo().swap_remove(which);
        let s = smoothed(&ch);
        let m = point_for(&ch, seed);
        let report = cost(&s, &m).unwrap();
        let outputs: Vec<_> = (0..m.len())
            .map(|i| match ch.kind() {
                ChannelKind::Cq => {
                    let mut e = vec![C64::new(0.0, 0.0); m.len()];
                    e[i] = C64::new(1.0, 0.0);
                    s.apply_pure(&e).unwrap()
                }
                ChannelKind::Kraus => s.apply_pure(&m.states()[i]).unwrap(),
            })
            .collect();
        let mut mixture = outputs[0].scale(0.0);
        for (p, o) in m.probs().iter().zip(&outputs) {
            mixture = mixture.add(&o.scale(*p)).unwrap();
        }
        let mutual: f64 = m
            .probs()
            .iter()
            .zip(&outputs)
            .map(|(p, o)| p * relative_entropy(o, &mixture).unwrap())
            .sum();
        prop_assert!((report.chi - mutual).abs() <= 1e-9, "{name}: {} vs {mutual}", report.chi);
    }

    #[test]
    fn sphere_gradient_is_tangent(which in 0usize..9, seed in any::<u64>()) {
        let (name, ch) = channel_zoo().swap_remove(which);
        let m = point_for(&ch, seed);
        for g in SimplexGeometry::ALL {
            let grad = riemannian_grad(&smoothed(&ch), &m, g).unwrap();
            for (psi, v) in m.states().iter().zip(&grad.dstates) {
                let z = inner_product(psi, v);
                prop_assert!(z.re.abs() <= 1e-9 && z.im.abs() <= 1e-9, "{name}: {z}");
            }
            if g.is_gradient() {
                prop_assert!(grad.dp.iter().sum::<f64>().abs() <= 1e-9);
            }
        }
    }
}

/// Central differences of the oracle cost along the oracle retraction.
fn oracle_directional(ch: &Channel, m: &EnsemblePoint, v: &holevo_core::manifold::TangentVector) -> f64 {
    let t = 1e-6;
    let (pf, sf) = oracle_retract(m.probs(), m.states(), &v.dp, &v.dstates, t);
    let (pb, sb) = oracle_retract(m.probs(), m.states(), &v.dp, &v.dstates, -t);
    (oracle_cost(ch, DELTA, &pf, &sf) - oracle_cost(ch, DELTA, &pb, &sb)) / (2.0 * t)
}

#[test]
fn gradient_matches_oracle_differences() {
    for (name, ch) in channel_zoo() {
        let s = smoothed(&ch);
        for geometry in [SimplexGeometry::Euclidean, SimplexGeometry::Fisher] {
            for trial in 0..3 {
                let m = point_for(&ch, 40 + trial);
                let grad = riemannian_grad(&s, &m, geometry).unwrap();
                let mut rng = seeded_rng(trial);
                for _ in 0..5 {
                    let v = random_tangent(&mut rng, &m);
                    let analytic = m.inner_with(&grad, &v, geometry).unwrap();
                    let numeric = oracle_directional(&ch, &m, &v);
                    let rel = (numeric - analytic).abs() / analytic.abs().max(1e-3);
                    assert!(rel <= 1e-5, "{name} {}: {numeric} vs {analytic}", geometry.name());
                }
            }
        }
    }
}

#[test]
fn cq_gradient_is_the_simplex_part() {
    let ch = common::binary_cq_channel(0.6);
    let s = smoothed(&ch);
    let m = EnsemblePoint::simplex(vec![0.3, 0.7]).unwrap();
    for g in SimplexGeometry::ALL {
        let full = riemannian_grad(&s, &m, g).unwrap();
        assert_eq!(cq_grad(&s, m.probs(), g).unwrap(), full.dp);
    }
    let symmetric = EnsemblePoint::simplex(vec![0.5, 0.5]).unwrap();
    let orthogonal = smoothed(&common::binary_cq_channel(0.0));
    for g in [SimplexGeometry::Euclidean, SimplexGeometry::Fisher] {
        for x in cq_grad(&orthogonal, symmetric.probs(), g).unwrap() {
            assert!(x.abs() <= 1e-12);
        }
    }
    assert!(cq_grad(&smoothed(&Channel::identity(2)), &[0.5, 0.5], SimplexGeometry::Fisher).is_err());
}

fn solved(ch: &Channel, tol: f64, seed: u64) -> (EnsemblePoint, f64) {
    let cfg = SolverConfig {
        grad_tol: tol,
        seed,
        restarts: 1,
        ..SolverConfig::default()
    };
    let r = rgd(ch, &cfg).unwrap();
    (r.best_point, r.grad_norm_final)
}

#[test]
fn product_residual_with_identity_factor() {
    let ch = Channel::depolarizing(2, 1.0 / 3.0).unwrap();
    let (m, eps) = solved(&ch, 1e-6, 0);
    let id = Channel::identity(2);
    let trivial = EnsemblePoint::new(vec![1.0], vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]).unwrap();
    let residual = product_grad_residual(
        &smoothed(&ch),
        &smoothed(&id),
        &m,
        &trivial,
        SimplexGeometry::Fisher,
        DEFAULT_PRODUCT_DIM_CAP,
    )
    .unwrap();
    assert!(residual <= 2.0 * eps + 1e-12 && residual >= eps / 2.0, "{residual:e} vs {eps:e}");
}

#[test]
fn product_residual_tracks_the_tolerance() {
    let ch = Channel::depolarizing(2, 1.0 / 3.0).unwrap();
    let s = smoothed(&ch);
    let residual = |tol: f64, seed: u64| {
        let (a, ea) = solved(&ch, tol, seed);
        let (b, eb) = solved(&ch, tol, seed + 100);
        let r = product_grad_residual(&s, &s, &a, &b, SimplexGeometry::Fisher, DEFAULT_PRODUCT_DIM_CAP).unwrap();
        assert!(r <= 2.0 * ea.max(eb) + 1e-6);
        r
    };
    for seed in 0..3 {
        let coarse = residual(1e-3, seed);
        let fine = residual(1e-5, seed);
        // Two decades of tolerance, checked to within one decade.
        let ratio = coarse / fine;
        assert!((10.0..=1e3).contains(&ratio), "seed {seed}: {coarse:e} / {fine:e}");
    }
}
