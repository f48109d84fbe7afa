//! Distribution-monad properties: the LP decision against second-order
//! stochastic dominance, the weak-pullback lift, and dilations.

mod common;

use common::{mean, random_line_dist, random_spread, translate};
use num_traits::{Signed, Zero};
use pevkit::engine::{check_total_evaluation_law, compose_witnesses, decide, expr, Witness};
use pevkit::instances::{
    barycenter, dist_average, point_dist2_value, point_dist_value, ConvexAlgebra,
};
use pevkit::stochastics::{
    compose_kernels, decide_pev, dilation_from_witness, lift_decomposition, on_line, sosd_1d,
    wasserstein1_1d, witness_from_dilation, Dilation,
};
use pevkit::{rat, Distribution, Limits, Nested, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(p: &Distribution<Point>) -> bool {
    let twelve = num_bigint::BigInt::from(12);
    p.len() <= 5
        && p.support()
            .iter()
            .all(|(x, w)| *w.denom() <= twelve && x.coords().iter().all(|c| *c.denom() <= twelve))
}

/// Pairs with equal means half the time, a quarter of them related by a
/// random spread in one direction or the other.
fn random_pair(rng: &mut ChaCha8Rng) -> (Distribution<Point>, Distribution<Point>) {
    loop {
        let q = random_line_dist(rng, 5, 12);
        let (p, q) = match rng.gen_range(0..4) {
            0 => (random_line_dist(rng, 5, 12), q),
            1 => {
                let p = random_line_dist(rng, 5, 12);
                let shift = Point(vec![&mean(&p).coords()[0] - &mean(&q).coords()[0]]);
                (p, translate(&q, &shift))
            }
            mode => {
                let spread = dist_average(&q.map(|a| random_spread(rng, a)));
                if mode == 2 {
                    (spread, q)
                } else {
                    (q, spread)
                }
            }
        };
        if small(&p) && small(&q) {
            return (p, q);
        }
    }
}

#[test]
fn lp_decision_agrees_with_dominance() {
    let alg = ConvexAlgebra::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut yes, mut no_equal_means) = (0, 0);
    for i in 0..500 {
        let (p, q) = random_pair(&mut rng);
        let lp = decide_pev(&p, &q, &alg, &Limits::default()).unwrap();
        let dominance = sosd_1d(&on_line(&p).unwrap(), &on_line(&q).unwrap());
        assert_eq!(lp.is_some(), dominance, "pair {i}: {p} vs {q}");
        match lp {
            Some(xi) => {
                yes += 1;
                assert_eq!(dist_average(&xi), p);
                assert_eq!(xi.map(|s| barycenter(&alg, s).unwrap()), q);
            }
            None if mean(&p) == mean(&q) => no_equal_means += 1,
            None => {}
        }
    }
    assert!(yes > 100 && no_equal_means > 50, "{yes} / {no_equal_means}");
}

#[test]
fn decisions_obey_the_total_evaluation_law() {
    let alg = ConvexAlgebra::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (p, q) = random_pair(&mut rng);
        let pe = expr(point_dist_value(&p)).unwrap();
        let qe = expr(point_dist_value(&q)).unwrap();
        if let Some(w) = decide(&alg, &pe, &qe, &Limits::default()).unwrap() {
            assert_eq!(w.source, pe);
            assert_eq!(w.target, qe);
            assert!(check_total_evaluation_law(&alg, &w).unwrap());
        }
        if mean(&p) != mean(&q) {
            assert!(decide_pev(&p, &q, &alg, &Limits::default())
                .unwrap()
                .is_none());
        }
    }
}

#[test]
fn decision_is_reflexive_and_mean_sensitive() {
    let alg = ConvexAlgebra::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let p = random_line_dist(&mut rng, 5, 12);
        assert!(decide_pev(&p, &p, &alg, &Limits::default())
            .unwrap()
            .is_some());
        let v = Point(vec![rat(rng.gen_range(1..=5), rng.gen_range(1..=3))]);
        assert!(decide_pev(&p, &translate(&p, &v), &alg, &Limits::default())
            .unwrap()
            .is_none());
    }
}

#[test]
fn wasserstein_is_a_symmetric_nonnegative_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let p = on_line(&random_line_dist(&mut rng, 5, 12)).unwrap();
        let q = on_line(&random_line_dist(&mut rng, 5, 12)).unwrap();
        let r = on_line(&random_line_dist(&mut rng, 5, 12)).unwrap();
        let d = wasserstein1_1d(&p, &q);
        assert!(!d.is_negative());
        assert_eq!(d, wasserstein1_1d(&q, &p));
        assert_eq!(d.is_zero(), p == q);
        assert!(wasserstein1_1d(&p, &r) <= &d + wasserstein1_1d(&q, &r));
    }
}

#[test]
fn translating_by_a_moves_wasserstein_by_a() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let p = random_line_dist(&mut rng, 5, 12);
        let a = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let moved = translate(&p, &Point(vec![a.clone()]));
        assert_eq!(
            wasserstein1_1d(&on_line(&p).unwrap(), &on_line(&moved).unwrap()),
            a.abs()
        );
    }
}

/// A random decomposition of `target`: each point's mass is shared among
/// a few blocks by random integer shares.
fn random_decomposition(
    rng: &mut ChaCha8Rng,
    target: &Distribution<i64>,
) -> Distribution<Distribution<i64>> {
    let blocks = rng.gen_range(1..=3);
    let mut mass = vec![Vec::new(); blocks];
    for (y, w) in target.support() {
        let mut shares: Vec<i64> = (0..blocks).map(|_| rng.gen_range(0..=3)).collect();
        if shares.iter().all(|&s| s == 0) {
            shares[0] = 1;
        }
        let total: i64 = shares.iter().sum();
        for (b, s) in shares.into_iter().enumerate() {
            if s > 0 {
                mass[b].push((*y, w * rat(s, total)));
            }
        }
    }
    let outer = mass.into_iter().filter(|m| !m.is_empty()).map(|m| {
        let total: num_rational::BigRational = m.iter().map(|(_, w)| w.clone()).sum();
        (Distribution::normalized(m).unwrap(), total)
    });
    Distribution::from_weights(outer).unwrap()
}

#[test]
fn lift_satisfies_both_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let modulus = rng.gen_range(1..=3);
        let f = move |x: &i64| x.rem_euclid(modulus);
        let n = rng.gen_range(1..=5);
        let p = Distribution::normalized(
            (0..n).map(|_| (rng.gen_range(0..6i64), rat(rng.gen_range(1..=4), 1))),
        )
        .unwrap();
        let alpha = random_decomposition(&mut rng, &p.map(f));
        let beta = lift_decomposition(&p, &alpha, f).unwrap();
        assert_eq!(dist_average(&beta), p);
        assert_eq!(beta.map(|s| s.map(f)), alpha);
    }
}

/// A random two-level distribution over the line.
fn random_two_level(rng: &mut ChaCha8Rng) -> Distribution<Distribution<Point>> {
    let n = rng.gen_range(1..=4);
    Distribution::normalized(
        (0..n).map(|_| (random_line_dist(rng, 3, 6), rat(rng.gen_range(1..=4), 1))),
    )
    .unwrap()
}

#[test]
fn dilation_round_trip_keeps_boundaries() {
    let alg = ConvexAlgebra::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let r = random_two_level(&mut rng);
        let p = r.map(|s| barycenter(&alg, s).unwrap());
        let k = dilation_from_witness(&r, &p, &alg).unwrap();
        for (a, spread) in k.entries() {
            assert_eq!(&barycenter(&alg, spread).unwrap(), a);
        }
        let back = witness_from_dilation(&k).unwrap();
        assert_eq!(back.map(|s| barycenter(&alg, s).unwrap()), p);
        assert_eq!(dist_average(&back), dist_average(&r));
    }
}

fn random_dilation(rng: &mut ChaCha8Rng, base: &Distribution<Point>) -> Dilation {
    let kernel = base
        .points()
        .map(|a| (a.clone(), random_spread(rng, a)))
        .collect();
    Dilation::new(base.clone(), kernel).unwrap()
}

#[test]
fn composed_kernels_realize_decided_relations() {
    let alg = ConvexAlgebra::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let coarse = random_line_dist(&mut rng, 3, 6);
        let k2 = random_dilation(&mut rng, &coarse);
        let middle = dist_average(&witness_from_dilation(&k2).unwrap());
        let k1 = random_dilation(&mut rng, &middle);
        let fine = dist_average(&witness_from_dilation(&k1).unwrap());

        let both = compose_kernels(&k2, &k1).unwrap();
        for (a, spread) in both.entries() {
            assert_eq!(&barycenter(&alg, spread).unwrap(), a);
        }
        let r = witness_from_dilation(&both).unwrap();
        assert_eq!(dist_average(&r), fine);
        assert!(decide_pev(&fine, &coarse, &alg, &Limits::default())
            .unwrap()
            .is_some());

        // the same composite through witnesses
        let w = |d: &Dilation| {
            Witness::from_nesting(
                &alg,
                Nested::new(2, point_dist2_value(&witness_from_dilation(d).unwrap())).unwrap(),
            )
            .unwrap()
        };
        let rho = compose_witnesses(&alg, &w(&k1), &w(&k2)).unwrap();
        assert_eq!(rho.source.value(), &point_dist_value(&fine));
        assert_eq!(rho.target.value(), &point_dist_value(&coarse));
        assert!(check_total_evaluation_law(&alg, &rho).unwrap());
    }
}

#[test]
fn plane_decisions_respect_means() {
    let alg = ConvexAlgebra::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let q = Distribution::normalized((0..rng.gen_range(1..=3)).map(|_| {
            (
                Point::from_ints(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)]),
                rat(rng.gen_range(1..=3), 1),
            )
        }))
        .unwrap();
        let p = dist_average(&q.map(|a| random_spread(&mut rng, a)));
        assert!(decide_pev(&p, &q, &alg, &Limits::default())
            .unwrap()
            .is_some());
        if p != q {
            assert!(decide_pev(&q, &p, &alg, &Limits::default())
                .unwrap()
                .is_none());
        }
    }
}
