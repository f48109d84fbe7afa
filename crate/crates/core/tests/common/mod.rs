#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use pevkit::engine::{expr, Witness};
use pevkit::instances::{ActionAlgebra, FiniteMonoid, MonoidAlgebra, NatSum};
use pevkit::{rat, Algebra, Distribution, Nested, Point, Value};
use proptest::prelude::*;

pub fn bag(xs: &[i64]) -> Nested {
    expr(Value::ints_bag(xs)).unwrap()
}

pub fn int_list(xs: &[i64]) -> Nested {
    expr(Value::seq(xs.iter().map(|&x| Value::from(x)))).unwrap()
}

pub fn cyclic_list_algebra(n: usize) -> MonoidAlgebra {
    MonoidAlgebra::list(Arc::new(FiniteMonoid::cyclic(n)))
}

pub fn cyclic_action(n: usize) -> ActionAlgebra {
    ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(n)))
}

pub fn nat_sum() -> NatSum {
    NatSum::multiset()
}

/// Panics unless the witness is valid and its endpoints have one result.
pub fn audit(alg: &dyn Algebra, w: &Witness) {
    assert!(
        pevkit::engine::check_total_evaluation_law(alg, w).unwrap(),
        "{} → {} changes the result",
        w.source,
        w.target
    );
}

pub fn small_bag(max_len: usize, max_atom: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=max_atom, 1..=max_len)
}

/// A distribution on the line with at most `max_points` support points and
/// weights sharing a denominator of at most `max_den`.
pub fn line_dist(max_points: usize, max_den: i64) -> impl Strategy<Value = Distribution<Point>> {
    (1..=max_den).prop_flat_map(move |den| {
        let k_max = max_points.min(den as usize);
        (1..=k_max).prop_flat_map(move |k| {
            (
                prop::collection::vec((-8i64..=8, 1i64..=3), k),
                prop::collection::btree_set(1..den.max(2), k - 1),
            )
                .prop_map(move |(pts, cuts)| {
                    // cut points split den into k positive parts
                    let mut bounds: Vec<i64> = vec![0];
                    bounds.extend(cuts.into_iter().filter(|&c| c < den));
                    bounds.push(den);
                    let parts = bounds.windows(2).map(|w| w[1] - w[0]);
                    Distribution::from_weights(
                        pts.into_iter()
                            .zip(parts)
                            .map(|((n, d), w)| (Point(vec![rat(n, d)]), rat(w, den))),
                    )
                    .unwrap()
                })
        })
    })
}

pub fn mean(p: &Distribution<Point>) -> Point {
    let dim = p.points().next().map_or(0, Point::dim);
    pevkit::instances::barycenter(&pevkit::instances::ConvexAlgebra::new(dim), p).unwrap()
}

pub fn translate(p: &Distribution<Point>, by: &Point) -> Distribution<Point> {
    p.map(|x| {
        Point(
            x.coords()
                .iter()
                .zip(by.coords())
                .map(|(a, b)| a + b)
                .collect(),
        )
    })
}

/// A random distribution on the line: at most `max_points` points with
/// coordinates `n/d`, `d ≤ 3`, and weights over a common denominator of at
/// most `max_den`.
pub fn random_line_dist(
    rng: &mut impl rand::Rng,
    max_points: usize,
    max_den: i64,
) -> Distribution<Point> {
    let den = rng.gen_range(1..=max_den);
    let k = rng.gen_range(1..=max_points.min(den as usize));
    let mut cuts: Vec<i64> = rand::seq::index::sample(rng, (den - 1) as usize, k - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(den);
    Distribution::from_weights(bounds.windows(2).map(|w| {
        let x = rat(rng.gen_range(-8..=8), rng.gen_range(1..=3));
        (Point(vec![x]), rat(w[1] - w[0], den))
    }))
    .unwrap()
}

/// A random spread of `a`: either `a` itself or two points on either side
/// weighted to keep `a` as the barycenter.
pub fn random_spread(rng: &mut impl rand::Rng, a: &Point) -> Distribution<Point> {
    if rng.gen_bool(0.3) {
        return Distribution::dirac(a.clone());
    }
    let left = rat(rng.gen_range(1..=4), rng.gen_range(1..=2));
    let right = rat(rng.gen_range(1..=4), rng.gen_range(1..=2));
    let shift = |d: &BigRational| Point(a.coords().iter().map(|c| c + d).collect());
    let total = &left + &right;
    Distribution::from_weights([
        (shift(&-left.clone()), &right / &total),
        (shift(&right), &left / &total),
    ])
    .unwrap()
}
