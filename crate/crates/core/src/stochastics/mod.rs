//! Partial evaluations of finitely supported distributions on convex sets.
//!
//! For the distribution monad a partial evaluation `p → q` is a two-level
//! distribution ξ whose average is `p` and whose pushforward along the
//! barycenter map is `q`. Read backwards, `q` spreads into `p` by adding
//! unbiased noise.

mod lp;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use lp::{check_assignment, lp_feasible, LinearConstraint, LpProblem};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::instances::{barycenter, dist_average, ConvexAlgebra};
use crate::monad::Limits;
use crate::value::Point;

fn check_points(p: &Distribution<Point>, alg: &ConvexAlgebra) -> Result<()> {
    for x in p.points() {
        if x.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: x.dim(),
            });
        }
        if !alg.admits(x) {
            return Err(Error::CarrierMismatch(x.to_string()));
        }
    }
    Ok(())
}

/// The LP whose feasible points are the transport plans `x[b][a]` from the
/// support of `q` to that of `p` with barycenter `b` on every row. Variables
/// are ordered by `(b, a)` in canonical point order.
pub fn pev_problem(p: &Distribution<Point>, q: &Distribution<Point>, dim: usize) -> LpProblem {
    let (np, nq) = (p.len(), q.len());
    let var = |bi: usize, ai: usize| bi * np + ai;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let mut lp = LpProblem::new(np * nq);
    for (bi, (b, qb)) in q.support().iter().enumerate() {
        let mut row = vec![zero.clone(); np * nq];
        for ai in 0..np {
            row[var(bi, ai)] = one.clone();
        }
        lp.add_row(row, qb.clone()).expect("row width");
        for d in 0..dim {
            let mut row = vec![zero.clone(); np * nq];
            for (ai, (a, _)) in p.support().iter().enumerate() {
                row[var(bi, ai)] = a.coords()[d].clone();
            }
            lp.add_row(row, qb * &b.coords()[d]).expect("row width");
        }
    }
    for (ai, (_, pa)) in p.support().iter().enumerate() {
        let mut row = vec![zero.clone(); np * nq];
        for bi in 0..nq {
            row[var(bi, ai)] = one.clone();
        }
        lp.add_row(row, pa.clone()).expect("row width");
    }
    lp
}

/// Decides whether `p` partially evaluates to `q`. On success returns
/// ξ = Σ_b q(b) δ(s_b) where each `s_b` is supported in `p` and has
/// barycenter `b`.
pub fn decide_pev(
    p: &Distribution<Point>,
    q: &Distribution<Point>,
    alg: &ConvexAlgebra,
    limits: &Limits,
) -> Result<Option<Distribution<Distribution<Point>>>> {
    check_points(p, alg)?;
    check_points(q, alg)?;
    let size = p.len() * q.len();
    if size > limits.lp_vars {
        return Err(Error::EnumerationLimitExceeded {
            what: "LP variables",
            size,
            limit: limits.lp_vars,
        });
    }
    let Some(x) = lp_feasible(&pev_problem(p, q, alg.dim())) else {
        return Ok(None);
    };
    let np = p.len();
    let mut outer = Vec::with_capacity(q.len());
    for (bi, (_, qb)) in q.support().iter().enumerate() {
        let masses = p
            .support()
            .iter()
            .enumerate()
            .map(|(ai, (a, _))| (a.clone(), x[bi * np + ai].clone()));
        outer.push((Distribution::normalized(masses)?, qb.clone()));
    }
    Ok(Some(Distribution::from_weights(outer)?))
}

/// Lifts a decomposition `α` of the pushforward `f_*p` to a decomposition of
/// `p`, splitting each point `y` according to `p` conditioned on `f⁻¹(y)`.
pub fn lift_decomposition<X, Y>(
    p: &Distribution<X>,
    alpha: &Distribution<Distribution<Y>>,
    f: impl Fn(&X) -> Y,
) -> Result<Distribution<Distribution<X>>>
where
    X: Ord + Clone,
    Y: Ord + Clone,
{
    let image = p.map(&f);
    if dist_average(alpha) != image {
        return Err(Error::PreconditionViolated(
            "the average of the decomposition is not the pushforward".into(),
        ));
    }
    let mut fibers: BTreeMap<Y, Vec<(X, BigRational)>> = BTreeMap::new();
    for (x, w) in p.support() {
        fibers.entry(f(x)).or_default().push((x.clone(), w.clone()));
    }
    let conditioned: BTreeMap<Y, Distribution<X>> = fibers
        .into_iter()
        .map(|(y, masses)| Ok((y, Distribution::normalized(masses)?)))
        .collect::<Result<_>>()?;
    let lifted = alpha.support().iter().map(|(q, w)| {
        let mix = Distribution::from_weights(
            q.support()
                .iter()
                .map(|(y, qy)| (conditioned[y].clone(), qy.clone())),
        )
        .expect("inner weights are a distribution");
        (dist_average(&mix), w.clone())
    });
    Distribution::from_weights(lifted)
}

/// A kernel that spreads every point of the base into a distribution with
/// that point as barycenter. Points outside the support of the base spread
/// to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    base: Distribution<Point>,
    kernel: BTreeMap<Point, Distribution<Point>>,
}

fn mean(p: &Distribution<Point>) -> Result<Point> {
    let dim = p.points().next().map_or(0, Point::dim);
    barycenter(&ConvexAlgebra::new(dim), p)
}

impl Dilation {
    /// Keeps the entries of `kernel` on the support of `base`, filling gaps
    /// with Dirac kernels, and checks that each entry has its point as
    /// barycenter.
    pub fn new(
        base: Distribution<Point>,
        mut kernel: BTreeMap<Point, Distribution<Point>>,
    ) -> Result<Self> {
        let mut stored = BTreeMap::new();
        for a in base.points() {
            let k = kernel
                .remove(a)
                .unwrap_or_else(|| Distribution::dirac(a.clone()));
            if mean(&k)? != *a {
                return Err(Error::InvalidDilation(format!(
                    "{k} has barycenter other than {a}"
                )));
            }
            stored.insert(a.clone(), k);
        }
        Ok(Dilation {
            base,
            kernel: stored,
        })
    }

    /// The kernel that leaves every point in place.
    pub fn dirac(base: Distribution<Point>) -> Self {
        let kernel = base
            .points()
            .map(|a| (a.clone(), Distribution::dirac(a.clone())))
            .collect();
        Dilation { base, kernel }
    }

    pub fn base(&self) -> &Distribution<Point> {
        &self.base
    }

    pub fn kernel_at(&self, a: &Point) -> Distribution<Point> {
        self.kernel
            .get(a)
            .cloned()
            .unwrap_or_else(|| Distribution::dirac(a.clone()))
    }

    /// The kernel on the support of the base.
    pub fn entries(&self) -> &BTreeMap<Point, Distribution<Point>> {
        &self.kernel
    }
}

/// Recovers the kernel of a decomposition `r` of `p` by conditioning on
/// barycenter classes: `k(a) = (1/p(a)) Σ_{s ↦ a} r(s)·s`.
pub fn dilation_from_witness(
    r: &Distribution<Distribution<Point>>,
    p: &Distribution<Point>,
    alg: &ConvexAlgebra,
) -> Result<Dilation> {
    let mut classes: BTreeMap<Point, Vec<(Point, BigRational)>> = BTreeMap::new();
    for (s, w) in r.support() {
        let b = barycenter(alg, s)?;
        let class = classes.entry(b).or_default();
        for (x, u) in s.support() {
            class.push((x.clone(), w * u));
        }
    }
    let pushed: Vec<(Point, BigRational)> = classes
        .iter()
        .map(|(b, masses)| (b.clone(), masses.iter().map(|(_, m)| m).sum()))
        .collect();
    if Distribution::from_weights(pushed)? != *p {
        return Err(Error::PreconditionViolated(format!(
            "the barycenters of the decomposition do not push forward to {p}"
        )));
    }
    let kernel = classes
        .into_iter()
        .map(|(b, masses)| Ok((b, Distribution::normalized(masses)?)))
        .collect::<Result<_>>()?;
    Dilation::new(p.clone(), kernel)
}

/// The decomposition `Σ_a p(a) δ(k(a))` of the base.
pub fn witness_from_dilation(k: &Dilation) -> Result<Distribution<Distribution<Point>>> {
    for (a, spread) in &k.kernel {
        if mean(spread)? != *a {
            return Err(Error::InvalidDilation(format!(
                "{spread} has barycenter other than {a}"
            )));
        }
    }
    Ok(k.base.map(|a| k.kernel_at(a)))
}

/// Spreads with `first`, then spreads every resulting point with `second`.
/// The base of `second` must be the distribution that `first` produces.
pub fn compose_kernels(first: &Dilation, second: &Dilation) -> Result<Dilation> {
    let spread = dist_average(&witness_from_dilation(first)?);
    if spread != second.base {
        return Err(Error::DomainMismatch(format!(
            "first kernel produces {spread}, second is based on {}",
            second.base
        )));
    }
    let kernel = first
        .kernel
        .iter()
        .map(|(a, k1)| {
            let mix = k1.map(|b| second.kernel_at(b));
            (a.clone(), dist_average(&mix))
        })
        .collect();
    Dilation::new(first.base.clone(), kernel)
}

/// Reads a distribution on ℚ¹ out of one on points.
pub fn on_line(p: &Distribution<Point>) -> Result<Distribution<BigRational>> {
    p.try_map(|x| match x.coords() {
        [c] => Ok(c.clone()),
        other => Err(Error::DimensionMismatch {
            expected: 1,
            found: other.len(),
        }),
    })
}

fn expected_min(p: &Distribution<BigRational>, t: &BigRational) -> BigRational {
    p.support().iter().map(|(x, w)| w * x.min(t)).sum()
}

fn expectation(p: &Distribution<BigRational>) -> BigRational {
    p.support().iter().map(|(x, w)| w * x).sum()
}

/// Second-order stochastic dominance of `q` over `p`: equal means, and
/// `E_p[min(X, t)] ≤ E_q[min(X, t)]` at every support point `t`.
pub fn sosd_1d(p: &Distribution<BigRational>, q: &Distribution<BigRational>) -> bool {
    expectation(p) == expectation(q)
        && p.points()
            .chain(q.points())
            .all(|t| expected_min(p, t) <= expected_min(q, t))
}

/// `∫ |F_p − F_q|` over the real line.
pub fn wasserstein1_1d(
    p: &Distribution<BigRational>,
    q: &Distribution<BigRational>,
) -> BigRational {
    let mut cuts: Vec<&BigRational> = p.points().chain(q.points()).collect();
    cuts.sort();
    cuts.dedup();
    let mut total = BigRational::zero();
    let (mut fp, mut fq) = (BigRational::zero(), BigRational::zero());
    for w in cuts.windows(2) {
        fp += p.weight(w[0]);
        fq += q.weight(w[0]);
        total += (&fp - &fq).abs() * (w[1] - w[0]);
    }
    total
}
