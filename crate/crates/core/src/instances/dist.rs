use std::any::Any;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngCore};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::monad::{Algebra, Carrier, ChildSampler, LayerFn, Monad, Tag};
use crate::value::{rat, Atom, Point, Value};

/// The finite distribution monad.
#[derive(Clone, Copy, Debug, Default)]
pub struct DistributionMonad;

pub(crate) fn expect_dist(x: &Value) -> Result<&Distribution<Value>> {
    match x {
        Value::Dist(d) => Ok(d),
        other => Err(Error::Malformed(format!(
            "expected a distribution, found {other}"
        ))),
    }
}

impl Monad for DistributionMonad {
    fn tag(&self) -> Tag {
        Tag::Distribution
    }

    fn unit(&self, x: Value) -> Value {
        Value::Dist(Distribution::dirac(x))
    }

    fn join(&self, x: &Value) -> Result<Value> {
        let outer = expect_dist(x)?;
        let mut weights = Vec::new();
        for (inner, w) in outer.support() {
            for (v, u) in expect_dist(inner)?.support() {
                weights.push((v.clone(), w * u));
            }
        }
        Ok(Value::Dist(Distribution::from_weights(weights)?))
    }

    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value> {
        Ok(Value::Dist(expect_dist(x)?.try_map(|v| f(v))?))
    }

    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value {
        let n = rng.gen_range(1..=3);
        let masses: Vec<(Value, BigRational)> = (0..n)
            .map(|_| (child(rng), rat(rng.gen_range(1..=4), 1)))
            .collect();
        Value::Dist(Distribution::normalized(masses).expect("positive masses"))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The pushforward of `p` along `f`.
pub fn dist_pushforward<X, Y: Ord>(
    f: impl Fn(&X) -> Option<Y>,
    p: &Distribution<X>,
) -> Result<Distribution<Y>>
where
    X: Ord + fmt::Display,
{
    p.try_map(|x| f(x).ok_or_else(|| Error::PartialFunction(x.to_string())))
}

/// The monad multiplication E: the exact mixture Σ_p ξ(p)·p.
pub fn dist_average<T: Ord + Clone>(xi: &Distribution<Distribution<T>>) -> Distribution<T> {
    let weights = xi
        .support()
        .iter()
        .flat_map(|(p, w)| p.support().iter().map(move |(x, u)| (x.clone(), w * u)));
    Distribution::from_weights(weights).expect("a mixture of distributions is a distribution")
}

/// Reads a distribution of points out of a depth-1 value.
pub fn point_dist(v: &Value) -> Result<Distribution<Point>> {
    expect_dist(v)?.try_map(|x| match x {
        Value::Atom(Atom::Point(p)) => Ok(p.clone()),
        other => Err(Error::Malformed(format!("expected a point, found {other}"))),
    })
}

/// Reads a distribution of distributions of points out of a depth-2 value.
pub fn point_dist2(v: &Value) -> Result<Distribution<Distribution<Point>>> {
    expect_dist(v)?.try_map(point_dist)
}

pub fn point_dist_value(p: &Distribution<Point>) -> Value {
    Value::Dist(p.map(|x| Value::Atom(Atom::Point(x.clone()))))
}

pub fn point_dist2_value(xi: &Distribution<Distribution<Point>>) -> Value {
    Value::Dist(xi.map(point_dist_value))
}

pub type Region = Arc<dyn Fn(&Point) -> bool + Send + Sync>;

/// A convex subset of ℚ^d whose evaluation map is the barycenter.
#[derive(Clone)]
pub struct ConvexAlgebra {
    carrier: Carrier,
    region: Option<Region>,
}

impl fmt::Debug for ConvexAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexAlgebra")
            .field("dim", &self.dim())
            .field("restricted", &self.region.is_some())
            .finish()
    }
}

impl ConvexAlgebra {
    /// All of ℚ^dim.
    pub fn new(dim: usize) -> Self {
        ConvexAlgebra {
            carrier: Carrier::Rationals { dim },
            region: None,
        }
    }

    /// The points of ℚ^dim accepted by `region`, which must describe a convex set.
    pub fn with_region(dim: usize, region: Region) -> Self {
        ConvexAlgebra {
            carrier: Carrier::Rationals { dim },
            region: Some(region),
        }
    }

    pub fn dim(&self) -> usize {
        match self.carrier {
            Carrier::Rationals { dim } => dim,
            _ => unreachable!("convex algebras live in ℚ^d"),
        }
    }

    pub fn admits(&self, p: &Point) -> bool {
        p.dim() == self.dim() && self.region.as_ref().is_none_or(|r| r(p))
    }

    /// Checks on sample distributions with admissible support that their
    /// barycenters are admissible.
    pub fn check_closure(&self, samples: &[Distribution<Point>]) -> bool {
        samples
            .iter()
            .filter(|p| p.points().all(|x| self.admits(x)))
            .all(|p| barycenter(self, p).is_ok_and(|b| self.admits(&b)))
    }
}

/// The exact barycenter Σ p(x)·x.
pub fn barycenter(alg: &ConvexAlgebra, p: &Distribution<Point>) -> Result<Point> {
    let dim = alg.dim();
    let mut acc = vec![BigRational::zero(); dim];
    for (x, w) in p.support() {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        if !alg.admits(x) {
            return Err(Error::CarrierMismatch(x.to_string()));
        }
        for (a, c) in acc.iter_mut().zip(x.coords()) {
            *a += w * c;
        }
    }
    Ok(Point(acc))
}

impl Algebra for ConvexAlgebra {
    fn monad(&self) -> &dyn Monad {
        &DistributionMonad
    }

    fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    fn contains(&self, a: &Atom) -> bool {
        a.as_point().is_some_and(|p| self.admits(p))
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        Ok(Atom::Point(barycenter(self, &point_dist(x)?)?))
    }

    fn name(&self) -> String {
        format!("barycenter on Q^{}", self.dim())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
