//! The partial-evaluation relation.
//!
//! A partial evaluation of `p` into `q` is a nesting `k ∈ TTA` with
//! `μ(k) = p` (remove the brackets) and `Te(k) = q` (evaluate inside the
//! brackets). For multisets over (ℕ, +), `{{3, 4}, {5}}` witnesses
//! `3 + 4 + 5 → 7 + 5`.

mod compose;
mod graph;

pub use compose::{canonical_filler, compose_witnesses, enumerate_fillers};
pub use graph::{check_ars_properties, reduction_graph, ArsReport, Edge, ReductionGraph};

use crate::error::{Error, Result};
use crate::instances::{point_dist, point_dist2_value, point_dist_value, ConvexAlgebra};
use crate::monad::{eta_at, eval_at, mu_at, Algebra, Limits, Tag};
use crate::stochastics;
use crate::value::{Nested, Value};

/// A depth-2 nesting together with its two boundaries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub nesting: Nested,
    /// μ(nesting): the expression being evaluated.
    pub source: Nested,
    /// Te(nesting): the partially evaluated expression.
    pub target: Nested,
}

impl Witness {
    /// Computes both boundaries of a depth-2 nesting.
    pub fn from_nesting(alg: &dyn Algebra, nesting: Nested) -> Result<Self> {
        nesting.require_depth(2)?;
        let source = mu_at(alg.monad(), &nesting, 0)?;
        let target = eval_at(alg, &nesting, 1)?;
        Ok(Witness {
            nesting,
            source,
            target,
        })
    }
}

/// Checks that `p` is a formal expression over the algebra's carrier.
pub fn check_expression(alg: &dyn Algebra, p: &Nested) -> Result<()> {
    p.require_depth(1)?;
    match p.value().atoms().into_iter().find(|a| !alg.contains(a)) {
        Some(a) => Err(Error::CarrierMismatch(a.to_string())),
        None => Ok(()),
    }
}

/// The witness Tη(p) of `p → p`.
pub fn identity_witness(alg: &dyn Algebra, p: &Nested) -> Result<Witness> {
    check_expression(alg, p)?;
    Witness::from_nesting(alg, eta_at(alg.monad(), p, 1)?)
}

/// The witness η(p) of `p → η(e(p))`.
pub fn total_evaluation_witness(alg: &dyn Algebra, p: &Nested) -> Result<Witness> {
    check_expression(alg, p)?;
    Witness::from_nesting(alg, eta_at(alg.monad(), p, 0)?)
}

/// Whether μ and Te of the nesting reproduce the recorded boundaries exactly.
pub fn validate_witness(alg: &dyn Algebra, w: &Witness) -> bool {
    Witness::from_nesting(alg, w.nesting.clone())
        .is_ok_and(|fresh| fresh.source == w.source && fresh.target == w.target)
}

/// Whether the source and target of a valid witness have the same result.
pub fn check_total_evaluation_law(alg: &dyn Algebra, w: &Witness) -> Result<bool> {
    if !validate_witness(alg, w) {
        return Err(Error::InvalidWitness(format!(
            "{} does not witness {} → {}",
            w.nesting, w.source, w.target
        )));
    }
    Ok(alg.eval(w.source.value())? == alg.eval(w.target.value())?)
}

/// All witnesses of `p → q` among the nonempty-block nestings of `p`,
/// canonically ordered. An empty list means there is no partial evaluation.
pub fn enumerate_witnesses(
    alg: &dyn Algebra,
    p: &Nested,
    q: &Nested,
    limits: &Limits,
) -> Result<Vec<Witness>> {
    check_expression(alg, p)?;
    check_expression(alg, q)?;
    let m = alg.monad();
    if m.tag() == Tag::Distribution {
        return Err(Error::UnsupportedInstance(
            "distribution witnesses are decided by linear programming, not enumeration".into(),
        ));
    }
    let mut out = Vec::new();
    for k in m.mu_fiber(p.value(), limits)? {
        let w = Witness::from_nesting(alg, Nested::new(2, k)?)?;
        if w.target == *q {
            out.push(w);
        }
    }
    Ok(out)
}

/// Decides `p → q`, returning one witness when it holds. Enumerable
/// instances return the first witness in canonical order; distributions go
/// through the exact LP.
pub fn decide(
    alg: &dyn Algebra,
    p: &Nested,
    q: &Nested,
    limits: &Limits,
) -> Result<Option<Witness>> {
    if alg.monad().tag() != Tag::Distribution {
        return Ok(enumerate_witnesses(alg, p, q, limits)?.into_iter().next());
    }
    let convex = as_convex(alg)?;
    check_expression(alg, p)?;
    check_expression(alg, q)?;
    let pd = point_dist(p.value())?;
    let qd = point_dist(q.value())?;
    match stochastics::decide_pev(&pd, &qd, convex, limits)? {
        None => Ok(None),
        Some(xi) => {
            let w = Witness::from_nesting(alg, Nested::new(2, point_dist2_value(&xi))?)?;
            debug_assert_eq!(w.source.value(), &point_dist_value(&pd));
            Ok(Some(w))
        }
    }
}

pub(crate) fn as_convex(alg: &dyn Algebra) -> Result<&ConvexAlgebra> {
    alg.as_any().downcast_ref::<ConvexAlgebra>().ok_or_else(|| {
        Error::UnsupportedInstance(format!("{} is not a barycenter algebra", alg.name()))
    })
}

/// Convenience: a depth-1 expression.
pub fn expr(v: Value) -> Result<Nested> {
    Nested::new(1, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::instances::NatSum;
    use crate::value::{rat, Atom, Point};

    fn bag(xs: &[i64]) -> Nested {
        expr(Value::ints_bag(xs)).unwrap()
    }

    fn nest(blocks: &[&[i64]]) -> Nested {
        Nested::new(2, Value::bag(blocks.iter().map(|b| Value::ints_bag(b)))).unwrap()
    }

    #[test]
    fn identity_witness_of_3_4_5() {
        let alg = NatSum::multiset();
        let w = identity_witness(&alg, &bag(&[3, 4, 5])).unwrap();
        assert_eq!(w.nesting, nest(&[&[3], &[4], &[5]]));
        assert_eq!(w.source, bag(&[3, 4, 5]));
        assert_eq!(w.target, bag(&[3, 4, 5]));
        assert!(validate_witness(&alg, &w));
    }

    #[test]
    fn total_evaluation_of_3_4_5() {
        let alg = NatSum::multiset();
        let w = total_evaluation_witness(&alg, &bag(&[3, 4, 5])).unwrap();
        assert_eq!(w.nesting, nest(&[&[3, 4, 5]]));
        assert_eq!(w.target, bag(&[12]));
    }

    #[test]
    fn validate_detects_wrong_target() {
        let alg = NatSum::multiset();
        let good = Witness {
            nesting: nest(&[&[3, 4], &[5]]),
            source: bag(&[3, 4, 5]),
            target: bag(&[7, 5]),
        };
        assert!(validate_witness(&alg, &good));
        let bad = Witness {
            target: bag(&[8, 5]),
            ..good.clone()
        };
        assert!(!validate_witness(&alg, &bad));
        assert!(matches!(
            check_total_evaluation_law(&alg, &bad),
            Err(Error::InvalidWitness(_))
        ));
        assert!(check_total_evaluation_law(&alg, &good).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let alg = NatSum::multiset();
        let lim = Limits::default();
        let got = enumerate_witnesses(&alg, &bag(&[1, 1, 2]), &bag(&[2, 2]), &lim).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].nesting, nest(&[&[1, 1], &[2]]));
        let got = enumerate_witnesses(&alg, &bag(&[1, 1, 2]), &bag(&[4]), &lim).unwrap();
        assert_eq!(
            got.iter().map(|w| &w.nesting).collect::<Vec<_>>(),
            vec![&nest(&[&[1, 1, 2]])]
        );
        let got = enumerate_witnesses(&alg, &bag(&[3, 4, 5]), &bag(&[7, 5]), &lim).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].nesting, nest(&[&[3, 4], &[5]]));
        assert!(
            enumerate_witnesses(&alg, &bag(&[3, 4, 5]), &bag(&[8, 5]), &lim)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn composition_example_law() {
        let alg = NatSum::multiset();
        let w = Witness::from_nesting(&alg, nest(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(w.source, bag(&[1, 1, 1, 1]));
        assert_eq!(w.target, bag(&[2, 2]));
        assert!(check_total_evaluation_law(&alg, &w).unwrap());
    }

    #[test]
    fn carrier_is_checked() {
        let alg = NatSum::multiset();
        let p = expr(Value::bag([Value::from("a")])).unwrap();
        assert!(matches!(
            identity_witness(&alg, &p),
            Err(Error::CarrierMismatch(_))
        ));
    }

    #[test]
    fn distributions_are_not_enumerated() {
        let alg = ConvexAlgebra::new(1);
        let p = expr(point_dist_value(&Distribution::dirac(Point::from_ints(&[
            1,
        ]))))
        .unwrap();
        assert!(matches!(
            enumerate_witnesses(&alg, &p, &p, &Limits::default()),
            Err(Error::UnsupportedInstance(_))
        ));
        assert!(decide(&alg, &p, &p, &Limits::default()).unwrap().is_some());
    }

    #[test]
    fn distribution_trivial_witnesses() {
        let alg = ConvexAlgebra::new(1);
        let pd = Distribution::from_weights([
            (Point::from_ints(&[0]), rat(1, 2)),
            (Point::from_ints(&[2]), rat(1, 2)),
        ])
        .unwrap();
        let p = expr(point_dist_value(&pd)).unwrap();
        let total = total_evaluation_witness(&alg, &p).unwrap();
        assert_eq!(
            total.target.value(),
            &point_dist_value(&Distribution::dirac(Point::from_ints(&[1])))
        );
        let ident = identity_witness(&alg, &p).unwrap();
        // Tη(p) = Σ p(x) δ(δ_x), which averages back to p
        let expected = Distribution::from_weights(
            pd.support()
                .iter()
                .map(|(x, w)| (Distribution::dirac(x.clone()), w.clone())),
        )
        .unwrap();
        assert_eq!(ident.nesting.value(), &point_dist2_value(&expected));
        assert_eq!(ident.source, p);
        let dirac = expr(Value::Dist(Distribution::dirac(Value::Atom(Atom::point(
            &[3],
        )))))
        .unwrap();
        assert_eq!(
            total_evaluation_witness(&alg, &dirac).unwrap().target,
            dirac
        );
    }
}
