//! The bar construction of an algebra, truncated to low levels.
//!
//! Level `i` holds depth-`(i + 1)` values. Face `d_j` flattens layers `j` and
//! `j + 1` (counted from the outside) for `j ≤ i`, and evaluates the
//! innermost layer for `j = i + 1`. Degeneracy `s_j` inserts a singleton
//! layer beneath the outer `j + 1` layers. On the level-2 simplex
//! `{{{1,1},{1,1}}}` over (ℕ, +): `d₀ = {{1,1},{1,1}}`, `d₁ = {{1,1,1,1}}`,
//! `d₂ = {{2,2}}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::{canonical_filler, reduction_graph, Witness};
use crate::error::{Error, Result};
use crate::monad::{eta_at, eval_at, mu_at, Algebra, LawReport, LawVerdict, Limits};
use crate::value::{Nested, Value};

/// A simplex at level `depth - 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Nested);

impl Simplex {
    pub fn new(level: usize, value: Value) -> Result<Self> {
        Ok(Simplex(Nested::new(level + 1, value)?))
    }

    pub fn from_nested(x: Nested) -> Result<Self> {
        if x.depth() == 0 {
            return Err(Error::DepthMismatch {
                expected: "at least 1".into(),
                found: 0,
            });
        }
        Ok(Simplex(x))
    }

    pub fn level(&self) -> usize {
        self.0.depth() - 1
    }

    pub fn value(&self) -> &Value {
        self.0.value()
    }

    pub fn nested(&self) -> &Nested {
        &self.0
    }

    pub fn into_nested(self) -> Nested {
        self.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.value().fmt(f)
    }
}

/// Face and degeneracy maps of a simplicial set.
pub trait Simplicial {
    /// `d_j` of a simplex at level `i ≥ 1`, for `j ≤ i`.
    fn face(&self, j: usize, x: &Simplex) -> Result<Simplex>;

    /// `s_j` of a simplex at level `i`, for `j ≤ i`.
    fn degeneracy(&self, j: usize, x: &Simplex) -> Result<Simplex>;
}

/// The bar construction of an algebra.
#[derive(Clone, Copy)]
pub struct BarConstruction<'a> {
    alg: &'a dyn Algebra,
}

impl<'a> BarConstruction<'a> {
    pub fn new(alg: &'a dyn Algebra) -> Self {
        BarConstruction { alg }
    }

    pub fn algebra(&self) -> &'a dyn Algebra {
        self.alg
    }
}

impl Simplicial for BarConstruction<'_> {
    fn face(&self, j: usize, x: &Simplex) -> Result<Simplex> {
        let level = x.level();
        if level == 0 || j > level {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: level,
            });
        }
        let y = if j < level {
            mu_at(self.alg.monad(), x.nested(), j)?
        } else {
            eval_at(self.alg, x.nested(), level)?
        };
        Ok(Simplex(y))
    }

    fn degeneracy(&self, j: usize, x: &Simplex) -> Result<Simplex> {
        if j > x.level() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: x.level(),
            });
        }
        Ok(Simplex(eta_at(self.alg.monad(), x.nested(), j + 1)?))
    }
}

pub const FACE_FACE: &str = "face-face";
pub const DEGENERACY_DEGENERACY: &str = "degeneracy-degeneracy";
pub const FACE_DEGENERACY: &str = "face-degeneracy";

/// Checks on every sample:
/// `d_i d_j = d_{j-1} d_i` for `i < j`,
/// `s_i s_j = s_{j+1} s_i` for `i ≤ j`,
/// and `d_i s_j` equal to `s_{j-1} d_i` (`i < j`), the identity
/// (`i ∈ {j, j+1}`), or `s_j d_{i-1}` (`i > j + 1`).
pub fn check_simplicial_identities(s: &dyn Simplicial, samples: &[Simplex]) -> LawReport {
    let mut ff = LawVerdict::new(FACE_FACE);
    let mut ss = LawVerdict::new(DEGENERACY_DEGENERACY);
    let mut fs = LawVerdict::new(FACE_DEGENERACY);
    let val = |r: Result<Simplex>| r.map(|x| x.value().clone());

    for x in samples {
        let n = x.level();
        let input = x.value();
        if n >= 2 {
            for j in 1..=n {
                for i in 0..j {
                    ff.record(
                        input,
                        val(s.face(j, x).and_then(|y| s.face(i, &y))),
                        val(s.face(i, x).and_then(|y| s.face(j - 1, &y))),
                    );
                }
            }
        }
        for j in 0..=n {
            for i in 0..=j {
                ss.record(
                    input,
                    val(s.degeneracy(j, x).and_then(|y| s.degeneracy(i, &y))),
                    val(s.degeneracy(i, x).and_then(|y| s.degeneracy(j + 1, &y))),
                );
            }
        }
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = val(s.degeneracy(j, x).and_then(|y| s.face(i, &y)));
                let rhs = if i < j {
                    val(s.face(i, x).and_then(|y| s.degeneracy(j - 1, &y)))
                } else if i == j || i == j + 1 {
                    Ok(input.clone())
                } else {
                    val(s.face(i - 1, x).and_then(|y| s.degeneracy(j, &y)))
                };
                fs.record(input, lhs, rhs);
            }
        }
    }
    LawReport {
        verdicts: vec![ff, ss, fs],
    }
}

/// Fills the inner horn formed by `k` (level 1) and `h` (level 1) with
/// `d₁(k) = d₀(h)`: returns `z` with `d₀(z) = k` and `d₂(z) = h`. `d₁(z)` is
/// their composite.
pub fn fill_inner_horn(alg: &dyn Algebra, k: &Simplex, h: &Simplex) -> Result<Simplex> {
    for x in [k, h] {
        if x.level() != 1 {
            return Err(Error::DepthMismatch {
                expected: "2".into(),
                found: x.nested().depth(),
            });
        }
    }
    let kw = Witness::from_nesting(alg, k.nested().clone())?;
    let hw = Witness::from_nesting(alg, h.nested().clone())?;
    Ok(Simplex(canonical_filler(alg, &kw, &hw)?))
}

/// The bar construction restricted to what is reachable from one seed.
///
/// Level 0 holds the reduction-graph nodes of the seed. Level `i + 1` holds
/// every nonempty-block nesting that flattens (by `d₀`) to a level-`i`
/// simplex; at level 1 these are the witnesses, at level 2 the fillers of
/// composable pairs. Simplices are sorted within each level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedComplex {
    pub max_level: usize,
    pub levels: Vec<Vec<Simplex>>,
    /// `faces[i][x][j]` is the index at level `i` of `d_j` of simplex `x` at
    /// level `i + 1`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[i][x][j]` is the index at level `i + 1` of `s_j` of
    /// simplex `x` at level `i`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

pub const MAX_COMPLEX_LEVEL: usize = 3;

pub fn build_truncated_complex(
    alg: &dyn Algebra,
    seed: &Nested,
    max_level: usize,
    limits: &Limits,
) -> Result<TruncatedComplex> {
    if max_level > MAX_COMPLEX_LEVEL {
        return Err(Error::IndexOutOfRange {
            index: max_level,
            max: MAX_COMPLEX_LEVEL,
        });
    }
    let graph = reduction_graph(alg, seed, limits)?;
    let mut levels: Vec<Vec<Simplex>> = vec![graph.nodes().iter().cloned().map(Simplex).collect()];
    let m = alg.monad();
    for level in 1..=max_level {
        let mut next = BTreeSet::new();
        for x in &levels[level - 1] {
            for v in m.mu_fiber(x.value(), limits)? {
                next.insert(Simplex::new(level, v)?);
                if next.len() > limits.nodes {
                    return Err(Error::EnumerationLimitExceeded {
                        what: "simplices per level",
                        size: next.len(),
                        limit: limits.nodes,
                    });
                }
            }
        }
        levels.push(next.into_iter().collect());
    }

    let bar = BarConstruction::new(alg);
    let index: Vec<BTreeMap<&Simplex, usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let lookup = |level: usize, x: &Simplex| -> Result<usize> {
        index[level]
            .get(x)
            .copied()
            .ok_or_else(|| Error::InvalidStructure(format!("{x} is missing from level {level}")))
    };
    let mut faces = Vec::new();
    let mut degeneracies = Vec::new();
    for level in 0..max_level {
        let mut f_level = Vec::new();
        for x in &levels[level + 1] {
            let row = (0..=level + 1)
                .map(|j| lookup(level, &bar.face(j, x)?))
                .collect::<Result<Vec<_>>>()?;
            f_level.push(row);
        }
        faces.push(f_level);
        let mut s_level = Vec::new();
        for x in &levels[level] {
            let row = (0..=level)
                .map(|j| lookup(level + 1, &bar.degeneracy(j, x)?))
                .collect::<Result<Vec<_>>>()?;
            s_level.push(row);
        }
        degeneracies.push(s_level);
    }
    Ok(TruncatedComplex {
        max_level,
        levels,
        faces,
        degeneracies,
    })
}

impl TruncatedComplex {
    /// Recomputes every recorded incidence.
    pub fn verify(&self, alg: &dyn Algebra) -> bool {
        let bar = BarConstruction::new(alg);
        (0..self.max_level).all(|level| {
            self.levels[level + 1]
                .iter()
                .zip(&self.faces[level])
                .all(|(x, row)| {
                    row.iter()
                        .enumerate()
                        .all(|(j, &y)| bar.face(j, x).is_ok_and(|f| f == self.levels[level][y]))
                })
                && self.levels[level]
                    .iter()
                    .zip(&self.degeneracies[level])
                    .all(|(x, row)| {
                        row.iter().enumerate().all(|(j, &y)| {
                            bar.degeneracy(j, x)
                                .is_ok_and(|s| s == self.levels[level + 1][y])
                        })
                    })
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::engine::{enumerate_fillers, expr, identity_witness};
    use crate::instances::{ActionAlgebra, FiniteMonoid, NatSum};

    fn s(level: usize, v: Value) -> Simplex {
        Simplex::new(level, v).unwrap()
    }

    fn bag2(blocks: &[&[i64]]) -> Value {
        Value::bag(blocks.iter().map(|b| Value::ints_bag(b)))
    }

    fn composition_triangle() -> Simplex {
        s(2, Value::bag([bag2(&[&[1, 1], &[1, 1]])]))
    }

    #[test]
    fn edge_faces() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let x = s(1, bag2(&[&[3, 4], &[5]]));
        assert_eq!(bar.face(0, &x).unwrap(), s(0, Value::ints_bag(&[3, 4, 5])));
        assert_eq!(bar.face(1, &x).unwrap(), s(0, Value::ints_bag(&[7, 5])));
        assert!(matches!(
            bar.face(2, &x),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        ));
        assert!(bar.face(0, &s(0, Value::ints_bag(&[1]))).is_err());
    }

    #[test]
    fn triangle_faces() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let z = composition_triangle();
        assert_eq!(bar.face(0, &z).unwrap(), s(1, bag2(&[&[1, 1], &[1, 1]])));
        assert_eq!(bar.face(1, &z).unwrap(), s(1, bag2(&[&[1, 1, 1, 1]])));
        assert_eq!(bar.face(2, &z).unwrap(), s(1, bag2(&[&[2, 2]])));
        // d₀d₂ = d₁d₀
        let lhs = bar.face(0, &bar.face(2, &z).unwrap()).unwrap();
        let rhs = bar.face(1, &bar.face(0, &z).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, s(0, Value::ints_bag(&[2, 2])));
    }

    #[test]
    fn degeneracies() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let v = s(0, Value::ints_bag(&[3, 4, 5]));
        let e = bar.degeneracy(0, &v).unwrap();
        assert_eq!(e, s(1, bag2(&[&[3], &[4], &[5]])));
        assert_eq!(bar.face(0, &e).unwrap(), v);
        assert_eq!(bar.face(1, &e).unwrap(), v);
        let edge = s(1, bag2(&[&[1, 2]]));
        assert_eq!(
            bar.degeneracy(1, &edge).unwrap(),
            s(2, Value::bag([bag2(&[&[1], &[2]])]))
        );
        assert!(bar.degeneracy(1, &v).is_err());
    }

    #[test]
    fn identities_on_examples() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let samples = vec![
            s(0, Value::ints_bag(&[1, 2, 2])),
            s(1, bag2(&[&[3, 4], &[5]])),
            composition_triangle(),
            s(
                3,
                Value::bag([Value::bag([bag2(&[&[1], &[2, 3]]), bag2(&[&[4]])])]),
            ),
        ];
        let report = check_simplicial_identities(&bar, &samples);
        assert!(report.passed(), "{report:?}");
        assert!(report.verdict(FACE_FACE).unwrap().checked > 0);
    }

    struct ShiftedFaces<'a>(BarConstruction<'a>);

    impl Simplicial for ShiftedFaces<'_> {
        fn face(&self, j: usize, x: &Simplex) -> Result<Simplex> {
            if j == 0 && x.level() >= 2 {
                self.0.face(1, x)
            } else {
                self.0.face(j, x)
            }
        }

        fn degeneracy(&self, j: usize, x: &Simplex) -> Result<Simplex> {
            self.0.degeneracy(j, x)
        }
    }

    #[test]
    fn corrupted_face_is_caught() {
        let alg = NatSum::multiset();
        let bad = ShiftedFaces(BarConstruction::new(&alg));
        let report = check_simplicial_identities(&bad, &[composition_triangle()]);
        assert!(!report.passed());
        assert!(report.verdict(FACE_FACE).unwrap().counterexample.is_some());
    }

    #[test]
    fn horn_example() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let k = s(1, bag2(&[&[1, 1], &[1, 1]]));
        let h = s(1, bag2(&[&[2, 2]]));
        let z = fill_inner_horn(&alg, &k, &h).unwrap();
        assert_eq!(z, composition_triangle());
        assert_eq!(bar.face(1, &z).unwrap(), s(1, bag2(&[&[1, 1, 1, 1]])));
        assert!(matches!(
            fill_inner_horn(&alg, &h, &k),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn unit_horn() {
        let alg = NatSum::multiset();
        let bar = BarConstruction::new(&alg);
        let h = s(1, bag2(&[&[3, 4], &[5]]));
        let k = bar.degeneracy(0, &bar.face(0, &h).unwrap()).unwrap();
        let z = fill_inner_horn(&alg, &k, &h).unwrap();
        assert_eq!(bar.face(1, &z).unwrap(), h);
    }

    #[test]
    fn group_horn_is_unique() {
        let alg = ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(4)));
        let k = Witness::from_nesting(
            &alg,
            Nested::new(2, Value::act(2, Value::act(1, Value::from(0)))).unwrap(),
        )
        .unwrap();
        let h = Witness::from_nesting(
            &alg,
            Nested::new(2, Value::act(0, Value::act(2, Value::from(1)))).unwrap(),
        )
        .unwrap();
        assert_eq!(
            enumerate_fillers(&alg, &k, &h, &Limits::default())
                .unwrap()
                .len(),
            1
        );
        let z = fill_inner_horn(
            &alg,
            &Simplex::from_nested(k.nesting).unwrap(),
            &Simplex::from_nested(h.nesting).unwrap(),
        )
        .unwrap();
        assert_eq!(z.level(), 2);
    }

    #[test]
    fn complex_of_1_1_2() {
        let alg = NatSum::multiset();
        let seed = expr(Value::ints_bag(&[1, 1, 2])).unwrap();
        let c = build_truncated_complex(&alg, &seed, 1, &Limits::default()).unwrap();
        let g = reduction_graph(&alg, &seed, &Limits::default()).unwrap();
        assert_eq!(c.levels[0].len(), 4);
        let total: usize = g.edges().iter().map(|e| e.witnesses).sum();
        assert_eq!(c.levels[1].len(), total);
        assert!(c.verify(&alg));
    }

    #[test]
    fn complex_of_a_singleton() {
        let alg = NatSum::multiset();
        let seed = expr(Value::ints_bag(&[5])).unwrap();
        let c = build_truncated_complex(&alg, &seed, 2, &Limits::default()).unwrap();
        assert_eq!(
            c.levels.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![1, 1, 1]
        );
        assert_eq!(c.levels[2][0], s(2, Value::bag([bag2(&[&[5]])])));
        assert!(c.verify(&alg));
    }

    #[test]
    fn complex_contains_the_composition_triangle() {
        let alg = NatSum::multiset();
        let seed = expr(Value::ints_bag(&[1, 1, 1, 1])).unwrap();
        let c = build_truncated_complex(&alg, &seed, 2, &Limits::default()).unwrap();
        assert!(c.levels[2].contains(&composition_triangle()));
        assert!(c.verify(&alg));
        let id = identity_witness(&alg, &seed).unwrap();
        assert!(c.levels[1].contains(&Simplex::from_nested(id.nesting).unwrap()));
    }

    #[test]
    fn level_cap() {
        let alg = NatSum::multiset();
        let seed = expr(Value::ints_bag(&[1])).unwrap();
        assert!(build_truncated_complex(&alg, &seed, 4, &Limits::default()).is_err());
    }
}
