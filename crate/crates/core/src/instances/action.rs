use std::any::Any;
use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::monad::{Algebra, Carrier, ChildSampler, LayerFn, Limits, Monad, Tag};
use crate::value::{Atom, Value};

/// A finite monoid given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    elements: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteMonoid {
    /// `table[i][j]` is `elements[i] · elements[j]`. Fails unless the table is
    /// square, closed, associative, and has a two-sided identity.
    pub fn new(elements: Vec<Atom>, table: Vec<Vec<Atom>>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, a) in elements.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidStructure(format!("monoid lists {a} twice")));
            }
        }
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidStructure("monoid has no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidStructure(format!(
                "Cayley table must be {n}x{n}"
            )));
        }
        let table = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|a| {
                        index.get(&a).copied().ok_or_else(|| {
                            Error::InvalidStructure(format!("table entry {a} is not an element"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidStructure(format!(
                            "not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidStructure("no two-sided identity".into()))?;
        Ok(FiniteMonoid {
            elements,
            index,
            table,
            identity,
        })
    }

    /// The cyclic group ℤ/n with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let elements: Vec<Atom> = (0..n as i64).map(Atom::int).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| Atom::int(((a + b) % n) as i64)).collect())
            .collect();
        Self::new(elements, table).expect("cyclic groups are monoids")
    }

    pub fn elements(&self) -> &[Atom] {
        &self.elements
    }

    pub fn identity(&self) -> &Atom {
        &self.elements[self.identity]
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.index.contains_key(a)
    }

    fn idx(&self, a: &Atom) -> Result<usize> {
        self.index
            .get(a)
            .copied()
            .ok_or_else(|| Error::CarrierMismatch(format!("{a} (not a monoid element)")))
    }

    pub fn op(&self, a: &Atom, b: &Atom) -> Result<Atom> {
        Ok(self.elements[self.table[self.idx(a)?][self.idx(b)?]].clone())
    }

    pub fn inverse(&self, a: &Atom) -> Option<Atom> {
        let i = self.idx(a).ok()?;
        (0..self.elements.len())
            .find(|&j| self.table[i][j] == self.identity && self.table[j][i] == self.identity)
            .map(|j| self.elements[j].clone())
    }

    pub fn is_group(&self) -> bool {
        self.elements.iter().all(|a| self.inverse(a).is_some())
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// The monad X ↦ G × X of a finite monoid G.
#[derive(Clone, Debug)]
pub struct ActionMonad {
    monoid: Arc<FiniteMonoid>,
}

impl ActionMonad {
    pub fn new(monoid: Arc<FiniteMonoid>) -> Self {
        ActionMonad { monoid }
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }
}

pub(crate) fn expect_act(x: &Value) -> Result<(&Atom, &Value)> {
    match x {
        Value::Act(g, inner) => Ok((g, inner)),
        other => Err(Error::Malformed(format!(
            "expected a pair (g; x), found {other}"
        ))),
    }
}

impl Monad for ActionMonad {
    fn tag(&self) -> Tag {
        Tag::Action
    }

    fn unit(&self, x: Value) -> Value {
        Value::act(self.monoid.identity().clone(), x)
    }

    fn join(&self, x: &Value) -> Result<Value> {
        let (g, inner) = expect_act(x)?;
        let (h, y) = expect_act(inner)?;
        Ok(Value::act(self.monoid.op(g, h)?, y.clone()))
    }

    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value> {
        let (g, inner) = expect_act(x)?;
        self.monoid.idx(g)?;
        Ok(Value::act(g.clone(), f(inner)?))
    }

    /// All `(h; (l; x))` with `h · l = g`.
    fn mu_fiber(&self, x: &Value, _limits: &Limits) -> Result<Vec<Value>> {
        let (g, inner) = expect_act(x)?;
        let mut out = Vec::new();
        for h in self.monoid.elements() {
            for l in self.monoid.elements() {
                if self.monoid.op(h, l)? == *g {
                    out.push(Value::act(h.clone(), Value::act(l.clone(), inner.clone())));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value {
        let elems = self.monoid.elements();
        let g = elems[rng.gen_range(0..elems.len())].clone();
        Value::act(g, child(rng))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A finite set with a left action of the monoid.
#[derive(Clone, Debug)]
pub struct ActionAlgebra {
    monad: ActionMonad,
    carrier: Carrier,
    act: BTreeMap<(Atom, Atom), Atom>,
}

impl ActionAlgebra {
    /// `act[i][j]` is `monoid.elements()[i]` acting on `carrier[j]`.
    pub fn new(monoid: Arc<FiniteMonoid>, carrier: Vec<Atom>, act: Vec<Vec<Atom>>) -> Result<Self> {
        let n = monoid.elements().len();
        if act.len() != n || act.iter().any(|row| row.len() != carrier.len()) {
            return Err(Error::InvalidStructure(format!(
                "action table must be {n}x{}",
                carrier.len()
            )));
        }
        let carrier_set = Carrier::finite(carrier.iter().cloned())?;
        let mut table = BTreeMap::new();
        for (g, row) in monoid.elements().iter().zip(act) {
            for (x, y) in carrier.iter().zip(row) {
                if !carrier_set.contains(&y) {
                    return Err(Error::InvalidStructure(format!(
                        "{g} acting on {x} gives {y}, outside the carrier"
                    )));
                }
                table.insert((g.clone(), x.clone()), y);
            }
        }
        let at = |g: &Atom, x: &Atom| table[&(g.clone(), x.clone())].clone();
        for x in &carrier {
            if at(monoid.identity(), x) != *x {
                return Err(Error::InvalidStructure(format!("the identity moves {x}")));
            }
            for g in monoid.elements() {
                for h in monoid.elements() {
                    if at(&monoid.op(g, h)?, x) != at(g, &at(h, x)) {
                        return Err(Error::InvalidStructure(format!(
                            "({g}·{h}) acting on {x} differs from {g} acting on {h}·{x}"
                        )));
                    }
                }
            }
        }
        Ok(ActionAlgebra {
            monad: ActionMonad::new(monoid),
            carrier: carrier_set,
            act: table,
        })
    }

    /// The monoid acting on itself by left multiplication.
    pub fn regular(monoid: Arc<FiniteMonoid>) -> Self {
        let elems = monoid.elements().to_vec();
        let act = elems
            .iter()
            .map(|g| elems.iter().map(|x| monoid.op(g, x).unwrap()).collect())
            .collect();
        Self::new(monoid, elems, act).expect("left multiplication is an action table")
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        self.monad.monoid()
    }

    pub fn action_monad(&self) -> &ActionMonad {
        &self.monad
    }

    pub fn act(&self, g: &Atom, x: &Atom) -> Result<Atom> {
        self.act
            .get(&(g.clone(), x.clone()))
            .cloned()
            .ok_or_else(|| Error::CarrierMismatch(format!("({g}; {x})")))
    }
}

impl Algebra for ActionAlgebra {
    fn monad(&self) -> &dyn Monad {
        &self.monad
    }

    fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        let (g, inner) = expect_act(x)?;
        self.act(g, inner.expect_atom()?)
    }

    fn name(&self) -> String {
        format!(
            "action of a monoid of order {}",
            self.monoid().elements().len()
        )
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// An element `(g; x)` of G × A.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ActionExpr {
    pub g: Atom,
    pub x: Atom,
}

impl ActionExpr {
    pub fn new(g: impl Into<Atom>, x: impl Into<Atom>) -> Self {
        ActionExpr {
            g: g.into(),
            x: x.into(),
        }
    }

    pub fn to_value(&self) -> Value {
        Value::act(self.g.clone(), Value::Atom(self.x.clone()))
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let (g, inner) = expect_act(v)?;
        Ok(ActionExpr {
            g: g.clone(),
            x: inner.expect_atom()?.clone(),
        })
    }
}

/// A witness triple `(h, l, x)`: `(h; y)` is a partial evaluation of
/// `(h·l; x)` where `y = l·x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ActionTriple {
    pub h: Atom,
    pub l: Atom,
    pub x: Atom,
}

impl ActionTriple {
    /// The depth-2 nesting `(h; (l; x))`.
    pub fn to_value(&self) -> Value {
        Value::act(
            self.h.clone(),
            Value::act(self.l.clone(), Value::Atom(self.x.clone())),
        )
    }
}

/// All triples witnessing that `q = (h; y)` is a partial evaluation of
/// `p = (g; x)`: every `l` with `h·l = g` and `l·x = y`. For groups `l` is
/// forced to be `h⁻¹g`.
pub fn action_witnesses(
    alg: &ActionAlgebra,
    p: &ActionExpr,
    q: &ActionExpr,
) -> Result<Vec<ActionTriple>> {
    let monoid = alg.monoid();
    let candidates: Vec<Atom> = if monoid.is_group() {
        let inv = monoid.inverse(&q.g).expect("groups have inverses");
        vec![monoid.op(&inv, &p.g)?]
    } else {
        monoid.elements().to_vec()
    };
    let mut out = Vec::new();
    for l in candidates {
        if monoid.op(&q.g, &l)? == p.g && alg.act(&l, &p.x)? == q.x {
            out.push(ActionTriple {
                h: q.g.clone(),
                l,
                x: p.x.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> ActionAlgebra {
        ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(4)))
    }

    #[test]
    fn cyclic_group_structure() {
        let g = FiniteMonoid::cyclic(6);
        assert!(g.is_group());
        assert!(g.is_commutative());
        assert_eq!(g.identity(), &Atom::int(0));
        assert_eq!(g.inverse(&Atom::int(2)), Some(Atom::int(4)));
    }

    #[test]
    fn rejects_non_associative_table() {
        let e = |n| Atom::int(n);
        // boolean "or" is a monoid; the second table fails (0·0)·1 = 0·(0·1)
        let table = vec![vec![e(0), e(1)], vec![e(1), e(1)]];
        assert!(FiniteMonoid::new(vec![e(0), e(1)], table).is_ok());
        let bad = vec![vec![e(1), e(0)], vec![e(0), e(0)]];
        assert!(FiniteMonoid::new(vec![e(0), e(1)], bad).is_err());
    }

    #[test]
    fn rejects_non_actions() {
        let c2 = Arc::new(FiniteMonoid::cyclic(2));
        let (a, b) = (Atom::sym("a"), Atom::sym("b"));
        // the generator fixing both points while the identity swaps them
        let swapped = vec![vec![b.clone(), a.clone()], vec![a.clone(), b.clone()]];
        assert!(ActionAlgebra::new(c2.clone(), vec![a.clone(), b.clone()], swapped).is_err());
        // 1 sending both points to a is not compatible with 1·1 = 0
        let collapse = vec![vec![a.clone(), b.clone()], vec![a.clone(), a.clone()]];
        assert!(ActionAlgebra::new(c2.clone(), vec![a.clone(), b.clone()], collapse).is_err());
        let swap = vec![vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]];
        assert!(ActionAlgebra::new(c2, vec![a, b], swap).is_ok());
    }

    #[test]
    fn witness_in_c4() {
        let got = action_witnesses(&c4(), &ActionExpr::new(3, 0), &ActionExpr::new(2, 1)).unwrap();
        assert_eq!(
            got,
            vec![ActionTriple {
                h: Atom::int(2),
                l: Atom::int(1),
                x: Atom::int(0)
            }]
        );
    }

    #[test]
    fn identity_witness_exists() {
        let alg = c4();
        let p = ActionExpr::new(3, 2);
        let got = action_witnesses(&alg, &p, &p).unwrap();
        assert!(got.contains(&ActionTriple {
            h: Atom::int(3),
            l: Atom::int(0),
            x: Atom::int(2)
        }));
    }

    #[test]
    fn group_case_is_forced() {
        let alg = ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(6)));
        for g in 0..6i64 {
            for h in 0..6 {
                let l = (g - h).rem_euclid(6);
                let y = (l + 1) % 6;
                let got =
                    action_witnesses(&alg, &ActionExpr::new(g, 1), &ActionExpr::new(h, y)).unwrap();
                assert_eq!(got.len(), 1);
                assert_eq!(got[0].l, Atom::int(l));
            }
        }
    }

    #[test]
    fn monoid_scan_finds_every_factorization() {
        // {1, z} with z·z = z acting on {a, b} by z·_ = b
        let one = Atom::sym("1");
        let z = Atom::sym("z");
        let m = Arc::new(
            FiniteMonoid::new(
                vec![one.clone(), z.clone()],
                vec![vec![one.clone(), z.clone()], vec![z.clone(), z.clone()]],
            )
            .unwrap(),
        );
        assert!(!m.is_group());
        let (a, b) = (Atom::sym("a"), Atom::sym("b"));
        let alg = ActionAlgebra::new(
            m,
            vec![a.clone(), b.clone()],
            vec![vec![a.clone(), b.clone()], vec![b.clone(), b.clone()]],
        )
        .unwrap();
        // (z; a) → (z; b) via l = z only; (z; a) → (z; a) via l = 1
        let p = ActionExpr::new(z.clone(), a.clone());
        let to_b = action_witnesses(&alg, &p, &ActionExpr::new(z.clone(), b.clone())).unwrap();
        assert_eq!(to_b.len(), 1);
        assert_eq!(to_b[0].l, z);
        let to_a = action_witnesses(&alg, &p, &p).unwrap();
        assert_eq!(to_a.len(), 1);
        assert_eq!(to_a[0].l, one);
        // not symmetric: (z; b) never reaches (z; a)
        let back =
            action_witnesses(&alg, &ActionExpr::new(z.clone(), b), &ActionExpr::new(z, a)).unwrap();
        assert!(back.is_empty());
    }
}
