//! Monads on set-like carriers, their algebras, and executable law checks.
//!
//! A monad acts on [`Value`] trees one container layer at a time: `unit`
//! wraps a value in a new outer layer, `join` flattens the two outermost
//! layers, and `map` applies a function to the children of the outer layer.
//! Everything deeper (μ at level j, e under i layers) is built from these.

use std::any::Any;
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::value::{rat, Atom, Nested, Point, Value};

/// Which concrete monad an instance is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Multiset,
    List,
    Action,
    Distribution,
    Terminal,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Multiset => "multiset",
            Tag::List => "list",
            Tag::Action => "action",
            Tag::Distribution => "distribution",
            Tag::Terminal => "terminal",
        })
    }
}

/// Size limits for enumerations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum total multiplicity (or length) of an expression whose μ-fiber
    /// is enumerated.
    pub fiber: usize,
    /// Maximum number of nodes in a reduction graph, and of simplices per
    /// level in a truncated complex.
    pub nodes: usize,
    /// Maximum number of matchings returned by filler enumeration.
    pub fillers: usize,
    /// Maximum number of LP variables.
    pub lp_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            fiber: 10,
            nodes: 10_000,
            fillers: 100_000,
            lp_vars: 400,
        }
    }
}

/// Function applied to the children of one container layer.
pub type LayerFn<'a> = dyn FnMut(&Value) -> Result<Value> + 'a;

/// Callback that samples one child value.
pub type ChildSampler<'a> = dyn FnMut(&mut dyn RngCore) -> Value + 'a;

/// A monad on set-like carriers, acting on one container layer of a [`Value`].
pub trait Monad: Send + Sync {
    fn tag(&self) -> Tag;

    fn name(&self) -> String {
        self.tag().to_string()
    }

    /// η: wraps `x` in a new outermost layer.
    fn unit(&self, x: Value) -> Value;

    /// μ: flattens the two outermost layers.
    fn join(&self, x: &Value) -> Result<Value>;

    /// Tf: applies `f` to every child of the outermost layer and returns the
    /// result in canonical form.
    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value>;

    /// All values `k` with `join(k) == x`, canonically ordered. Only
    /// instances with finite fibers implement this.
    fn mu_fiber(&self, x: &Value, limits: &Limits) -> Result<Vec<Value>> {
        let _ = (x, limits);
        Err(Error::UnsupportedInstance(format!(
            "the {} monad has no finite μ-fiber enumerator",
            self.name()
        )))
    }

    /// Samples one container layer whose children come from `child`.
    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value;

    fn as_any(&self) -> &dyn Any;
}

/// The underlying set of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    /// An explicit finite set, stored sorted and without duplicates.
    Finite(Vec<Atom>),
    /// The natural numbers, enumerated lazily.
    Naturals,
    /// ℚ^dim.
    Rationals { dim: usize },
}

impl Carrier {
    pub fn finite(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        if let Some(w) = atoms.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidStructure(format!(
                "carrier lists {} twice",
                w[0]
            )));
        }
        Ok(Carrier::Finite(atoms))
    }

    pub fn contains(&self, a: &Atom) -> bool {
        match (self, a) {
            (Carrier::Finite(atoms), _) => atoms.binary_search(a).is_ok(),
            (Carrier::Naturals, Atom::Int(n)) => n >= &BigInt::from(0),
            (Carrier::Rationals { dim }, Atom::Point(p)) => p.dim() == *dim,
            _ => false,
        }
    }

    /// Draws an atom. Naturals come from 0..=9; rational coordinates have
    /// numerators in -6..=6 and denominators in 1..=4.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Atom {
        match self {
            Carrier::Finite(atoms) => atoms[rng.gen_range(0..atoms.len())].clone(),
            Carrier::Naturals => Atom::int(rng.gen_range(0..=9)),
            Carrier::Rationals { dim } => Atom::Point(Point(
                (0..*dim)
                    .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
                    .collect(),
            )),
        }
    }
}

/// An Eilenberg–Moore algebra: a carrier with an evaluation map e : TA → A.
pub trait Algebra: Send + Sync {
    fn monad(&self) -> &dyn Monad;

    fn carrier(&self) -> &Carrier;

    fn contains(&self, a: &Atom) -> bool {
        self.carrier().contains(a)
    }

    /// e on a depth-1 value.
    fn eval(&self, x: &Value) -> Result<Atom>;

    fn name(&self) -> String;

    fn as_any(&self) -> &dyn Any;
}

/// Applies `f` under `layers` container layers (`layers == 0` applies it to
/// `x` itself).
pub fn map_under(m: &dyn Monad, x: &Value, layers: usize, f: &mut LayerFn<'_>) -> Result<Value> {
    if layers == 0 {
        f(x)
    } else {
        m.map(x, &mut |child| map_under(m, child, layers - 1, f))
    }
}

/// T^j μ: flattens layers `j` and `j + 1`, counted from the outside.
pub fn mu_at(m: &dyn Monad, x: &Nested, j: usize) -> Result<Nested> {
    if x.depth() < j + 2 {
        return Err(Error::DepthMismatch {
            expected: format!("at least {}", j + 2),
            found: x.depth(),
        });
    }
    let v = map_under(m, x.value(), j, &mut |v| m.join(v))?;
    Ok(Nested::new_unchecked(x.depth() - 1, v))
}

/// T^j η: inserts a singleton layer beneath the outermost `j` layers.
pub fn eta_at(m: &dyn Monad, x: &Nested, j: usize) -> Result<Nested> {
    if x.depth() < j {
        return Err(Error::DepthMismatch {
            expected: format!("at least {j}"),
            found: x.depth(),
        });
    }
    let v = map_under(m, x.value(), j, &mut |v| Ok(m.unit(v.clone())))?;
    Ok(Nested::new_unchecked(x.depth() + 1, v))
}

/// T^j e: evaluates the innermost layer. `x` must have depth `j + 1`.
pub fn eval_at(alg: &dyn Algebra, x: &Nested, j: usize) -> Result<Nested> {
    x.require_depth(j + 1)?;
    let v = map_under(alg.monad(), x.value(), j, &mut |v| {
        Ok(Value::Atom(alg.eval(v)?))
    })?;
    Ok(Nested::new_unchecked(j, v))
}

/// Applies an atom function under every container layer of `x`.
pub fn functor_apply(
    m: &dyn Monad,
    f: &dyn Fn(&Atom) -> Option<Atom>,
    x: &Nested,
) -> Result<Nested> {
    if x.depth() == 0 {
        return Err(Error::DepthMismatch {
            expected: "at least 1".into(),
            found: 0,
        });
    }
    let v = map_under(m, x.value(), x.depth(), &mut |v| {
        let a = v.expect_atom()?;
        f(a).map(Value::Atom)
            .ok_or_else(|| Error::PartialFunction(a.to_string()))
    })?;
    Ok(Nested::new_unchecked(x.depth(), v))
}

/// Samples a value of the given depth with atoms drawn from `carrier`.
pub fn sample_nested(
    m: &dyn Monad,
    carrier: &Carrier,
    depth: usize,
    rng: &mut dyn RngCore,
) -> Nested {
    fn go(m: &dyn Monad, carrier: &Carrier, depth: usize, rng: &mut dyn RngCore) -> Value {
        if depth == 0 {
            Value::Atom(carrier.sample(rng))
        } else {
            m.sample_layer(rng, &mut |rng| go(m, carrier, depth - 1, rng))
        }
    }
    Nested::new_unchecked(depth, go(m, carrier, depth, rng))
}

/// A failing input for a law, with both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub input: Value,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawVerdict {
    pub law: &'static str,
    /// Number of (sample, law) instances evaluated.
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl LawVerdict {
    pub(crate) fn new(law: &'static str) -> Self {
        LawVerdict {
            law,
            checked: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Records one comparison; keeps only the first failure.
    pub(crate) fn record(&mut self, input: &Value, lhs: Result<Value>, rhs: Result<Value>) {
        self.checked += 1;
        if self.counterexample.is_some() {
            return;
        }
        let detail = match (&lhs, &rhs) {
            (Ok(l), Ok(r)) if l == r => return,
            (Ok(l), Ok(r)) => format!("{l} != {r}"),
            (Err(e), _) | (_, Err(e)) => format!("evaluation failed: {e}"),
        };
        self.counterexample = Some(Counterexample {
            input: input.clone(),
            detail,
        });
    }
}

/// Per-law verdicts of a law check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub verdicts: Vec<LawVerdict>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(LawVerdict::passed)
    }

    pub fn verdict(&self, law: &str) -> Option<&LawVerdict> {
        self.verdicts.iter().find(|v| v.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawVerdict> {
        self.verdicts.iter().filter(|v| !v.passed())
    }
}

// Deterministic, non-injective atom functions for the functor laws.
fn scramble(a: &Atom) -> Atom {
    let h = a
        .to_string()
        .bytes()
        .fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    Atom::int((h % 3) as i64)
}

fn relabel(a: &Atom) -> Atom {
    Atom::Sym(format!("g{a}"))
}

pub const FUNCTOR_IDENTITY: &str = "functor-identity";
pub const FUNCTOR_COMPOSITION: &str = "functor-composition";
pub const LEFT_UNIT: &str = "left-unit";
pub const RIGHT_UNIT: &str = "right-unit";
pub const ASSOCIATIVITY: &str = "associativity";
pub const ALGEBRA_UNIT: &str = "algebra-unit";
pub const ALGEBRA_MULTIPLICATION: &str = "algebra-multiplication";

/// Checks the functor laws and μ∘ηT = id, μ∘Tη = id (depth ≥ 1) and
/// μ∘Tμ = μ∘μT (depth ≥ 3) on every sample.
pub fn check_monad_laws(m: &dyn Monad, samples: &[Nested]) -> Result<LawReport> {
    if let Some(bad) = samples.iter().find(|s| s.depth() == 0) {
        return Err(Error::DepthMismatch {
            expected: "at least 1".into(),
            found: bad.depth(),
        });
    }
    let mut ident = LawVerdict::new(FUNCTOR_IDENTITY);
    let mut comp = LawVerdict::new(FUNCTOR_COMPOSITION);
    let mut left = LawVerdict::new(LEFT_UNIT);
    let mut right = LawVerdict::new(RIGHT_UNIT);
    let mut assoc = LawVerdict::new(ASSOCIATIVITY);

    for s in samples {
        let x = s.value();
        ident.record(
            x,
            functor_apply(m, &|a| Some(a.clone()), s).map(Nested::into_value),
            Ok(x.clone()),
        );
        comp.record(
            x,
            functor_apply(m, &|a| Some(scramble(a)), s)
                .and_then(|y| functor_apply(m, &|a| Some(relabel(a)), &y))
                .map(Nested::into_value),
            functor_apply(m, &|a| Some(relabel(&scramble(a))), s).map(Nested::into_value),
        );
        left.record(x, m.join(&m.unit(x.clone())), Ok(x.clone()));
        right.record(
            x,
            m.map(x, &mut |c| Ok(m.unit(c.clone())))
                .and_then(|y| m.join(&y)),
            Ok(x.clone()),
        );
        if s.depth() >= 3 {
            assoc.record(
                x,
                m.map(x, &mut |c| m.join(c)).and_then(|y| m.join(&y)),
                m.join(x).and_then(|y| m.join(&y)),
            );
        }
    }
    Ok(LawReport {
        verdicts: vec![ident, comp, left, right, assoc],
    })
}

/// Checks e∘η = id on the atoms of depth-1 samples and e∘Te = e∘μ on
/// depth-2 samples.
pub fn check_algebra_laws(alg: &dyn Algebra, samples: &[Nested]) -> Result<LawReport> {
    for s in samples {
        if !(1..=2).contains(&s.depth()) {
            return Err(Error::DepthMismatch {
                expected: "1 or 2".into(),
                found: s.depth(),
            });
        }
        if let Some(a) = s.value().atoms().into_iter().find(|a| !alg.contains(a)) {
            return Err(Error::CarrierMismatch(a.to_string()));
        }
    }
    let m = alg.monad();
    let mut unit = LawVerdict::new(ALGEBRA_UNIT);
    let mut mult = LawVerdict::new(ALGEBRA_MULTIPLICATION);
    for s in samples {
        match s.depth() {
            1 => {
                let mut atoms: Vec<&Atom> = s.value().atoms();
                atoms.sort();
                atoms.dedup();
                for a in atoms {
                    let x = Value::Atom(a.clone());
                    unit.record(
                        &x,
                        alg.eval(&m.unit(x.clone())).map(Value::Atom),
                        Ok(x.clone()),
                    );
                }
            }
            _ => {
                let x = s.value();
                mult.record(
                    x,
                    eval_at(alg, s, 1)
                        .and_then(|y| alg.eval(y.value()))
                        .map(Value::Atom),
                    m.join(x).and_then(|y| alg.eval(&y)).map(Value::Atom),
                );
            }
        }
    }
    Ok(LawReport {
        verdicts: vec![unit, mult],
    })
}
