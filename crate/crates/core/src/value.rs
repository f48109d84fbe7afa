//! Atoms, nested expressions, and their canonical forms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// Exact rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A point of ℚ^d, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<BigRational>);

impl Point {
    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn scalar(x: BigRational) -> Self {
        Point(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// An element of a carrier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Int(BigInt),
    Sym(String),
    Point(Point),
}

impl Atom {
    pub fn int(n: i64) -> Self {
        Atom::Int(BigInt::from(n))
    }

    pub fn sym(s: &str) -> Self {
        Atom::Sym(s.to_owned())
    }

    pub fn point(coords: &[i64]) -> Self {
        Atom::Point(Point::from_ints(coords))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Atom::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<&Point> {
        match self {
            Atom::Point(p) => Some(p),
            _ => None,
        }
    }
}

impl From<i64> for Atom {
    fn from(n: i64) -> Self {
        Atom::int(n)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::sym(s)
    }
}

impl From<Point> for Atom {
    fn from(p: Point) -> Self {
        Atom::Point(p)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Sym(s) => f.write_str(s),
            Atom::Point(p) => write!(f, "{p}"),
        }
    }
}

/// One node of a nested formal expression. Which container variant appears
/// is fixed by the monad instance; `Atom` sits at depth zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(Atom),
    /// Free commutative monoid layer.
    Bag(Multiset<Value>),
    /// Free monoid layer.
    Seq(Vec<Value>),
    /// Action monad layer: a monoid element paired with the inner value.
    Act(Atom, Box<Value>),
    /// Distribution monad layer.
    Dist(Distribution<Value>),
    /// The single element of the terminal monad, at every depth.
    Unit,
}

impl Value {
    pub fn bag(items: impl IntoIterator<Item = Value>) -> Self {
        Value::Bag(items.into_iter().collect())
    }

    pub fn seq(items: impl IntoIterator<Item = Value>) -> Self {
        Value::Seq(items.into_iter().collect())
    }

    pub fn act(g: impl Into<Atom>, inner: Value) -> Self {
        Value::Act(g.into(), Box::new(inner))
    }

    pub fn ints_bag(xs: &[i64]) -> Self {
        Value::bag(xs.iter().map(|&x| Value::from(x)))
    }

    pub fn syms_seq(xs: &[&str]) -> Self {
        Value::seq(xs.iter().map(|&x| Value::from(x)))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Value::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn expect_atom(&self) -> Result<&Atom> {
        self.as_atom()
            .ok_or_else(|| Error::Malformed(format!("expected an atom, found {self}")))
    }

    /// Whether this value has uniform nesting depth `depth` on every branch.
    /// Empty containers are compatible with any depth of at least one.
    pub fn conforms_to_depth(&self, depth: usize) -> bool {
        match self {
            Value::Atom(_) => depth == 0,
            Value::Unit => depth >= 1,
            _ if depth == 0 => false,
            Value::Bag(m) => m
                .entries()
                .iter()
                .all(|(v, _)| v.conforms_to_depth(depth - 1)),
            Value::Seq(items) => items.iter().all(|v| v.conforms_to_depth(depth - 1)),
            Value::Act(_, inner) => inner.conforms_to_depth(depth - 1),
            Value::Dist(d) => d.points().all(|v| v.conforms_to_depth(depth - 1)),
        }
    }

    /// All carrier atoms at the bottom of the nesting, in traversal order.
    /// Monoid labels of action layers are not carrier atoms and are skipped.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Value::Atom(a) => out.push(a),
            Value::Bag(m) => m.entries().iter().for_each(|(v, _)| v.collect_atoms(out)),
            Value::Seq(items) => items.iter().for_each(|v| v.collect_atoms(out)),
            Value::Act(_, inner) => inner.collect_atoms(out),
            Value::Dist(d) => d.points().for_each(|v| v.collect_atoms(out)),
            Value::Unit => {}
        }
    }
}

impl From<Atom> for Value {
    fn from(a: Atom) -> Self {
        Value::Atom(a)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Atom(Atom::int(n))
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Atom(Atom::sym(s))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => write!(f, "{a}"),
            Value::Bag(m) => write!(f, "{m}"),
            Value::Seq(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Value::Act(g, inner) => write!(f, "({g}; {inner})"),
            Value::Dist(d) => write!(f, "{d}"),
            Value::Unit => f.write_str("*"),
        }
    }
}

/// A value of T^depth A together with its declared depth.
///
/// Depth is carried explicitly because empty containers do not determine it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nested {
    depth: usize,
    value: Value,
}

impl Nested {
    pub fn new(depth: usize, value: Value) -> Result<Self> {
        if !value.conforms_to_depth(depth) {
            return Err(Error::DepthMismatch {
                expected: format!("a value of uniform depth {depth}"),
                found: observed_depth(&value),
            });
        }
        Ok(Nested { depth, value })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub(crate) fn new_unchecked(depth: usize, value: Value) -> Self {
        debug_assert!(value.conforms_to_depth(depth), "{value} at depth {depth}");
        Nested { depth, value }
    }

    pub fn require_depth(&self, depth: usize) -> Result<()> {
        if self.depth != depth {
            return Err(Error::DepthMismatch {
                expected: depth.to_string(),
                found: self.depth,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Nested {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Depth along the first nonempty branch; used only for diagnostics.
fn observed_depth(v: &Value) -> usize {
    match v {
        Value::Atom(_) => 0,
        Value::Unit => 1,
        Value::Bag(m) => 1 + m.entries().first().map_or(0, |(x, _)| observed_depth(x)),
        Value::Seq(items) => 1 + items.first().map_or(0, observed_depth),
        Value::Act(_, inner) => 1 + observed_depth(inner),
        Value::Dist(d) => 1 + d.points().next().map_or(0, observed_depth),
    }
}
