//! Deliberately broken instances, for checking that law checks catch faults.

use std::any::Any;
use std::sync::Arc;

use rand::RngCore;

use crate::error::Result;
use crate::instances::action::expect_act;
use crate::instances::ActionAlgebra;
use crate::monad::{Algebra, Carrier, ChildSampler, LayerFn, Limits, Monad, Tag};
use crate::value::{Atom, Value};

/// Wraps a monad so that its unit inserts two layers instead of one. Both
/// unit laws fail on every sample.
#[derive(Clone)]
pub struct DoubledUnit {
    inner: Arc<dyn Monad>,
}

impl DoubledUnit {
    pub fn new(inner: Arc<dyn Monad>) -> Self {
        DoubledUnit { inner }
    }
}

impl Monad for DoubledUnit {
    fn tag(&self) -> Tag {
        self.inner.tag()
    }

    fn name(&self) -> String {
        format!("{} with a doubled unit", self.inner.name())
    }

    fn unit(&self, x: Value) -> Value {
        self.inner.unit(self.inner.unit(x))
    }

    fn join(&self, x: &Value) -> Result<Value> {
        self.inner.join(x)
    }

    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value> {
        self.inner.map(x, f)
    }

    fn mu_fiber(&self, x: &Value, limits: &Limits) -> Result<Vec<Value>> {
        self.inner.mu_fiber(x, limits)
    }

    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value {
        self.inner.sample_layer(rng, child)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Wraps an algebra so that a layer with exactly two distinct children
/// evaluates to its first child alone. Layers with one child are untouched,
/// so the unit law holds; the multiplication law fails once a nesting mixes
/// pair layers with other layers.
#[derive(Clone)]
pub struct PairShortcut<A> {
    inner: A,
}

impl<A: Algebra> PairShortcut<A> {
    pub fn new(inner: A) -> Self {
        PairShortcut { inner }
    }
}

impl<A: Algebra + 'static> Algebra for PairShortcut<A> {
    fn monad(&self) -> &dyn Monad {
        self.inner.monad()
    }

    fn carrier(&self) -> &Carrier {
        self.inner.carrier()
    }

    fn contains(&self, a: &Atom) -> bool {
        self.inner.contains(a)
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        let m = self.inner.monad();
        let mut children: Vec<Value> = Vec::new();
        m.map(x, &mut |c| {
            if !children.contains(c) {
                children.push(c.clone());
            }
            Ok(c.clone())
        })?;
        match children.as_slice() {
            [first, _] => self.inner.eval(&m.unit(first.clone())),
            _ => self.inner.eval(x),
        }
    }

    fn name(&self) -> String {
        format!("{} with a pair shortcut", self.inner.name())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Wraps an action algebra so that one non-identity element acts as the
/// identity. The unit law still holds; the multiplication law fails as soon
/// as that element really moved something.
#[derive(Clone)]
pub struct IdleElement {
    inner: ActionAlgebra,
    idle: Option<Atom>,
}

impl IdleElement {
    /// Idles the first non-identity element of the monoid.
    pub fn new(inner: ActionAlgebra) -> Self {
        let id = inner.monoid().identity().clone();
        let idle = inner
            .monoid()
            .elements()
            .iter()
            .find(|g| **g != id)
            .cloned();
        IdleElement { inner, idle }
    }
}

impl Algebra for IdleElement {
    fn monad(&self) -> &dyn Monad {
        self.inner.monad()
    }

    fn carrier(&self) -> &Carrier {
        self.inner.carrier()
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        let (g, inner) = expect_act(x)?;
        if Some(g) == self.idle.as_ref() {
            return Ok(inner.expect_atom()?.clone());
        }
        self.inner.eval(x)
    }

    fn name(&self) -> String {
        format!("{} with an idle element", self.inner.name())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::FiniteMonoid;
    use crate::monad::{check_algebra_laws, sample_nested, ALGEBRA_MULTIPLICATION, ALGEBRA_UNIT};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn idle_element_breaks_only_multiplication() {
        let bad = IdleElement::new(ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(4))));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<_> = (0..100)
            .map(|i| sample_nested(bad.monad(), bad.carrier(), 1 + i % 2, &mut rng))
            .collect();
        let report = check_algebra_laws(&bad, &xs).unwrap();
        assert!(report.verdict(ALGEBRA_UNIT).unwrap().passed());
        assert!(report
            .verdict(ALGEBRA_MULTIPLICATION)
            .unwrap()
            .counterexample
            .is_some());
    }
}
