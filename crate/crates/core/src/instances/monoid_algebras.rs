use std::any::Any;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::action::FiniteMonoid;
use super::list::ListMonad;
use super::multiset::MultisetMonad;
use crate::error::{Error, Result};
use crate::monad::{Algebra, Carrier, Monad, Tag};
use crate::value::{Atom, Value};

/// Operands of one layer, as occurrences in canonical order.
fn operands(x: &Value) -> Result<Vec<&Value>> {
    match x {
        Value::Bag(m) => Ok(m.occurrences().collect()),
        Value::Seq(items) => Ok(items.iter().collect()),
        other => Err(Error::Malformed(format!(
            "expected a multiset or a list, found {other}"
        ))),
    }
}

/// The natural numbers under addition, an algebra of both the multiset and
/// the list monad.
#[derive(Clone)]
pub struct NatSum {
    monad: Arc<dyn Monad>,
}

impl NatSum {
    pub fn multiset() -> Self {
        Self::with_monad(Arc::new(MultisetMonad))
    }

    pub fn list() -> Self {
        Self::with_monad(Arc::new(ListMonad))
    }

    /// Pairs the evaluation with any monad whose layers are bags or lists,
    /// e.g. an instrumented wrapper around [`MultisetMonad`].
    pub fn with_monad(monad: Arc<dyn Monad>) -> Self {
        NatSum { monad }
    }
}

impl Algebra for NatSum {
    fn monad(&self) -> &dyn Monad {
        self.monad.as_ref()
    }

    fn carrier(&self) -> &Carrier {
        static NATURALS: Carrier = Carrier::Naturals;
        &NATURALS
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        let mut total = BigInt::zero();
        for v in operands(x)? {
            match v.expect_atom()? {
                Atom::Int(n) if !n.is_negative() => total += n,
                other => return Err(Error::CarrierMismatch(other.to_string())),
            }
        }
        Ok(Atom::Int(total))
    }

    fn name(&self) -> String {
        "nat-add".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A finite monoid as an algebra of the list monad, or of the multiset
/// monad when the monoid is commutative.
#[derive(Clone)]
pub struct MonoidAlgebra {
    monad: Arc<dyn Monad>,
    monoid: Arc<FiniteMonoid>,
    carrier: Carrier,
}

impl MonoidAlgebra {
    pub fn list(monoid: Arc<FiniteMonoid>) -> Self {
        let carrier = Carrier::finite(monoid.elements().iter().cloned())
            .expect("monoid elements are distinct");
        MonoidAlgebra {
            monad: Arc::new(ListMonad),
            monoid,
            carrier,
        }
    }

    pub fn multiset(monoid: Arc<FiniteMonoid>) -> Result<Self> {
        if !monoid.is_commutative() {
            return Err(Error::InvalidStructure(
                "a multiset algebra needs a commutative monoid".into(),
            ));
        }
        let carrier = Carrier::finite(monoid.elements().iter().cloned())?;
        Ok(MonoidAlgebra {
            monad: Arc::new(MultisetMonad),
            monoid,
            carrier,
        })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }
}

impl Algebra for MonoidAlgebra {
    fn monad(&self) -> &dyn Monad {
        self.monad.as_ref()
    }

    fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        let mut acc = self.monoid.identity().clone();
        for v in operands(x)? {
            acc = self.monoid.op(&acc, v.expect_atom()?)?;
        }
        Ok(acc)
    }

    fn name(&self) -> String {
        let kind = match self.monad.tag() {
            Tag::Multiset => "commutative monoid",
            _ => "monoid",
        };
        format!("{kind} of order {}", self.monoid.elements().len())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
