use std::any::Any;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::monad::{Algebra, Carrier, ChildSampler, LayerFn, Limits, Monad, Tag};
use crate::value::{Atom, Value};

/// The terminal monad T X = 1. It is idempotent, so its partial-evaluation
/// relation is equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct TerminalMonad;

fn expect_unit(x: &Value) -> Result<()> {
    match x {
        Value::Unit => Ok(()),
        other => Err(Error::Malformed(format!("expected *, found {other}"))),
    }
}

impl Monad for TerminalMonad {
    fn tag(&self) -> Tag {
        Tag::Terminal
    }

    fn unit(&self, _x: Value) -> Value {
        Value::Unit
    }

    fn join(&self, x: &Value) -> Result<Value> {
        expect_unit(x)?;
        Ok(Value::Unit)
    }

    fn map(&self, x: &Value, _f: &mut LayerFn<'_>) -> Result<Value> {
        expect_unit(x)?;
        Ok(Value::Unit)
    }

    fn mu_fiber(&self, x: &Value, _limits: &Limits) -> Result<Vec<Value>> {
        expect_unit(x)?;
        Ok(vec![Value::Unit])
    }

    fn sample_layer(&self, _rng: &mut dyn RngCore, _child: &mut ChildSampler<'_>) -> Value {
        Value::Unit
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The one-point algebra of the terminal monad.
#[derive(Clone, Debug)]
pub struct TerminalAlgebra {
    carrier: Carrier,
}

impl TerminalAlgebra {
    pub fn point() -> Atom {
        Atom::sym("*")
    }
}

impl Default for TerminalAlgebra {
    fn default() -> Self {
        TerminalAlgebra {
            carrier: Carrier::Finite(vec![Self::point()]),
        }
    }
}

impl Algebra for TerminalAlgebra {
    fn monad(&self) -> &dyn Monad {
        &TerminalMonad
    }

    fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    fn eval(&self, x: &Value) -> Result<Atom> {
        expect_unit(x)?;
        Ok(Self::point())
    }

    fn name(&self) -> String {
        "terminal".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
