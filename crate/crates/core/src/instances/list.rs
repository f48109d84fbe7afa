use std::any::Any;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::monad::{ChildSampler, LayerFn, Limits, Monad, Tag};
use crate::value::Value;

/// The free monoid (list) monad.
#[derive(Clone, Copy, Debug, Default)]
pub struct ListMonad;

pub(crate) fn expect_seq(x: &Value) -> Result<&[Value]> {
    match x {
        Value::Seq(items) => Ok(items),
        other => Err(Error::Malformed(format!("expected a list, found {other}"))),
    }
}

impl Monad for ListMonad {
    fn tag(&self) -> Tag {
        Tag::List
    }

    fn unit(&self, x: Value) -> Value {
        Value::Seq(vec![x])
    }

    fn join(&self, x: &Value) -> Result<Value> {
        let mut flat = Vec::new();
        for block in expect_seq(x)? {
            flat.extend(expect_seq(block)?.iter().cloned());
        }
        Ok(Value::Seq(flat))
    }

    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value> {
        let items = expect_seq(x)?.iter().map(f).collect::<Result<_>>()?;
        Ok(Value::Seq(items))
    }

    fn mu_fiber(&self, x: &Value, limits: &Limits) -> Result<Vec<Value>> {
        list_mu_fiber(expect_seq(x)?, limits)
    }

    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value {
        let n = rng.gen_range(0..=3);
        Value::seq((0..n).map(|_| child(rng)))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// All ways to cut `p` into contiguous nonempty blocks: 2^(n-1) of them for
/// length n ≥ 1, one (no blocks) for the empty list.
pub fn list_mu_fiber(p: &[Value], limits: &Limits) -> Result<Vec<Value>> {
    if p.len() > limits.fiber {
        return Err(Error::EnumerationLimitExceeded {
            what: "list length",
            size: p.len(),
            limit: limits.fiber,
        });
    }
    if p.is_empty() {
        return Ok(vec![Value::Seq(Vec::new())]);
    }
    let gaps = p.len() - 1;
    let mut out: Vec<Value> = (0u64..1 << gaps)
        .map(|cuts| {
            let mut blocks = Vec::new();
            let mut start = 0;
            for i in 0..gaps {
                if cuts & (1 << i) != 0 {
                    blocks.push(Value::Seq(p[start..=i].to_vec()));
                    start = i + 1;
                }
            }
            blocks.push(Value::Seq(p[start..].to_vec()));
            Value::Seq(blocks)
        })
        .collect();
    out.sort();
    Ok(out)
}
