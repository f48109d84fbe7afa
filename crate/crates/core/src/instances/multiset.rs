use std::any::Any;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::monad::{ChildSampler, LayerFn, Limits, Monad, Tag};
use crate::multiset::Multiset;
use crate::value::Value;

/// The free commutative monoid (bag) monad.
#[derive(Clone, Copy, Debug, Default)]
pub struct MultisetMonad;

pub(crate) fn expect_bag(x: &Value) -> Result<&Multiset<Value>> {
    match x {
        Value::Bag(m) => Ok(m),
        other => Err(Error::Malformed(format!(
            "expected a multiset, found {other}"
        ))),
    }
}

impl Monad for MultisetMonad {
    fn tag(&self) -> Tag {
        Tag::Multiset
    }

    fn unit(&self, x: Value) -> Value {
        Value::Bag(Multiset::singleton(x))
    }

    fn join(&self, x: &Value) -> Result<Value> {
        let outer = expect_bag(x)?;
        let mut counts = Vec::new();
        for (block, m) in outer.entries() {
            for (v, n) in expect_bag(block)?.entries() {
                counts.push((v.clone(), m * n));
            }
        }
        Ok(Value::Bag(Multiset::from_counts(counts)))
    }

    fn map(&self, x: &Value, f: &mut LayerFn<'_>) -> Result<Value> {
        let outer = expect_bag(x)?;
        let counts = outer
            .entries()
            .iter()
            .map(|(v, m)| Ok((f(v)?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::Bag(Multiset::from_counts(counts)))
    }

    fn mu_fiber(&self, x: &Value, limits: &Limits) -> Result<Vec<Value>> {
        multiset_mu_fiber(expect_bag(x)?, limits)
    }

    fn sample_layer(&self, rng: &mut dyn RngCore, child: &mut ChildSampler<'_>) -> Value {
        let n = rng.gen_range(0..=3);
        Value::bag((0..n).map(|_| child(rng)))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// All partitions of `p` into nonempty blocks, as canonical depth-2 bags in
/// ascending order.
pub fn multiset_mu_fiber(p: &Multiset<Value>, limits: &Limits) -> Result<Vec<Value>> {
    let size = p.len() as usize;
    if size > limits.fiber {
        return Err(Error::EnumerationLimitExceeded {
            what: "total multiplicity",
            size,
            limit: limits.fiber,
        });
    }
    let elements: Vec<&Value> = p.entries().iter().map(|(v, _)| v).collect();
    let mut remaining: Vec<u64> = p.entries().iter().map(|(_, m)| *m).collect();
    let mut out = Vec::new();
    partitions(&mut remaining, None, &mut Vec::new(), &mut |blocks| {
        let bag = Multiset::from_iter(blocks.iter().map(|b| {
            Value::Bag(Multiset::from_counts(
                b.iter().zip(&elements).map(|(&n, &v)| (v.clone(), n)),
            ))
        }));
        out.push(Value::Bag(bag));
    });
    out.sort();
    Ok(out)
}

/// Enumerates multiset partitions of the count vector `remaining`.
///
/// Blocks are emitted in non-increasing lexicographic order of their count
/// vectors, so each multiset of blocks is produced exactly once. Each block
/// must contain the smallest remaining element; under that ordering this
/// holds automatically and prunes the search without dead ends.
fn partitions(
    remaining: &mut Vec<u64>,
    prev: Option<&[u64]>,
    acc: &mut Vec<Vec<u64>>,
    emit: &mut dyn FnMut(&[Vec<u64>]),
) {
    let Some(first) = remaining.iter().position(|&c| c > 0) else {
        emit(acc);
        return;
    };
    let mut block = vec![0u64; remaining.len()];
    block[first] = 1;
    loop {
        if prev.is_none_or(|p| block.as_slice() <= p) {
            for (r, b) in remaining.iter_mut().zip(&block) {
                *r -= b;
            }
            acc.push(block.clone());
            let chosen = acc.last().unwrap().clone();
            partitions(remaining, Some(&chosen), acc, emit);
            acc.pop();
            for (r, b) in remaining.iter_mut().zip(&block) {
                *r += b;
            }
        }
        // odometer over block[first..], with block[first] >= 1
        let mut i = remaining.len();
        loop {
            if i == first {
                return;
            }
            i -= 1;
            let lo = if i == first { 1 } else { 0 };
            if block[i] < remaining[i] {
                block[i] += 1;
                break;
            }
            block[i] = lo;
        }
    }
}
