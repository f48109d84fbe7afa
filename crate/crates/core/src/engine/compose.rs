//! Composition of partial evaluations through fillers.
//!
//! Given `k: p → q` and `h: q → r`, a filler is a depth-3 value `a` with
//! `μ(a) = k` and `TTe(a) = h`. Its inner flattening `Tμ(a)` witnesses
//! `p → r`.

use std::collections::BTreeMap;

use super::{as_convex, Witness};
use crate::error::{Error, Result};
use crate::instances::action::expect_act;
use crate::instances::list::expect_seq;
use crate::instances::multiset::expect_bag;
use crate::instances::{point_dist, point_dist2, point_dist2_value, ActionMonad};
use crate::monad::{eval_at, mu_at, Algebra, Limits, Tag};
use crate::multiset::Multiset;
use crate::stochastics::{compose_kernels, dilation_from_witness, witness_from_dilation};
use crate::value::{Atom, Nested, Value};

fn check_composable(alg: &dyn Algebra, k: &Witness, h: &Witness) -> Result<()> {
    for w in [k, h] {
        if !super::validate_witness(alg, w) {
            return Err(Error::InvalidWitness(format!(
                "{} does not witness {} → {}",
                w.nesting, w.source, w.target
            )));
        }
    }
    if k.target != h.source {
        return Err(Error::NotComposable(format!(
            "first target {} differs from second source {}",
            k.target, h.source
        )));
    }
    Ok(())
}

/// Rejects a candidate filler whose boundaries are not `k` and `h`.
fn confirm(alg: &dyn Algebra, a: Value, k: &Witness, h: &Witness) -> Result<Nested> {
    let a = Nested::new(3, a)?;
    if mu_at(alg.monad(), &a, 0)? != k.nesting || eval_at(alg, &a, 2)? != h.nesting {
        return Err(Error::FillerNotFound(format!(
            "{a} does not fill the horn ({}, {})",
            k.nesting, h.nesting
        )));
    }
    Ok(a)
}

/// The deterministic filler used by [`compose_witnesses`].
pub fn canonical_filler(alg: &dyn Algebra, k: &Witness, h: &Witness) -> Result<Nested> {
    check_composable(alg, k, h)?;
    let a = match alg.monad().tag() {
        Tag::Multiset => {
            let mut out = multiset_fillers(alg, k, h, false, &Limits::default())?;
            out.pop().expect("one canonical matching")
        }
        Tag::List => list_filler(k, h)?,
        Tag::Action => action_filler(alg, k, h)?,
        Tag::Terminal => Value::Unit,
        Tag::Distribution => {
            return Err(Error::UnsupportedInstance(
                "distribution fillers are not materialized; compose through dilations".into(),
            ))
        }
    };
    confirm(alg, a, k, h)
}

/// Every filler of the horn `(k, h)`, one per value-preserving matching, with
/// the canonical matching first. For multisets, matchings that differ only by
/// swapping equal blocks yield equal values and are all listed.
pub fn enumerate_fillers(
    alg: &dyn Algebra,
    k: &Witness,
    h: &Witness,
    limits: &Limits,
) -> Result<Vec<Nested>> {
    check_composable(alg, k, h)?;
    let values = match alg.monad().tag() {
        Tag::Multiset => multiset_fillers(alg, k, h, true, limits)?,
        Tag::List | Tag::Action | Tag::Terminal => vec![canonical_filler(alg, k, h)?.into_value()],
        Tag::Distribution => {
            return Err(Error::UnsupportedInstance(
                "distribution fillers form a continuum".into(),
            ))
        }
    };
    values.into_iter().map(|a| confirm(alg, a, k, h)).collect()
}

/// Composes `k: p → q` with `h: q → r` into a witness of `p → r`.
pub fn compose_witnesses(alg: &dyn Algebra, k: &Witness, h: &Witness) -> Result<Witness> {
    let composite = if alg.monad().tag() == Tag::Distribution {
        check_composable(alg, k, h)?;
        compose_through_dilations(alg, k, h)?
    } else {
        let a = canonical_filler(alg, k, h)?;
        mu_at(alg.monad(), &a, 1)?
    };
    let w = Witness::from_nesting(alg, composite)?;
    if w.source != k.source || w.target != h.target {
        return Err(Error::FillerNotFound(format!(
            "composite witnesses {} → {}, expected {} → {}",
            w.source, w.target, k.source, h.target
        )));
    }
    Ok(w)
}

fn compose_through_dilations(alg: &dyn Algebra, k: &Witness, h: &Witness) -> Result<Nested> {
    let convex = as_convex(alg)?;
    let spread_q = dilation_from_witness(
        &point_dist2(k.nesting.value())?,
        &point_dist(k.target.value())?,
        convex,
    )?;
    let spread_r = dilation_from_witness(
        &point_dist2(h.nesting.value())?,
        &point_dist(h.target.value())?,
        convex,
    )?;
    let spread = compose_kernels(&spread_r, &spread_q)?;
    Nested::new(2, point_dist2_value(&witness_from_dilation(&spread)?))
}

fn list_filler(k: &Witness, h: &Witness) -> Result<Value> {
    let blocks = expect_seq(k.nesting.value())?;
    let mut groups = Vec::new();
    let mut start = 0;
    for hb in expect_seq(h.nesting.value())? {
        let len = expect_seq(hb)?.len();
        let end = start + len;
        if end > blocks.len() {
            return Err(Error::FillerNotFound(
                "second witness has too many items".into(),
            ));
        }
        groups.push(Value::Seq(blocks[start..end].to_vec()));
        start = end;
    }
    if start != blocks.len() {
        return Err(Error::FillerNotFound(
            "second witness has too few items".into(),
        ));
    }
    Ok(Value::Seq(groups))
}

fn action_filler(alg: &dyn Algebra, k: &Witness, h: &Witness) -> Result<Value> {
    alg.monad()
        .as_any()
        .downcast_ref::<ActionMonad>()
        .ok_or_else(|| Error::UnsupportedInstance(format!("{} has no monoid", alg.name())))?;
    // k = (h1; (l1; x)), h = (h2; (l2; y)) with h1 = h2·l2 and y = l1·x
    let (_, k_inner) = expect_act(k.nesting.value())?;
    let (h2, h_inner) = expect_act(h.nesting.value())?;
    let (l2, _) = expect_act(h_inner)?;
    Ok(Value::act(
        h2.clone(),
        Value::act(l2.clone(), k_inner.clone()),
    ))
}

fn factorial_product(sizes: impl Iterator<Item = usize>) -> usize {
    sizes
        .flat_map(|n| 1..=n)
        .fold(1usize, |acc, i| acc.saturating_mul(i))
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            acc.push(x);
            go(rest, acc, out);
            acc.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Fillers for the multiset monad. Each occurrence of a value `v` inside the
/// blocks of `h` is matched to a block of `k` evaluating to `v`; the blocks
/// of `k` matched into one block of `h` form one group of the filler.
fn multiset_fillers(
    alg: &dyn Algebra,
    k: &Witness,
    h: &Witness,
    all: bool,
    limits: &Limits,
) -> Result<Vec<Value>> {
    let k_blocks: Vec<&Value> = expect_bag(k.nesting.value())?.occurrences().collect();
    let mut by_value: BTreeMap<Atom, Vec<usize>> = BTreeMap::new();
    for (i, b) in k_blocks.iter().enumerate() {
        by_value.entry(alg.eval(b)?).or_default().push(i);
    }
    // slots: (block of h, value) for every atom occurrence inside h's blocks
    let mut slots: Vec<(usize, Atom)> = Vec::new();
    let h_blocks: Vec<&Value> = expect_bag(h.nesting.value())?.occurrences().collect();
    for (j, hb) in h_blocks.iter().enumerate() {
        for v in expect_bag(hb)?.occurrences() {
            slots.push((j, v.expect_atom()?.clone()));
        }
    }
    let mut slots_by_value: BTreeMap<Atom, Vec<usize>> = BTreeMap::new();
    for (s, (_, v)) in slots.iter().enumerate() {
        slots_by_value.entry(v.clone()).or_default().push(s);
    }
    if by_value.len() != slots_by_value.len()
        || by_value
            .iter()
            .zip(&slots_by_value)
            .any(|((a, xs), (b, ys))| a != b || xs.len() != ys.len())
    {
        return Err(Error::FillerNotFound(
            "block results of the first witness do not match the second".into(),
        ));
    }

    let groups: Vec<(&Vec<usize>, &Vec<usize>)> =
        by_value.values().zip(slots_by_value.values()).collect();
    let count = if all {
        factorial_product(groups.iter().map(|(xs, _)| xs.len()))
    } else {
        1
    };
    if count > limits.fillers {
        return Err(Error::EnumerationLimitExceeded {
            what: "filler matchings",
            size: count,
            limit: limits.fillers,
        });
    }
    let perms: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .map(|(xs, _)| {
            if all {
                permutations(xs.len())
            } else {
                vec![(0..xs.len()).collect()]
            }
        })
        .collect();

    let build = |choice: &[usize]| -> Value {
        // slot -> block of k
        let mut assigned = vec![0usize; slots.len()];
        for ((blocks, slot_ids), (perm_set, &c)) in groups.iter().zip(perms.iter().zip(choice)) {
            for (slot, &pi) in slot_ids.iter().zip(&perm_set[c]) {
                assigned[*slot] = blocks[pi];
            }
        }
        let mut grouped: Vec<Vec<Value>> = vec![Vec::new(); h_blocks.len()];
        for (s, (j, _)) in slots.iter().enumerate() {
            grouped[*j].push(k_blocks[assigned[s]].clone());
        }
        Value::Bag(Multiset::from_iter(
            grouped
                .into_iter()
                .map(|g| Value::Bag(Multiset::from_iter(g))),
        ))
    };

    // odometer over the permutation index of each value group
    let mut out = Vec::new();
    let mut choice = vec![0usize; perms.len()];
    loop {
        out.push(build(&choice));
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < perms[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
