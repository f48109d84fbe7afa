use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finitely supported probability distribution with exact rational weights.
///
/// Canonical form: support sorted strictly by point, every weight positive,
/// weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distribution<T> {
    support: Vec<(T, BigRational)>,
}

impl<T: Ord> Distribution<T> {
    pub fn dirac(x: T) -> Self {
        Distribution {
            support: vec![(x, BigRational::one())],
        }
    }

    /// Builds a distribution from weighted points. Equal points are merged,
    /// zero weights pruned. Fails on negative weights or a total other than 1.
    pub fn from_weights(weights: impl IntoIterator<Item = (T, BigRational)>) -> Result<Self> {
        let mut support = merge_weights(weights)?;
        support.retain(|(_, w)| !w.is_zero());
        let total: BigRational = support.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        Ok(Distribution { support })
    }

    /// Builds a distribution from nonnegative masses, normalizing by their total.
    pub fn normalized(masses: impl IntoIterator<Item = (T, BigRational)>) -> Result<Self> {
        let mut support = merge_weights(masses)?;
        support.retain(|(_, w)| !w.is_zero());
        let total: BigRational = support.iter().map(|(_, w)| w).sum();
        if total.is_zero() {
            return Err(Error::Malformed("total mass is zero".into()));
        }
        for (_, w) in &mut support {
            *w = &*w / &total;
        }
        Ok(Distribution { support })
    }

    pub fn weight(&self, x: &T) -> BigRational {
        self.support
            .binary_search_by(|(y, _)| y.cmp(x))
            .map(|i| self.support[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn contains(&self, x: &T) -> bool {
        self.support.binary_search_by(|(y, _)| y.cmp(x)).is_ok()
    }

    /// Pushforward along `f`: the weight of `y` is the sum over its preimage.
    pub fn map<U: Ord>(&self, mut f: impl FnMut(&T) -> U) -> Distribution<U> {
        let support = merge_weights(self.support.iter().map(|(x, w)| (f(x), w.clone())))
            .expect("weights of a valid distribution are nonnegative");
        Distribution { support }
    }

    pub fn try_map<U: Ord>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<Distribution<U>> {
        let mapped = self
            .support
            .iter()
            .map(|(x, w)| Ok((f(x)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Distribution {
            support: merge_weights(mapped)?,
        })
    }
}

impl<T> Distribution<T> {
    pub fn support(&self) -> &[(T, BigRational)] {
        &self.support
    }

    pub fn into_support(self) -> Vec<(T, BigRational)> {
        self.support
    }

    pub fn points(&self) -> impl Iterator<Item = &T> + '_ {
        self.support.iter().map(|(x, _)| x)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

fn merge_weights<T: Ord>(
    weights: impl IntoIterator<Item = (T, BigRational)>,
) -> Result<Vec<(T, BigRational)>> {
    let mut entries: Vec<(T, BigRational)> = weights.into_iter().collect();
    if let Some((_, w)) = entries.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::Malformed(format!("negative weight {w}")));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(T, BigRational)> = Vec::with_capacity(entries.len());
    for (x, w) in entries {
        match merged.last_mut() {
            Some((y, v)) if *y == x => *v += w,
            _ => merged.push((x, w)),
        }
    }
    merged.retain(|(_, w)| !w.is_zero());
    Ok(merged)
}

impl<T: fmt::Display> fmt::Display for Distribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, (x, w)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{w} {x}")?;
        }
        f.write_str(">")
    }
}
