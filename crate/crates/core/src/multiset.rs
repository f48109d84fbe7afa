use std::fmt;

/// A finite multiset in canonical form: entries sorted strictly by element,
/// every multiplicity positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T> {
    entries: Vec<(T, u64)>,
}

impl<T> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            entries: Vec::new(),
        }
    }
}

impl<T: Ord> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        Multiset {
            entries: vec![(x, 1)],
        }
    }

    /// Builds a multiset from `(element, multiplicity)` pairs, merging equal
    /// elements and dropping zero multiplicities.
    pub fn from_counts(counts: impl IntoIterator<Item = (T, u64)>) -> Self {
        let mut entries: Vec<(T, u64)> = counts.into_iter().filter(|(_, m)| *m > 0).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(T, u64)> = Vec::with_capacity(entries.len());
        for (x, m) in entries {
            match merged.last_mut() {
                Some((y, n)) if *y == x => *n += m,
                _ => merged.push((x, m)),
            }
        }
        Multiset { entries: merged }
    }

    pub fn count(&self, x: &T) -> u64 {
        self.entries
            .binary_search_by(|(y, _)| y.cmp(x))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Multiset sum.
    pub fn sum(&self, other: &Self) -> Self
    where
        T: Clone,
    {
        Self::from_counts(self.entries.iter().chain(other.entries.iter()).cloned())
    }
}

impl<T> Multiset<T> {
    pub fn entries(&self) -> &[(T, u64)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(T, u64)> {
        self.entries
    }

    /// Total multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates over occurrences in canonical order, repeating each element
    /// according to its multiplicity.
    pub fn occurrences(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries
            .iter()
            .flat_map(|(x, m)| std::iter::repeat_n(x, *m as usize))
    }
}

impl<T: Ord> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_counts(iter.into_iter().map(|x| (x, 1)))
    }
}

impl<T: fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.occurrences().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
