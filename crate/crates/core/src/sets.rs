//! Subsets of `[n] = {1, ..., n}` packed into a machine word.
//!
//! Element `i` lives in bit `i - 1`. Comparing the packed words as integers is
//! exactly the colexicographic order, which is the order used everywhere a
//! canonical listing of sets is needed.

use alloc::vec::Vec;
use core::fmt;

/// Largest `n` an [`IndexSet`] can hold.
pub const MAX_ELEMENT: usize = 31;

#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        IndexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_ELEMENT).contains(&i));
        IndexSet(1 << (i - 1))
    }

    /// `{1, ..., r}`.
    pub fn initial(r: usize) -> Self {
        debug_assert!(r <= MAX_ELEMENT);
        if r == 0 {
            IndexSet(0)
        } else {
            IndexSet(u32::MAX >> (32 - r))
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(IndexSet(0), |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_ELEMENT).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1 << (i - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside `[n]`.
    pub fn complement(self, n: usize) -> Self {
        IndexSet(IndexSet::initial(n).0 & !self.0)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `[n]`, in colex order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
        (0u32..(1u32 << n)).map(IndexSet)
    }
}

#[derive(Clone)]
pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
