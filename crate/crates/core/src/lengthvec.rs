//! Length vectors, genericity and short subsets.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::genetics::{upper_covers, GeneticCode};
use crate::sets::IndexSet;

/// Largest number of sides accepted; subset sums are enumerated exhaustively.
pub const MAX_SIDES: usize = 24;

/// Positive integer side lengths, kept sorted non-decreasingly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LengthVector {
    entries: Vec<u64>,
    total: u64,
}

impl LengthVector {
    /// Sorts the entries. Rejects zero entries, fewer than three sides, more
    /// than [`MAX_SIDES`], or a perimeter that overflows `u64`.
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::InvalidLengths("at least three sides are needed"));
        }
        if entries.len() > MAX_SIDES {
            return Err(Error::InvalidLengths("too many sides"));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidLengths("side lengths must be positive"));
        }
        let total = entries
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or(Error::InvalidLengths("perimeter overflows"))?;
        if total > u64::MAX / 2 {
            return Err(Error::InvalidLengths("perimeter overflows"));
        }
        entries.sort_unstable();
        Ok(LengthVector { entries, total })
    }

    /// Like [`LengthVector::new`] but also rejects non-generic vectors.
    pub fn generic(entries: Vec<u64>) -> Result<Self> {
        let v = Self::new(entries)?;
        match v.zero_signed_sum() {
            Some(witness) => Err(Error::NotGeneric { witness }),
            None => Ok(v),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn perimeter(&self) -> u64 {
        self.total
    }

    /// `alpha_i`, 1-based.
    pub fn get(&self, i: usize) -> u64 {
        self.entries[i - 1]
    }

    pub fn sum(&self, set: IndexSet) -> u64 {
        set.iter().map(|i| self.entries[i - 1]).sum()
    }

    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|&x| x.checked_mul(factor))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::InvalidLengths("scaled perimeter overflows"))?;
        Self::new(entries)
    }

    /// A subset whose sum is exactly half the perimeter, if one exists.
    ///
    /// Meet in the middle: the sums of the lower half of the indices are
    /// sorted, then every sum over the upper half looks for its complement.
    pub fn zero_signed_sum(&self) -> Option<IndexSet> {
        if self.total % 2 == 1 {
            return None;
        }
        let half = self.total / 2;
        let n = self.n();
        let lo = n / 2;
        let mut left: Vec<(u64, u32)> =
            (0u32..1 << lo).map(|mask| (self.sum(IndexSet::from_bits(mask)), mask)).collect();
        left.sort_unstable();
        for high in 0u32..1 << (n - lo) {
            let mask = high << lo;
            let s = self.sum(IndexSet::from_bits(mask));
            if s > half {
                continue;
            }
            let want = half - s;
            let at = left.partition_point(|&(v, _)| v < want);
            if let Some(&(v, low)) = left.get(at) {
                if v == want {
                    return Some(IndexSet::from_bits(mask | low));
                }
            }
        }
        None
    }

    pub fn is_generic(&self) -> bool {
        self.zero_signed_sum().is_none()
    }

    fn require_generic(&self) -> Result<()> {
        match self.zero_signed_sum() {
            Some(witness) => Err(Error::NotGeneric { witness }),
            None => Ok(()),
        }
    }

    /// Whether `set` is short: its sum is strictly less than the complement's.
    pub fn is_short(&self, set: IndexSet) -> Result<bool> {
        self.require_generic()?;
        if set.max_element().is_some_and(|m| m > self.n()) {
            return Err(Error::OutOfRange("index set exceeds [n]"));
        }
        Ok(self.short_unchecked(set))
    }

    pub(crate) fn short_unchecked(&self, set: IndexSet) -> bool {
        2 * self.sum(set) < self.total
    }

    /// All short subsets containing `n`.
    pub fn short_family(&self) -> Result<ShortSetFamily> {
        self.require_generic()?;
        let n = self.n();
        let top = IndexSet::singleton(n);
        let members = IndexSet::all_subsets(n - 1).map(|g| g.union(top)).filter(|&s| self.short_unchecked(s)).collect();
        Ok(ShortSetFamily { n, members })
    }

    /// The maximal short sets containing `n` under the dominance order.
    pub fn genetic_code(&self) -> Result<GeneticCode> {
        self.require_generic()?;
        let n = self.n();
        let top = IndexSet::singleton(n);
        if !self.short_unchecked(top) {
            return Err(Error::InvalidCode("{n} is long, so the polygon space is empty"));
        }
        let short_gee = |g: IndexSet| self.short_unchecked(g.union(top));
        let gees: Vec<IndexSet> =
            IndexSet::all_subsets(n - 1).filter(|&g| short_gee(g) && !upper_covers(g, n).any(short_gee)).collect();
        GeneticCode::from_gees(n, gees)
    }
}

impl fmt::Debug for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// The family `S_n(alpha)` of short subsets that contain `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortSetFamily {
    pub n: usize,
    /// Every member contains `n`; listed in colex order.
    pub members: Vec<IndexSet>,
}

impl ShortSetFamily {
    pub fn contains(&self, set: IndexSet) -> bool {
        self.members.binary_search(&set).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lv(xs: &[u64]) -> LengthVector {
        LengthVector::new(xs.to_vec()).unwrap()
    }

    fn set(xs: &[usize]) -> IndexSet {
        IndexSet::from_indices(xs.iter().copied())
    }

    #[test]
    fn genericity_examples() {
        assert!(lv(&[1, 1, 1, 1, 1]).is_generic());
        let w = lv(&[1, 1, 1, 3]).zero_signed_sum().unwrap();
        assert_eq!(lv(&[1, 1, 1, 3]).sum(w), 3);
        assert!(lv(&[1, 1, 1, 1, 1, 4]).is_generic());
    }

    #[test]
    fn short_examples() {
        let a = lv(&[1, 1, 1, 1, 1]);
        assert!(a.is_short(set(&[5])).unwrap());
        assert!(!a.is_short(set(&[3, 4, 5])).unwrap());
        assert!(lv(&[1, 1, 1, 1, 1, 4]).is_short(set(&[6])).unwrap());
        assert!(matches!(lv(&[1, 1, 1, 3]).is_short(set(&[4])), Err(Error::NotGeneric { .. })));
    }

    #[test]
    fn construction_normalizes_and_validates() {
        assert_eq!(lv(&[3, 1, 2]).entries(), &[1, 2, 3]);
        assert!(LengthVector::new(vec![1, 0, 2]).is_err());
        assert!(LengthVector::new(vec![1, 2]).is_err());
        assert!(LengthVector::generic(vec![1, 1, 1, 3]).is_err());
    }

    #[test]
    fn genetic_code_examples() {
        let c = lv(&[1, 1, 1, 1, 1]).genetic_code().unwrap();
        assert_eq!(c.genes(), &[set(&[4, 5])]);
        for n in 4..=9 {
            let mut xs = vec![1u64; n - 1];
            xs.push(n as u64 - 2);
            let c = lv(&xs).genetic_code().unwrap();
            assert_eq!(c.genes(), &[set(&[n])], "n = {n}");
        }
        let c = lv(&[1, 1, 1, 1, 1, 4]).genetic_code().unwrap();
        assert_eq!(c.genes(), &[set(&[6])]);
    }

    #[test]
    fn empty_space_is_rejected() {
        assert!(lv(&[1, 1, 5]).genetic_code().is_err());
    }
}
