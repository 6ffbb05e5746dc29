//! Genetic codes: the dominance order, subgees, realizability, enumeration
//! and shape classification.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lengthvec::LengthVector;
use crate::linsys::BitVec;
use crate::lp::{self, Constraint};
use crate::sets::IndexSet;

/// Range of `n` accepted by [`enumerate_genetic_codes`].
pub const ENUMERATION_RANGE: (usize, usize) = (4, 9);

/// Largest `n` for which [`realizable`] builds the full dominance poset.
pub const MAX_REALIZABLE_N: usize = 12;

/// `I <= J` in the dominance order: the `|I|` largest elements of `J`
/// dominate the elements of `I` one by one, both listed increasingly.
pub fn dominance_leq(i: IndexSet, j: IndexSet) -> bool {
    let k = i.len();
    if k > j.len() {
        return false;
    }
    i.iter().zip(j.iter().skip(j.len() - k)).all(|(a, b)| a <= b)
}

/// Sets strictly above a gee `g` in the dominance order on subsets of
/// `[n - 1]` that include every upper cover of `g`: add the smallest missing
/// element, or push one element up by one. A down-set contains no element
/// above `g` iff it contains none of these.
pub(crate) fn upper_covers(g: IndexSet, n: usize) -> impl Iterator<Item = IndexSet> {
    let add = (1..n).find(|&i| !g.contains(i)).map(|i| g.with(i));
    let shifts = g.iter().filter(move |&i| i + 1 < n && !g.contains(i + 1)).map(move |i| g.without(i).with(i + 1));
    add.into_iter().chain(shifts)
}

/// An antichain of genes, each containing `n`.
///
/// Stored through its gees (genes with `n` removed). Canonical order: larger
/// genes first, equal sizes in colex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneticCode {
    n: usize,
    gees: Vec<IndexSet>,
    genes: Vec<IndexSet>,
}

impl GeneticCode {
    pub fn from_gees(n: usize, gees: impl IntoIterator<Item = IndexSet>) -> Result<Self> {
        if !(2..=crate::sets::MAX_ELEMENT).contains(&n) {
            return Err(Error::InvalidCode("n out of range"));
        }
        let mut gees: Vec<IndexSet> = gees.into_iter().collect();
        if gees.is_empty() {
            return Err(Error::InvalidCode("a genetic code has at least one gene"));
        }
        if gees.iter().any(|g| g.max_element().is_some_and(|m| m >= n)) {
            return Err(Error::InvalidCode("gee elements must lie in [n-1]"));
        }
        canonical_sort(&mut gees);
        if gees.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode("repeated gene"));
        }
        for (x, a) in gees.iter().enumerate() {
            for b in &gees[x + 1..] {
                if dominance_leq(*a, *b) || dominance_leq(*b, *a) {
                    return Err(Error::InvalidCode("genes must be pairwise incomparable"));
                }
            }
        }
        let top = IndexSet::singleton(n);
        let genes = gees.iter().map(|g| g.union(top)).collect();
        Ok(GeneticCode { n, gees, genes })
    }

    /// Builds a code from full genes; every gene must contain `n`.
    pub fn from_genes(n: usize, genes: impl IntoIterator<Item = IndexSet>) -> Result<Self> {
        let mut gees = Vec::new();
        for g in genes {
            if !g.contains(n) {
                return Err(Error::InvalidCode("every gene must contain n"));
            }
            gees.push(g.without(n));
        }
        Self::from_gees(n, gees)
    }

    /// Convenience constructor from gene element lists, e.g. `&[&[2, 4, 7], &[5, 7]]`.
    pub fn parse(n: usize, genes: &[&[usize]]) -> Result<Self> {
        Self::from_genes(n, genes.iter().map(|g| IndexSet::from_indices(g.iter().copied())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the polygon space, `n - 3`.
    pub fn dim(&self) -> usize {
        self.n.saturating_sub(3)
    }

    pub fn genes(&self) -> &[IndexSet] {
        &self.genes
    }

    pub fn gees(&self) -> &[IndexSet] {
        &self.gees
    }

    pub fn gene_sizes(&self) -> Vec<usize> {
        self.genes.iter().map(|g| g.len()).collect()
    }

    /// Whether `s` (a subset of `[n - 1]`) is dominated by some gee.
    pub fn is_subgee(&self, s: IndexSet) -> bool {
        s.max_element().is_none_or(|m| m < self.n) && self.gees.iter().any(|&g| dominance_leq(s, g))
    }

    pub fn subgees(&self) -> SubgeeFamily {
        SubgeeFamily::new(self)
    }
}

fn canonical_sort(gees: &mut [IndexSet]) {
    gees.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
}

impl fmt::Display for GeneticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, g) in self.genes.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for GeneticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All subgees of a code, ordered by size and then colex.
///
/// Because of that order the subgees of size at most `d` form a prefix, which
/// is what lets a subgee's position double as its monomial index in every
/// degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgeeFamily {
    n: usize,
    sets: Vec<IndexSet>,
    index: BTreeMap<IndexSet, usize>,
    /// `size_end[s]` = number of subgees of size at most `s`.
    size_end: Vec<usize>,
}

impl SubgeeFamily {
    fn new(code: &GeneticCode) -> Self {
        let n = code.n;
        let mut sets: Vec<IndexSet> = IndexSet::all_subsets(n - 1).filter(|&s| code.is_subgee(s)).collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let index = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let max = sets.last().map_or(0, |s| s.len());
        let size_end = (0..=max).map(|s| sets.partition_point(|x| x.len() <= s)).collect();
        SubgeeFamily { n, sets, index, size_end }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> IndexSet {
        self.sets[i]
    }

    pub fn index_of(&self, s: IndexSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn contains(&self, s: IndexSet) -> bool {
        self.index.contains_key(&s)
    }

    pub fn max_size(&self) -> usize {
        self.size_end.len() - 1
    }

    /// Number of subgees of size at most `size`.
    pub fn count_up_to(&self, size: usize) -> usize {
        self.size_end[size.min(self.max_size())]
    }

    /// Subgees of exactly the given size.
    pub fn of_size(&self, size: usize) -> &[IndexSet] {
        if size > self.max_size() {
            return &[];
        }
        let start = if size == 0 { 0 } else { self.size_end[size - 1] };
        &self.sets[start..self.size_end[size]]
    }
}

/// The dominance order on subsets of `[n - 1]` as explicit bitsets.
#[derive(Clone, Debug)]
pub struct GeePoset {
    n: usize,
    /// `below[j]` holds every `i` with `i <= j`, including `j`.
    below: Vec<BitVec>,
    above: Vec<BitVec>,
}

impl GeePoset {
    pub fn new(n: usize) -> Self {
        let size = 1usize << (n - 1);
        let mut below = vec![BitVec::zeros(size); size];
        let mut above = vec![BitVec::zeros(size); size];
        for j in 0..size {
            let sj = IndexSet::from_bits(j as u32);
            for i in 0..size {
                if dominance_leq(IndexSet::from_bits(i as u32), sj) {
                    below[j].set(i, true);
                    above[i].set(j, true);
                }
            }
        }
        GeePoset { n, below, above }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.below.len()
    }

    /// The down-set generated by some gees.
    pub fn down_set(&self, gees: &[IndexSet]) -> BitVec {
        let mut d = BitVec::zeros(self.size());
        for g in gees {
            for i in self.below[g.bits() as usize].ones() {
                d.set(i, true);
            }
        }
        d
    }

    pub fn maximal(&self, d: &BitVec) -> Vec<IndexSet> {
        d.ones()
            .filter(|&j| self.above[j].ones().all(|i| i == j || !d.get(i)))
            .map(|j| IndexSet::from_bits(j as u32))
            .collect()
    }

    /// Minimal elements of the complement of a down-set.
    pub fn minimal_outside(&self, d: &BitVec) -> Vec<IndexSet> {
        (0..self.size())
            .filter(|&j| !d.get(j) && self.below[j].ones().all(|i| i == j || d.get(i)))
            .map(|j| IndexSet::from_bits(j as u32))
            .collect()
    }

    /// Looks for sorted positive integer lengths whose short sets containing
    /// `n` are exactly the down-set `d`.
    pub fn realize(&self, d: &BitVec) -> Option<LengthVector> {
        let n = self.n;
        let top = IndexSet::singleton(n);
        let mut cs = Vec::new();
        let unit = |i: usize| {
            let mut c = vec![0i64; n];
            c[i] = 1;
            c
        };
        cs.push(Constraint { coeffs: unit(0), rhs: 1 });
        for i in 1..n {
            let mut c = unit(i);
            c[i - 1] = -1;
            cs.push(Constraint { coeffs: c, rhs: 0 });
        }
        // short: sum(complement) - sum(set) >= 1 ; long: the reverse
        let signed =
            |set: IndexSet, sign: i64| (1..=n).map(|i| if set.contains(i) { -sign } else { sign }).collect::<Vec<_>>();
        for g in self.maximal(d) {
            cs.push(Constraint { coeffs: signed(g.union(top), 1), rhs: 1 });
        }
        for g in self.minimal_outside(d) {
            cs.push(Constraint { coeffs: signed(g.union(top), -1), rhs: 1 });
        }
        let x = lp::feasible_point(n, &cs)?;
        let ints = lp::primitive_integer_point(&x)?;
        LengthVector::new(ints).ok()
    }

    /// Down-sets obtained from `d` by adding one minimal outside element.
    pub fn extensions<'a>(&'a self, d: &'a BitVec) -> impl Iterator<Item = BitVec> + 'a {
        (0..self.size()).filter(move |&j| !d.get(j) && self.below[j].ones().all(|i| i == j || d.get(i))).map(move |j| {
            let mut next = d.clone();
            next.set(j, true);
            next
        })
    }

    /// Realizable down-sets one element larger than `d`.
    pub fn successors(&self, d: &BitVec) -> Vec<(BitVec, LengthVector)> {
        self.extensions(d).filter_map(|next| self.realize(&next).map(|w| (next, w))).collect()
    }

    /// Every candidate one element above some down-set of `layer`, each once.
    pub fn next_layer_candidates<'a>(&self, layer: impl IntoIterator<Item = &'a BitVec>) -> BTreeSet<BitVec> {
        layer.into_iter().flat_map(|d| self.extensions(d).collect::<Vec<_>>()).collect()
    }

    /// The down-set realized by `<{n}>`, the unique minimal one.
    pub fn root(&self) -> BitVec {
        self.down_set(&[IndexSet::EMPTY])
    }
}

/// Exact realizability of a candidate code; returns an integer witness whose
/// genetic code is the candidate.
pub fn realizable(candidate: &GeneticCode) -> Result<Option<LengthVector>> {
    let n = candidate.n();
    if !(3..=MAX_REALIZABLE_N).contains(&n) {
        return Err(Error::UnsupportedN { n, min: 3, max: MAX_REALIZABLE_N });
    }
    let poset = GeePoset::new(n);
    let d = poset.down_set(candidate.gees());
    Ok(poset.realize(&d).inspect(|w| {
        debug_assert_eq!(w.genetic_code().as_ref(), Ok(candidate));
    }))
}

/// A realizable code with the witness found for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedCode {
    pub code: GeneticCode,
    pub witness: LengthVector,
}

/// Every realizable genetic code for `n`, in canonical order.
///
/// Walks the realizable down-sets of the dominance order one element at a
/// time starting from `<{n}>`. Moving a length vector along a straight line
/// towards any target only ever adds short sets containing `n`, so every
/// realizable down-set is reached through realizable ones.
pub fn enumerate_genetic_codes(n: usize) -> Result<Vec<EnumeratedCode>> {
    let (min, max) = ENUMERATION_RANGE;
    if !(min..=max).contains(&n) {
        return Err(Error::UnsupportedN { n, min, max });
    }
    let poset = GeePoset::new(n);
    let root = poset.root();
    let root_witness = poset.realize(&root).expect("<{n}> is always realizable");
    let mut found: BTreeMap<BitVec, LengthVector> = BTreeMap::new();
    let mut layer: BTreeMap<BitVec, LengthVector> = BTreeMap::new();
    layer.insert(root, root_witness);
    while !layer.is_empty() {
        let candidates = poset.next_layer_candidates(layer.keys());
        found.append(&mut layer);
        layer = candidates.into_iter().filter_map(|d| poset.realize(&d).map(|w| (d, w))).collect();
    }
    collect_codes(&poset, found)
}

/// Turns realizable down-sets into sorted codes.
pub fn collect_codes(
    poset: &GeePoset,
    downsets: impl IntoIterator<Item = (BitVec, LengthVector)>,
) -> Result<Vec<EnumeratedCode>> {
    let mut out = downsets
        .into_iter()
        .map(|(d, witness)| {
            let code = GeneticCode::from_gees(poset.n(), poset.maximal(&d))?;
            Ok(EnumeratedCode { code, witness })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(out)
}

/// Parameters of the code shapes that carry closed-form results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Template {
    /// `<{n}>`.
    Point,
    /// `<{a,n}>`.
    Pair { a: usize },
    /// `<{a,a+b,n}>`.
    Triple { a: usize, b: usize },
    /// `<{a,a+b,a+b+c,n}>`.
    Quad { a: usize, b: usize, c: usize },
    /// `<{a+b,a+b+c,n},{a,a+b+c+d,n}>`.
    TwoTriples { a: usize, b: usize, c: usize, d: usize },
    /// `<{1,1+b,1+b+c,n},{1,1+b+c+d,n}>`.
    TypeOne { b: usize, c: usize, d: usize },
    /// Several genes, one of which is `{a,n}`.
    WithPair { a: usize },
    /// `<{2,4,n},{a,n}>` with `a > 4`.
    TwoFourPair { a: usize },
    /// Type-2 code; `last` marks the gees `{3,4},{2,5},{1,6}`.
    TypeTwo { last: bool },
}

/// Shape data of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSignature {
    /// Gene sizes, largest first.
    pub sizes: Vec<usize>,
    pub type1: bool,
    pub type2: bool,
    /// Every template the code matches exactly.
    pub templates: Vec<Template>,
}

impl CodeSignature {
    pub fn has(&self, pred: impl Fn(&Template) -> bool) -> bool {
        self.templates.iter().any(pred)
    }
}

/// Gene-size multisets that the Type-2 family is drawn from.
pub const TYPE2_SIZES: [&[usize]; 4] = [&[4, 3], &[3, 3, 3], &[4, 3, 3], &[4, 3, 3, 3]];

/// Gees of the exceptional Type-2 code.
pub fn type2_last_gees() -> [IndexSet; 3] {
    [IndexSet::from_indices([3, 4]), IndexSet::from_indices([2, 5]), IndexSet::from_indices([1, 6])]
}

/// Classifies codes; keeps the `n = 7` gee catalogue the Type-2 test needs.
#[derive(Clone, Debug)]
pub struct Classifier {
    seven: BTreeSet<Vec<IndexSet>>,
}

impl Classifier {
    pub fn new() -> Self {
        let codes = enumerate_genetic_codes(7).expect("n = 7 is in range");
        Self::from_seven(codes.iter().map(|c| &c.code))
    }

    /// Builds the catalogue from an existing `n = 7` enumeration.
    pub fn from_seven<'a>(codes: impl IntoIterator<Item = &'a GeneticCode>) -> Self {
        let seven = codes.into_iter().filter(|c| c.n() == 7).map(|c| c.gees().to_vec()).collect();
        Classifier { seven }
    }

    pub fn is_type1(code: &GeneticCode) -> bool {
        code.genes().len() == 2 && code.genes().iter().all(|g| g.contains(1))
    }

    pub fn is_type2(&self, code: &GeneticCode) -> bool {
        code.n() >= 7
            && !Self::is_type1(code)
            && TYPE2_SIZES.contains(&code.gene_sizes().as_slice())
            && self.seven.contains(code.gees())
    }

    pub fn classify(&self, code: &GeneticCode) -> CodeSignature {
        let sizes = code.gene_sizes();
        let type1 = Self::is_type1(code);
        let type2 = self.is_type2(code);
        let mut templates = shape_templates(code);
        if type2 {
            let last = code.gees() == type2_last_gees().as_slice();
            templates.push(Template::TypeTwo { last });
        }
        CodeSignature { sizes, type1, type2, templates }
    }
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new()
    }
}

/// One-shot classification; builds the `n = 7` catalogue on every call.
pub fn classify(code: &GeneticCode) -> CodeSignature {
    Classifier::new().classify(code)
}

fn shape_templates(code: &GeneticCode) -> Vec<Template> {
    let gees: Vec<Vec<usize>> = code.gees().iter().map(|g| g.to_vec()).collect();
    let mut out = Vec::new();
    match gees.as_slice() {
        [g] => match g.as_slice() {
            [] => out.push(Template::Point),
            &[a] => out.push(Template::Pair { a }),
            &[a, ab] => out.push(Template::Triple { a, b: ab - a }),
            &[a, ab, abc] => out.push(Template::Quad { a, b: ab - a, c: abc - ab }),
            _ => {}
        },
        [g, h] => {
            if let (&[p, q], &[r, s]) = (g.as_slice(), h.as_slice()) {
                // two incomparable pairs: one interval nests inside the other
                let (inner, outer) = if r < p { ((p, q), (r, s)) } else { ((r, s), (p, q)) };
                let (ab, abc) = inner;
                let (a, abcd) = outer;
                if a < ab && abc < abcd {
                    out.push(Template::TwoTriples { a, b: ab - a, c: abc - ab, d: abcd - abc });
                }
            }
            if let (&[1, x, y], &[1, z]) = (g.as_slice(), h.as_slice()) {
                if 1 < x && x < y && y < z {
                    out.push(Template::TypeOne { b: x - 1, c: y - x, d: z - y });
                }
            }
        }
        _ => {}
    }
    if gees.len() >= 2 {
        if let Some(a) = gees.iter().find(|g| g.len() == 1).map(|g| g[0]) {
            out.push(Template::WithPair { a });
            if gees.len() == 2 && gees.iter().any(|g| g.as_slice() == [2, 4]) && a > 4 {
                out.push(Template::TwoFourPair { a });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> IndexSet {
        IndexSet::from_indices(xs.iter().copied())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(set(&[1, 3]), set(&[2, 3])));
        assert!(!dominance_leq(set(&[2, 5]), set(&[1, 6])));
        assert!(dominance_leq(IndexSet::EMPTY, set(&[4])));
        assert!(dominance_leq(IndexSet::EMPTY, IndexSet::EMPTY));
        assert!(!dominance_leq(set(&[1, 2]), set(&[7])));
    }

    #[test]
    fn subgee_examples() {
        let c = GeneticCode::parse(7, &[&[4, 7]]).unwrap();
        let f = c.subgees();
        assert_eq!(f.sets(), &[IndexSet::EMPTY, set(&[1]), set(&[2]), set(&[3]), set(&[4])]);

        let c = GeneticCode::parse(6, &[&[6]]).unwrap();
        assert_eq!(c.subgees().sets(), &[IndexSet::EMPTY]);

        // <{a, a+b, n}> with a = 2, b = 3
        let c = GeneticCode::parse(8, &[&[2, 5, 8]]).unwrap();
        let f = c.subgees();
        assert_eq!(f.of_size(1).len(), 5);
        let pairs: Vec<_> = f.of_size(2).iter().map(|s| s.to_vec()).collect();
        for p in &pairs {
            let (i, j) = (p[0], p[1]);
            assert!((j <= 2) || (i <= 2 && j <= 5));
        }
        assert_eq!(pairs.len(), 1 + 2 * 3);
    }

    #[test]
    fn code_validation() {
        assert!(GeneticCode::parse(5, &[&[1, 5], &[2, 5]]).is_err());
        assert!(GeneticCode::parse(5, &[&[1, 4]]).is_err());
        assert!(GeneticCode::parse(5, &[]).is_err());
        let c = GeneticCode::parse(7, &[&[5, 7], &[2, 4, 7]]).unwrap();
        assert_eq!(c.genes(), &[set(&[2, 4, 7]), set(&[5, 7])]);
    }

    #[test]
    fn realizability_examples() {
        let c = GeneticCode::parse(5, &[&[4, 5]]).unwrap();
        let w = realizable(&c).unwrap().unwrap();
        assert_eq!(w.genetic_code().unwrap(), c);

        for n in 4..=8 {
            let c = GeneticCode::parse(n, &[&[n]]).unwrap();
            let w = realizable(&c).unwrap().unwrap();
            assert_eq!(w.genetic_code().unwrap(), c);
        }
    }

    #[test]
    fn enumeration_range() {
        assert!(enumerate_genetic_codes(3).is_err());
        assert!(enumerate_genetic_codes(10).is_err());
    }

    #[test]
    fn upper_covers_contain_every_cover() {
        for n in 2..=7 {
            for g in IndexSet::all_subsets(n - 1) {
                let covers: Vec<_> = upper_covers(g, n).collect();
                assert!(covers.iter().all(|&h| h != g && dominance_leq(g, h)));
                let brute: Vec<_> = IndexSet::all_subsets(n - 1)
                    .filter(|&h| h != g && dominance_leq(g, h))
                    .filter(|&h| {
                        !IndexSet::all_subsets(n - 1)
                            .any(|k| k != g && k != h && dominance_leq(g, k) && dominance_leq(k, h))
                    })
                    .collect::<Vec<_>>();
                assert!(brute.iter().all(|h| covers.contains(h)), "n = {n}, g = {g}");
            }
        }
    }

    #[test]
    fn templates() {
        let c = GeneticCode::parse(9, &[&[3, 5, 8, 9]]).unwrap();
        assert_eq!(shape_templates(&c), [Template::Quad { a: 3, b: 2, c: 3 }]);
        let c = GeneticCode::parse(9, &[&[3, 5, 9], &[2, 7, 9]]).unwrap();
        assert_eq!(shape_templates(&c), [Template::TwoTriples { a: 2, b: 1, c: 2, d: 2 }]);
        let c = GeneticCode::parse(9, &[&[1, 2, 4, 9], &[1, 6, 9]]).unwrap();
        assert_eq!(shape_templates(&c), [Template::TypeOne { b: 1, c: 2, d: 2 }]);
        let c = GeneticCode::parse(8, &[&[2, 4, 8], &[5, 8]]).unwrap();
        assert_eq!(shape_templates(&c), [Template::WithPair { a: 5 }, Template::TwoFourPair { a: 5 }]);
    }
}
