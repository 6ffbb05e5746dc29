//! The mod-2 cohomology ring of the planar polygon space of a genetic code.
//!
//! In degree `d` the ring is spanned by monomials `R^(d-|S|) V_S` with `S` a
//! subgee of size at most `d`; the monomial's index is the subgee's index in
//! the [`SubgeeFamily`]. Classes are kept in normal form: reduced modulo the
//! relation span in that degree, so only non-pivot (basis) columns survive.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::genetics::{GeneticCode, SubgeeFamily};
use crate::linsys::{rref, BitMatrix, BitVec, Echelon};
use crate::sets::IndexSet;

/// A degree-one generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    R,
    V(usize),
}

impl Generator {
    /// The `V`-support the generator contributes.
    pub fn support(self) -> IndexSet {
        match self {
            Generator::R => IndexSet::EMPTY,
            Generator::V(i) => IndexSet::singleton(i),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::R => f.write_str("R"),
            Generator::V(i) => write!(f, "V{i}"),
        }
    }
}

#[derive(Clone, Debug)]
struct Degree {
    /// Number of monomials in this degree.
    len: usize,
    echelon: Echelon,
    /// Monomial indices of the quotient basis.
    basis: Vec<usize>,
    /// Rank the ideal closure added on top of the explicit relation rows.
    closure_gain: usize,
}

/// The presented ring, materialized in degrees `0..=m+1`.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    code: GeneticCode,
    subgees: SubgeeFamily,
    m: usize,
    degrees: Vec<Degree>,
}

/// A homogeneous class in normal form.
///
/// `coords` runs over the monomials of `degree`; above the top degree every
/// class is zero and `coords` is empty.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohoClass {
    degree: usize,
    coords: BitVec,
}

impl CohoClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &BitVec {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

impl fmt::Debug for CohoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}{:?}", self.degree, self.coords)
    }
}

/// Multiplies two monomials given by their supports. The power of `R` follows
/// from the degrees, since `V_i^2 = R V_i`.
/// `R^r V_S` written out, for example `R^2 V1 V3`, `V4` or `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub r: usize,
    pub support: IndexSet,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| if core::mem::take(&mut first) { Ok(()) } else { f.write_str(" ") };
        match self.r {
            0 => {}
            1 => {
                sep(f)?;
                f.write_str("R")?;
            }
            r => {
                sep(f)?;
                write!(f, "R^{r}")?;
            }
        }
        for i in self.support.iter() {
            sep(f)?;
            write!(f, "V{i}")?;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

pub fn monomial_product(s: IndexSet, t: IndexSet) -> IndexSet {
    s.union(t)
}

/// Builds the cohomology ring of `code`.
///
/// In each degree the relation span is generated by the linear relations for
/// every subgee `S` with `|S| >= n - d - 2`, plus the products of the previous
/// degree's relation span with every generator. The latter never changes the
/// span in practice; it is kept so the span is an ideal by construction.
pub fn build_ring(code: &GeneticCode) -> Result<RingPresentation> {
    let n = code.n();
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4, max: crate::sets::MAX_ELEMENT });
    }
    let m = n - 3;
    let subgees = code.subgees();
    let gens: Vec<IndexSet> = (1..n)
        .map(IndexSet::singleton)
        .filter(|s| subgees.contains(*s))
        .chain(core::iter::once(IndexSet::EMPTY))
        .collect();
    let mut degrees: Vec<Degree> = Vec::with_capacity(m + 2);
    for d in 0..=m + 1 {
        let len = subgees.count_up_to(d);
        let cols = &subgees.sets()[..len];
        let mut rows = Vec::new();
        for &s in subgees.sets() {
            if s.len() + d + 2 < n {
                continue;
            }
            let row =
                BitVec::from_indices(len, cols.iter().enumerate().filter(|(_, t)| t.is_disjoint(s)).map(|(i, _)| i));
            if !row.is_zero() {
                rows.push(row);
            }
        }
        let explicit = rref(&BitMatrix::from_rows(len, rows.clone())).rank();
        if let Some(prev) = degrees.last() {
            for r in prev.echelon.reduced.rows() {
                for &g in &gens {
                    let mut row = BitVec::zeros(len);
                    for i in r.ones() {
                        if let Some(j) = subgees.index_of(monomial_product(subgees.get(i), g)) {
                            row.flip(j);
                        }
                    }
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
        let echelon = rref(&BitMatrix::from_rows(len, rows));
        let basis = echelon.free_columns();
        let closure_gain = echelon.rank() - explicit;
        degrees.push(Degree { len, echelon, basis, closure_gain });
    }
    if !degrees[m + 1].basis.is_empty() {
        return Err(Error::InconsistentRing("relations do not kill degree m+1"));
    }
    if degrees[0].basis.len() != 1 {
        return Err(Error::InconsistentRing("degree 0 is not one-dimensional"));
    }
    if degrees[m].basis.len() != 1 {
        return Err(Error::InconsistentRing("top degree is not one-dimensional"));
    }
    Ok(RingPresentation { code: code.clone(), subgees, m, degrees })
}

impl RingPresentation {
    pub fn code(&self) -> &GeneticCode {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    /// Top degree, `n - 3`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn subgees(&self) -> &SubgeeFamily {
        &self.subgees
    }

    /// `dim H^d`, zero above the top degree.
    pub fn dim(&self, d: usize) -> usize {
        self.degrees.get(d).map_or(0, |g| g.basis.len())
    }

    /// `dim H^d` for `d = 0..=m`.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.m).map(|d| self.dim(d)).collect()
    }

    /// Number of monomials in degree `d` before reduction.
    pub fn monomial_count(&self, d: usize) -> usize {
        if d > self.m {
            return 0;
        }
        self.degrees[d].len
    }

    /// Monomial indices forming the basis of `H^d`.
    pub fn basis(&self, d: usize) -> &[usize] {
        self.degrees.get(d).filter(|_| d <= self.m).map_or(&[], |g| &g.basis)
    }

    /// Rank of the relation span in degree `d`.
    pub fn relation_rank(&self, d: usize) -> usize {
        self.degrees.get(d).map_or(0, |g| g.echelon.rank())
    }

    /// Total rank the ideal closure contributed beyond the explicit relations.
    pub fn closure_gain(&self) -> usize {
        self.degrees.iter().map(|g| g.closure_gain).sum()
    }

    /// `(r, S)` for the monomial `R^r V_S` at index `i` of degree `d`.
    pub fn monomial_label(&self, d: usize, i: usize) -> (usize, IndexSet) {
        let s = self.subgees.get(i);
        (d - s.len(), s)
    }

    pub fn zero(&self, d: usize) -> CohoClass {
        CohoClass { degree: d, coords: BitVec::zeros(self.monomial_count(d)) }
    }

    pub fn one(&self) -> CohoClass {
        self.monomial(0, IndexSet::EMPTY).expect("the empty set is a subgee")
    }

    /// Reduces a coordinate vector over the degree-`d` monomials.
    pub fn reduce(&self, d: usize, mut coords: BitVec) -> CohoClass {
        if d > self.m {
            return CohoClass { degree: d, coords: BitVec::zeros(0) };
        }
        assert_eq!(coords.len(), self.degrees[d].len, "coordinate length mismatch");
        self.degrees[d].echelon.reduce(&mut coords);
        CohoClass { degree: d, coords }
    }

    /// The class of `R^r V_S`; zero when `S` is not a subgee.
    pub fn monomial(&self, r: usize, s: IndexSet) -> Result<CohoClass> {
        if s.max_element().is_some_and(|x| x >= self.n()) {
            return Err(Error::MalformedFactor("V index outside [n-1]"));
        }
        let d = r + s.len();
        let mut c = self.zero(d);
        if d <= self.m {
            if let Some(i) = self.subgees.index_of(s) {
                c.coords.set(i, true);
                c = self.reduce(d, c.coords);
            }
        }
        Ok(c)
    }

    pub fn generator(&self, g: Generator) -> Result<CohoClass> {
        if let Generator::V(i) = g {
            if i == 0 || i >= self.n() {
                return Err(Error::MalformedFactor("V index outside [n-1]"));
            }
        }
        self.monomial(1 - g.support().len(), g.support())
    }

    pub fn add(&self, x: &CohoClass, y: &CohoClass) -> CohoClass {
        assert_eq!(x.degree, y.degree, "adding classes of different degrees");
        let mut c = x.clone();
        if !c.coords.is_empty() {
            c.coords.xor_assign(&y.coords);
        }
        c
    }

    pub fn multiply(&self, x: &CohoClass, y: &CohoClass) -> CohoClass {
        let d = x.degree + y.degree;
        if d > self.m {
            return self.zero(d);
        }
        let mut coords = BitVec::zeros(self.degrees[d].len);
        for i in x.coords.ones() {
            let s = self.subgees.get(i);
            for j in y.coords.ones() {
                if let Some(k) = self.subgees.index_of(monomial_product(s, self.subgees.get(j))) {
                    coords.flip(k);
                }
            }
        }
        self.reduce(d, coords)
    }

    pub fn pow(&self, x: &CohoClass, e: usize) -> CohoClass {
        let mut acc = self.monomial(0, IndexSet::EMPTY).expect("unit");
        for _ in 0..e {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    /// Poincaré duality functional on the top degree.
    pub fn phi(&self, x: &CohoClass) -> Result<bool> {
        if x.degree != self.m {
            return Err(Error::DegreeMismatch { expected: self.m, found: x.degree });
        }
        Ok(x.coords.get(self.degrees[self.m].basis[0]))
    }

    /// `phi(R^(m-|S|) V_S)`.
    pub fn phi_s(&self, s: IndexSet) -> Result<bool> {
        if !self.subgees.contains(s) {
            return Err(Error::NotSubgee(s));
        }
        if s.len() > self.m {
            return Err(Error::OutOfRange("subgee larger than the top degree"));
        }
        self.phi(&self.monomial(self.m - s.len(), s)?)
    }

    /// Coordinates of `x` on the basis of `H^deg(x)`.
    pub fn basis_coords(&self, x: &CohoClass) -> BitVec {
        let basis = self.basis(x.degree);
        BitVec::from_bools(&basis.iter().map(|&i| x.coords.get(i)).collect::<Vec<_>>())
    }

    /// The class with the given coordinates on the basis of `H^d`.
    pub fn from_basis_coords(&self, d: usize, coords: &BitVec) -> CohoClass {
        let mut c = self.zero(d);
        for (k, &i) in self.basis(d).iter().enumerate() {
            if coords.get(k) {
                c.coords.set(i, true);
            }
        }
        c
    }

    /// The monomials `(r, S)` with a one in the normal form of `x`.
    pub fn support(&self, x: &CohoClass) -> Vec<(usize, IndexSet)> {
        x.coords.ones().map(|i| self.monomial_label(x.degree, i)).collect()
    }

    /// Matrix of `phi(b_i * c_j)` over the bases of `H^d` and `H^(m-d)`.
    pub fn pairing_matrix(&self, d: usize) -> BitMatrix {
        let e = self.m - d;
        let left: Vec<CohoClass> = self.basis_classes(d);
        let right: Vec<CohoClass> = self.basis_classes(e);
        let rows = left
            .iter()
            .map(|x| {
                let bits: Vec<bool> =
                    right.iter().map(|y| self.phi(&self.multiply(x, y)).expect("top degree")).collect();
                BitVec::from_bools(&bits)
            })
            .collect();
        BitMatrix::from_rows(right.len(), rows)
    }

    /// Whether the cup-product pairing `H^d x H^(m-d) -> H^m` is perfect in
    /// every degree.
    pub fn poincare_duality_holds(&self) -> bool {
        (0..=self.m).all(|d| {
            let p = self.pairing_matrix(d);
            self.dim(d) == self.dim(self.m - d) && p.rank() == self.dim(d)
        })
    }

    /// Basis classes of `H^d`, one per basis monomial.
    pub fn basis_classes(&self, d: usize) -> Vec<CohoClass> {
        self.basis(d)
            .iter()
            .map(|&i| {
                let mut c = self.zero(d);
                c.coords.set(i, true);
                c
            })
            .collect()
    }

    /// Longest nonzero product of degree-one classes, with a monomial
    /// `R^r V_J` realizing it. Gees of maximal size are tried first.
    pub fn cup_length(&self) -> CupLength {
        for d in (1..=self.m).rev() {
            let mut order: Vec<usize> = (0..self.monomial_count(d)).collect();
            order.sort_by_key(|&i| {
                let s = self.subgees.get(i);
                (!self.code.gees().contains(&s), core::cmp::Reverse(s.len()), i)
            });
            for i in order {
                let (r, s) = self.monomial_label(d, i);
                if !self.monomial(r, s).expect("subgee").is_zero() {
                    return CupLength { length: d, r, support: s };
                }
            }
        }
        CupLength { length: 0, r: 0, support: IndexSet::EMPTY }
    }

    /// Lusternik-Schnirelmann category: the cup length plus one, which meets
    /// the dimensional upper bound `m + 1`.
    pub fn ls_category(&self) -> usize {
        self.cup_length().length + 1
    }
}

/// Cup length together with a witness monomial `R^r V_support`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CupLength {
    pub length: usize,
    pub r: usize,
    pub support: IndexSet,
}

/// How a monomial's `V`-support meets consecutive index blocks
/// `I_1 = [1, b_1]`, `I_2 = (b_1, b_1 + b_2]`, ...
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialType {
    /// `counts[j]` is the number of support elements in block `j`; elements past
    /// the last block are counted in a final extra slot.
    pub counts: Vec<usize>,
    /// For each support element in increasing order, the 1-based block it lies in.
    pub blocks: Vec<usize>,
}

impl MonomialType {
    pub fn of(support: IndexSet, block_sizes: &[usize]) -> Self {
        let mut counts = alloc::vec![0; block_sizes.len() + 1];
        let mut blocks = Vec::with_capacity(support.len());
        for i in support.iter() {
            let mut end = 0;
            let mut b = block_sizes.len();
            for (j, &size) in block_sizes.iter().enumerate() {
                end += size;
                if i <= end {
                    b = j;
                    break;
                }
            }
            counts[b] += 1;
            blocks.push(b + 1);
        }
        MonomialType { counts, blocks }
    }
}
