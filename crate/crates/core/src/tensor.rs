//! Exact arithmetic in the `k`-fold tensor power of a cohomology ring, zero
//! divisors, certificate evaluation and a budgeted zero-divisor cup-length
//! search.
//!
//! A basis element of `H^*` gets a global index: degree 0 first (index 0 is
//! the unit), then degree 1, and so on. A tensor key packs one global index
//! per factor into 16 bits of a `u128`, so index 0 in a slot means "1 in that
//! factor".

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cohomology::{CohoClass, Generator, RingPresentation};
use crate::error::{Error, Result};
use crate::genetics::GeneticCode;
use crate::linsys::BitVec;

/// Largest tensor power supported by the packed keys.
pub const MAX_K: usize = 8;

const SLOT: u32 = 16;
const SLOT_MASK: u128 = 0xffff;

/// Multiplication table of a ring on its chosen basis.
#[derive(Clone, Debug)]
pub struct BasisTable {
    code: GeneticCode,
    m: usize,
    /// `offsets[d]` is the global index of the first basis element of degree `d`.
    offsets: Vec<usize>,
    degree: Vec<usize>,
    /// Monomial index of each basis element within its degree.
    monomial: Vec<usize>,
    /// `prod[a * len + b]`: global indices in the expansion of `a * b`.
    prod: Vec<Vec<u16>>,
    gens: BTreeMap<Generator, Vec<u16>>,
}

impl BasisTable {
    pub fn new(ring: &RingPresentation) -> Self {
        let m = ring.m();
        let mut offsets = Vec::with_capacity(m + 2);
        let mut degree = Vec::new();
        let mut monomial = Vec::new();
        for d in 0..=m {
            offsets.push(degree.len());
            for &i in ring.basis(d) {
                degree.push(d);
                monomial.push(i);
            }
        }
        offsets.push(degree.len());
        let len = degree.len();
        assert!(len < 1 << SLOT, "ring too large for packed tensor keys");
        let classes: Vec<CohoClass> = (0..=m).flat_map(|d| ring.basis_classes(d)).collect();
        let mut prod = vec![Vec::new(); len * len];
        for a in 0..len {
            for b in a..len {
                let d = degree[a] + degree[b];
                if d > m {
                    continue;
                }
                let c = ring.multiply(&classes[a], &classes[b]);
                let gl: Vec<u16> = ring.basis_coords(&c).ones().map(|x| (offsets[d] + x) as u16).collect();
                prod[b * len + a] = gl.clone();
                prod[a * len + b] = gl;
            }
        }
        let mut table =
            BasisTable { code: ring.code().clone(), m, offsets, degree, monomial, prod, gens: BTreeMap::new() };
        let mut gens = BTreeMap::new();
        gens.insert(Generator::R, table.globals(ring, &ring.generator(Generator::R).expect("R")));
        for i in 1..ring.n() {
            let g = Generator::V(i);
            gens.insert(g, table.globals(ring, &ring.generator(g).expect("V_i")));
        }
        table.gens = gens;
        table
    }

    pub fn code(&self) -> &GeneticCode {
        &self.code
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of basis elements over all degrees.
    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    pub fn degree_of(&self, global: usize) -> usize {
        self.degree[global]
    }

    /// Position of a global basis element inside the basis of its degree.
    pub fn local_index(&self, global: usize) -> usize {
        global - self.offsets[self.degree[global]]
    }

    /// Monomial index (within its degree) of a global basis element.
    pub fn monomial_of(&self, global: usize) -> usize {
        self.monomial[global]
    }

    pub fn global_index(&self, degree: usize, local: usize) -> usize {
        self.offsets[degree] + local
    }

    /// Global index of the single basis element of the top degree.
    pub fn top(&self) -> usize {
        self.offsets[self.m]
    }

    /// Global basis indices appearing in a class.
    pub fn globals(&self, ring: &RingPresentation, x: &CohoClass) -> Vec<u16> {
        if x.degree() > self.m {
            return Vec::new();
        }
        let off = self.offsets[x.degree()];
        ring.basis_coords(x).ones().map(|i| (off + i) as u16).collect()
    }

    pub fn product(&self, a: usize, b: usize) -> &[u16] {
        &self.prod[a * self.len() + b]
    }

    pub fn generator(&self, g: Generator) -> Result<&[u16]> {
        self.gens.get(&g).map(|v| v.as_slice()).ok_or(Error::MalformedFactor("generator not in ring"))
    }
}

/// A class in the `k`-fold tensor power: a set of keys with coefficient one.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorClass {
    k: usize,
    keys: BTreeSet<u128>,
}

fn slot(key: u128, j: usize) -> usize {
    ((key >> (SLOT * j as u32)) & SLOT_MASK) as usize
}

fn with_slot(key: u128, j: usize, v: usize) -> u128 {
    let shift = SLOT * j as u32;
    (key & !(SLOT_MASK << shift)) | ((v as u128) << shift)
}

fn toggle(keys: &mut BTreeSet<u128>, key: u128) {
    if !keys.remove(&key) {
        keys.insert(key);
    }
}

impl TensorClass {
    pub fn zero(k: usize) -> Self {
        TensorClass { k, keys: BTreeSet::new() }
    }

    pub fn one(k: usize) -> Self {
        let mut keys = BTreeSet::new();
        keys.insert(0);
        TensorClass { k, keys }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.keys.is_empty()
    }

    /// Number of basis tensors with coefficient one.
    pub fn term_count(&self) -> usize {
        self.keys.len()
    }

    /// The terms as `k`-tuples of global basis indices.
    pub fn terms(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.keys.iter().map(move |&key| (0..self.k).map(|j| slot(key, j)).collect())
    }

    pub fn add(&self, other: &TensorClass) -> TensorClass {
        assert_eq!(self.k, other.k);
        let keys = self.keys.symmetric_difference(&other.keys).copied().collect();
        TensorClass { k: self.k, keys }
    }
}

impl fmt::Debug for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.terms()).finish()
    }
}

fn check_k(k: usize) -> Result<()> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::OutOfRange("tensor power outside 1..=8"))
    }
}

fn check_pos(k: usize, j: usize) -> Result<()> {
    if (1..=k).contains(&j) {
        Ok(())
    } else {
        Err(Error::MalformedFactor("tensor position out of range"))
    }
}

impl BasisTable {
    /// `p_j^*(x)`: `x` in factor `j` (1-based), the unit elsewhere.
    pub fn embed(&self, ring: &RingPresentation, k: usize, j: usize, x: &CohoClass) -> Result<TensorClass> {
        check_k(k)?;
        check_pos(k, j)?;
        let keys = self.globals(ring, x).into_iter().map(|g| with_slot(0, j - 1, g as usize)).collect();
        Ok(TensorClass { k, keys })
    }

    /// `g_i + g_j` for a degree-one generator.
    pub fn diff(&self, k: usize, i: usize, j: usize, g: Generator) -> Result<TensorClass> {
        check_k(k)?;
        check_pos(k, i)?;
        check_pos(k, j)?;
        if i == j {
            return Err(Error::MalformedFactor("a difference needs two distinct positions"));
        }
        let mut keys = BTreeSet::new();
        for &x in self.generator(g)? {
            toggle(&mut keys, with_slot(0, i - 1, x as usize));
            toggle(&mut keys, with_slot(0, j - 1, x as usize));
        }
        Ok(TensorClass { k, keys })
    }

    /// `g_j + g_(j-1)`.
    pub fn bar(&self, k: usize, j: usize, g: Generator) -> Result<TensorClass> {
        if j < 2 {
            return Err(Error::MalformedFactor("bar needs position at least 2"));
        }
        self.diff(k, j - 1, j, g)
    }

    pub fn multiply(&self, x: &TensorClass, y: &TensorClass) -> TensorClass {
        assert_eq!(x.k, y.k, "tensor powers differ");
        let k = x.k;
        let mut out = BTreeSet::new();
        let mut partial: Vec<u128> = Vec::new();
        let mut next: Vec<u128> = Vec::new();
        for &a in &x.keys {
            for &b in &y.keys {
                partial.clear();
                partial.push(0);
                for j in 0..k {
                    let p = self.product(slot(a, j), slot(b, j));
                    next.clear();
                    for &key in &partial {
                        for &c in p {
                            next.push(with_slot(key, j, c as usize));
                        }
                    }
                    core::mem::swap(&mut partial, &mut next);
                    if partial.is_empty() {
                        break;
                    }
                }
                for &key in &partial {
                    toggle(&mut out, key);
                }
            }
        }
        TensorClass { k, keys: out }
    }

    /// Multiplies by a sum of classes each living in a single factor, given
    /// as `(0-based position, global indices)`.
    fn multiply_local(&self, x: &TensorClass, terms: &[(usize, &[u16])]) -> TensorClass {
        let mut out = BTreeSet::new();
        for &key in &x.keys {
            for &(j, gl) in terms {
                let a = slot(key, j);
                for &b in gl {
                    for &c in self.product(a, b as usize) {
                        toggle(&mut out, with_slot(key, j, c as usize));
                    }
                }
            }
        }
        TensorClass { k: x.k, keys: out }
    }

    /// Multidegree of each factor of a term.
    pub fn multidegree(&self, term: &[usize]) -> Vec<usize> {
        term.iter().map(|&g| self.degree[g]).collect()
    }

    /// Terms of `x` in a given multidegree.
    pub fn component(&self, x: &TensorClass, multidegree: &[usize]) -> Vec<Vec<usize>> {
        x.terms().filter(|t| self.multidegree(t) == multidegree).collect()
    }

    /// Pullback along the diagonal: multiplies the factors of every term.
    /// Returns the global indices of the resulting class.
    pub fn diagonal(&self, x: &TensorClass) -> BTreeSet<u16> {
        let mut out = BTreeSet::new();
        for t in x.terms() {
            let mut acc: BTreeSet<u16> = BTreeSet::new();
            acc.insert(0);
            for &g in &t {
                let mut next = BTreeSet::new();
                for &a in &acc {
                    for &c in self.product(a as usize, g) {
                        if !next.remove(&c) {
                            next.insert(c);
                        }
                    }
                }
                acc = next;
            }
            for c in acc {
                if !out.remove(&c) {
                    out.insert(c);
                }
            }
        }
        out
    }
}

/// How a degree-one certificate factor sits in the tensor power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    /// `g_pos + g_(pos-1)`.
    Bar,
    /// `g_pos` alone; not a zero divisor.
    Embed,
    /// `g_pos + g_to`.
    Diff { to: usize },
}

/// A degree-one factor raised to a power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub pos: usize,
    pub gen: Generator,
    pub exp: usize,
}

impl Factor {
    pub fn bar(pos: usize, gen: Generator, exp: usize) -> Self {
        Factor { kind: FactorKind::Bar, pos, gen, exp }
    }

    pub fn embed(pos: usize, gen: Generator, exp: usize) -> Self {
        Factor { kind: FactorKind::Embed, pos, gen, exp }
    }

    pub fn diff(pos: usize, to: usize, gen: Generator, exp: usize) -> Self {
        Factor { kind: FactorKind::Diff { to }, pos, gen, exp }
    }

    pub fn is_zero_divisor(&self) -> bool {
        !matches!(self.kind, FactorKind::Embed)
    }

    /// 1-based positions the factor touches.
    pub fn positions(&self) -> Vec<usize> {
        match self.kind {
            FactorKind::Bar => vec![self.pos.wrapping_sub(1), self.pos],
            FactorKind::Embed => vec![self.pos],
            FactorKind::Diff { to } => vec![self.pos, to],
        }
    }

    fn validate(&self, k: usize, n: usize) -> Result<()> {
        if let Generator::V(i) = self.gen {
            if i == 0 || i >= n {
                return Err(Error::MalformedFactor("V index outside [n-1]"));
            }
        }
        match self.kind {
            FactorKind::Bar if self.pos < 2 => return Err(Error::MalformedFactor("bar needs position at least 2")),
            FactorKind::Diff { to } if to == self.pos => {
                return Err(Error::MalformedFactor("a difference needs two distinct positions"))
            }
            _ => {}
        }
        for p in self.positions() {
            check_pos(k, p)?;
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::Bar => write!(f, "bar({},{})", self.gen, self.pos)?,
            FactorKind::Embed => write!(f, "{}_{}", self.gen, self.pos)?,
            FactorKind::Diff { to } => write!(f, "({g}_{}+{g}_{to})", self.pos, g = self.gen)?,
        }
        if self.exp != 1 {
            write!(f, "^{}", self.exp)?;
        }
        Ok(())
    }
}

/// A symbolic product of degree-one factors in the `k`-fold tensor power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub code: GeneticCode,
    pub k: usize,
    pub factors: Vec<Factor>,
}

impl Certificate {
    pub fn new(code: GeneticCode, k: usize) -> Self {
        Certificate { code, k, factors: Vec::new() }
    }

    /// Appends a factor, skipping zero exponents.
    pub fn push(&mut self, f: Factor) -> &mut Self {
        if f.exp > 0 {
            self.factors.push(f);
        }
        self
    }

    pub fn with(mut self, f: Factor) -> Self {
        self.push(f);
        self
    }

    /// Number of degree-one factors counted with multiplicity.
    pub fn length(&self) -> usize {
        self.factors.iter().map(|f| f.exp).sum()
    }

    pub fn is_zero_divisor_product(&self) -> bool {
        self.factors.iter().all(Factor::is_zero_divisor)
    }

    /// Concatenates the factors of `other`, which must share code and `k`.
    pub fn extend(&mut self, other: &Certificate) {
        assert_eq!(self.k, other.k);
        self.factors.extend_from_slice(&other.factors);
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        if self.factors.is_empty() {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Result of evaluating a certificate.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub nonzero: bool,
    /// Multidegree of one surviving term, when the product is nonzero.
    pub witness: Option<Vec<usize>>,
    pub product: TensorClass,
    pub length: usize,
    /// Whether every factor lies in the kernel of the diagonal pullback.
    pub zero_divisors: bool,
}

impl BasisTable {
    /// Evaluates a certificate exactly. The factors are multiplied in order
    /// of the positions they touch, which keeps intermediate products small.
    pub fn evaluate(&self, cert: &Certificate) -> Result<Evaluation> {
        Ok(self.evaluate_within(cert, usize::MAX)?.expect("unbounded evaluation"))
    }

    /// Like [`BasisTable::evaluate`], but gives up (returning `None`) once an
    /// intermediate product has more than `max_terms` terms.
    pub fn evaluate_within(&self, cert: &Certificate, max_terms: usize) -> Result<Option<Evaluation>> {
        if cert.code != self.code {
            return Err(Error::InvalidCode("certificate belongs to a different code"));
        }
        check_k(cert.k)?;
        let n = self.code.n();
        for f in &cert.factors {
            f.validate(cert.k, n)?;
        }
        let mut order: Vec<&Factor> = cert.factors.iter().collect();
        order.sort_by_key(|f| {
            let p = f.positions();
            (p.iter().copied().max(), p.iter().copied().min())
        });
        let mut x = TensorClass::one(cert.k);
        'outer: for f in order {
            let gl = self.generator(f.gen)?;
            let terms: Vec<(usize, &[u16])> = f.positions().into_iter().map(|p| (p - 1, gl)).collect();
            for _ in 0..f.exp {
                x = self.multiply_local(&x, &terms);
                if x.is_zero() {
                    break 'outer;
                }
                if x.term_count() > max_terms {
                    return Ok(None);
                }
            }
        }
        let witness = x.terms().next().map(|t| self.multidegree(&t));
        Ok(Some(Evaluation {
            nonzero: !x.is_zero(),
            witness,
            product: x,
            length: cert.length(),
            zero_divisors: cert.is_zero_divisor_product(),
        }))
    }
}

/// Convenience: builds the basis table and evaluates.
pub fn evaluate_certificate(ring: &RingPresentation, cert: &Certificate) -> Result<Evaluation> {
    BasisTable::new(ring).evaluate(cert)
}

/// Outcome of the zero-divisor search.
#[derive(Clone, Debug)]
pub struct ZclSearch {
    pub length: usize,
    pub certificate: Certificate,
    /// Whether the search finished within budget, making `length` the exact
    /// maximum over products of the factor pool.
    pub exhaustive: bool,
    pub nodes: usize,
}

/// Depth-first search over products of degree-one zero divisors
/// `g_i + g_j` (`i < j`, `g` among `R` and the nonzero `V_i`), taken as
/// multisets so each product is visited once. Zero products are pruned since
/// every extension of them is zero. `budget` caps the number of products
/// evaluated.
pub fn zcl_lower_bound(ring: &RingPresentation, k: usize, budget: usize) -> Result<ZclSearch> {
    check_k(k)?;
    let table = BasisTable::new(ring);
    let mut gens = vec![Generator::R];
    gens.extend((1..ring.n()).map(Generator::V).filter(|&g| !table.gens[&g].is_empty()));
    let mut pool = Vec::new();
    for &g in &gens {
        for i in 1..=k {
            for j in i + 1..=k {
                pool.push(Factor::diff(i, j, g, 1));
            }
        }
    }
    let ceiling = k * ring.m();
    let mut search = Search {
        table: &table,
        pool: &pool,
        budget,
        nodes: 0,
        best: Vec::new(),
        stack: Vec::new(),
        ceiling,
        exhausted: false,
    };
    search.dfs(&TensorClass::one(k), 0);
    let mut certificate = Certificate::new(ring.code().clone(), k);
    let mut counts: BTreeMap<Factor, usize> = BTreeMap::new();
    for &i in &search.best {
        *counts.entry(pool[i]).or_default() += 1;
    }
    for (f, e) in counts {
        certificate.push(Factor { exp: e, ..f });
    }
    Ok(ZclSearch { length: search.best.len(), certificate, exhaustive: !search.exhausted, nodes: search.nodes })
}

struct Search<'a> {
    table: &'a BasisTable,
    pool: &'a [Factor],
    budget: usize,
    nodes: usize,
    best: Vec<usize>,
    stack: Vec<usize>,
    ceiling: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, x: &TensorClass, start: usize) {
        if self.stack.len() > self.best.len() {
            self.best = self.stack.clone();
        }
        if self.best.len() == self.ceiling {
            return;
        }
        for i in start..self.pool.len() {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let f = self.pool[i];
            let gl = self.table.gens[&f.gen].as_slice();
            let terms: Vec<(usize, &[u16])> = f.positions().into_iter().map(|p| (p - 1, gl)).collect();
            let y = self.table.multiply_local(x, &terms);
            if y.is_zero() {
                continue;
            }
            self.stack.push(i);
            self.dfs(&y, i);
            self.stack.pop();
            if self.best.len() == self.ceiling {
                return;
            }
        }
    }
}

/// Bits of a class on the basis of one degree, from global indices.
pub fn local_bits(table: &BasisTable, degree: usize, dim: usize, globals: &BTreeSet<u16>) -> BitVec {
    BitVec::from_indices(
        dim,
        globals.iter().map(|&g| g as usize).filter(|&g| table.degree_of(g) == degree).map(|g| table.local_index(g)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::build_ring;
    use crate::sets::IndexSet;

    fn setup(n: usize, genes: &[&[usize]]) -> (RingPresentation, BasisTable) {
        let ring = build_ring(&GeneticCode::parse(n, genes).unwrap()).unwrap();
        let table = BasisTable::new(&ring);
        (ring, table)
    }

    #[test]
    fn embed_is_multiplicative() {
        let (ring, t) = setup(7, &[&[2, 4, 7], &[5, 7]]);
        let x = ring.generator(Generator::V(2)).unwrap();
        let y = ring.monomial(1, IndexSet::singleton(4)).unwrap();
        let ex = t.embed(&ring, 3, 2, &x).unwrap();
        let ey = t.embed(&ring, 3, 2, &y).unwrap();
        assert_eq!(t.multiply(&ex, &ey), t.embed(&ring, 3, 2, &ring.multiply(&x, &y)).unwrap());
        assert!(t.embed(&ring, 3, 2, &ring.zero(2)).unwrap().is_zero());
        assert!(t.embed(&ring, 3, 4, &x).is_err());
    }

    #[test]
    fn bars_are_zero_divisors() {
        let (ring, t) = setup(7, &[&[2, 4, 7], &[5, 7]]);
        for k in 2..=4 {
            for j in 2..=k {
                for g in [Generator::R, Generator::V(1), Generator::V(5)] {
                    let b = t.bar(k, j, g).unwrap();
                    assert!(t.diagonal(&b).is_empty());
                    assert!(!b.is_zero());
                }
            }
        }
        assert!(t.bar(2, 1, Generator::R).is_err());
        let _ = ring;
        let (_, t) = setup(6, &[&[6]]);
        assert!(t.bar(2, 2, Generator::V(1)).unwrap().is_zero());
    }

    #[test]
    fn circle_zcl_is_k_minus_one() {
        let (ring, _) = setup(4, &[&[4]]);
        for k in 2..=5 {
            let s = zcl_lower_bound(&ring, k, 1_000_000).unwrap();
            assert!(s.exhaustive);
            assert_eq!(s.length, k - 1);
            assert!(evaluate_certificate(&ring, &s.certificate).unwrap().nonzero);
        }
    }

    #[test]
    fn certificate_validation() {
        let (ring, t) = setup(5, &[&[4, 5]]);
        let code = ring.code().clone();
        let bad = Certificate::new(code.clone(), 2).with(Factor::bar(3, Generator::R, 1));
        assert!(t.evaluate(&bad).is_err());
        let bad = Certificate::new(code.clone(), 2).with(Factor::bar(2, Generator::V(5), 1));
        assert!(t.evaluate(&bad).is_err());
        let other = GeneticCode::parse(5, &[&[5]]).unwrap();
        assert!(t.evaluate(&Certificate::new(other, 2)).is_err());
        let c =
            Certificate::new(code, 2).with(Factor::bar(2, Generator::V(1), 2)).with(Factor::bar(2, Generator::R, 1));
        let e = t.evaluate(&c).unwrap();
        assert_eq!(e.length, 3);
        assert!(e.zero_divisors);
    }
}
