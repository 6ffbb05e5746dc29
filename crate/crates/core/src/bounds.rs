//! Bounds on the higher topological complexity `TC_k`: binomial parity, the
//! closed-form values of the Poincaré functional on template codes, the
//! certificate products for each template, the `psi` functional solver and the
//! report assembly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{build_ring, Generator, Monomial, RingPresentation};
use crate::error::{Error, Result};
use crate::genetics::{Classifier, GeneticCode, Template};
use crate::linsys::{solve, BitMatrix, BitVec};
use crate::sets::IndexSet;
use crate::tensor::{BasisTable, Certificate, Factor, TensorClass};

/// `binom(n, k) mod 2` by Lucas: odd iff every binary digit of `k` is also a
/// digit of `n`.
pub fn lucas_binom_mod2(n: u64, k: u64) -> Result<bool> {
    if k > n {
        return Err(Error::OutOfRange("binomial needs k <= n"));
    }
    Ok(k & !n == 0)
}

/// Parity of `binom(n, k)` with the convention that it vanishes outside
/// `0 <= k <= n`.
pub fn binom_mod2(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (k & !n) == 0
}

pub fn is_power_of_two(x: usize) -> bool {
    x.is_power_of_two()
}

fn check_positive(params: &[usize]) -> Result<()> {
    if params.iter().all(|&p| p >= 1) {
        Ok(())
    } else {
        Err(Error::OutOfRange("template parameters must be positive"))
    }
}

/// `C(x, 2) mod 2`.
fn choose2(x: usize) -> bool {
    x % 4 >= 2
}

/// Whether `R^m != 0` for `<{a,a+b,n}>`.
pub fn lemma_size3(a: usize, b: usize) -> Result<bool> {
    check_positive(&[a, b])?;
    Ok(a % 4 == 3 || (a.is_multiple_of(4) && b.is_multiple_of(2)) || (a % 4 == 2 && b % 2 == 1))
}

/// Whether `R^m != 0` for `<{a,a+b,a+b+c,n}>`.
///
/// The second even-`a` case reads `a + b = 3 mod 4`; the variant stated with
/// `c = 1 mod 4` disagrees with the closed form for `phi(R^m)`.
pub fn lemma_size4(a: usize, b: usize, c: usize) -> Result<bool> {
    check_positive(&[a, b, c])?;
    let bc_even = (b + c).is_multiple_of(2);
    let a_even = a.is_multiple_of(2);
    Ok((bc_even && a_even && (a + b).is_multiple_of(4))
        || (bc_even && a_even && (a + b) % 4 == 3)
        || (!bc_even && a % 4 == 3)
        || (!bc_even && matches!(b % 4, 2 | 3) && matches!(a % 4, 0 | 2))
        || (a % 4 == 2 && b % 4 == 2))
}

/// Whether `R^m != 0` for `<{a+b,a+b+c,n},{a,a+b+c+d,n}>`.
///
/// `phi(R^m)` splits as `[C(a-1,2) + C(b,2) + bc + (a-1)(b+c)] + (a+1)d`; the
/// bracket is even exactly when `a+b = 1` or `a+b+2c = 2 (mod 4)`, and the
/// value is odd when the two parts have opposite parity.
pub fn lemma_two3genes(a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
    check_positive(&[a, b, c, d])?;
    let bracket_even = (a + b) % 4 == 1 || (a + b + 2 * c) % 4 == 2;
    let tail_odd = (a + 1) * d % 2 == 1;
    Ok(bracket_even == tail_odd)
}

/// Closed-form values of `phi` on `<{a,a+b,n}>`, named by monomial type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriplePhi {
    /// `R^(m-2) V_i V_j` with `i < j <= a`.
    pub phi11: bool,
    /// `R^(m-2) V_i V_j` with `i <= a < j <= a+b`.
    pub phi12: bool,
    /// `R^(m-1) V_i` with `a < i <= a+b`.
    pub phi2: bool,
    /// `R^(m-1) V_i` with `i <= a`.
    pub phi1: bool,
    /// `R^m`.
    pub phi0: bool,
}

pub fn triple_phi(a: usize, b: usize) -> TriplePhi {
    TriplePhi {
        phi11: true,
        phi12: true,
        phi2: a.is_multiple_of(2),
        phi1: (a + b) % 2 == 1,
        phi0: (a.saturating_sub(1) * b % 2 == 1) ^ choose2(a.saturating_sub(1)),
    }
}

/// `phi(R^m)` for `<{a,a+b,a+b+c,n}>`.
pub fn quad_phi0(a: usize, b: usize, c: usize) -> bool {
    let t1 = choose2(a) && (a + b + c - 1) % 2 == 1;
    let t2 = (a - 1) % 2 == 1 && (choose2(b) ^ ((b - 1) * (c - 1) % 2 == 1));
    t1 ^ t2
}

/// `phi(R^m)` for `<{a+b,a+b+c,n},{a,a+b+c+d,n}>`.
pub fn two_triples_phi0(a: usize, b: usize, c: usize, d: usize) -> bool {
    choose2(a - 1) ^ choose2(b) ^ (b * c % 2 == 1) ^ ((a + 1) * (b + c + d) % 2 == 1)
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Generator powers making up one block of a certificate.
type Block = [(Generator, usize)];

/// `prod_j block(2j)` for `j = 1..l`, each generator barred at `2j`; for odd
/// `k` also `tail` barred at `k`.
fn paired(code: &GeneticCode, k: usize, block: &Block, tail: &Block) -> Certificate {
    let mut c = Certificate::new(code.clone(), k);
    for j in 1..=k / 2 {
        for &(g, e) in block {
            c.push(Factor::bar(2 * j, g, e));
        }
    }
    if k % 2 == 1 && k > 1 {
        for &(g, e) in tail {
            c.push(Factor::bar(k, g, e));
        }
    }
    c
}

/// Appends `prod_{j<l} (g_(2j-1) + g_(2j+1))`.
fn chain(mut c: Certificate, g: Generator) -> Certificate {
    let l = c.k / 2;
    for j in 1..l {
        c.push(Factor::diff(2 * j - 1, 2 * j + 1, g, 1));
    }
    c
}

const R: Generator = Generator::R;

fn v(i: usize) -> Generator {
    Generator::V(i)
}

/// Length `km - floor(k/2)` product for `<{a,n}>`.
pub fn pair_certificate(code: &GeneticCode, k: usize) -> Certificate {
    let m = code.dim();
    paired(code, k, &[(v(1), m), (R, m - 1)], &[(v(1), 1), (R, m - 1)])
}

/// Length `km - 1` product for `<{a,n}>`, nonzero when `m` is a power of two.
pub fn pair_sharp_certificate(code: &GeneticCode, k: usize) -> Certificate {
    let m = code.dim();
    let c = paired(code, k, &[(v(1), m), (R, m - 1)], &[]);
    let mut c = chain(c, v(1));
    if k % 2 == 1 {
        c.push(Factor::bar(k, v(1), 1));
        c.push(Factor::bar(k, R, m - 1));
    }
    c
}

/// Length `km - 1` product of powers of `R`, nonzero when `R^m != 0` and `m`
/// is a power of two.
pub fn r_power_certificate(code: &GeneticCode, k: usize) -> Certificate {
    let m = code.dim();
    let c = paired(code, k, &[(R, 2 * m - 1)], &[]);
    let mut c = chain(c, R);
    if k % 2 == 1 {
        c.push(Factor::bar(k, R, m));
    }
    c
}

/// Length `km - floor(k/2)` product built on a subgee `s` with
/// `phi(R^(m-|s|) V_s) = 1`.
pub fn with_pair_certificate(code: &GeneticCode, k: usize, s: IndexSet) -> Certificate {
    let m = code.dim();
    let t = s.len();
    let elems = s.to_vec();
    let mut block = vec![(v(elems[0]), m + 1 - t)];
    block.extend(elems[1..].iter().map(|&i| (v(i), 1)));
    block.push((R, m - 1));
    let mut tail: Vec<(Generator, usize)> = elems.iter().map(|&i| (v(i), 1)).collect();
    tail.push((R, m - t));
    paired(code, k, &block, &tail)
}

/// Smallest `t` with `m <= 2^t`.
fn ceil_log2(m: usize) -> u32 {
    m.next_power_of_two().trailing_zeros()
}

pub fn triple_certificate(code: &GeneticCode, k: usize, a: usize, b: usize) -> Option<Certificate> {
    let m = code.dim();
    if m < 2 {
        return None;
    }
    let x = v(a + b);
    let t = ceil_log2(m);
    let p = 1usize << t;
    Some(if a.is_multiple_of(2) {
        paired(code, k, &[(v(1), 2 * m - 1 - p), (x, 1), (R, p - 1)], &[(x, 1), (R, m - 1)])
    } else if m != p / 2 + 1 {
        paired(code, k, &[(v(1), m - 1), (x, 2), (R, m - 2)], &[(v(1), 1), (x, 1), (R, m - 2)])
    } else {
        paired(code, k, &[(v(1), m), (x, m - 1)], &[(v(1), 1), (x, 1), (R, m - 2)])
    })
}

pub fn type_two_certificate(code: &GeneticCode, k: usize, last: bool) -> Option<Certificate> {
    let m = code.dim();
    if m < 4 {
        return None;
    }
    let (w, u, vv) = (v(1), v(2), v(3));
    Some(if !is_power_of_two(m - 1) || last {
        let tail: &Block = if last { &[(w, 1), (u, 2), (R, m - 3)] } else { &[(w, 1), (u, 1), (vv, 1), (R, m - 3)] };
        paired(code, k, &[(w, m - 1), (u, 2), (vv, 1), (R, m - 3)], tail)
    } else {
        paired(code, k, &[(w, m), (u, 2), (vv, 1), (R, m - 4)], &[(w, 1), (u, 1), (vv, 1), (R, m - 3)])
    })
}

/// Which of the two size-4 situations applies, if any.
pub fn quad_situation(m: usize, a: usize, b: usize, c: usize) -> Option<u8> {
    if m > 4 && a % 4 == 1 && b % 4 == 1 && c % 2 == 1 {
        Some(1)
    } else if m > 3 && a % 4 == 2 && b.is_multiple_of(4) && c % 2 == 1 {
        Some(2)
    } else {
        None
    }
}

pub fn quad_certificate(code: &GeneticCode, k: usize, a: usize, b: usize, c: usize) -> Option<Certificate> {
    let m = code.dim();
    let (w, x, y) = (v(1), v(a + b), v(a + b + c));
    let two_power = m >= 2 && is_power_of_two(m - 2);
    match quad_situation(m, a, b, c)? {
        1 => {
            let block: &Block = if two_power {
                &[(w, m - 1), (x, 2), (y, 3), (R, m - 5)]
            } else {
                &[(w, m - 2), (x, 2), (y, 3), (R, m - 4)]
            };
            Some(paired(code, k, block, &[(w, 1), (x, 2), (y, 1), (R, m - 4)]))
        }
        _ => {
            let block: &Block = if two_power {
                &[(w, 2), (x, 2), (y, m - 1), (R, m - 4)]
            } else {
                &[(w, 2), (x, 2), (y, m - 2), (R, m - 3)]
            };
            Some(paired(code, k, block, &[(x, 2), (y, 1), (R, m - 3)]))
        }
    }
}

/// `(t, m')` with `m = 2^t + m'`, `2 <= m' <= 2^t + 1`, `t >= 1`.
pub fn two_triples_split(m: usize) -> Option<(u32, usize)> {
    if m < 4 {
        return None;
    }
    let t = (m - 2).ilog2();
    Some((t, m - (1usize << t)))
}

pub fn two_triples_certificate(code: &GeneticCode, k: usize, a: usize, b: usize, c: usize) -> Option<Certificate> {
    let m = code.dim();
    let (t, mp) = two_triples_split(m)?;
    let (w, x, y) = (v(1), v(a + b), v(a + b + c));
    Some(paired(
        code,
        k,
        &[(w, 2 * mp - 3), (x, 2), (y, 1), (R, (1usize << (t + 1)) - 1)],
        &[(w, 1), (x, 1), (R, m - 2)],
    ))
}

/// The listed exceptions for two genes sharing `1`, or `None` when none applies.
pub fn type_one_exception(m: usize, b: usize, c: usize, d: usize) -> Option<&'static str> {
    if b % 4 == 1 && c % 2 == 1 && d.is_multiple_of(2) {
        Some("b = 1 mod 4, c odd, d even")
    } else if m >= 1 && is_power_of_two(m - 1) {
        Some("m - 1 is a power of two")
    } else if is_power_of_two(m) && b % 4 == 2 && c % 2 == 1 && d.is_multiple_of(2) {
        Some("m a power of two, b = 2 mod 4, c odd, d even")
    } else {
        None
    }
}

pub fn type_one_certificate(code: &GeneticCode, k: usize, b: usize, c: usize) -> Option<Certificate> {
    let m = code.dim();
    if m < 3 {
        return None;
    }
    let (w, x, y) = (v(1), v(1 + b), v(1 + b + c));
    Some(paired(code, k, &[(w, m - 1), (x, 2), (y, 1), (R, m - 3)], &[(w, 1), (x, 1), (y, 1), (R, m - 3)]))
}

// ---------------------------------------------------------------------------
// psi
// ---------------------------------------------------------------------------

/// A functional on `H^(m-1)` found by [`solve_psi`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSolution {
    /// Values on the basis of `H^(m-1)`.
    pub values: BitVec,
    /// Index blocks the functional was required to be symmetric under.
    pub blocks: Vec<Vec<usize>>,
    /// Number of target equations imposed.
    pub targets: usize,
}

impl PsiSolution {
    /// `psi(R^(m-1-|s|) V_s)`.
    pub fn value(&self, ring: &RingPresentation, s: IndexSet) -> Result<bool> {
        let m = ring.m();
        if s.len() + 1 > m {
            return Err(Error::OutOfRange("support too large for degree m-1"));
        }
        let c = ring.monomial(m - 1 - s.len(), s)?;
        Ok(ring.basis_coords(&c).dot(&self.values))
    }

    /// Subgees (of size below `m`) whose monomial `psi` sends to one.
    pub fn support(&self, ring: &RingPresentation) -> Vec<IndexSet> {
        let m = ring.m();
        ring.subgees().sets().iter().copied().filter(|s| s.len() < m && self.value(ring, *s).unwrap_or(false)).collect()
    }
}

/// Maximal runs of consecutive indices in `[n-1]` such that swapping any two
/// neighbours of the run maps the subgee family onto itself.
pub fn symmetry_blocks(ring: &RingPresentation) -> Vec<Vec<usize>> {
    let n = ring.n();
    let fam = ring.subgees();
    let swaps = |i: usize| {
        fam.sets().iter().all(|&s| {
            let t = match (s.contains(i), s.contains(i + 1)) {
                (true, false) => s.without(i).with(i + 1),
                (false, true) => s.without(i + 1).with(i),
                _ => s,
            };
            fam.contains(t)
        })
    };
    let mut blocks = vec![vec![1]];
    for i in 1..n.saturating_sub(1) {
        if swaps(i) {
            blocks.last_mut().expect("nonempty").push(i + 1);
        } else {
            blocks.push(vec![i + 1]);
        }
    }
    blocks
}

/// The linear form `psi -> (phi (x) psi)(z)` on `H^(m-1)`, read off the
/// `(m, m-1)` component of a class `z` in the square of the ring.
pub fn phi_psi_form(ring: &RingPresentation, table: &BasisTable, z: &TensorClass) -> BitVec {
    let m = ring.m();
    let mut c = BitVec::zeros(ring.dim(m - 1));
    for t in table.component(z, &[m, m - 1]) {
        if t[0] == table.top() {
            c.flip(table.local_index(t[1]));
        }
    }
    c
}

/// Splits `blocks` so that every index in `cuts` ends its block.
pub fn refine_blocks(blocks: &[Vec<usize>], cuts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for b in blocks {
        let mut cur = Vec::new();
        for &i in b {
            cur.push(i);
            if cuts.contains(&i) {
                out.push(core::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

/// Indices of the `V` generators a certificate uses.
pub fn named_indices(cert: &Certificate) -> Vec<usize> {
    let mut v: Vec<usize> = cert
        .factors
        .iter()
        .filter_map(|f| match f.gen {
            Generator::V(i) => Some(i),
            Generator::R => None,
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Solves for a functional `psi` on `H^(m-1)` with `form . psi = 1` for
/// every target form, the given monomial values pinned, and equal values on
/// monomials whose supports meet each of `blocks` in the same number of
/// elements. Vanishing on the relations is automatic since `psi` lives on the
/// quotient. Pass singleton blocks for no uniformity.
pub fn solve_psi(
    ring: &RingPresentation,
    targets: &[BitVec],
    pins: &[(IndexSet, bool)],
    blocks: &[Vec<usize>],
) -> Result<Option<PsiSolution>> {
    let m = ring.m();
    if m < 1 {
        return Err(Error::OutOfRange("psi needs m >= 1"));
    }
    let dim = ring.dim(m - 1);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for t in targets {
        if t.len() != dim {
            return Err(Error::DegreeMismatch { expected: dim, found: t.len() });
        }
        rows.push(t.clone());
        rhs.push(true);
    }
    for &(s, val) in pins {
        if !ring.subgees().contains(s) {
            return Err(Error::NotSubgee(s));
        }
        if s.len() + 1 > m {
            return Err(Error::OutOfRange("support too large for degree m-1"));
        }
        rows.push(ring.basis_coords(&ring.monomial(m - 1 - s.len(), s)?));
        rhs.push(val);
    }
    let mut classes: alloc::collections::BTreeMap<Vec<usize>, BitVec> = Default::default();
    for &s in ring.subgees().sets() {
        if s.len() + 1 > m {
            continue;
        }
        let key: Vec<usize> = blocks.iter().map(|b| b.iter().filter(|&&i| s.contains(i)).count()).collect();
        let coords = ring.basis_coords(&ring.monomial(m - 1 - s.len(), s)?);
        match classes.get(&key) {
            Some(first) => {
                let mut diff = coords;
                diff.xor_assign(first);
                if !diff.is_zero() {
                    rows.push(diff);
                    rhs.push(false);
                }
            }
            None => {
                classes.insert(key, coords);
            }
        }
    }
    let a = BitMatrix::from_rows(dim, rows);
    let b = BitVec::from_bools(&rhs);
    Ok(solve(&a, &b).map(|values| PsiSolution { values, blocks: blocks.to_vec(), targets: targets.len() }))
}

/// A `psi` certifying a two-fold product, as uniform as possible: first with
/// the symmetry blocks of the code, then with those blocks cut after every
/// index the product names, then with no uniformity at all. Over `Z/2` a
/// symmetric product need not admit a symmetric witness, so the last step is
/// sometimes needed.
pub fn psi_for_certificate(
    ring: &RingPresentation,
    table: &BasisTable,
    cert: &Certificate,
    pins: &[(IndexSet, bool)],
) -> Result<Option<PsiSolution>> {
    if cert.k != 2 {
        return Err(Error::OutOfRange("psi certifies two-fold products"));
    }
    let z = table.evaluate(cert)?.product;
    let form = phi_psi_form(ring, table, &z);
    let sym = symmetry_blocks(ring);
    if let Some(p) = solve_psi(ring, core::slice::from_ref(&form), pins, &sym)? {
        return Ok(Some(p));
    }
    let fine = refine_blocks(&sym, &named_indices(cert));
    if let Some(p) = solve_psi(ring, core::slice::from_ref(&form), pins, &fine)? {
        return Ok(Some(p));
    }
    let single: Vec<Vec<usize>> = (1..ring.n()).map(|i| vec![i]).collect();
    solve_psi(ring, &[form], pins, &single)
}

/// Value of `(phi (x) psi)` on the `(m, m-1)` part of the Type-2 product
/// `w^(m-1) u^2 v R^(m-3)` through its closed-form expansion in `phi_S` and
/// `psi_S` for `S` inside `{1,2,3}`. `None` when that product is not the one
/// used (`m - 1` a power of two and the gees not the exceptional ones).
pub fn type_two_expansion(ring: &RingPresentation, psi: &PsiSolution, last: bool) -> Result<Option<bool>> {
    let m = ring.m();
    if m < 4 {
        return Err(Error::OutOfRange("Type-2 products need m >= 4"));
    }
    if is_power_of_two(m - 1) && !last {
        return Ok(None);
    }
    let s = |xs: &[usize]| IndexSet::from_indices(xs.iter().copied());
    let phi = |xs: &[usize]| -> Result<bool> {
        let set = s(xs);
        if ring.subgees().contains(set) {
            ring.phi_s(set)
        } else {
            Ok(false)
        }
    };
    let ps = |xs: &[usize]| -> Result<bool> {
        let set = s(xs);
        if ring.subgees().contains(set) {
            psi.value(ring, set)
        } else {
            Ok(false)
        }
    };
    let mut total = ((phi(&[2, 3])? ^ phi(&[1, 2, 3])?) & ps(&[1])?)
        ^ (phi(&[1, 3])? & (ps(&[2])? ^ ps(&[1, 2])?))
        ^ ((m - 1) % 2 == 1 && phi(&[1])? && (ps(&[2, 3])? ^ ps(&[1, 2, 3])?));
    if is_power_of_two(m) {
        total ^= phi(&[1])? & ps(&[1, 2, 3])?;
    } else if is_power_of_two(m - 1) {
        total ^= (phi(&[1, 2, 3])? & ps(&[1])?) ^ (phi(&[1, 3])? & ps(&[1, 2])?);
    }
    Ok(Some(total))
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// How a lower bound was obtained. Among equal bounds, earlier variants win.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// `k = 1`: `TC_1 = 1`.
    Trivial,
    /// `(k-1)m + 1` from the category of the `(k-1)`-fold product.
    Sandwich,
    /// Single gene `{a,n}` with `m` a power of two, length `km - 1`.
    PairGeneSharp,
    /// Powers of `R` with `R^m != 0` and `m` a power of two.
    RPower,
    /// Single gene `{a,n}`, length `km - floor(k/2)`.
    PairGene,
    /// A gene `{a,n}` among several.
    WithPair,
    /// Single gene of size three.
    Size3,
    /// Type-2 codes.
    TypeTwo,
    /// Single gene of size four.
    Size4,
    /// Two genes of size three.
    TwoTriples,
    /// Two genes sharing `1`.
    TypeOne,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Trivial => "trivial",
            Method::Sandwich => "dimensional-sandwich",
            Method::PairGene => "pair-gene",
            Method::PairGeneSharp => "pair-gene-sharp",
            Method::RPower => "r-power",
            Method::WithPair => "with-pair",
            Method::Size3 => "size3",
            Method::TypeTwo => "type2",
            Method::Size4 => "size4",
            Method::TwoTriples => "two-triples",
            Method::TypeOne => "type1",
        }
    }
}

/// Whether a certificate backs the reported bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    /// The certificate evaluated to a nonzero class.
    Verified,
    /// No evaluation was attempted or the budget ran out.
    Unverified,
    /// The bound needs no certificate (trivial or sandwich bounds).
    NotNeeded,
}

/// One candidate lower bound with its justification.
#[derive(Clone, Debug)]
pub struct Claim {
    pub method: Method,
    pub lower: usize,
    pub hypotheses: Vec<String>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct TCBoundReport {
    pub code: GeneticCode,
    pub k: usize,
    pub m: usize,
    pub lower: usize,
    pub upper: usize,
    pub method: Method,
    pub hypotheses: Vec<String>,
    pub certificate: Option<Certificate>,
    pub verification: Verification,
    pub caveats: Vec<String>,
}

impl TCBoundReport {
    /// Whether `lower == km`, leaving only `km` or `km + 1`.
    pub fn is_sharp(&self) -> bool {
        self.lower == self.k * self.m
    }
}

/// Options for [`tc_bounds`].
#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    /// Evaluate the certificate of every template bound.
    pub certify: bool,
    /// Term budget for each certificate evaluation.
    pub max_terms: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { certify: true, max_terms: 2_000_000 }
    }
}

/// Caveat attached to single-gene bounds whose statement names the double
/// cover while the argument runs on the planar space.
const DOUBLE_COVER_CAVEAT: &str =
    "usually stated for the double cover M_alpha; proved and reported here for the planar space";

fn yes(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

/// Candidate lower bounds for `code` and `k >= 2`, strongest first.
pub fn claims(code: &GeneticCode, ring: &RingPresentation, classifier: &Classifier, k: usize) -> Vec<Claim> {
    let m = code.dim();
    let sig = classifier.classify(code);
    let weak = k * m - k / 2 + 1;
    let sharp = k * m;
    let two = is_power_of_two(m);
    let mut out = Vec::new();
    for t in &sig.templates {
        match *t {
            Template::Pair { a } => {
                out.push(Claim {
                    method: Method::PairGene,
                    lower: weak,
                    hypotheses: vec![format!("single gene {{{a},n}}")],
                    certificate: Some(pair_certificate(code, k)),
                });
                if two {
                    out.push(Claim {
                        method: Method::PairGeneSharp,
                        lower: sharp,
                        hypotheses: vec![format!("single gene {{{a},n}}"), format!("m = {m} is a power of two")],
                        certificate: Some(pair_sharp_certificate(code, k)),
                    });
                }
            }
            Template::WithPair { a } => {
                if let Some(s) = with_pair_subgee(ring) {
                    out.push(Claim {
                        method: Method::WithPair,
                        lower: weak,
                        hypotheses: vec![
                            format!("gene {{{a},n}} among {} genes", code.genes().len()),
                            format!("phi(R^{} V_{s}) = 1", m - s.len()),
                        ],
                        certificate: Some(with_pair_certificate(code, k, s)),
                    });
                }
            }
            Template::TwoFourPair { a } => {
                let odd = a % 2 == 1;
                if a >= 5 && odd && two {
                    out.push(Claim {
                        method: Method::RPower,
                        lower: sharp,
                        hypotheses: vec![
                            format!("genes {{2,4,n}},{{{a},n}} with a = {a} >= 5 odd"),
                            format!("m = {m} is a power of two"),
                        ],
                        certificate: Some(r_power_certificate(code, k)),
                    });
                }
            }
            Template::Triple { a, b } => {
                if let Some(c) = triple_certificate(code, k, a, b) {
                    let case = if a % 2 == 0 {
                        "a even"
                    } else if m != (1usize << ceil_log2(m)) / 2 + 1 {
                        "a odd, m != 2^(t-1) + 1"
                    } else {
                        "a odd, m = 2^(t-1) + 1"
                    };
                    out.push(Claim {
                        method: Method::Size3,
                        lower: weak,
                        hypotheses: vec![format!("single gene of size 3, a = {a}, b = {b}"), case.into()],
                        certificate: Some(c),
                    });
                }
                let lemma = lemma_size3(a, b).unwrap_or(false);
                if two && lemma {
                    out.push(Claim {
                        method: Method::RPower,
                        lower: sharp,
                        hypotheses: vec![
                            format!("size-3 parity condition on a = {a}, b = {b} {}", yes(lemma)),
                            format!("m = {m} is a power of two"),
                        ],
                        certificate: Some(r_power_certificate(code, k)),
                    });
                }
            }
            Template::TypeTwo { last } => {
                if let Some(c) = type_two_certificate(code, k, last) {
                    let case = if !is_power_of_two(m - 1) || last {
                        "m - 1 not a power of two, or the exceptional gees {3,4},{2,5},{1,6}"
                    } else {
                        "m - 1 a power of two"
                    };
                    out.push(Claim {
                        method: Method::TypeTwo,
                        lower: weak,
                        hypotheses: vec![format!("Type 2, m = {m} >= 4"), case.into()],
                        certificate: Some(c),
                    });
                }
            }
            Template::Quad { a, b, c } => {
                if let Some(cert) = quad_certificate(code, k, a, b, c) {
                    let sit = quad_situation(m, a, b, c).expect("certificate implies a situation");
                    let h = if sit == 1 {
                        "m > 4, a = b = 1 mod 4, c odd"
                    } else {
                        "m > 3, a = 2 mod 4, b = 0 mod 4, c odd"
                    };
                    out.push(Claim {
                        method: Method::Size4,
                        lower: weak,
                        hypotheses: vec![format!("single gene of size 4, (a,b,c) = ({a},{b},{c})"), h.into()],
                        certificate: Some(cert),
                    });
                }
                let lemma = lemma_size4(a, b, c).unwrap_or(false);
                if two && lemma {
                    out.push(Claim {
                        method: Method::RPower,
                        lower: sharp,
                        hypotheses: vec![
                            format!("size-4 parity condition on ({a},{b},{c}) {}", yes(lemma)),
                            format!("m = {m} is a power of two"),
                        ],
                        certificate: Some(r_power_certificate(code, k)),
                    });
                }
            }
            Template::TwoTriples { a, b, c, d } => {
                if let Some(cert) = two_triples_certificate(code, k, a, b, c) {
                    let (t, mp) = two_triples_split(m).expect("certificate implies a split");
                    out.push(Claim {
                        method: Method::TwoTriples,
                        lower: weak,
                        hypotheses: vec![
                            format!("two genes of size 3, (a,b,c,d) = ({a},{b},{c},{d})"),
                            format!("m = 2^{t} + {mp}"),
                        ],
                        certificate: Some(cert),
                    });
                }
                let lemma = lemma_two3genes(a, b, c, d).unwrap_or(false);
                if two && lemma {
                    out.push(Claim {
                        method: Method::RPower,
                        lower: sharp,
                        hypotheses: vec![
                            format!("two-gene parity condition on ({a},{b},{c},{d}) {}", yes(lemma)),
                            format!("m = {m} is a power of two"),
                        ],
                        certificate: Some(r_power_certificate(code, k)),
                    });
                }
            }
            Template::TypeOne { b, c, d } => {
                if type_one_exception(m, b, c, d).is_none() {
                    if let Some(cert) = type_one_certificate(code, k, b, c) {
                        out.push(Claim {
                            method: Method::TypeOne,
                            lower: weak,
                            hypotheses: vec![format!("Type 1, (b,c,d) = ({b},{c},{d})"), "no exception applies".into()],
                            certificate: Some(cert),
                        });
                    }
                }
            }
            Template::Point => {}
        }
    }
    out.sort_by(|x, y| y.lower.cmp(&x.lower).then(x.method.cmp(&y.method)));
    out
}

/// First nonempty subgee `S` (by size, then colex) with
/// `phi(R^(m-|S|) V_S) = 1` whose two-fold product is nonzero.
pub fn with_pair_subgee(ring: &RingPresentation) -> Option<IndexSet> {
    let m = ring.m();
    let table = BasisTable::new(ring);
    ring.subgees().sets().iter().copied().filter(|s| !s.is_empty() && s.len() <= m).find(|&s| {
        ring.phi_s(s).unwrap_or(false)
            && table.evaluate(&with_pair_certificate(ring.code(), 2, s)).map(|e| e.nonzero).unwrap_or(false)
    })
}

/// Bounds `TC_k` of the planar polygon space of `code`.
pub fn tc_bounds(code: &GeneticCode, k: usize, classifier: &Classifier, opts: BoundOptions) -> Result<TCBoundReport> {
    let ring = build_ring(code)?;
    tc_bounds_with_ring(&ring, k, classifier, opts)
}

pub fn tc_bounds_with_ring(
    ring: &RingPresentation,
    k: usize,
    classifier: &Classifier,
    opts: BoundOptions,
) -> Result<TCBoundReport> {
    let code = ring.code();
    let m = ring.m();
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1"));
    }
    if k == 1 {
        return Ok(TCBoundReport {
            code: code.clone(),
            k,
            m,
            lower: 1,
            upper: 1,
            method: Method::Trivial,
            hypotheses: vec!["TC_1 of a path-connected space is 1".into()],
            certificate: None,
            verification: Verification::NotNeeded,
            caveats: Vec::new(),
        });
    }
    let upper = k * m + 1;
    let fallback = (k - 1) * m + 1;
    let cl = ring.cup_length();
    if cl.length != m {
        return Err(Error::InconsistentRing("cup length differs from the dimension"));
    }
    let mut report = TCBoundReport {
        code: code.clone(),
        k,
        m,
        lower: fallback,
        upper,
        method: Method::Sandwich,
        hypotheses: vec![format!("cup length m = {m} witnessed by {}", Monomial { r: cl.r, support: cl.support })],
        certificate: None,
        verification: Verification::NotNeeded,
        caveats: Vec::new(),
    };
    let table = if opts.certify { Some(BasisTable::new(ring)) } else { None };
    for claim in claims(code, ring, classifier, k) {
        if claim.lower <= report.lower {
            break;
        }
        let cert = claim.certificate.clone();
        let verification = match (&table, &cert) {
            (Some(t), Some(c)) => match t.evaluate_within(c, opts.max_terms)? {
                Some(e) if e.nonzero => Verification::Verified,
                Some(_) => {
                    report.caveats.push(format!(
                        "the {} product of length {} vanished; bound not used",
                        claim.method.tag(),
                        c.length()
                    ));
                    continue;
                }
                None => Verification::Unverified,
            },
            _ => Verification::Unverified,
        };
        if verification == Verification::Unverified {
            report.caveats.push(format!("{} bound not machine-checked", claim.method.tag()));
        }
        if matches!(claim.method, Method::PairGene | Method::PairGeneSharp)
            || (claim.method == Method::RPower && report_names_double_cover(code, classifier))
        {
            report.caveats.push(DOUBLE_COVER_CAVEAT.into());
        }
        report.lower = claim.lower;
        report.method = claim.method;
        report.hypotheses = claim.hypotheses;
        report.certificate = cert;
        report.verification = verification;
        break;
    }
    if let Some(Template::TypeOne { b, c, d }) =
        classifier.classify(code).templates.iter().copied().find(|t| matches!(t, Template::TypeOne { .. }))
    {
        if let Some(why) = type_one_exception(m, b, c, d) {
            report.caveats.push(format!(
                "Type 1 exception ({why}): the argument does not apply there, the bound is not known to fail"
            ));
        }
    }
    Ok(report)
}

/// Single gene of size four: the sharp statement names the double cover.
fn report_names_double_cover(code: &GeneticCode, classifier: &Classifier) -> bool {
    classifier.classify(code).has(|t| matches!(t, Template::Quad { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas() {
        assert!(lucas_binom_mod2(7, 3).unwrap());
        assert!(!lucas_binom_mod2(5, 2).unwrap());
        assert!(lucas_binom_mod2(9, 0).unwrap());
        assert!(lucas_binom_mod2(2, 3).is_err());
        let mut row = vec![1u64];
        for n in 1..40u64 {
            let mut next = vec![1u64; n as usize + 1];
            for k in 1..n as usize {
                next[k] = (row[k - 1] + row[k]) % 2;
            }
            for k in 0..=n {
                assert_eq!(lucas_binom_mod2(n, k).unwrap(), next[k as usize] == 1);
            }
            row = next;
        }
    }

    #[test]
    fn lemma_examples() {
        for b in 1..10 {
            assert!(lemma_size3(3, b).unwrap());
        }
        assert!(lemma_size3(4, 2).unwrap());
        assert!(!lemma_size3(1, 1).unwrap());
        assert!(lemma_size4(3, 1, 2).unwrap());
        assert!(lemma_size4(2, 2, 5).unwrap());
        assert!(!lemma_size4(1, 1, 1).unwrap());
        assert!(lemma_size3(0, 1).is_err());
        assert!(lemma_two3genes(1, 1, 1, 0).is_err());
        assert_eq!(lemma_two3genes(1, 1, 1, 1).unwrap(), two_triples_phi0(1, 1, 1, 1));
    }

    fn c2(x: usize) -> usize {
        if x < 2 {
            0
        } else {
            x * (x - 1) / 2
        }
    }

    #[test]
    fn lemmas_match_formulas() {
        for a in 1..30 {
            for b in 1..30 {
                let f3 = ((a - 1) * b + c2(a - 1)) % 2 == 1;
                assert_eq!(lemma_size3(a, b).unwrap(), f3);
                assert_eq!(triple_phi(a, b).phi0, f3);
                for c in 1..20 {
                    let f4 = (c2(a) * (a + b + c - 1) + (a - 1) * (c2(b) + (b - 1) * (c - 1))) % 2 == 1;
                    assert_eq!(lemma_size4(a, b, c).unwrap(), f4, "{a} {b} {c}");
                    assert_eq!(quad_phi0(a, b, c), f4);
                    for d in 1..8 {
                        let f = (c2(a - 1) + c2(b) + b * c + (a + 1) * (b + c + d)) % 2 == 1;
                        assert_eq!(lemma_two3genes(a, b, c, d).unwrap(), f);
                        assert_eq!(two_triples_phi0(a, b, c, d), f);
                    }
                }
            }
        }
    }

    #[test]
    fn two_triples_split_covers_m_from_four() {
        for m in 4..200 {
            let (t, mp) = two_triples_split(m).unwrap();
            assert!(t >= 1 && (2..=(1 << t) + 1).contains(&mp) && (1 << t) + mp == m);
        }
        assert_eq!(two_triples_split(3), None);
    }

    #[test]
    fn certificate_lengths() {
        let code = GeneticCode::parse(7, &[&[2, 7]]).unwrap();
        for k in 2..=5 {
            assert_eq!(pair_certificate(&code, k).length(), 4 * k - k / 2);
            assert_eq!(pair_sharp_certificate(&code, k).length(), 4 * k - 1);
            assert_eq!(r_power_certificate(&code, k).length(), 4 * k - 1);
        }
    }
}
