//! Dense GF(2) linear algebra over bit-packed rows.
//!
//! Rows are stored as `u64` words, 64 columns per word. Everything here is a
//! pure function of its inputs; matrices are small (a few hundred columns at
//! most) so dense elimination is the right tool.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the standard dot product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn is_subset(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + b)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A `rows x cols` matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows written as `"0110"` strings.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                BitVec::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>())
            })
            .collect();
        BitMatrix { cols, rows }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        BitMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols);
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        rref(self).rank()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows of the reduced matrix; row `i` has its leading one at `pivots[i]`.
    pub reduced: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the row space: afterwards `v` has no ones in pivot
    /// columns. Returns whether `v` lay in the row space.
    pub fn reduce(&self, v: &mut BitVec) -> bool {
        for (row, &p) in self.reduced.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v.is_zero()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns that are not pivots, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.reduced.cols).filter(|&c| !self.is_pivot(c)).collect()
    }
}

/// Gauss-Jordan elimination over GF(2). Zero rows are dropped from the result.
pub fn rref(m: &BitMatrix) -> Echelon {
    let mut rows: Vec<BitVec> = m.rows.clone();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Echelon { reduced: BitMatrix { cols: m.cols, rows }, pivots }
}

/// One solution of `M x = b` with every free variable set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    assert_eq!(b.len(), m.nrows(), "right-hand side has the wrong length");
    // augment with the right-hand side as an extra column
    let cols = m.cols + 1;
    let rows = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = BitVec::zeros(cols);
            for c in r.ones() {
                a.set(c, true);
            }
            a.set(m.cols, b.get(i));
            a
        })
        .collect();
    let e = rref(&BitMatrix { cols, rows });
    if e.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = BitVec::zeros(m.cols);
    for (row, &p) in e.reduced.rows.iter().zip(&e.pivots) {
        x.set(p, row.get(m.cols));
    }
    debug_assert_eq!(&m.mul_vec(&x), b);
    Some(x)
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column.
pub fn nullspace(m: &BitMatrix) -> Vec<BitVec> {
    let e = rref(m);
    let basis: Vec<BitVec> = e
        .free_columns()
        .into_iter()
        .map(|f| {
            let mut v = BitVec::zeros(m.cols);
            v.set(f, true);
            for (row, &p) in e.reduced.rows.iter().zip(&e.pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    debug_assert!(basis.iter().all(|v| m.mul_vec(v).is_zero()));
    basis
}
