//! Occurrence counts of code shapes, compared with the published table.

use std::collections::BTreeMap;

use polytc_core::{Classifier, CodeSignature, EnumeratedCode};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Row {
    Two,
    Three,
    Four,
    ThreeThree,
    FourThreeType1,
    FourThreeType2,
    ThreeThreeThreeType2,
    FourThreeThreeType2,
    FourThreeThreeThreeType2,
    /// At least two genes, one of them of size two.
    AnythingTwo,
}

impl Row {
    pub const ALL: [Row; 10] = [
        Row::Two,
        Row::Three,
        Row::Four,
        Row::ThreeThree,
        Row::FourThreeType1,
        Row::FourThreeType2,
        Row::ThreeThreeThreeType2,
        Row::FourThreeThreeType2,
        Row::FourThreeThreeThreeType2,
        Row::AnythingTwo,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Row::Two => "2",
            Row::Three => "3",
            Row::Four => "4",
            Row::ThreeThree => "3,3",
            Row::FourThreeType1 => "4,3 Type 1",
            Row::FourThreeType2 => "4,3 Type 2",
            Row::ThreeThreeThreeType2 => "3,3,3 Type 2",
            Row::FourThreeThreeType2 => "4,3,3 Type 2",
            Row::FourThreeThreeThreeType2 => "4,3,3,3 Type 2",
            Row::AnythingTwo => "anything,2",
        }
    }

    /// Published counts for `n = 5..=8`; `None` where the table is blank.
    pub fn expected(self, n: usize) -> Option<usize> {
        let col: [Option<usize>; 4] = match self {
            Row::Two => [Some(4), Some(5), Some(6), Some(7)],
            Row::Three => [None, Some(5), Some(15), Some(21)],
            Row::Four => [None, None, Some(4), Some(21)],
            Row::ThreeThree => [None, None, Some(15), Some(35)],
            Row::FourThreeType1 => [None, None, Some(8), Some(20)],
            Row::FourThreeType2 => [None, None, Some(10), Some(10)],
            Row::ThreeThreeThreeType2 => [None, None, Some(1), Some(1)],
            Row::FourThreeThreeType2 => [None, None, Some(14), Some(14)],
            Row::FourThreeThreeThreeType2 => [None, None, Some(2), Some(2)],
            Row::AnythingTwo => [None, Some(8), Some(55), Some(559)],
        };
        n.checked_sub(5).and_then(|i| col.get(i).copied().flatten())
    }

    pub fn of(sig: &CodeSignature) -> Option<Row> {
        let s = sig.sizes.as_slice();
        Some(match s {
            [2] => Row::Two,
            [3] => Row::Three,
            [4] => Row::Four,
            [3, 3] => Row::ThreeThree,
            [4, 3] if sig.type1 => Row::FourThreeType1,
            [4, 3] if sig.type2 => Row::FourThreeType2,
            [3, 3, 3] if sig.type2 => Row::ThreeThreeThreeType2,
            [4, 3, 3] if sig.type2 => Row::FourThreeThreeType2,
            [4, 3, 3, 3] if sig.type2 => Row::FourThreeThreeThreeType2,
            _ if s.len() >= 2 && s.contains(&2) => Row::AnythingTwo,
            _ => return None,
        })
    }
}

pub fn count(codes: &[EnumeratedCode], classifier: &Classifier) -> BTreeMap<Row, usize> {
    let mut out: BTreeMap<Row, usize> = Row::ALL.iter().map(|&r| (r, 0)).collect();
    for e in codes {
        if let Some(r) = Row::of(&classifier.classify(&e.code)) {
            *out.get_mut(&r).expect("every row present") += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub row: &'static str,
    pub n: usize,
    pub found: usize,
    pub expected: Option<usize>,
}

impl Cell {
    /// Blank cells always match.
    pub fn matches(&self) -> bool {
        self.expected.is_none_or(|e| e == self.found)
    }
}

pub fn cells(n: usize, counts: &BTreeMap<Row, usize>) -> Vec<Cell> {
    Row::ALL.iter().map(|&r| Cell { row: r.label(), n, found: counts[&r], expected: r.expected(n) }).collect()
}
