//! Exact feasibility of small systems `A x >= b, x >= 0` over the rationals.
//!
//! Phase-one simplex on a dense tableau of big rationals with Bland's rule, so
//! it always terminates and never rounds. Systems here have a handful of
//! variables and a few dozen rows.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// One row `coeffs . x >= rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

/// A point satisfying every constraint, or `None` when none exists.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); nvars]);
    }
    // columns: x (nvars), surplus (m), artificial (m), rhs
    let width = nvars + 2 * m + 1;
    let rhs_col = width - 1;
    let mut t: Vec<Vec<BigRational>> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            assert_eq!(c.coeffs.len(), nvars);
            let sign: i64 = if c.rhs < 0 { -1 } else { 1 };
            let mut row = vec![BigRational::zero(); width];
            for (j, &a) in c.coeffs.iter().enumerate() {
                row[j] = BigRational::from_integer(BigInt::from(sign * a));
            }
            row[nvars + i] = BigRational::from_integer(BigInt::from(-sign));
            row[nvars + m + i] = BigRational::one();
            row[rhs_col] = BigRational::from_integer(BigInt::from(sign * c.rhs));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (0..m).map(|i| nvars + m + i).collect();

    // reduced costs for minimizing the sum of artificials
    let mut cost = vec![BigRational::zero(); width];
    for j in nvars + m..nvars + 2 * m {
        cost[j] = BigRational::one();
    }
    for row in &t {
        for j in 0..width {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
    }

    loop {
        let Some(enter) = (0..rhs_col).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[rhs_col] / &row[enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // the phase-one objective is bounded below by zero
        let (r, _) = leave.expect("phase-one simplex cannot be unbounded");
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }

    // the objective value is -cost[rhs_col]
    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (i, &b) in basis.iter().enumerate() {
        if b < nvars {
            x[b] = t[i][rhs_col].clone();
        }
    }
    debug_assert!(constraints.iter().all(|c| {
        let lhs: BigRational =
            c.coeffs.iter().zip(&x).map(|(&a, v)| v * BigRational::from_integer(BigInt::from(a))).sum();
        lhs >= BigRational::from_integer(BigInt::from(c.rhs))
    }));
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Scales a nonnegative rational point to the primitive integer vector on
/// the same ray. `None` if an entry does not fit in `u64`.
pub fn primitive_integer_point(x: &[BigRational]) -> Option<Vec<u64>> {
    let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let v = if g.is_zero() { v.clone() } else { v / &g };
            u64::try_from(v).ok()
        })
        .collect()
}
