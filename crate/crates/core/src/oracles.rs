//! Slow, independent reference computations for the test suite.
//!
//! Nothing else in the crate calls these. The cokernel oracle uses
//! determinantal divisors (gcds of all `k x k` minors) instead of row and
//! column elimination, so it shares no code path with the Smith normal form.

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::building_blocks::CircleBlock;
use crate::error::{Error, Result};
use crate::exact_arith::{FinAbGroup, Int, IntMatrix};

pub const MAX_ORACLE_DIMENSION: usize = 8;
pub const MAX_ORACLE_ENTRY: i64 = 1000;
const MAX_ENUMERATION: u64 = 10_000_000;

fn minor(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> Int {
    let sub: Vec<Vec<Int>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| a[(r, c)].clone()).collect())
        .collect();
    IntMatrix::from_rows(sub).expect("square submatrix").determinant()
}

/// `Z^rows / A Z^cols` for small matrices.
pub fn cokernel_bruteforce(a: &IntMatrix) -> Result<FinAbGroup> {
    if a.rows() > MAX_ORACLE_DIMENSION || a.cols() > MAX_ORACLE_DIMENSION {
        return Err(Error::TooLarge(format!(
            "{}x{} exceeds the oracle cap {MAX_ORACLE_DIMENSION}",
            a.rows(),
            a.cols()
        )));
    }
    let cap = Int::from(MAX_ORACLE_ENTRY);
    if (0..a.rows()).any(|r| a.row(r).iter().any(|x| x.abs() > cap)) {
        return Err(Error::TooLarge(format!(
            "entries exceed {MAX_ORACLE_ENTRY} in absolute value"
        )));
    }

    // D_k = gcd of the k x k minors; the invariant factors are D_k / D_{k-1}.
    let mut previous = Int::one();
    let mut torsion = Vec::new();
    let mut rank = 0;
    for k in 1..=a.rows().min(a.cols()) {
        let mut dk = Int::zero();
        for rows in (0..a.rows()).combinations(k) {
            for cols in (0..a.cols()).combinations(k) {
                dk = dk.gcd(&minor(a, &rows, &cols));
            }
        }
        if dk.is_zero() {
            break;
        }
        rank = k;
        let factor = &dk / &previous;
        if !factor.is_one() {
            torsion.push(factor);
        }
        previous = dk;
    }
    Ok(FinAbGroup::new(a.rows() - rank, torsion))
}

/// `1 + max_i |a_i| d_i / n`, an upper bound on `|b_i|` for any witness of
/// `a_i = b_i n/d_i`.
pub fn witness_bound(b: &CircleBlock, a: &[Int]) -> Int {
    a.iter()
        .zip(b.divisors())
        .map(|(ai, d)| ai.abs() * d / b.n())
        .max()
        .unwrap_or_else(Int::zero)
        + Int::one()
}

/// Searches `|b_i| <= bound` with `sum b_i = 0` for `a = sum_i b_i (n/d_i) e_i`.
pub fn relation_membership_bruteforce(b: &CircleBlock, a: &[Int], bound: &Int) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidShape(format!(
            "vector has length {}, block has {} exceptional points",
            a.len(),
            b.len()
        )));
    }
    let width = bound
        .to_u64()
        .and_then(|w| w.checked_mul(2)?.checked_add(1))
        .ok_or_else(|| Error::TooLarge(format!("bound {bound}")))?;
    let free = b.len() - 1;
    let total = (0..free).try_fold(1u64, |acc, _| acc.checked_mul(width).filter(|&t| t <= MAX_ENUMERATION));
    if total.is_none() {
        return Err(Error::TooLarge(format!("{width}^{free} candidate witnesses")));
    }
    let q = b.quotients();
    let range: Vec<Int> = (0..width).map(|i| Int::from(i) - bound).collect();
    let found = (0..free).map(|_| range.iter()).multi_cartesian_product().any(|head| {
        let last: Int = -head.iter().copied().sum::<Int>();
        head.into_iter()
            .chain(std::iter::once(&last))
            .zip(&q)
            .zip(a)
            .all(|((bi, qi), ai)| bi * qi == *ai)
    });
    Ok(found)
}
