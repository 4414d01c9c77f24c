use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{kdual_violation, KDualHom};
use crate::building_blocks::CircleBlock;
use crate::error::{Error, Result};
use crate::exact_arith::Int;

/// Decomposition data of a unital homomorphism `phi: A -> B` at the
/// exceptional points of `B`.
///
/// `s[j][i]` is the multiplicity of `Lambda_i^A` inside `Lambda_j^B ∘ phi`,
/// counting the copies contributed by point evaluations at `x_i`.
/// `point_evals[j]` counts the remaining point evaluations (at
/// non-exceptional points), each of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    pub source: CircleBlock,
    pub target: CircleBlock,
    pub s: Vec<Vec<Int>>,
    pub point_evals: Vec<Int>,
}

impl MultiplicityMatrix {
    pub fn new(source: CircleBlock, target: CircleBlock, s: Vec<Vec<Int>>, point_evals: Vec<Int>) -> Result<Self> {
        if s.len() != target.len() || point_evals.len() != target.len() {
            return Err(Error::InvalidShape(format!(
                "need {} rows of multiplicities and point evaluation counts",
                target.len()
            )));
        }
        if s.iter().any(|row| row.len() != source.len()) {
            return Err(Error::InvalidShape(format!(
                "multiplicity rows must have {} entries",
                source.len()
            )));
        }
        if s.iter().flatten().chain(&point_evals).any(Signed::is_negative) {
            return Err(Error::InvalidShape("multiplicities must be nonnegative".into()));
        }
        Ok(MultiplicityMatrix {
            source,
            target,
            s,
            point_evals,
        })
    }

    /// `e_j - (sum_i s(j,i) d_i + point_evals_j n)` for row `j`.
    fn dimension_defect(&self, j: usize) -> Int {
        let used: Int = self.s[j]
            .iter()
            .zip(self.source.divisors())
            .map(|(s, d)| s * d)
            .sum::<Int>()
            + &self.point_evals[j] * self.source.n();
        &self.target.divisors()[j] - used
    }

    /// Remainders `r_i^j = s(j,i) mod n/d_i` and the total count `K_j` of
    /// `n`-dimensional point evaluations (those absorbed into `s` included).
    pub fn reduced_row(&self, j: usize) -> (Vec<Int>, Int) {
        let mut total = self.point_evals[j].clone();
        let remainders = self.s[j]
            .iter()
            .zip(self.source.quotients())
            .map(|(s, q)| {
                let (k, r) = s.div_mod_floor(&q);
                total += k;
                r
            })
            .collect();
        (remainders, total)
    }
}

/// The induced map on K-homology:
/// `phi^*[Lambda_j^B] = sum_i r_i^j [Lambda_i^A] + K_j (n/d_N) [Lambda_N^A]`.
pub fn multiplicity_to_kdual(s: &MultiplicityMatrix) -> Result<KDualHom> {
    let a = &s.source;
    let big_n = a.len();
    let q_last = a.quotient(big_n - 1);
    let mut rows = Vec::with_capacity(s.target.len());
    for j in 0..s.target.len() {
        let defect = s.dimension_defect(j);
        if !defect.is_zero() {
            return Err(Error::InconsistentMultiplicities(format!(
                "row {}: e_j = {} but the decomposition has dimension {}",
                j + 1,
                s.target.divisors()[j],
                &s.target.divisors()[j] - &defect
            )));
        }
        let (mut row, total) = s.reduced_row(j);
        row[big_n - 1] += total * &q_last;
        rows.push(row);
    }
    let h = KDualHom::new(a.clone(), s.target.clone(), rows)?;
    if let Some(v) = kdual_violation(&h) {
        return Err(Error::InconsistentMultiplicities(format!(
            "rows do not come from one homomorphism: {v}"
        )));
    }
    Ok(h)
}

/// `s1(j,i) = s2(j,i) mod n/d_i` for all `j, i`.
pub fn sr_equivalent(s1: &MultiplicityMatrix, s2: &MultiplicityMatrix) -> Result<bool> {
    if s1.source != s2.source || s1.target != s2.target {
        return Err(Error::InvalidShape("multiplicity data over different blocks".into()));
    }
    let q = s1.source.quotients();
    Ok(s1
        .s
        .iter()
        .zip(&s2.s)
        .all(|(r1, r2)| r1.iter().zip(r2).zip(&q).all(|((x, y), qi)| (x - y).is_multiple_of(qi))))
}
