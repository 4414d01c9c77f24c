use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{kdual_violation, KKClass, MultiplicityMatrix};
use crate::error::{Error, Result};
use crate::exact_arith::Int;

/// `count` copies of the point evaluation at the source exceptional point
/// with index `source_point` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEntry {
    pub source_point: usize,
    pub multiplicity: Int,
}

/// Combinatorial data of a unital homomorphism `A -> B` with prescribed
/// `(h, chi)`.
///
/// At every `z` the homomorphism is (up to a unitary) the block diagonal
/// `diag(Lambda_1^{s_1}(f), ..., Lambda_N^{s_N}(f), f(lambda_1(z)), ..., f(lambda_L(z)))`,
/// where at the target point `y_j` the eigenvalue functions take the value
/// `x_i` exactly `l_ji` times. One of the `x_N` slots is reserved for the
/// function carrying the `K_1` twist `chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomRecipe {
    /// `s_i` with `0 <= s_i < n/d_i`, independent of the row.
    pub small_remainders: Vec<Int>,
    /// `l_ji`, one row per target exceptional point.
    pub eigenvalue_counts: Vec<Vec<Int>>,
    /// `L = (m - sum_i s_i d_i)/n = sum_i l_ji`.
    pub pattern_length: Int,
    /// Values of the first `L-1` eigenvalue functions at each `y_j`.
    pub pattern: Vec<Vec<PatternEntry>>,
    /// Source point whose last copy is the twist slot (always `N-1`, 0-based).
    pub twist_point: usize,
    pub k1_twist: Vec<Int>,
}

impl HomRecipe {
    /// Multiplicity data of the homomorphism this recipe describes: the
    /// `m`-dimensional decomposition at `y_j` divided by `m/e_j`.
    pub fn induced_multiplicities(&self, kk: &KKClass) -> Result<MultiplicityMatrix> {
        let a = kk.hom.source();
        let b = kk.hom.target();
        let q = a.quotients();
        let c = b.quotients();
        let rows = self
            .eigenvalue_counts
            .iter()
            .zip(&c)
            .map(|(l_row, cj)| {
                l_row
                    .iter()
                    .zip(&self.small_remainders)
                    .zip(&q)
                    .map(|((l, s), qi)| {
                        let total = s + l * qi;
                        let (mult, rem) = total.div_rem(cj);
                        if rem.is_zero() {
                            Ok(mult)
                        } else {
                            Err(Error::InconsistentMultiplicities(format!(
                                "{total} copies do not split over m/e_j = {cj}"
                            )))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MultiplicityMatrix::new(a.clone(), b.clone(), rows, vec![Int::zero(); b.len()])
    }
}

fn hypothesis(condition: String) -> Error {
    Error::RecipeHypothesisFailed(condition)
}

/// Solves `(m/e_j) h_ji = l_ji (n/d_i) + s_i` and lays out the eigenvalue
/// pattern. Requires `h` in standard form with `h_jN >= n/d_N` for all `j`
/// and `sum_i h_Mi d_i = e_M`.
pub fn build_hom_recipe(kk: &KKClass) -> Result<HomRecipe> {
    let h = &kk.hom;
    let a = h.source();
    let b = h.target();
    let big_n = a.len();
    let q = a.quotients();
    let c = b.quotients();

    if !h.is_standard_form() {
        return Err(hypothesis("standard form: 0 <= h_ji < n/d_i for i < N".into()));
    }
    for j in 0..b.len() {
        if h.entry(j, big_n - 1) < &q[big_n - 1] {
            return Err(hypothesis(format!(
                "h_jN >= n/d_N fails at j={} ({} < {})",
                j + 1,
                h.entry(j, big_n - 1),
                q[big_n - 1]
            )));
        }
    }
    if !super::unital_check_last_row(h) {
        let last = b.len() - 1;
        return Err(hypothesis(format!(
            "sum_i h_Mi d_i = e_M fails ({} != {})",
            h.row_dimension(last),
            b.divisors()[last]
        )));
    }
    if let Some(v) = kdual_violation(h) {
        return Err(hypothesis(v));
    }

    let mut small: Option<Vec<Int>> = None;
    let mut counts = Vec::with_capacity(b.len());
    for (j, cj) in c.iter().enumerate() {
        let (l_row, s_row): (Vec<Int>, Vec<Int>) =
            (0..big_n).map(|i| (cj * h.entry(j, i)).div_mod_floor(&q[i])).unzip();
        match &small {
            None => small = Some(s_row),
            Some(s) => assert_eq!(s, &s_row, "remainders independent of j for a valid h"),
        }
        counts.push(l_row);
    }
    let small = small.expect("target has at least two points");

    let used: Int = small.iter().zip(a.divisors()).map(|(s, d)| s * d).sum();
    let (pattern_length, rem) = (b.n() - &used).div_rem(a.n());
    debug_assert!(rem.is_zero());
    for (j, l_row) in counts.iter().enumerate() {
        debug_assert!(l_row.iter().all(|l| !l.is_negative()));
        debug_assert!(l_row[big_n - 1] >= Int::one());
        let row_total: Int = l_row.iter().sum();
        debug_assert_eq!(row_total, pattern_length, "row {j}");
    }

    let pattern = counts
        .iter()
        .map(|l_row| {
            l_row
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let copies = if i == big_n - 1 { l - Int::one() } else { l.clone() };
                    PatternEntry {
                        source_point: i,
                        multiplicity: copies,
                    }
                })
                .filter(|e| e.multiplicity.is_positive())
                .collect()
        })
        .collect();

    Ok(HomRecipe {
        small_remainders: small,
        eigenvalue_counts: counts,
        pattern_length,
        pattern,
        twist_point: big_n - 1,
        k1_twist: kk.chi.clone(),
    })
}
