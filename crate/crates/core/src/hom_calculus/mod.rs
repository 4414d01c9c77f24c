//! Homomorphisms `K^0(B) -> K^0(A)` between building blocks, the finite
//! model `(h, chi)` of `KK(A, B)`, and the arithmetic behind constructing
//! unital homomorphisms `A -> B`.
//!
//! Throughout, `A = A(n; d_1..d_N)` is the source and `B = A(m; e_1..e_M)` the
//! target. A homomorphism is an `M x N` integer matrix `h` with
//! `h([Lambda_j^B]) = sum_i h_ji [Lambda_i^A]`.

mod ex1;
mod multiplicity;
mod recipe;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::building_blocks::CircleBlock;
use crate::error::{Error, Result};
use crate::exact_arith::Int;

pub use ex1::{ex1_bookkeeping, Ex1Bookkeeping};
pub use multiplicity::{multiplicity_to_kdual, sr_equivalent, MultiplicityMatrix};
pub use recipe::{build_hom_recipe, HomRecipe, PatternEntry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KDualHom {
    source: CircleBlock,
    target: CircleBlock,
    h: Vec<Vec<Int>>,
}

impl KDualHom {
    /// Wraps a matrix without normalizing it. Only the shape is checked.
    pub fn new(source: CircleBlock, target: CircleBlock, h: Vec<Vec<Int>>) -> Result<Self> {
        check_shape(&h, &source, &target)?;
        Ok(KDualHom { source, target, h })
    }

    pub fn source(&self) -> &CircleBlock {
        &self.source
    }

    pub fn target(&self) -> &CircleBlock {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Int>] {
        &self.h
    }

    pub fn entry(&self, j: usize, i: usize) -> &Int {
        &self.h[j][i]
    }

    /// `sum_i h_ji d_i`.
    pub fn row_dimension(&self, j: usize) -> Int {
        self.h[j].iter().zip(self.source.divisors()).map(|(h, d)| h * d).sum()
    }

    /// `0 <= h_ji < n/d_i` for every `i != N`.
    pub fn is_standard_form(&self) -> bool {
        let q = self.source.quotients();
        let last = q.len() - 1;
        self.h
            .iter()
            .all(|row| row.iter().zip(&q).take(last).all(|(h, qi)| !h.is_negative() && h < qi))
    }
}

fn check_shape(h: &[Vec<Int>], a: &CircleBlock, b: &CircleBlock) -> Result<()> {
    if h.len() != b.len() {
        return Err(Error::InvalidShape(format!(
            "matrix has {} rows, target has {} exceptional points",
            h.len(),
            b.len()
        )));
    }
    if let Some(row) = h.iter().find(|r| r.len() != a.len()) {
        return Err(Error::InvalidShape(format!(
            "matrix row has {} entries, source has {} exceptional points",
            row.len(),
            a.len()
        )));
    }
    Ok(())
}

/// Folds each row into the canonical representative modulo the relations
/// `(n/d_i)[Lambda_i] = (n/d_N)[Lambda_N]`.
pub fn standard_form(raw: Vec<Vec<Int>>, a: &CircleBlock, b: &CircleBlock) -> Result<KDualHom> {
    check_shape(&raw, a, b)?;
    let q = a.quotients();
    let last = q.len() - 1;
    let mut h = raw;
    for row in &mut h {
        for i in 0..last {
            let (shift, rem) = row[i].div_mod_floor(&q[i]);
            row[i] = rem;
            row[last] += shift * &q[last];
        }
    }
    Ok(KDualHom {
        source: a.clone(),
        target: b.clone(),
        h,
    })
}

/// First violated condition among the congruences
/// `(m/e_j) h_ji = (m/e_M) h_Mi mod n/d_i` and the weighted sums
/// `(m/e_j) sum_i h_ji d_i = (m/e_M) sum_i h_Mi d_i`.
pub fn kdual_violation(h: &KDualHom) -> Option<String> {
    let q = h.source.quotients();
    let c = h.target.quotients();
    let last = h.h.len() - 1;
    for j in 0..h.h.len() {
        for i in 0..q.len() {
            let lhs = &c[j] * &h.h[j][i];
            let rhs = &c[last] * &h.h[last][i];
            if !(lhs - rhs).is_multiple_of(&q[i]) {
                return Some(format!(
                    "congruence (m/e_j) h_ji = (m/e_M) h_Mi mod n/d_i fails at j={}, i={}",
                    j + 1,
                    i + 1
                ));
            }
        }
        let lhs = &c[j] * h.row_dimension(j);
        let rhs = &c[last] * h.row_dimension(last);
        if lhs != rhs {
            return Some(format!(
                "weighted sum (m/e_j) sum_i h_ji d_i = (m/e_M) sum_i h_Mi d_i fails at j={} ({lhs} != {rhs})",
                j + 1
            ));
        }
    }
    None
}

/// Whether `h` satisfies the congruence and weighted-sum conditions every
/// homomorphism `K^0(B) -> K^0(A)` has in standard form.
pub fn validate_kdual_hom(h: &KDualHom) -> bool {
    kdual_violation(h).is_none()
}

/// First row `j` with `sum_i h_ji d_i != e_j`.
pub fn unital_violation(h: &KDualHom) -> Option<String> {
    (0..h.h.len()).find_map(|j| {
        let dim = h.row_dimension(j);
        let e = &h.target.divisors()[j];
        (&dim != e).then(|| format!("unitality sum_i h_ji d_i = e_j fails at j={} ({dim} != {e})", j + 1))
    })
}

/// `sum_i h_ji d_i = e_j` for every row.
pub fn unital_check(h: &KDualHom) -> bool {
    unital_violation(h).is_none()
}

/// The weaker condition on the last row only, `sum_i h_Mi d_i = e_M`.
pub fn unital_check_last_row(h: &KDualHom) -> bool {
    let last = h.h.len() - 1;
    h.row_dimension(last) == h.target.divisors()[last]
}

/// `(h, chi)`: the K-homology map together with the image of the canonical
/// unitary in `K_1(B)`, written over `[U_1^B..U_M^B]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KKClass {
    pub hom: KDualHom,
    pub chi: Vec<Int>,
}

impl KKClass {
    pub fn new(hom: KDualHom, chi: Vec<Int>) -> Result<Self> {
        if chi.len() != hom.target.len() {
            return Err(Error::InvalidShape(format!(
                "chi has length {}, target has {} exceptional points",
                chi.len(),
                hom.target.len()
            )));
        }
        Ok(KKClass { hom, chi })
    }

    /// A class with `chi = 0`.
    pub fn without_twist(hom: KDualHom) -> Self {
        let chi = vec![Int::zero(); hom.target.len()];
        KKClass { hom, chi }
    }
}

/// Outcome of the lifting test, with the first failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftDecision {
    pub exists: bool,
    pub reason: Option<String>,
}

/// Checks, in order: validity of `h`, unitality on every row, and
/// `s(B) >= N n`.
pub fn lift_decision(kk: &KKClass) -> LiftDecision {
    let fail = |reason: String| LiftDecision {
        exists: false,
        reason: Some(reason),
    };
    if let Some(v) = kdual_violation(&kk.hom) {
        return fail(v);
    }
    if let Some(v) = unital_violation(&kk.hom) {
        return fail(v);
    }
    let a = &kk.hom.source;
    let bound = Int::from(a.len()) * a.n();
    let s_b = kk.hom.target.min_divisor();
    if s_b < bound {
        return fail(format!("s(B) >= Nn fails ({s_b} < {bound})"));
    }
    LiftDecision {
        exists: true,
        reason: None,
    }
}

/// Whether `(h, chi)` is realized by a unital homomorphism `A -> B` under the
/// sufficient condition `s(B) >= N n`.
pub fn kk_lift_exists(kk: &KKClass) -> bool {
    lift_decision(kk).exists
}
