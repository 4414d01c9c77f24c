//! K-theory of a single building block.
//!
//! `K_0(A) = (Z, Z^+, d)` with `d = gcd(d_i)`, and
//! `K_1(A) = Z ⊕ Z_{r_1} ⊕ ... ⊕ Z_{r_{N-1}}` where `s_k = lcm(n/d_1..n/d_k)`
//! and `r_k = gcd(s_k, n/d_{k+1})`. Generators are written over the basis
//! `[U_1], ..., [U_N]` of unitaries winding once on the `k`-th arc.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::building_blocks::CircleBlock;
use crate::error::{Error, Result};
use crate::exact_arith::{cycle_cokernel, cycle_matrix, gcd_all, BezoutTriple, Int, IntMatrix, Rational};

pub use crate::exact_arith::FinAbGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K1Structure {
    /// Raw presentation, one cyclic summand per `k = 1..N-1` (orders of 1 kept).
    pub group: FinAbGroup,
    /// `s_k`.
    pub lcms: Vec<Int>,
    /// `r_k = alpha_k s_k + beta_k n/d_{k+1}` with the canonical normalization.
    pub bezout: Vec<BezoutTriple>,
    /// Coefficients over `[U_1..U_N]` of the generator of `Z_{r_k}`.
    pub torsion_generators: Vec<Vec<Int>>,
    /// `e_N`, the generator of the free summand.
    pub free_generator: Vec<Int>,
}

impl K1Structure {
    pub fn torsion_orders(&self) -> Vec<Int> {
        self.bezout.iter().map(|t| t.g.clone()).collect()
    }
}

pub fn k1_structure(b: &CircleBlock) -> K1Structure {
    let quotients = b.quotients();
    let big_n = b.len();
    let coker = cycle_cokernel(&quotients).expect("validated block has N >= 2 positive quotients");
    let mut generators = Vec::with_capacity(big_n - 1);
    for (k, (triple, s)) in coker.bezout.iter().zip(&coker.lcms).enumerate() {
        let r = &triple.g;
        let mut v = vec![Int::zero(); big_n];
        v[k] += Int::one();
        // beta_k n / (r_k d_{k+1}) and alpha_k s_k / r_k are integers since r_k
        // divides both n/d_{k+1} and s_k.
        v[k + 1] -= &triple.beta * &quotients[k + 1] / r;
        v[big_n - 1] -= &triple.alpha * s / r;
        generators.push(v);
    }
    let mut free = vec![Int::zero(); big_n];
    free[big_n - 1] = Int::one();
    K1Structure {
        group: coker.group,
        lcms: coker.lcms,
        bezout: coker.bezout,
        torsion_generators: generators,
        free_generator: free,
    }
}

/// Relation lattice of the exponential map: the columns of the cyclic
/// difference matrix built from the quotients `n/d_i`.
pub fn k1_relation_matrix(b: &CircleBlock) -> IntMatrix {
    cycle_matrix(&b.quotients())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Data {
    /// Image of the unit in `K_0(A) = Z`.
    pub order_unit: Int,
    /// `1/d`, generating the image of `K_0(A)` under the trace map.
    pub rho_generator: Rational,
}

pub fn k0_data(b: &CircleBlock) -> K0Data {
    let d = gcd_all(b.divisors());
    K0Data {
        rho_generator: Rational::new(Int::one(), d.clone()),
        order_unit: d,
    }
}

/// Whether `sum a_i [Lambda_i] = 0` in `K^0(A)`: every `a_i` is a multiple
/// `b_i n/d_i` and `sum b_i = 0`.
pub fn kdual_is_zero(b: &CircleBlock, a: &[Int]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidShape(format!(
            "vector has length {}, block has {} exceptional points",
            a.len(),
            b.len()
        )));
    }
    let mut total = Int::zero();
    for (ai, q) in a.iter().zip(b.quotients()) {
        if !ai.is_multiple_of(&q) {
            return Ok(false);
        }
        total += ai / q;
    }
    Ok(total.is_zero())
}

/// `(n/d_i) e_i - (n/d_N) e_N` for `i < N`; these span the relations of
/// `K^0(A)`.
pub fn kdual_relation_vectors(b: &CircleBlock) -> Vec<Vec<Int>> {
    let big_n = b.len();
    let q = b.quotients();
    (0..big_n - 1)
        .map(|i| {
            let mut v = vec![Int::zero(); big_n];
            v[i] = q[i].clone();
            v[big_n - 1] -= &q[big_n - 1];
            v
        })
        .collect()
}
