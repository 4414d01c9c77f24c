//! Building blocks with prescribed odd K-group.
//!
//! For `H = Z_{p_1^k_1} + ... + Z_{p_m^k_m}` pick primes
//! `q_1 < ... < q_{m+1}`, all at least `K` and different from every `p_i`, and
//! set `P = prod p_i^k_i`, `Q = prod q_j`,
//!
//! ```text
//! n   = P Q
//! d_1 = Q / q_1
//! d_i = (P / p_{i-1}^k_{i-1}) (Q / q_i)     for 2 <= i <= m+1.
//! ```
//!
//! Then `gcd(d_i) = 1`, `min d_i >= K` and `K_1(A(n; d)) = Z + H`. The
//! trivial group is the case `m = 1`, `P = 1`, giving `A(q_1 q_2; q_2, q_1)`.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive};

use crate::building_blocks::CircleBlock;
use crate::error::{Error, Result};
use crate::exact_arith::{FinAbGroup, Int};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Prime factorization `[(p, k)]` with increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A finite abelian group presented as a sum of cyclic groups of prime-power
/// order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TorsionSpec {
    prime_powers: Vec<(u64, u32)>,
}

impl TorsionSpec {
    pub fn new(prime_powers: Vec<(u64, u32)>) -> Result<Self> {
        for &(p, k) in &prime_powers {
            if !is_prime(p) {
                return Err(Error::DegenerateInput(format!("{p} is not prime")));
            }
            if k == 0 {
                return Err(Error::DegenerateInput(format!("exponent of {p} must be at least 1")));
            }
        }
        Ok(TorsionSpec { prime_powers })
    }

    pub fn trivial() -> Self {
        TorsionSpec::default()
    }

    /// `Z_{c_1} + Z_{c_2} + ...`, each order split into its prime powers.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if let Some(&c) = orders.iter().find(|&&c| c == 0) {
            return Err(Error::DegenerateInput(format!("cyclic order {c} must be positive")));
        }
        Ok(TorsionSpec {
            prime_powers: orders.iter().flat_map(|&c| factorize(c)).collect(),
        })
    }

    pub fn prime_powers(&self) -> &[(u64, u32)] {
        &self.prime_powers
    }

    pub fn orders(&self) -> Vec<Int> {
        self.prime_powers.iter().map(|&(p, k)| Int::from(p).pow(k)).collect()
    }

    pub fn order(&self) -> Int {
        self.orders().iter().product()
    }

    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::new(0, self.orders())
    }
}

impl fmt::Display for TorsionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prime_powers.is_empty() {
            return write!(f, "0");
        }
        let parts =
            self.prime_powers
                .iter()
                .map(|&(p, k)| if k == 1 { format!("Z_{p}") } else { format!("Z_{p}^{k}") });
        write!(f, "{}", parts.format(" + "))
    }
}

/// The smallest `count` primes at least `min` and outside `exclude`.
fn primes_from(min: u64, count: usize, exclude: &[u64]) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut c = min.max(2);
    while out.len() < count {
        if is_prime(c) && !exclude.contains(&c) {
            out.push(c);
        }
        c = c
            .checked_add(1)
            .ok_or_else(|| Error::TooLarge("ran out of 64-bit primes".into()))?;
    }
    Ok(out)
}

pub fn realize_k1(h: &TorsionSpec, min_rep: &Int) -> Result<CircleBlock> {
    if !min_rep.is_positive() {
        return Err(Error::DegenerateInput(format!("K = {min_rep} must be positive")));
    }
    let k = min_rep
        .to_u64()
        .ok_or_else(|| Error::TooLarge(format!("K = {min_rep} exceeds 64 bits")))?;
    let powers = h.orders();
    let m = powers.len().max(1);
    let exclude: Vec<u64> = h.prime_powers.iter().map(|&(p, _)| p).collect();
    let q: Vec<Int> = primes_from(k, m + 1, &exclude)?.into_iter().map(Int::from).collect();
    let p_total: Int = powers.iter().product();
    let q_total: Int = q.iter().product();

    let mut d = vec![&q_total / &q[0]];
    for i in 1..=m {
        let p_part = powers.get(i - 1).cloned().unwrap_or_else(Int::one);
        d.push(&p_total / p_part * (&q_total / &q[i]));
    }
    CircleBlock::new(&p_total * &q_total, d, None)
}

/// Whether a finitely generated abelian group is the limit of a sequence
/// `Z + H_1 -> Z + H_2 -> ...` with finite `H_k`. Rank is additive under
/// tensoring with `Q`, which commutes with limits, so the free rank of such
/// a limit is at most 1; conversely `Z + T` is a constant sequence and a
/// finite `T` is the limit of `Z + T` with the maps vanishing on `Z`.
pub fn cyclic_case_k1_realizable(g: &FinAbGroup) -> bool {
    g.free_rank <= 1
}
