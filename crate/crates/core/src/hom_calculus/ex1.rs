//! Integer bookkeeping for building a homomorphism into a large target whose
//! trace map approximates the average of `C` prescribed eigenvalue functions.
//!
//! Given a unital class `(h, chi)`, a count `C` and a tolerance `epsilon`
//! with `epsilon < 4`, `C > 8/epsilon` and `s(B) >= 4(N+C+2)n/epsilon`, the
//! last column of `h` is split as
//!
//! ```text
//! h_jN = r_j (n/d_N) + h_jN°,      0 <= h_jN° < n/d_N
//! r_j  = k_j (C+2) + u_j,          0 <= u_j < C+2
//! b    = min_j k_j m/e_j
//! L    = (m - sum_i s_i d_i)/n - (C+2) b
//! ```
//!
//! and then `0 <= 1 - nbC/m < epsilon/2`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{kdual_violation, standard_form, unital_violation, KKClass};
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, rational_from_int, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ex1Bookkeeping {
    /// `h_jN°`.
    pub h_jn_rem: Vec<Int>,
    pub r: Vec<Int>,
    pub k: Vec<Int>,
    pub u: Vec<Int>,
    /// `l_jN°` from `(m/e_j) h_jN° = l_jN° (n/d_N) + s_N`.
    pub l_jn_rem: Vec<Int>,
    /// `s_i`.
    pub small_remainders: Vec<Int>,
    /// `l_ji`.
    pub eigenvalue_counts: Vec<Vec<Int>>,
    pub b: Int,
    /// `L`.
    pub pattern_length: Int,
    /// `1 - nbC/m`.
    pub slack: Rational,
    /// `4(N+C+2)n/epsilon`, the lower bound required of `s(B)`.
    pub size_threshold: Rational,
}

fn precondition(condition: String) -> Error {
    Error::Ex1PreconditionFailed(condition)
}

pub fn ex1_bookkeeping(kk: &KKClass, c: &Int, epsilon: &Rational) -> Result<Ex1Bookkeeping> {
    let a = kk.hom.source();
    let b_blk = kk.hom.target();
    let n = a.n();
    let m = b_blk.n();
    let big_n = a.len();

    if !epsilon.is_positive() {
        return Err(precondition(format!(
            "epsilon > 0 fails ({})",
            format_rational(epsilon)
        )));
    }
    let four = Rational::from_integer(Int::from(4));
    if *epsilon >= four {
        return Err(precondition(format!(
            "epsilon < 4 fails ({})",
            format_rational(epsilon)
        )));
    }
    let c_rat = rational_from_int(c);
    let eight_over_eps = Rational::from_integer(Int::from(8)) / epsilon;
    if c_rat <= eight_over_eps {
        return Err(precondition(format!(
            "C > 8/epsilon fails ({c} <= {})",
            format_rational(&eight_over_eps)
        )));
    }
    let c2 = c + Int::from(2);
    let size_threshold = &four * rational_from_int(&(Int::from(big_n) + &c2)) * rational_from_int(n) / epsilon;
    let s_b = b_blk.min_divisor();
    if rational_from_int(&s_b) < size_threshold {
        return Err(precondition(format!(
            "s(B) >= 4(N+C+2)n/epsilon fails ({s_b} < {})",
            format_rational(&size_threshold)
        )));
    }

    let h = standard_form(kk.hom.matrix().to_vec(), a, b_blk)?;
    if let Some(v) = kdual_violation(&h) {
        return Err(precondition(v));
    }
    if let Some(v) = unital_violation(&h) {
        return Err(precondition(v));
    }

    let q = a.quotients();
    let q_last = &q[big_n - 1];
    let cq = b_blk.quotients();

    let mut small = Vec::new();
    let mut counts = Vec::with_capacity(b_blk.len());
    for (j, cj) in cq.iter().enumerate() {
        let (l_row, s_row): (Vec<Int>, Vec<Int>) =
            (0..big_n).map(|i| (cj * h.entry(j, i)).div_mod_floor(&q[i])).unzip();
        small = s_row;
        counts.push(l_row);
    }

    let mut h_jn_rem = Vec::new();
    let mut r = Vec::new();
    let mut k = Vec::new();
    let mut u = Vec::new();
    let mut l_jn_rem = Vec::new();
    for (j, cj) in cq.iter().enumerate() {
        let (rj, hrem) = h.entry(j, big_n - 1).div_mod_floor(q_last);
        let (kj, uj) = rj.div_mod_floor(&c2);
        let (lrem, _) = (cj * &hrem).div_mod_floor(q_last);
        h_jn_rem.push(hrem);
        r.push(rj);
        k.push(kj);
        u.push(uj);
        l_jn_rem.push(lrem);
    }
    let b = k
        .iter()
        .zip(&cq)
        .map(|(kj, cj)| kj * cj)
        .min()
        .expect("target has exceptional points");
    let used: Int = small.iter().zip(a.divisors()).map(|(s, d)| s * d).sum();
    let pattern_length = (m - used) / n - &c2 * &b;
    let slack = Rational::one() - Rational::new(n * &b * c, m.clone());

    let out = Ex1Bookkeeping {
        h_jn_rem,
        r,
        k,
        u,
        l_jn_rem,
        small_remainders: small,
        eigenvalue_counts: counts,
        b,
        pattern_length,
        slack,
        size_threshold,
    };
    debug_assert_eq!(out.verify(kk, c, epsilon), Ok(()));
    Ok(out)
}

impl Ex1Bookkeeping {
    /// Rechecks every identity and inequality of the construction. Returns
    /// the first one that fails.
    pub fn verify(&self, kk: &KKClass, c: &Int, epsilon: &Rational) -> std::result::Result<(), String> {
        let a = kk.hom.source();
        let blk = kk.hom.target();
        let h = standard_form(kk.hom.matrix().to_vec(), a, blk).map_err(|e| e.to_string())?;
        let (n, m) = (a.n(), blk.n());
        let big_n = a.len();
        let q = a.quotients();
        let q_last = &q[big_n - 1];
        let cq = blk.quotients();
        let c2 = c + Int::from(2);
        let m_rat = rational_from_int(m);
        let one = Rational::one();
        let quarter_eps = epsilon / Rational::from_integer(Int::from(4));

        let check = |ok: bool, what: String| if ok { Ok(()) } else { Err(what) };
        for j in 0..blk.len() {
            let cj = &cq[j];
            check(
                !self.h_jn_rem[j].is_negative() && &self.h_jn_rem[j] < q_last,
                format!("0 <= h_jN° < n/d_N at j={}", j + 1),
            )?;
            check(
                h.entry(j, big_n - 1) == &(&self.r[j] * q_last + &self.h_jn_rem[j]),
                format!("h_jN = r_j n/d_N + h_jN° at j={}", j + 1),
            )?;
            check(
                !self.u[j].is_negative() && self.u[j] < c2 && self.r[j] == &self.k[j] * &c2 + &self.u[j],
                format!("r_j = k_j(C+2) + u_j at j={}", j + 1),
            )?;
            check(self.k[j] >= Int::one(), format!("k_j >= 1 at j={}", j + 1))?;
            for i in 0..big_n {
                check(
                    cj * h.entry(j, i) == &self.eigenvalue_counts[j][i] * &q[i] + &self.small_remainders[i],
                    format!("(m/e_j) h_ji = l_ji n/d_i + s_i at j={}, i={}", j + 1, i + 1),
                )?;
            }
            check(
                cj * &self.h_jn_rem[j] == &self.l_jn_rem[j] * q_last + &self.small_remainders[big_n - 1],
                format!("(m/e_j) h_jN° = l_jN° n/d_N + s_N at j={}", j + 1),
            )?;
            check(
                &self.eigenvalue_counts[j][big_n - 1] - &self.l_jn_rem[j] == cj * &self.r[j],
                format!("l_jN - l_jN° = (m/e_j) r_j at j={}", j + 1),
            )?;
            let lower = n * &self.k[j] * &c2 * cj;
            check(
                rational_from_int(&lower) > (&one - &quarter_eps) * &m_rat,
                format!("n k_j (C+2) m/e_j > (1 - epsilon/4) m at j={}", j + 1),
            )?;
            check(
                &self.k[j] * cj >= self.b && (&self.k[j] + &self.u[j]) * cj >= self.b,
                format!("pattern multiplicities nonnegative at j={}", j + 1),
            )?;
            let tail: Int = self.eigenvalue_counts[j][..big_n - 1].iter().sum();
            check(
                self.pattern_length == tail + &self.l_jn_rem[j] + cj * (&self.k[j] * &c2 + &self.u[j]) - &c2 * &self.b,
                format!("L = sum_(i<N) l_ji + l_jN° + (m/e_j) r_j - (C+2) b at j={}", j + 1),
            )?;
        }
        check(
            self.b == self.k.iter().zip(&cq).map(|(kj, cj)| kj * cj).min().unwrap(),
            "b = min_j k_j m/e_j".into(),
        )?;
        check(n * &self.b * &c2 <= *m, "nb(C+2) <= m".into())?;
        check(
            !self.slack.is_negative() && self.slack < epsilon / Rational::from_integer(Int::from(2)),
            format!("0 <= 1 - nbC/m < epsilon/2 ({})", format_rational(&self.slack)),
        )?;
        check(
            !self.pattern_length.is_negative() || self.pattern_length.is_zero(),
            "L >= 0".into(),
        )
    }
}
