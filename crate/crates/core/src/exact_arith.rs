//! Exact integer and rational primitives.
//!
//! Everything here is arbitrary precision; no floating point is used anywhere
//! in the crate. The main pieces are the normalized Bézout triple, a Smith
//! normal form with unimodular transforms, and the closed-form cokernel of the
//! cyclic difference matrix
//!
//! ```text
//!  a1 -a2
//!      a2 -a3
//!          ...  -aN
//! -a1            aN
//! ```
//!
//! which governs the odd K-group of a circle building block.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

pub fn rational_from_int(v: &Int) -> Rational {
    Rational::from_integer(v.clone())
}

/// Parses `p/q`, `p` or a plain integer into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::one(), |acc, v| acc.lcm(v))
}

/// `g = alpha * a + beta * b` with `g = gcd(a, b) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutTriple {
    pub g: Int,
    pub alpha: Int,
    pub beta: Int,
}

/// Extended gcd with the canonical normalization `0 <= alpha < |b|/g` when
/// `b != 0`. For `b == 0` the triple is `(|a|, sign(a), 0)`.
pub fn extended_gcd(a: &Int, b: &Int) -> Result<BezoutTriple> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateInput("gcd(0, 0) is undefined".into()));
    }
    if b.is_zero() {
        return Ok(BezoutTriple {
            g: a.abs(),
            alpha: a.signum(),
            beta: Int::zero(),
        });
    }
    let egcd = a.extended_gcd(b);
    let (mut g, mut alpha, mut beta) = (egcd.gcd, egcd.x, egcd.y);
    if g.is_negative() {
        g = -g;
        alpha = -alpha;
        beta = -beta;
    }
    // All solutions are (alpha + t*b/g, beta - t*a/g).
    let step_alpha = b / &g;
    let step_beta = a / &g;
    let reduced = alpha.mod_floor(&step_alpha.abs());
    let t = (&reduced - &alpha) / &step_alpha;
    alpha = reduced;
    beta -= &t * &step_beta;
    debug_assert!(!alpha.is_negative() && alpha < step_alpha.abs());
    debug_assert_eq!(&alpha * a + &beta * b, g);
    Ok(BezoutTriple { g, alpha, beta })
}

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidShape("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Int) {
        for c in 0..self.cols {
            let v = factor * &self[(source, c)];
            self[(target, c)] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Int) {
        for r in 0..self.rows {
            let v = factor * &self[(r, source)];
            self[(r, target)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z_{t1} ⊕ ... ⊕ Z_{tk}`.
///
/// `torsion` is kept as given (the raw view may contain 1s); use
/// [`FinAbGroup::normalized`] or [`FinAbGroup::invariant_factors`] for
/// isomorphism comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl FinAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Self {
        FinAbGroup { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        FinAbGroup::new(0, Vec::new())
    }

    /// Drops the cyclic factors of order one.
    pub fn normalized(&self) -> FinAbGroup {
        FinAbGroup {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().filter(|t| !t.is_one()).cloned().collect(),
        }
    }

    /// The canonical chain `c1 | c2 | ... | ck` with every `ci >= 2`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let orders: Vec<Int> = self.normalized().torsion;
        if orders.is_empty() {
            return orders;
        }
        smith_normal_form(&IntMatrix::diagonal(&orders))
            .diag
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().product()
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors() == other.invariant_factors()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in self.normalized().torsion {
            parts.push(format!("Z_{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Smith normal form `left * A * right = diag`, with `left`, `right`
/// unimodular. `diag` has `min(rows, cols)` entries: the invariant factors in
/// divisibility order followed by zeros.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Cokernel of `A: Z^cols -> Z^rows`.
    pub fn cokernel(&self) -> FinAbGroup {
        let rows = self.left.rows();
        FinAbGroup::new(
            rows - self.rank(),
            self.diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .cloned()
                .collect(),
        )
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, v) in self.diag.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

/// Smith normal form by gcd-pivot elimination with unimodular tracking.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero magnitude in the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(m, left, right);
            };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                m.add_row_multiple(i, t, &-&q);
                left.add_row_multiple(i, t, &-&q);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                m.add_col_multiple(j, t, &-&q);
                right.add_col_multiple(j, t, &-&q);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&m[(t, t)]));
            match offender {
                Some((i, _)) => {
                    m.add_row_multiple(t, i, &Int::one());
                    left.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            left.negate_row(t);
        }
    }
    finish(m, left, right)
}

fn finish(m: IntMatrix, left: IntMatrix, right: IntMatrix) -> SmithForm {
    let diag = (0..m.rows().min(m.cols())).map(|i| m[(i, i)].clone()).collect();
    SmithForm { diag, left, right }
}

/// Solves `A x = v` over the integers, if possible.
pub fn solve_integer(a: &IntMatrix, v: &[Int]) -> Result<Option<Vec<Int>>> {
    if v.len() != a.rows() {
        return Err(Error::InvalidShape(format!(
            "right-hand side has length {}, matrix has {} rows",
            v.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let w = snf.left.mul_vec(v);
    let mut y = vec![Int::zero(); a.cols()];
    for (i, wi) in w.iter().enumerate() {
        let d = snf.diag.get(i).cloned().unwrap_or_else(Int::zero);
        if d.is_zero() {
            if !wi.is_zero() {
                return Ok(None);
            }
        } else if wi.is_multiple_of(&d) {
            y[i] = wi / &d;
        } else {
            return Ok(None);
        }
    }
    Ok(Some(snf.right.mul_vec(&y)))
}

/// The `N x N` cyclic difference matrix: row `k` holds `a_k` at column `k`
/// and `-a_{k+1}` at column `k+1`; the last row holds `-a_1` and `a_N`.
pub fn cycle_matrix(a: &[Int]) -> IntMatrix {
    let n = a.len();
    let mut c = IntMatrix::zeros(n, n);
    for k in 0..n - 1 {
        c[(k, k)] += &a[k];
        c[(k, k + 1)] -= &a[k + 1];
    }
    c[(n - 1, 0)] -= &a[0];
    c[(n - 1, n - 1)] += &a[n - 1];
    c
}

/// Closed-form cokernel of [`cycle_matrix`] together with explicit coset
/// representatives for each cyclic summand.
#[derive(Clone, Debug)]
pub struct CycleCokernel {
    /// `Z ⊕ Z_{r_1} ⊕ ... ⊕ Z_{r_{N-1}}`, raw (orders of 1 retained).
    pub group: FinAbGroup,
    /// `s_k = lcm(a_1..a_k)` for `k = 1..N-1`.
    pub lcms: Vec<Int>,
    /// Bézout data `r_k = alpha_k s_k + beta_k a_{k+1}`.
    pub bezout: Vec<BezoutTriple>,
    /// Representative of the generator of `Z_{r_k}`, one per `k`.
    pub torsion_representatives: Vec<Vec<Int>>,
    /// Representative of the generator of the free summand.
    pub free_representative: Vec<Int>,
}

pub fn cycle_cokernel(a: &[Int]) -> Result<CycleCokernel> {
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidShape(format!("need at least 2 entries, got {n}")));
    }
    if let Some(bad) = a.iter().find(|v| !v.is_positive()) {
        return Err(Error::InvalidShape(format!("entries must be positive, got {bad}")));
    }
    let mut lcms = Vec::with_capacity(n - 1);
    let mut bezout = Vec::with_capacity(n - 1);
    let mut reps = Vec::with_capacity(n - 1);
    let mut s = Int::one();
    for k in 0..n - 1 {
        s = s.lcm(&a[k]);
        let triple = extended_gcd(&s, &a[k + 1])?;
        let r = &triple.g;
        let mut rep = vec![Int::zero(); n];
        if k + 1 == n - 1 {
            rep[k] = Int::one();
            rep[n - 1] = -Int::one();
        } else {
            rep[k] = Int::one();
            rep[k + 1] = -(&triple.beta * &a[k + 1]) / r;
            rep[n - 1] = -(&triple.alpha * &s) / r;
        }
        lcms.push(s.clone());
        reps.push(rep);
        bezout.push(triple);
    }
    let mut free = vec![Int::zero(); n];
    free[n - 1] = Int::one();
    let group = FinAbGroup::new(1, bezout.iter().map(|t| t.g.clone()).collect());
    Ok(CycleCokernel {
        group,
        lcms,
        bezout,
        torsion_representatives: reps,
        free_representative: free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn bezout_examples() {
        let t = extended_gcd(&int(6), &int(10)).unwrap();
        assert_eq!((t.g, t.alpha, t.beta), (int(2), int(2), int(-1)));
        let t = extended_gcd(&int(0), &int(5)).unwrap();
        assert_eq!((t.g, t.alpha, t.beta), (int(5), int(0), int(1)));
        let t = extended_gcd(&int(7), &int(1)).unwrap();
        assert_eq!((t.g, t.alpha, t.beta), (int(1), int(0), int(1)));
    }

    #[test]
    fn bezout_degenerate_and_negative() {
        assert_eq!(extended_gcd(&int(0), &int(0)).unwrap_err().code(), "DegenerateInput");
        let t = extended_gcd(&int(-4), &int(0)).unwrap();
        assert_eq!((t.g, t.alpha, t.beta), (int(4), int(-1), int(0)));
        let t = extended_gcd(&int(9), &int(-6)).unwrap();
        assert_eq!(t.g, int(3));
        assert!(t.alpha >= int(0) && t.alpha < int(2));
        assert_eq!(&t.alpha * int(9) + &t.beta * int(-6), int(3));
    }

    #[test]
    fn snf_examples() {
        let snf = smith_normal_form(&IntMatrix::from_i64(&[&[2, -2], &[-2, 2]]));
        assert_eq!(snf.diag, ints(&[2, 0]));
        let snf = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(snf.diag, ints(&[1, 1, 1]));
        let snf = smith_normal_form(&IntMatrix::from_i64(&[&[2, -3], &[-2, 3]]));
        assert_eq!(snf.diag, ints(&[1, 0]));
    }

    #[test]
    fn snf_transforms_are_unimodular() {
        let a = IntMatrix::from_i64(&[&[6, 4, 0], &[0, 4, -3], &[-6, 0, 3], &[2, 2, 2]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.left.mul(&a).mul(&snf.right), snf.diagonal_matrix());
        assert_eq!(snf.left.determinant().abs(), int(1));
        assert_eq!(snf.right.determinant().abs(), int(1));
        for w in snf.diag.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn snf_rectangular_cokernel_counts_rows() {
        // Z -> Z^2, 1 |-> (2, 0): cokernel Z ⊕ Z_2.
        let snf = smith_normal_form(&IntMatrix::from_i64(&[&[2], &[0]]));
        assert_eq!(snf.cokernel(), FinAbGroup::new(1, ints(&[2])));
    }

    #[test]
    fn cycle_cokernel_examples() {
        let c = cycle_cokernel(&ints(&[2, 2])).unwrap();
        assert_eq!(c.group, FinAbGroup::new(1, ints(&[2])));
        assert_eq!(c.torsion_representatives, vec![ints(&[1, -1])]);
        assert_eq!(c.free_representative, ints(&[0, 1]));

        let c = cycle_cokernel(&ints(&[1, 1, 1])).unwrap();
        assert_eq!(c.group.normalized(), FinAbGroup::new(1, vec![]));

        let c = cycle_cokernel(&ints(&[6, 4, 3])).unwrap();
        assert_eq!(c.group, FinAbGroup::new(1, ints(&[2, 3])));
    }

    #[test]
    fn cycle_cokernel_rejects_bad_input() {
        assert_eq!(cycle_cokernel(&ints(&[3])).unwrap_err().code(), "InvalidShape");
        assert_eq!(cycle_cokernel(&ints(&[3, 0])).unwrap_err().code(), "InvalidShape");
    }

    #[test]
    fn representatives_have_the_stated_order() {
        let a = ints(&[6, 4, 3, 10]);
        let c = cycle_cokernel(&a).unwrap();
        let m = cycle_matrix(&a);
        for (rep, t) in c.torsion_representatives.iter().zip(&c.bezout) {
            let scaled: Vec<Int> = rep.iter().map(|x| x * &t.g).collect();
            assert!(solve_integer(&m, &scaled).unwrap().is_some());
        }
        // The free generator has infinite order.
        assert!(solve_integer(&m, &c.free_representative).unwrap().is_none());
    }

    #[test]
    fn invariant_factor_chain() {
        let g = FinAbGroup::new(1, ints(&[2, 3, 1, 4]));
        assert_eq!(g.invariant_factors(), ints(&[2, 12]));
        assert!(g.is_isomorphic(&FinAbGroup::new(1, ints(&[12, 2]))));
        assert_eq!(g.to_string(), "Z + Z_2 + Z_3 + Z_4");
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "1/2", "-3/7", "5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
