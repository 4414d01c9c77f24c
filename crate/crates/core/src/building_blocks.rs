//! Arithmetic data of circle building blocks `A(n; d_1, ..., d_N)`.
//!
//! A block is the algebra of continuous `M_n`-valued functions on the circle
//! whose values at the exceptional points `e^{2 pi i t_k}` lie in unitally
//! embedded copies of `M_{d_k}`. Only the integers `n`, `d_k` and the angles
//! `t_k` are represented here.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, gcd_all, parse_rational, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleBlock {
    n: Int,
    divisors: Vec<Int>,
    angles: Vec<Rational>,
}

/// Angles `k/(N+1)`, `k = 1..N`.
pub fn default_angles(count: usize) -> Vec<Rational> {
    let denom = Int::from(count + 1);
    (1..=count)
        .map(|k| Rational::new(Int::from(k), denom.clone()))
        .collect()
}

/// Validates raw block data. Angles default to `k/(N+1)` when absent.
pub fn validate_block(n: Int, divisors: Vec<Int>, angles: Option<Vec<Rational>>) -> Result<CircleBlock> {
    let count = divisors.len();
    if count < 2 {
        return Err(Error::InvalidShape(format!(
            "a building block needs at least 2 exceptional points, got {count}"
        )));
    }
    if !n.is_positive() {
        return Err(Error::InvalidShape(format!("matrix size must be positive, got {n}")));
    }
    for d in &divisors {
        if !d.is_positive() {
            return Err(Error::InvalidShape(format!("divisors must be positive, got {d}")));
        }
        if !n.is_multiple_of(d) {
            return Err(Error::DivisibilityViolation(format!("{d} does not divide {n}")));
        }
    }
    let angles = angles.unwrap_or_else(|| default_angles(count));
    if angles.len() != count {
        return Err(Error::InvalidShape(format!(
            "{} angles given for {count} divisors",
            angles.len()
        )));
    }
    let zero = Rational::zero();
    let one = Rational::one();
    for t in &angles {
        if *t <= zero || *t >= one {
            return Err(Error::BadExceptionalPoints(format!(
                "angle {} is not in the open interval (0, 1)",
                format_rational(t)
            )));
        }
    }
    for w in angles.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadExceptionalPoints(format!(
                "angles must be strictly increasing: {} then {}",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
    }
    Ok(CircleBlock { n, divisors, angles })
}

impl CircleBlock {
    pub fn new(n: Int, divisors: Vec<Int>, angles: Option<Vec<Rational>>) -> Result<Self> {
        validate_block(n, divisors, angles)
    }

    /// Convenience constructor with default angles.
    pub fn from_i64(n: i64, divisors: &[i64]) -> Result<Self> {
        validate_block(Int::from(n), divisors.iter().map(|&d| Int::from(d)).collect(), None)
    }

    pub fn n(&self) -> &Int {
        &self.n
    }

    pub fn divisors(&self) -> &[Int] {
        &self.divisors
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    /// Number of exceptional points `N`.
    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// `n / d_i`, the relation coefficients of the K-homology generators.
    pub fn quotients(&self) -> Vec<Int> {
        self.divisors.iter().map(|d| &self.n / d).collect()
    }

    pub fn quotient(&self, i: usize) -> Int {
        &self.n / &self.divisors[i]
    }

    /// `s(A) = min d_i`.
    pub fn min_divisor(&self) -> Int {
        self.divisors
            .iter()
            .min()
            .cloned()
            .expect("validated block has divisors")
    }

    pub fn has_default_angles(&self) -> bool {
        self.angles == default_angles(self.len())
    }
}

impl fmt::Display for CircleBlock {
    /// `A(n;d1,...,dN)`, followed by `@(t1,...,tN)` unless the angles are the
    /// defaults.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.divisors.iter().map(Int::to_string).collect();
        write!(f, "A({};{})", self.n, ds.join(","))?;
        if !self.has_default_angles() {
            let ts: Vec<String> = self.angles.iter().map(format_rational).collect();
            write!(f, "@({})", ts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for CircleBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = match compact.split_once('@') {
            Some((h, t)) => (h, Some(t)),
            None => (compact.as_str(), None),
        };
        let inner = head
            .strip_prefix("A(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected A(n;d1,...,dN), got {s:?}")))?;
        let (n, ds) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let parse_int = |t: &str| {
            t.parse::<Int>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        };
        let n = parse_int(n)?;
        let divisors = ds.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
        let angles = match tail {
            None => None,
            Some(t) => {
                let list = t
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("expected @(t1,...,tN), got {t:?}")))?;
                Some(list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?)
            }
        };
        validate_block(n, divisors, angles)
    }
}

/// Interval building block: `t_1 = 0 < t_2 < ... < t_N = 1`, each `d_i | n`.
/// Only validated; nothing is computed from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalBlock {
    pub n: Int,
    pub divisors: Vec<Int>,
    pub points: Vec<Rational>,
}

impl IntervalBlock {
    pub fn new(n: Int, divisors: Vec<Int>, points: Vec<Rational>) -> Result<Self> {
        if divisors.len() < 2 || points.len() != divisors.len() {
            return Err(Error::InvalidShape(
                "need at least 2 divisors and one point per divisor".into(),
            ));
        }
        if !n.is_positive() {
            return Err(Error::InvalidShape(format!("matrix size must be positive, got {n}")));
        }
        for d in &divisors {
            if !d.is_positive() || !n.is_multiple_of(d) {
                return Err(Error::DivisibilityViolation(format!("{d} does not divide {n}")));
            }
        }
        if !points[0].is_zero() || !points[points.len() - 1].is_one() {
            return Err(Error::BadExceptionalPoints("endpoints 0 and 1 must be present".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadExceptionalPoints("points must be strictly increasing".into()));
        }
        Ok(IntervalBlock { n, divisors, points })
    }
}

/// `d = gcd(d_i)`, `s = min(d_i)` and the quotients `n/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockConstants {
    pub d: Int,
    pub s: Int,
    pub quotients: Vec<Int>,
}

impl BlockConstants {
    /// Unital projectionless exactly when `d = 1`.
    pub fn is_projectionless(&self) -> bool {
        self.d.is_one()
    }
}

pub fn block_constants(b: &CircleBlock) -> BlockConstants {
    BlockConstants {
        d: gcd_all(b.divisors()),
        s: b.min_divisor(),
        quotients: b.quotients(),
    }
}

/// The corner `pAp` for a projection `p` of rank `r`: `A(r; (r/n) d_1, ...)`.
/// Projections of rank `r` exist iff `(n/d) | r`.
pub fn cut_down(b: &CircleBlock, r: &Int) -> Result<CircleBlock> {
    if !r.is_positive() || r > b.n() {
        return Err(Error::InvalidRank(format!("rank {r} is not in 1..={}", b.n())));
    }
    let d = gcd_all(b.divisors());
    let step = b.n() / &d;
    if !r.is_multiple_of(&step) {
        return Err(Error::NoSuchProjection(format!(
            "{r} (n/d = {step} does not divide it)"
        )));
    }
    let divisors = b.divisors().iter().map(|di| r * di / b.n()).collect();
    validate_block(r.clone(), divisors, Some(b.angles().to_vec()))
}
