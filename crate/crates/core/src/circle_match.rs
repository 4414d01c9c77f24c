//! Matching of unordered tuples of points on the circle `T = R/Z`.
//!
//! Points are stored as exact angles in `[0,1)`. The distance between two
//! points is `rho(s,t) = min_k |s - t + k|`, and the distance between two
//! `L`-tuples is
//!
//! ```text
//! R_L(a, b) = min over permutations sigma of max_i rho(a_i, b_sigma(i)).
//! ```
//!
//! For ordered lifts `theta_1 <= ... <= theta_L <= theta_1 + 1` the minimum
//! is attained by a cyclic shift `j -> j + p` of indices, where the lift is
//! extended to all of `Z` by `theta_{pL+r} = theta_r + p`.

use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, rational_from_int, Int, Rational};

/// Environment variable overriding the size cap of the permutation oracles.
pub const BRUTEFORCE_CAP_VAR: &str = "ELLIOTT_KIT_MAX_BRUTEFORCE";
pub const DEFAULT_BRUTEFORCE_CAP: usize = 8;

pub fn bruteforce_cap() -> usize {
    std::env::var(BRUTEFORCE_CAP_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTEFORCE_CAP)
}

/// Fractional part in `[0,1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Distance on the circle, at most `1/2`.
pub fn rho(s: &Rational, t: &Rational) -> Rational {
    let d = frac(&(s - t));
    let other = Rational::one() - &d;
    d.min(other)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleMultiset {
    angles: Vec<Rational>,
}

impl CircleMultiset {
    /// Reduces every angle mod 1 and sorts.
    pub fn new(angles: Vec<Rational>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidShape("a circle multiset needs at least one point".into()));
        }
        let mut angles: Vec<Rational> = angles.iter().map(frac).collect();
        angles.sort();
        Ok(CircleMultiset { angles })
    }

    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let angles = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(angles)
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn rotated(&self, by: &Rational) -> CircleMultiset {
        CircleMultiset::new(self.angles.iter().map(|a| a + by).collect()).expect("nonempty")
    }
}

impl fmt::Display for CircleMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.angles.iter().map(format_rational).join(", "))
    }
}

/// An ordered lift `theta_1 <= ... <= theta_L <= theta_1 + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftedTuple {
    theta: Vec<Rational>,
}

impl LiftedTuple {
    pub fn new(theta: Vec<Rational>) -> Result<Self> {
        let Some(first) = theta.first() else {
            return Err(Error::InvalidShape("a lifted tuple needs at least one value".into()));
        };
        if theta.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidShape("lifted values must be nondecreasing".into()));
        }
        if theta[theta.len() - 1] > first + Rational::one() {
            return Err(Error::InvalidShape(
                "lifted values must satisfy theta_L <= theta_1 + 1".into(),
            ));
        }
        Ok(LiftedTuple { theta })
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// The value at a 0-based index `i` of the extension
    /// `theta_{pL+r} = theta_r + p`.
    pub fn at(&self, i: &Int) -> Rational {
        let (p, r) = i.div_mod_floor(&Int::from(self.len()));
        &self.theta[r.to_usize().expect("remainder below L")] + rational_from_int(&p)
    }

    pub fn sum(&self) -> Rational {
        self.theta.iter().sum()
    }

    /// `(theta_{1+p}, ..., theta_{L+p})`, again an ordered lift.
    pub fn shifted(&self, p: &Int) -> LiftedTuple {
        let theta = (0..self.len()).map(|j| self.at(&(p + Int::from(j)))).collect();
        LiftedTuple { theta }
    }

    pub fn to_multiset(&self) -> CircleMultiset {
        CircleMultiset::new(self.theta.clone()).expect("nonempty")
    }
}

impl fmt::Display for LiftedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.theta.iter().map(format_rational).join(", "))
    }
}

/// The arc `{e^{2 pi i t} : t in [lo/k - dilation, hi/k + dilation]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KArc {
    pub k: Int,
    pub lo: Int,
    pub hi: Int,
    pub dilation: Rational,
}

impl KArc {
    pub fn new(k: Int, lo: Int, hi: Int) -> Result<Self> {
        if !k.is_positive() || lo >= hi {
            return Err(Error::InvalidShape(format!("[{lo}/{k}, {hi}/{k}] is not a k-arc")));
        }
        Ok(KArc {
            k,
            lo,
            hi,
            dilation: Rational::zero(),
        })
    }

    pub fn dilated(&self, by: &Rational) -> KArc {
        KArc {
            dilation: &self.dilation + by,
            ..self.clone()
        }
    }

    pub fn start(&self) -> Rational {
        Rational::new(self.lo.clone(), self.k.clone()) - &self.dilation
    }

    pub fn end(&self) -> Rational {
        Rational::new(self.hi.clone(), self.k.clone()) + &self.dilation
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lo = self.start();
        let width = self.end() - &lo;
        width >= Rational::one() || frac(&(x - lo)) <= width
    }

    pub fn count<'a>(&self, points: impl IntoIterator<Item = &'a Rational>) -> usize {
        points.into_iter().filter(|x| self.contains(x)).count()
    }
}

impl fmt::Display for KArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}/{}, {}/{}]", self.lo, self.k, self.hi, self.k)?;
        if !self.dilation.is_zero() {
            write!(f, " +- {}", format_rational(&self.dilation))?;
        }
        Ok(())
    }
}

/// The ordered lift with `sum theta_r in [k, k+1)`: sort the angles in
/// `[0,1)` as `omega`, let `l = floor(sum omega)` and take
/// `theta_r = omega_{r+k-l}`.
pub fn natural_lift(ms: &CircleMultiset, k: &Int) -> LiftedTuple {
    let omega = LiftedTuple {
        theta: ms.angles.clone(),
    };
    let l = omega.sum().floor().to_integer();
    omega.shifted(&(k - l))
}

/// The integer `r = sum_j (theta_j - omega_j)` with `theta_j = omega_{r+j}`.
pub fn glue_shift(t1: &LiftedTuple, t2: &LiftedTuple) -> Result<Int> {
    if t1.len() != t2.len() {
        return Err(Error::NotSameMultiset(format!("sizes {} and {}", t1.len(), t2.len())));
    }
    let diff: Rational = t1.theta.iter().zip(&t2.theta).map(|(a, b)| a - b).sum();
    if !diff.is_integer() {
        return Err(Error::NotSameMultiset(format!(
            "sum of differences {} is not an integer",
            format_rational(&diff)
        )));
    }
    let r = diff.to_integer();
    if t2.shifted(&r) != *t1 {
        return Err(Error::NotSameMultiset(format!(
            "{t1} and {t2} are not lifts of one multiset"
        )));
    }
    Ok(r)
}

fn check_sizes(a: &CircleMultiset, b: &CircleMultiset) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidShape(format!(
            "multisets of sizes {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `R_L(a, b)` together with an optimal cyclic shift `p` in `(-L, L)` on the
/// natural lifts with `k = 0`. Among optimal shifts the smallest `|p|` wins,
/// then the smaller `p`.
pub fn rl_distance_with_shift(a: &CircleMultiset, b: &CircleMultiset) -> Result<(Rational, i64)> {
    check_sizes(a, b)?;
    let theta = natural_lift(a, &Int::zero());
    let omega = natural_lift(b, &Int::zero());
    let len = a.len() as i64;
    let mut best: Option<(Rational, i64)> = None;
    let shifts = std::iter::once(0).chain((1..len).flat_map(|q| [-q, q]));
    for p in shifts {
        let cost = (0..len)
            .map(|j| rho(&theta.at(&Int::from(j)), &omega.at(&Int::from(j + p))))
            .max()
            .expect("nonempty");
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, p));
        }
    }
    Ok(best.expect("at least the zero shift"))
}

pub fn rl_distance(a: &CircleMultiset, b: &CircleMultiset) -> Result<Rational> {
    rl_distance_with_shift(a, b).map(|(d, _)| d)
}

/// Minimum over all `L!` bijections, with the cap from [`bruteforce_cap`].
pub fn rl_distance_bruteforce(a: &CircleMultiset, b: &CircleMultiset) -> Result<Rational> {
    rl_distance_bruteforce_capped(a, b, bruteforce_cap())
}

pub fn rl_distance_bruteforce_capped(a: &CircleMultiset, b: &CircleMultiset, cap: usize) -> Result<Rational> {
    check_sizes(a, b)?;
    if a.len() > cap {
        return Err(Error::TooLarge(format!(
            "L = {} exceeds the brute-force cap {cap}",
            a.len()
        )));
    }
    let best = (0..b.len())
        .permutations(b.len())
        .map(|sigma| {
            a.angles
                .iter()
                .zip(sigma)
                .map(|(x, j)| rho(x, &b.angles[j]))
                .max()
                .expect("nonempty")
        })
        .min()
        .expect("at least one permutation");
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcViolation {
    pub arc: KArc,
    pub a_count: usize,
    pub b_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallReport {
    /// `#{a_r in I} <= #{b_r in I +- epsilon}` for every `k`-arc `I`.
    pub holds: bool,
    pub violation: Option<ArcViolation>,
    /// `epsilon + 1/k`.
    pub bound: Rational,
    pub distance: Rational,
}

impl HallReport {
    /// False only if the arc condition holds and the distance still exceeds
    /// the bound.
    pub fn certified(&self) -> bool {
        !self.holds || self.distance <= self.bound
    }
}

/// Every `k`-arc up to a full turn: `[m/k, n/k]` with `0 <= m < k` and
/// `m < n <= m + k`.
pub fn k_arcs(k: &Int) -> Vec<KArc> {
    let mut arcs = Vec::new();
    let mut m = Int::zero();
    while &m < k {
        let mut n = &m + Int::one();
        while n <= &m + k {
            arcs.push(KArc {
                k: k.clone(),
                lo: m.clone(),
                hi: n.clone(),
                dilation: Rational::zero(),
            });
            n += Int::one();
        }
        m += Int::one();
    }
    arcs
}

pub fn hall_bound_check(a: &CircleMultiset, b: &CircleMultiset, k: &Int, epsilon: &Rational) -> Result<HallReport> {
    check_sizes(a, b)?;
    if !k.is_positive() {
        return Err(Error::DegenerateInput(format!("k = {k} must be positive")));
    }
    if epsilon.is_negative() {
        return Err(Error::DegenerateInput("epsilon must be nonnegative".into()));
    }
    let violation = k_arcs(k).into_iter().find_map(|arc| {
        let a_count = arc.count(a.angles());
        let b_count = arc.dilated(epsilon).count(b.angles());
        (a_count > b_count).then_some(ArcViolation { arc, a_count, b_count })
    });
    Ok(HallReport {
        holds: violation.is_none(),
        violation,
        bound: epsilon + Rational::new(Int::one(), k.clone()),
        distance: rl_distance(a, b)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedMatchingWitness {
    /// `max_j |x_j - y_j|`.
    pub identity_cost: Rational,
    pub permutations_checked: usize,
    /// Whether every permutation was tried (as opposed to transpositions and
    /// rotations only).
    pub exhaustive: bool,
    /// A permutation strictly beating the identity, if one was found.
    pub counterexample: Option<Vec<usize>>,
}

impl SortedMatchingWitness {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

const EXHAUSTIVE_MATCHING_LIMIT: usize = 7;

/// Checks that pairing two sorted lists in order minimizes the largest
/// displacement.
pub fn sorted_matching_optimal(x: &[Rational], y: &[Rational]) -> Result<SortedMatchingWitness> {
    if x.len() != y.len() {
        return Err(Error::InvalidShape(format!(
            "lists of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.windows(2).any(|w| w[0] > w[1]) || y.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidShape("both lists must be sorted ascending".into()));
    }
    let len = x.len();
    let cost = |sigma: &[usize]| -> Rational {
        x.iter()
            .zip(sigma)
            .map(|(xi, &j)| (xi - &y[j]).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    };
    let identity: Vec<usize> = (0..len).collect();
    let identity_cost = cost(&identity);

    let exhaustive = len <= EXHAUSTIVE_MATCHING_LIMIT;
    let candidates: Box<dyn Iterator<Item = Vec<usize>>> = if exhaustive {
        Box::new((0..len).permutations(len))
    } else {
        let swaps = (0..len).tuple_combinations().map(move |(i, j)| {
            let mut s: Vec<usize> = (0..len).collect();
            s.swap(i, j);
            s
        });
        let rotations = (1..len).map(move |p| (0..len).map(|j| (j + p) % len).collect());
        Box::new(swaps.chain(rotations))
    };
    let mut checked = 0;
    let mut counterexample = None;
    for sigma in candidates {
        checked += 1;
        if cost(&sigma) < identity_cost {
            counterexample = Some(sigma);
            break;
        }
    }
    Ok(SortedMatchingWitness {
        identity_cost,
        permutations_checked: checked,
        exhaustive,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpreadOutcome {
    /// All hypotheses hold and `|theta_j - omega_j| < epsilon + 2/s` for all `j`.
    Holds { bound: Rational, max_deviation: Rational },
    /// The named hypothesis fails; the conclusion is not examined.
    HypothesisFailed(String),
    /// Hypotheses hold but the conclusion fails at a 0-based index.
    ConclusionFailed {
        index: usize,
        deviation: Rational,
        bound: Rational,
    },
}

impl SpreadOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SpreadOutcome::Holds { .. })
    }
}

/// Checks that two ordered lifts which are close in `R_L`, have nearly equal
/// sums and whose second tuple meets every `s`-arc at least `2 delta` times
/// are close index by index.
pub fn spread_bound_check(
    t1: &LiftedTuple,
    t2: &LiftedTuple,
    delta: &Rational,
    epsilon: &Rational,
    s: &Int,
) -> Result<SpreadOutcome> {
    if t1.len() != t2.len() {
        return Err(Error::InvalidShape(format!(
            "lifts of sizes {} and {}",
            t1.len(),
            t2.len()
        )));
    }
    if !s.is_positive() {
        return Err(Error::DegenerateInput(format!("s = {s} must be positive")));
    }
    let len = Rational::from_integer(Int::from(t1.len()));
    let failed = |what: String| Ok(SpreadOutcome::HypothesisFailed(what));

    let sum_gap = (t1.sum() - t2.sum()).abs();
    if sum_gap >= *delta {
        return failed(format!(
            "|sum(theta_j - omega_j)| < delta fails ({} >= {})",
            format_rational(&sum_gap),
            format_rational(delta)
        ));
    }
    if &len * epsilon > *delta {
        return failed(format!(
            "L epsilon <= delta fails ({} > {})",
            format_rational(&(&len * epsilon)),
            format_rational(delta)
        ));
    }
    let distance = rl_distance(&t1.to_multiset(), &t2.to_multiset())?;
    if distance > *epsilon {
        return failed(format!(
            "R_L <= epsilon fails ({} > {})",
            format_rational(&distance),
            format_rational(epsilon)
        ));
    }
    let omega = t2.to_multiset();
    let needed = Rational::from_integer(Int::from(2)) * delta;
    let mut m = Int::zero();
    while &m < s {
        let arc = KArc::new(s.clone(), m.clone(), &m + Int::one())?;
        let count = arc.count(omega.angles());
        if Rational::from_integer(Int::from(count)) < needed {
            return failed(format!(
                "every s-arc holds >= 2 delta omega-points fails ({arc} holds {count} < {})",
                format_rational(&needed)
            ));
        }
        m += Int::one();
    }

    let bound = epsilon + Rational::new(Int::from(2), s.clone());
    let mut max_deviation = Rational::zero();
    for (index, (a, b)) in t1.theta.iter().zip(&t2.theta).enumerate() {
        let deviation = (a - b).abs();
        if deviation >= bound {
            return Ok(SpreadOutcome::ConclusionFailed {
                index,
                deviation,
                bound,
            });
        }
        max_deviation = max_deviation.max(deviation);
    }
    Ok(SpreadOutcome::Holds { bound, max_deviation })
}
