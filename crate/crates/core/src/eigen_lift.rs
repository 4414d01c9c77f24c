//! Continuous ordered lifts of families of sampled circle-valued paths.
//!
//! A path is known at grid points `0 = tau_0 < ... < tau_G = 1` and is taken
//! to follow the shorter arc between consecutive samples. Given `L` such
//! paths, [`lift_paths`] produces real functions `F_1 <= ... <= F_L <= F_1 + 1`
//! whose exponentials are the path values at every grid point, with
//! `sum_j F_j(0) in [k, k+1)`. The construction walks the grid one segment at
//! a time: it lifts the segment into a window `(alpha, alpha + 1)` that avoids
//! every value at the left endpoint and glues that lift to the existing one by
//! a cyclic index shift.

use num_traits::{One, Signed, Zero};

use crate::circle_match::{frac, glue_shift, natural_lift, rho, CircleMultiset, LiftedTuple};
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPath {
    grid: Vec<Rational>,
    values: Vec<Rational>,
}

impl SampledPath {
    /// Values are reduced into `[0,1)`. Consecutive samples must be less
    /// than `1/2` apart on the circle.
    pub fn new(grid: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::InvalidShape(format!(
                "need at least two samples and one value per grid point ({} grid points, {} values)",
                grid.len(),
                values.len()
            )));
        }
        if !grid[0].is_zero() || !grid[grid.len() - 1].is_one() {
            return Err(Error::InvalidShape("the grid must run from 0 to 1".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidShape("grid points must increase strictly".into()));
        }
        let values: Vec<Rational> = values.iter().map(frac).collect();
        let half = Rational::new(Int::one(), Int::from(2));
        if let Some(g) = (0..values.len() - 1).find(|&g| rho(&values[g], &values[g + 1]) >= half) {
            return Err(Error::GridTooCoarse(format!(
                "samples {} and {} are at least 1/2 apart",
                g,
                g + 1
            )));
        }
        Ok(SampledPath { grid, values })
    }

    /// Samples on the uniform grid `g/G`, `G = values.len() - 1`.
    pub fn uniform(values: Vec<Rational>) -> Result<Self> {
        let steps = values.len().saturating_sub(1).max(1);
        let grid = (0..values.len())
            .map(|g| Rational::new(Int::from(g), Int::from(steps)))
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[Rational] {
        &self.grid
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_closed(&self) -> bool {
        self.values.first() == self.values.last()
    }

    /// Largest circle distance between consecutive samples.
    pub fn max_step(&self) -> Rational {
        self.values
            .windows(2)
            .map(|w| rho(&w[0], &w[1]))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// The lift at every grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedLiftFamily {
    pub grid: Vec<Rational>,
    pub lifts: Vec<LiftedTuple>,
}

impl OrderedLiftFamily {
    /// `F_j` at every grid point.
    pub fn function(&self, j: usize) -> Vec<Rational> {
        self.lifts.iter().map(|t| t.theta()[j].clone()).collect()
    }

    /// The circle multisets the lift represents, one per grid point.
    pub fn project(&self) -> Vec<CircleMultiset> {
        self.lifts.iter().map(LiftedTuple::to_multiset).collect()
    }

    /// `sum_j (F_j(1) - F_j(0))`.
    pub fn total_displacement(&self) -> Rational {
        let first = self.lifts.first().expect("at least two grid points");
        let last = self.lifts.last().expect("at least two grid points");
        last.sum() - first.sum()
    }

    /// Largest `|F_j(tau_{g+1}) - F_j(tau_g)|` over all `j` and `g`.
    pub fn max_jump(&self) -> Rational {
        self.lifts
            .windows(2)
            .flat_map(|w| w[0].theta().iter().zip(w[1].theta()).map(|(a, b)| (a - b).abs()))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Midpoint of the widest gap between the sorted values, so at least half
/// that gap (and hence at least `1/(2L)`) from every value.
fn avoidance_angle(sorted: &[Rational]) -> Rational {
    let len = sorted.len();
    let two = Rational::from_integer(Int::from(2));
    let mut best: Option<(Rational, Rational)> = None;
    for i in 0..len {
        let lo = &sorted[i];
        let hi = if i + 1 < len {
            sorted[i + 1].clone()
        } else {
            &sorted[0] + Rational::one()
        };
        let gap = &hi - lo;
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, (lo + &hi) / &two));
        }
    }
    best.expect("nonempty").1
}

/// The representative of `v` in `(alpha, alpha + 1]`.
fn lift_above(v: &Rational, alpha: &Rational) -> Rational {
    v + (alpha - v).floor() + Rational::one()
}

fn sorted_window(values: impl Iterator<Item = Rational>, alpha: &Rational) -> LiftedTuple {
    let mut g: Vec<Rational> = values.map(|v| lift_above(&v, alpha)).collect();
    g.sort();
    LiftedTuple::new(g).expect("values inside one window of length 1")
}

/// Requires every path to move less than `1/(2L)` between consecutive grid
/// points.
pub fn lift_paths(paths: &[SampledPath], k: &Int) -> Result<OrderedLiftFamily> {
    let Some(first) = paths.first() else {
        return Err(Error::InvalidShape("no paths to lift".into()));
    };
    if paths.iter().any(|p| p.grid != first.grid) {
        return Err(Error::InvalidShape("paths must share one grid".into()));
    }
    let len = paths.len();
    let modulus = Rational::new(Int::one(), Int::from(2 * len));
    for (j, p) in paths.iter().enumerate() {
        let step = p.max_step();
        if step >= modulus {
            return Err(Error::GridTooCoarse(format!(
                "path {j} moves {} in one step; the modulus needs < {}",
                format_rational(&step),
                format_rational(&modulus)
            )));
        }
    }

    let at = |g: usize| paths.iter().map(move |p| p.values[g].clone());
    let start = CircleMultiset::new(at(0).collect())?;
    let mut lifts = vec![natural_lift(&start, k)];
    for g in 0..first.grid.len() - 1 {
        let here = CircleMultiset::new(at(g).collect())?;
        let alpha = avoidance_angle(here.angles());
        let left = sorted_window(at(g), &alpha);
        let right = sorted_window(at(g + 1), &alpha);
        let current = lifts.last().expect("seeded");
        let r = glue_shift(current, &left)?;
        lifts.push(right.shifted(&r));
    }
    let family = OrderedLiftFamily {
        grid: first.grid.clone(),
        lifts,
    };
    debug_assert!(family.max_jump() < Rational::new(Int::one(), Int::from(2)));
    Ok(family)
}

/// Sum of the nearest-lift increments of a closed path.
pub fn winding_number(path: &SampledPath) -> Result<Int> {
    if !path.is_closed() {
        return Err(Error::NotClosed(format!(
            "path starts at {} and ends at {}",
            format_rational(&path.values[0]),
            format_rational(&path.values[path.values.len() - 1])
        )));
    }
    let half = Rational::new(Int::one(), Int::from(2));
    let total: Rational = path
        .values
        .windows(2)
        .map(|w| {
            let d = frac(&(&w[1] - &w[0]));
            if d > half {
                d - Rational::one()
            } else {
                d
            }
        })
        .sum();
    debug_assert!(total.is_integer());
    Ok(total.to_integer())
}
