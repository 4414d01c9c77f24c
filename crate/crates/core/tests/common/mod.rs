#![allow(dead_code)]

use elliott_kit::building_blocks::CircleBlock;
use elliott_kit::exact_arith::{Int, Rational};
use elliott_kit::hom_calculus::MultiplicityMatrix;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

fn divisors_of(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A block with `n` drawn from a few composite values and random divisors.
pub fn random_block(rng: &mut TestRng, max_points: usize) -> CircleBlock {
    let n = *[2, 4, 6, 8, 12, 18, 24, 30].choose(rng).unwrap();
    let count = rng.gen_range(2..=max_points);
    let divs = divisors_of(n);
    let d: Vec<i64> = (0..count).map(|_| *divs.choose(rng).unwrap()).collect();
    CircleBlock::from_i64(n, &d).unwrap()
}

/// Splits `total` into `parts` nonnegative summands.
fn split(rng: &mut TestRng, total: i64, parts: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// Recipe for multiplicity data of an actual homomorphism.
///
/// With `c_j = m/e_j`, every `s_i` a multiple of `lcm(c)` below `n/d_i` and
/// a common total `T` (a multiple of `lcm(c)`), row `j` uses
/// `s(j,i) = (s_i + (n/d_i) t_ji)/c_j` and `extra_j/c_j` point evaluations,
/// where `c_j (sum_i t_ji + extra_j) = T c_j`.
#[derive(Clone, Debug)]
pub struct HomSample {
    pub source: CircleBlock,
    pub target: CircleBlock,
    pub c: Vec<i64>,
    pub s: Vec<i64>,
    pub total: i64,
}

impl HomSample {
    pub fn new(rng: &mut TestRng, source: CircleBlock, rows: usize, min_total: i64) -> HomSample {
        let c: Vec<i64> = (0..rows).map(|_| rng.gen_range(1..=3)).collect();
        let lc = c.iter().fold(1, |acc: i64, x| acc.lcm(x));
        let q: Vec<i64> = source.quotients().iter().map(|x| x.try_into().unwrap()).collect();
        let s: Vec<i64> = q.iter().map(|&qi| lc * rng.gen_range(0..=(qi - 1) / lc)).collect();
        let steps = (min_total.max(1) + lc - 1) / lc;
        let total = lc * (steps + rng.gen_range(0..3));
        let n: i64 = source.n().try_into().unwrap();
        let d: Vec<i64> = source.divisors().iter().map(|x| x.try_into().unwrap()).collect();
        let m: i64 = s.iter().zip(&d).map(|(si, di)| si * di).sum::<i64>() + total * n;
        let e: Vec<i64> = c.iter().map(|cj| m / cj).collect();
        let target = CircleBlock::from_i64(m, &e).unwrap();
        HomSample {
            source,
            target,
            c,
            s,
            total,
        }
    }

    /// Another homomorphism between the same two blocks, with fresh remainders
    /// `s_i` and the total adjusted so that the target dimension is unchanged.
    pub fn resampled(&self, rng: &mut TestRng) -> HomSample {
        let lc = self.c.iter().fold(1, |acc: i64, x| acc.lcm(x));
        let q: Vec<i64> = self.source.quotients().iter().map(|x| x.try_into().unwrap()).collect();
        let n: i64 = self.source.n().try_into().unwrap();
        let d: Vec<i64> = self.source.divisors().iter().map(|x| x.try_into().unwrap()).collect();
        let weight = |s: &[i64]| s.iter().zip(&d).map(|(si, di)| si * di).sum::<i64>();
        for _ in 0..256 {
            let s: Vec<i64> = q.iter().map(|&qi| lc * rng.gen_range(0..=(qi - 1) / lc)).collect();
            let gap = weight(&self.s) - weight(&s);
            if gap % (n * lc) == 0 && self.total + gap / n >= 0 {
                return HomSample {
                    s,
                    total: self.total + gap / n,
                    ..self.clone()
                };
            }
        }
        self.clone()
    }

    /// One multiplicity matrix, drawing a fresh split of `T` per row.
    pub fn multiplicities(&self, rng: &mut TestRng) -> MultiplicityMatrix {
        let q: Vec<i64> = self.source.quotients().iter().map(|x| x.try_into().unwrap()).collect();
        let big_n = q.len();
        let mut rows = Vec::new();
        let mut evals = Vec::new();
        for &cj in &self.c {
            let parts = split(rng, self.total / cj, big_n + 1);
            let row: Vec<Int> = (0..big_n)
                .map(|i| Int::from((self.s[i] + q[i] * parts[i] * cj) / cj))
                .collect();
            rows.push(row);
            evals.push(Int::from(parts[big_n]));
        }
        MultiplicityMatrix::new(self.source.clone(), self.target.clone(), rows, evals).unwrap()
    }
}

/// Moves copies between `Lambda_i` slots and point evaluations without
/// changing any residue `s(j,i) mod n/d_i`.
pub fn equivalent_perturbation(rng: &mut TestRng, s: &MultiplicityMatrix) -> MultiplicityMatrix {
    let q = s.source.quotients();
    let mut rows = s.s.clone();
    let mut evals = s.point_evals.clone();
    for _ in 0..4 {
        let j = rng.gen_range(0..rows.len());
        let i = rng.gen_range(0..q.len());
        if rng.gen_bool(0.5) {
            if evals[j] >= Int::from(1) {
                rows[j][i] += &q[i];
                evals[j] -= 1;
            }
        } else if rows[j][i] >= q[i] {
            rows[j][i] -= &q[i];
            evals[j] += 1;
        }
    }
    MultiplicityMatrix::new(s.source.clone(), s.target.clone(), rows, evals).unwrap()
}

/// Independent conversion of prime-power orders to invariant factors
/// `f_1 | f_2 | ...` (all `> 1`): for every prime sort its exponents
/// descending, then the `r`-th largest factor multiplies the `r`-th largest
/// power of each prime.
pub fn invariant_factors_from_prime_powers(powers: &[(u64, u32)]) -> Vec<Int> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &(p, k) in powers {
        by_prime.entry(p).or_default().push(k);
    }
    let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![Int::from(1); width];
    for (p, mut ks) in by_prime {
        ks.sort_unstable_by(|a, b| b.cmp(a));
        for (r, k) in ks.into_iter().enumerate() {
            factors[r] *= Int::from(p).pow(k);
        }
    }
    factors.reverse();
    factors
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every finite abelian group of order at most `limit`, as prime powers.
pub fn abelian_groups_up_to(limit: u64) -> Vec<Vec<(u64, u32)>> {
    let mut groups = Vec::new();
    for order in 1..=limit {
        let mut per_prime: Vec<Vec<Vec<(u64, u32)>>> = Vec::new();
        let mut rest = order;
        let mut p = 2;
        while rest > 1 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                per_prime.push(
                    partitions(e, e)
                        .into_iter()
                        .map(|part| part.into_iter().map(|k| (p, k)).collect())
                        .collect(),
                );
            }
            p += 1;
        }
        let mut combos: Vec<Vec<(u64, u32)>> = vec![vec![]];
        for options in per_prime {
            combos = combos
                .into_iter()
                .flat_map(|base| {
                    options.iter().map(move |o| {
                        let mut v = base.clone();
                        v.extend(o.iter().copied());
                        v
                    })
                })
                .collect();
        }
        groups.extend(combos);
    }
    groups
}

pub fn random_angles(rng: &mut TestRng, len: usize) -> Vec<Rational> {
    let den = rng.gen_range(2..=12);
    (0..len).map(|_| ratio(rng.gen_range(0..den), den)).collect()
}
