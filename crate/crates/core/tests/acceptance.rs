//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Set `ELLIOTT_KIT_BLESS=1` to rewrite the CLI golden files.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::*;
use elliott_kit::building_blocks::{block_constants, CircleBlock};
use elliott_kit::circle_match::{hall_bound_check, rl_distance, rl_distance_bruteforce, CircleMultiset};
use elliott_kit::cli;
use elliott_kit::eigen_lift::{lift_paths, winding_number, SampledPath};
use elliott_kit::exact_arith::{cycle_cokernel, cycle_matrix, smith_normal_form, FinAbGroup, Int, Rational};
use elliott_kit::hom_calculus::{
    build_hom_recipe, ex1_bookkeeping, kk_lift_exists, multiplicity_to_kdual, sr_equivalent, KDualHom, KKClass,
};
use elliott_kit::k_invariants::{k1_relation_matrix, k1_structure};
use elliott_kit::oracles::cokernel_bruteforce;
use elliott_kit::realize::{realize_k1, TorsionSpec};
use num_traits::{One, Zero};
use rand::Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn criterion_1() -> Check {
    let mut rng = rng(1);
    for case in 0..500 {
        let len = rng.gen_range(2..=6);
        let a: Vec<Int> = (0..len).map(|_| int(rng.gen_range(1..=360))).collect();
        let closed = cycle_cokernel(&a).map_err(|e| e.to_string())?.group;
        let matrix = cycle_matrix(&a);
        let snf = smith_normal_form(&matrix).cokernel();
        let oracle = cokernel_bruteforce(&matrix).map_err(|e| e.to_string())?;
        ensure(closed.is_isomorphic(&snf) && snf.is_isomorphic(&oracle), || {
            format!("case {case}, a = {a:?}: closed {closed}, snf {snf}, oracle {oracle}")
        })?;
    }
    Ok("500 random vectors agree with both SNF and determinantal divisors".into())
}

fn criterion_2() -> Check {
    let mut fixed = vec![
        ("A(30;5,3)", FinAbGroup::new(1, ints(&[2])), ints(&[2])),
        ("A(12;2,3,4)", FinAbGroup::new(1, ints(&[2, 3])), ints(&[2, 3])),
    ];
    let diagonal: Vec<String> = (1..=12).map(|n| format!("A({n};{n},{n})")).collect();
    for name in &diagonal {
        fixed.push((name.as_str(), FinAbGroup::new(1, vec![]), ints(&[1])));
    }
    for (text, expected, orders) in &fixed {
        let b: CircleBlock = text.parse().map_err(|e: elliott_kit::error::Error| e.to_string())?;
        let k1 = k1_structure(&b);
        let oracle = cokernel_bruteforce(&k1_relation_matrix(&b)).map_err(|e| e.to_string())?;
        ensure(k1.group.is_isomorphic(expected), || {
            format!("{text}: {} != {expected}", k1.group.normalized())
        })?;
        ensure(oracle.is_isomorphic(expected), || format!("{text}: oracle {oracle}"))?;
        ensure(&k1.torsion_orders() == orders, || {
            format!("{text}: orders {:?}", k1.torsion_orders())
        })?;
    }
    Ok(format!("{} pinned blocks", fixed.len()))
}

fn criterion_3() -> Check {
    let mut rng = rng(3);
    let (mut equivalent, mut different) = (0, 0);
    for case in 0..200 {
        let perturb = rng.gen_bool(0.5);
        let (s1, s2) = loop {
            let a = random_block(&mut rng, 3);
            let rows = rng.gen_range(2..=3);
            let min_total = rng.gen_range(1..=6);
            let sample = HomSample::new(&mut rng, a, rows, min_total);
            let s1 = sample.multiplicities(&mut rng);
            if perturb {
                break (s1.clone(), equivalent_perturbation(&mut rng, &s1));
            }
            // Redraw until the remainders actually change.
            let other = sample.resampled(&mut rng);
            if other.s != sample.s {
                break (s1, other.multiplicities(&mut rng));
            }
        };
        let sr = sr_equivalent(&s1, &s2).map_err(|e| e.to_string())?;
        let h1 = multiplicity_to_kdual(&s1).map_err(|e| format!("case {case}: {e}"))?;
        let h2 = multiplicity_to_kdual(&s2).map_err(|e| format!("case {case}: {e}"))?;
        ensure(sr == (h1 == h2), || {
            format!("case {case}: sr = {sr} but standard forms equal = {}", h1 == h2)
        })?;
        if sr {
            equivalent += 1;
        } else {
            different += 1;
        }
    }
    ensure(equivalent >= 20 && different >= 20, || {
        format!("degenerate sample: {equivalent} equivalent, {different} not")
    })?;
    Ok(format!("200 pairs agree ({equivalent} equivalent, {different} not)"))
}

fn criterion_4() -> Check {
    let mut rng = rng(4);
    let mut patterns = 0usize;
    for case in 0..200 {
        let a = random_block(&mut rng, 3);
        let rows = rng.gen_range(2..=3);
        let min_total = 3 * a.len() as i64 + rng.gen_range(0..4);
        let sample = HomSample::new(&mut rng, a.clone(), rows, min_total);
        let h = multiplicity_to_kdual(&sample.multiplicities(&mut rng)).map_err(|e| e.to_string())?;
        let chi: Vec<Int> = (0..rows).map(|_| int(rng.gen_range(-5..=5))).collect();
        let kk = KKClass::new(h.clone(), chi).map_err(|e| e.to_string())?;
        let b = h.target();
        ensure(b.min_divisor() >= Int::from(a.len()) * a.n(), || {
            format!("case {case}: s(B) too small")
        })?;
        ensure(h.is_standard_form() && kk_lift_exists(&kk), || {
            format!("case {case}: lift rejected")
        })?;
        let recipe = build_hom_recipe(&kk).map_err(|e| format!("case {case}: {e}"))?;
        for l_row in &recipe.eigenvalue_counts {
            let m: Int = l_row
                .iter()
                .zip(&recipe.small_remainders)
                .zip(a.divisors())
                .map(|((l, s), d)| l * a.n() + s * d)
                .sum();
            ensure(&m == b.n(), || format!("case {case}: row dimension {m} != {}", b.n()))?;
        }
        let back = recipe
            .induced_multiplicities(&kk)
            .and_then(|s| multiplicity_to_kdual(&s))
            .map_err(|e| format!("case {case}: {e}"))?;
        ensure(back == h, || format!("case {case}: recipe does not reduce back"))?;
        patterns += recipe.pattern_length.to_string().parse::<usize>().unwrap_or(0);
    }
    Ok(format!("200 recipes rebuilt exactly (total pattern length {patterns})"))
}

fn criterion_5() -> Check {
    let mut rng = rng(5);
    for case in 0..1000 {
        let len = rng.gen_range(1..=7);
        let a = CircleMultiset::new(random_angles(&mut rng, len)).unwrap();
        let b = CircleMultiset::new(random_angles(&mut rng, len)).unwrap();
        let fast = rl_distance(&a, &b).map_err(|e| e.to_string())?;
        let slow = rl_distance_bruteforce(&a, &b).map_err(|e| e.to_string())?;
        ensure(fast == slow, || {
            format!("case {case}: {a} vs {b}: shift {fast}, brute force {slow}")
        })?;
    }
    Ok("1000 instances, shift search equals permutation minimum".into())
}

fn criterion_6() -> Check {
    let mut rng = rng(6);
    let epsilons = [
        ratio(0, 1),
        ratio(1, 48),
        ratio(1, 24),
        ratio(1, 12),
        ratio(1, 8),
        ratio(1, 4),
    ];
    let (mut certified, mut attempts) = (0, 0);
    while certified < 1000 {
        attempts += 1;
        ensure(attempts <= 50_000, || {
            format!("only {certified} instances satisfied the arc condition")
        })?;
        let len = rng.gen_range(1..=6);
        let base = random_angles(&mut rng, len);
        let moved: Vec<Rational> = base.iter().map(|x| x + ratio(rng.gen_range(-2..=2), 48)).collect();
        let a = CircleMultiset::new(base).unwrap();
        let b = CircleMultiset::new(moved).unwrap();
        let k = int(rng.gen_range(1..=8));
        let eps = &epsilons[rng.gen_range(0..epsilons.len())];
        let report = hall_bound_check(&a, &b, &k, eps).map_err(|e| e.to_string())?;
        if report.holds {
            certified += 1;
            ensure(report.distance <= report.bound, || {
                format!(
                    "{a} vs {b}, k = {k}: distance {} > bound {}",
                    report.distance, report.bound
                )
            })?;
        }
    }
    Ok(format!(
        "1000 arc-condition instances within epsilon + 1/k ({attempts} drawn)"
    ))
}

fn criterion_7() -> Check {
    let mut rng = rng(7);
    let steps = 64i64;
    for case in 0..100 {
        let len = rng.gen_range(1..=5);
        let paths: Vec<SampledPath> = (0..len)
            .map(|_| {
                let start = ratio(rng.gen_range(0..60), 60);
                let w = rng.gen_range(-2..=2);
                let values = (0..=steps)
                    .map(|g| {
                        let noise = if g == 0 || g == steps {
                            ratio(0, 1)
                        } else {
                            ratio(rng.gen_range(-1..=1), 200)
                        };
                        &start + ratio(w * g, steps) + noise
                    })
                    .collect();
                SampledPath::uniform(values).unwrap()
            })
            .collect();
        let k = int(rng.gen_range(-3..=3));
        let fam = lift_paths(&paths, &k).map_err(|e| format!("case {case}: {e}"))?;
        for (g, lift) in fam.lifts.iter().enumerate() {
            let t = lift.theta();
            ensure(t.windows(2).all(|w| w[0] <= w[1]), || {
                format!("case {case}: unordered at {g}")
            })?;
            ensure(t[t.len() - 1] <= &t[0] + Rational::one(), || {
                format!("case {case}: wrap bound at {g}")
            })?;
            let expected = CircleMultiset::new(paths.iter().map(|p| p.values()[g].clone()).collect()).unwrap();
            ensure(lift.to_multiset() == expected, || {
                format!("case {case}: multiset differs at {g}")
            })?;
        }
        let start_sum = fam.lifts[0].sum();
        let window = Rational::from_integer(k.clone());
        ensure(start_sum >= window && start_sum < &window + Rational::one(), || {
            format!("case {case}: initial sum outside [k, k+1)")
        })?;
        ensure(fam.max_jump() < ratio(1, 2), || {
            format!("case {case}: jump of {}", fam.max_jump())
        })?;
        let winding: Int = paths.iter().map(|p| winding_number(p).unwrap()).sum();
        ensure(
            fam.total_displacement() == Rational::from_integer(winding.clone()),
            || {
                format!(
                    "case {case}: displacement {} != winding {winding}",
                    fam.total_displacement()
                )
            },
        )?;
    }
    Ok("100 families on the 1/64 grid".into())
}

fn criterion_8() -> Check {
    let groups = abelian_groups_up_to(64);
    let mut checked = 0;
    for powers in &groups {
        let spec = TorsionSpec::new(powers.clone()).map_err(|e| e.to_string())?;
        let expected = FinAbGroup::new(1, invariant_factors_from_prime_powers(powers));
        for k in [1, 5, 25, 50] {
            let b = realize_k1(&spec, &int(k)).map_err(|e| e.to_string())?;
            CircleBlock::new(b.n().clone(), b.divisors().to_vec(), None).map_err(|e| format!("{b}: {e}"))?;
            let c = block_constants(&b);
            ensure(c.is_projectionless(), || {
                format!("{spec}, K = {k}: {b} has d = {}", c.d)
            })?;
            ensure(c.s >= int(k), || format!("{spec}, K = {k}: {b} has s = {}", c.s))?;
            let k1 = k1_structure(&b).group;
            ensure(k1.free_rank == 1 && k1.invariant_factors() == expected.torsion, || {
                format!("{spec}, K = {k}: {b} has K_1 = {k1}, expected {expected}")
            })?;
            let snf = smith_normal_form(&k1_relation_matrix(&b)).cokernel();
            ensure(
                snf.free_rank == 1 && snf.invariant_factors() == expected.torsion,
                || format!("{spec}, K = {k}: SNF gives {snf}"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{} groups of order <= 64, {checked} blocks", groups.len()))
}

fn criterion_9() -> Check {
    let a = CircleBlock::from_i64(2, &[1, 1]).unwrap();
    let b = CircleBlock::from_i64(208, &[104, 104]).unwrap();
    let h = KDualHom::new(a, b, vec![ints(&[0, 104]), ints(&[0, 104])]).map_err(|e| e.to_string())?;
    let kk = KKClass::without_twist(h);
    let out = ex1_bookkeeping(&kk, &int(9), &ratio(1, 1)).map_err(|e| e.to_string())?;
    ensure(
        out.b == int(8) && out.pattern_length == int(16) && out.slack == ratio(64, 208),
        || {
            format!(
                "pinned instance: b = {}, L = {}, slack = {}",
                out.b, out.pattern_length, out.slack
            )
        },
    )?;
    out.verify(&kk, &int(9), &ratio(1, 1))
        .map_err(|e| format!("pinned instance: {e}"))?;

    let mut rng = rng(9);
    let epsilons = [ratio(1, 2), ratio(1, 1), ratio(2, 1), ratio(7, 2)];
    for case in 0..100 {
        let a = random_block(&mut rng, 3);
        let eps = epsilons[rng.gen_range(0..epsilons.len())].clone();
        let c = (ratio(8, 1) / &eps).floor().to_integer() + int(1 + rng.gen_range(0..3));
        let big_n = Int::from(a.len());
        // m/e_j <= 3, so T n / 3 >= 4(N+C+2)n/eps is enough for s(B).
        let need = (Rational::from_integer(int(12) * (&big_n + &c + int(2))) / &eps)
            .ceil()
            .to_integer();
        let need: i64 = need.try_into().unwrap();
        let rows = rng.gen_range(2..=3);
        let total = need + rng.gen_range(0..10);
        let sample = HomSample::new(&mut rng, a, rows, total);
        let h = multiplicity_to_kdual(&sample.multiplicities(&mut rng)).map_err(|e| e.to_string())?;
        let kk = KKClass::without_twist(h);
        let out = ex1_bookkeeping(&kk, &c, &eps).map_err(|e| format!("case {case}: {e}"))?;
        ensure(out.slack >= Rational::zero() && out.slack < &eps / ratio(2, 1), || {
            format!("case {case}: slack {} vs epsilon {eps}", out.slack)
        })?;
        out.verify(&kk, &c, &eps).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok("pinned b = 8, L = 16, slack 64/208; 100 random instances within epsilon/2".into())
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("invariants_a30_5_3", &["invariants", "A(30;5,3)"]),
    ("invariants_a12_2_3_4", &["invariants", "A(12;2,3,4)"]),
    ("invariants_a7_7_7", &["invariants", "A(7;7,7)"]),
    ("realize_z2_k3", &["realize-k1", "--torsion", "2", "--min-rep", "3"]),
    ("realize_trivial_k2", &["realize-k1", "--torsion", "", "--min-rep", "2"]),
    (
        "realize_z2_z3_k1",
        &["realize-k1", "--torsion", "2,3", "--min-rep", "1"],
    ),
    (
        "ex1_pinned",
        &[
            "ex1",
            "--from",
            "A(2;1,1)",
            "--to",
            "A(208;104,104)",
            "--h",
            "[[0,104],[0,104]]",
            "--count",
            "9",
            "--epsilon",
            "1",
        ],
    ),
];

fn criterion_10() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("ELLIOTT_KIT_BLESS").is_some();
    for (name, args) in GOLDEN {
        let argv = || std::iter::once("elliott-kit").chain(args.iter().copied());
        let (code, first) = cli::run(argv());
        let (_, second) = cli::run(argv());
        ensure(code == 0, || format!("{name}: exit code {code}"))?;
        ensure(first == second, || format!("{name}: output differs between runs"))?;
        let path = dir.join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == first, || {
            format!("{name}: output differs from {}", path.display())
        })?;
    }
    Ok(format!("{} golden files byte-identical", GOLDEN.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form cokernel vs SNF and oracle", criterion_1),
        ("K_1 fixed values", criterion_2),
        ("multiplicity equivalence vs K-homology", criterion_3),
        ("lift decision and recipe", criterion_4),
        ("cyclic shift matching vs brute force", criterion_5),
        ("arc counts bound R_L", criterion_6),
        ("ordered lifts of path families", criterion_7),
        ("realizing K_1 torsion", criterion_8),
        ("large-target bookkeeping", criterion_9),
        ("CLI golden outputs", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {status}: {name}: {detail} [{:.2}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
