//! The `elliott-kit` command line: every subcommand prints one JSON document
//!
//! ```text
//! {"schemaVersion": 1, "status": "ok", "data": {...}}
//! {"schemaVersion": 1, "status": "error", "error": {"code": ..., "message": ..., "failedCondition": ...}}
//! ```
//!
//! with keys sorted. Rationals are written as `"p/q"` strings, integers as
//! JSON numbers when they fit in 64 bits and as decimal strings otherwise.
//! Exceptional points are numbered from 1 in the output.

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::building_blocks::{block_constants, CircleBlock};
use crate::circle_match::{hall_bound_check, rl_distance_with_shift, CircleMultiset};
use crate::eigen_lift::{lift_paths, OrderedLiftFamily, SampledPath};
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, Int, Rational};
use crate::hom_calculus::{
    build_hom_recipe, ex1_bookkeeping, lift_decision, standard_form, HomRecipe, KDualHom, KKClass,
};
use crate::k_invariants::{k0_data, k1_structure};
use crate::realize::{factorize, realize_k1, TorsionSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "elliott-kit",
    version,
    about = "Exact invariants and homomorphism data for circle building blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// K_0, K_1 and structural constants of a block such as `A(30;5,3)`.
    Invariants { block: String },
    /// Decide whether a K-homology map lifts to a unital homomorphism and
    /// print its recipe.
    HomExists {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Rows of h as JSON, e.g. `[[1,3],[1,3]]`.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// K_1 twist as a JSON list, one entry per target point.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
    /// Distance between two circle multisets given as JSON lists of angles.
    Match {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// `k,epsilon` for the arc-count check.
        #[arg(long)]
        hall: Option<String>,
    },
    /// A unital projectionless block with K_1 = Z + H.
    RealizeK1 {
        /// Cyclic summands of H: orders such as `2,3,4` or prime powers `2^2`.
        #[arg(long, default_value = "")]
        torsion: String,
        #[arg(long = "min-rep")]
        min_rep: String,
    },
    /// Ordered continuous lift of sampled circle paths.
    Lift {
        /// JSON list of `{"grid": [...], "values": [...]}`.
        #[arg(long)]
        paths: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        k: String,
    },
    /// Integer bookkeeping for a large target averaging C eigenvalue patterns.
    Ex1 {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        /// The count C.
        #[arg(long)]
        count: String,
        #[arg(long)]
        epsilon: String,
    },
}

fn int_value(v: &Int) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn ints_value(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn matrix_value(rows: &[Vec<Int>]) -> Value {
    Value::Array(rows.iter().map(|r| ints_value(r)).collect())
}

fn rational_value(r: &Rational) -> Value {
    json!(format_rational(r))
}

fn rationals_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn json_int(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integral JSON number")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => json_int(v).map(Rational::from_integer),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

fn json_list<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON list")))
}

fn parse_int_list(text: &str, what: &str) -> Result<Vec<Int>> {
    json_list(&parse_json(text, what)?, what)?
        .iter()
        .map(json_int)
        .collect()
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<Int>>> {
    let v = parse_json(text, "h")?;
    json_list(&v, "h")?
        .iter()
        .map(|row| json_list(row, "each row of h")?.iter().map(json_int).collect())
        .collect()
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<Rational>> {
    json_list(&parse_json(text, what)?, what)?
        .iter()
        .map(json_rational)
        .collect()
}

fn parse_block(text: &str) -> Result<CircleBlock> {
    text.parse()
}

fn parse_int(text: &str, what: &str) -> Result<Int> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what} must be an integer, got {text:?}")))
}

/// `2,3` and `4` are cyclic orders; `2^2` is a prime power.
fn parse_torsion(text: &str) -> Result<TorsionSpec> {
    let mut powers = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let number = |s: &str| -> Result<u64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad torsion entry {item:?}")))
        };
        match item.split_once('^') {
            Some((p, k)) => {
                let k = u32::try_from(number(k)?).map_err(|_| Error::TooLarge(format!("exponent in {item:?}")))?;
                powers.push((number(p)?, k));
            }
            None => {
                let c = number(item)?;
                if c == 0 {
                    return Err(Error::DegenerateInput("cyclic order 0".into()));
                }
                powers.extend(factorize(c));
            }
        }
    }
    TorsionSpec::new(powers)
}

fn kk_class(from: &str, to: &str, h: &str, chi: Option<&str>) -> Result<KKClass> {
    let a = parse_block(from)?;
    let b = parse_block(to)?;
    let raw = KDualHom::new(a, b, parse_matrix(h)?)?;
    let hom = standard_form(raw.matrix().to_vec(), raw.source(), raw.target())?;
    match chi {
        Some(text) => KKClass::new(hom, parse_int_list(text, "chi")?),
        None => Ok(KKClass::without_twist(hom)),
    }
}

fn invariants(block: &str) -> Result<Value> {
    let b = parse_block(block)?;
    let k0 = k0_data(&b);
    let k1 = k1_structure(&b);
    let group = k1.group.normalized();
    let c = block_constants(&b);
    Ok(json!({
        "block": b.to_string(),
        "k0": {
            "orderUnit": int_value(&k0.order_unit),
            "rhoGenerator": rational_value(&k0.rho_generator),
        },
        "k1": {
            "freeRank": group.free_rank,
            "torsion": ints_value(&group.torsion),
            "cyclicOrders": ints_value(&k1.torsion_orders()),
            "generators": matrix_value(&k1.torsion_generators),
            "freeGenerator": ints_value(&k1.free_generator),
        },
        "constants": {
            "d": int_value(&c.d),
            "s": int_value(&c.s),
            "projectionless": c.is_projectionless(),
        },
    }))
}

fn recipe_value(r: &HomRecipe) -> Value {
    let pattern: Vec<Value> = r
        .pattern
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|e| json!({"sourcePoint": e.source_point + 1, "multiplicity": int_value(&e.multiplicity)}))
                    .collect(),
            )
        })
        .collect();
    json!({
        "smallRemainders": ints_value(&r.small_remainders),
        "eigenvalueCounts": matrix_value(&r.eigenvalue_counts),
        "patternLength": int_value(&r.pattern_length),
        "pattern": pattern,
        "twistPoint": r.twist_point + 1,
        "k1Twist": ints_value(&r.k1_twist),
    })
}

fn hom_exists(from: &str, to: &str, h: &str, chi: Option<&str>) -> Result<Value> {
    let kk = kk_class(from, to, h, chi)?;
    let decision = lift_decision(&kk);
    let mut out = Map::new();
    out.insert("exists".into(), json!(decision.exists));
    out.insert("standardForm".into(), matrix_value(kk.hom.matrix()));
    if let Some(reason) = decision.reason {
        out.insert("reason".into(), json!(reason));
    }
    if decision.exists {
        out.insert("recipe".into(), recipe_value(&build_hom_recipe(&kk)?));
    }
    Ok(Value::Object(out))
}

fn match_multisets(a: &str, b: &str, hall: Option<&str>) -> Result<Value> {
    let a = CircleMultiset::new(parse_rational_list(a, "a")?)?;
    let b = CircleMultiset::new(parse_rational_list(b, "b")?)?;
    let (distance, shift) = rl_distance_with_shift(&a, &b)?;
    let mut out = Map::new();
    out.insert("distance".into(), rational_value(&distance));
    out.insert("optimalShift".into(), json!(shift));
    if let Some(spec) = hall {
        let (k, eps) = spec
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("--hall expects k,epsilon, got {spec:?}")))?;
        let report = hall_bound_check(&a, &b, &parse_int(k, "k")?, &parse_rational(eps)?)?;
        let mut hall = Map::new();
        hall.insert("holds".into(), json!(report.holds));
        hall.insert("bound".into(), rational_value(&report.bound));
        if let Some(v) = report.violation {
            hall.insert(
                "violation".into(),
                json!({"arc": v.arc.to_string(), "aCount": v.a_count, "bCount": v.b_count}),
            );
        }
        out.insert("hall".into(), Value::Object(hall));
    }
    Ok(Value::Object(out))
}

fn realize(torsion: &str, min_rep: &str) -> Result<Value> {
    let h = parse_torsion(torsion)?;
    let b = realize_k1(&h, &parse_int(min_rep, "--min-rep")?)?;
    let group = k1_structure(&b).group.normalized();
    let c = block_constants(&b);
    Ok(json!({
        "block": b.to_string(),
        "n": int_value(b.n()),
        "divisors": ints_value(b.divisors()),
        "torsionSpec": h.to_string(),
        "k1": {"freeRank": group.free_rank, "torsion": ints_value(&group.torsion)},
        "d": int_value(&c.d),
        "s": int_value(&c.s),
    }))
}

fn family_value(f: &OrderedLiftFamily) -> Value {
    json!({
        "grid": rationals_value(&f.grid),
        "lifts": f.lifts.iter().map(|t| rationals_value(t.theta())).collect::<Vec<_>>(),
    })
}

fn lift(paths: &str, k: &str) -> Result<Value> {
    let v = parse_json(paths, "paths")?;
    let paths = json_list(&v, "paths")?
        .iter()
        .map(|p| {
            let field = |name: &str| -> Result<Vec<Rational>> {
                let list = p
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("path without {name:?}")))?;
                json_list(list, name)?.iter().map(json_rational).collect()
            };
            SampledPath::new(field("grid")?, field("values")?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(family_value(&lift_paths(&paths, &parse_int(k, "--k")?)?))
}

fn ex1(from: &str, to: &str, h: &str, chi: Option<&str>, count: &str, epsilon: &str) -> Result<Value> {
    let kk = kk_class(from, to, h, chi)?;
    let c = parse_int(count, "--count")?;
    let eps = parse_rational(epsilon)?;
    let out = ex1_bookkeeping(&kk, &c, &eps)?;
    let verified = out.verify(&kk, &c, &eps);
    Ok(json!({
        "hJNRemainder": ints_value(&out.h_jn_rem),
        "r": ints_value(&out.r),
        "k": ints_value(&out.k),
        "u": ints_value(&out.u),
        "lJNRemainder": ints_value(&out.l_jn_rem),
        "smallRemainders": ints_value(&out.small_remainders),
        "eigenvalueCounts": matrix_value(&out.eigenvalue_counts),
        "b": int_value(&out.b),
        "patternLength": int_value(&out.pattern_length),
        "slack": rational_value(&out.slack),
        "sizeThreshold": rational_value(&out.size_threshold),
        "verified": verified.is_ok(),
    }))
}

fn dispatch(command: Command) -> Result<Value> {
    match command {
        Command::Invariants { block } => invariants(&block),
        Command::HomExists { from, to, h, chi } => hom_exists(&from, &to, &h, chi.as_deref()),
        Command::Match { a, b, hall } => match_multisets(&a, &b, hall.as_deref()),
        Command::RealizeK1 { torsion, min_rep } => realize(&torsion, &min_rep),
        Command::Lift { paths, k } => lift(&paths, &k),
        Command::Ex1 {
            from,
            to,
            h,
            chi,
            count,
            epsilon,
        } => ex1(&from, &to, &h, chi.as_deref(), &count, &epsilon),
    }
}

fn envelope(result: Result<Value>) -> (i32, Value) {
    match result {
        Ok(data) => (
            0,
            json!({"schemaVersion": SCHEMA_VERSION, "status": "ok", "data": data}),
        ),
        Err(e) => {
            let mut err = Map::new();
            err.insert("code".into(), json!(e.code()));
            err.insert("message".into(), json!(e.to_string()));
            if let Some(c) = e.failed_condition() {
                err.insert("failedCondition".into(), json!(c));
            }
            (
                1,
                json!({"schemaVersion": SCHEMA_VERSION, "status": "error", "error": err}),
            )
        }
    }
}

/// Runs one command line (program name first) and returns the exit code and
/// the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, value) = match Cli::try_parse_from(args) {
        Ok(cli) => envelope(dispatch(cli.command)),
        Err(e) if !e.use_stderr() => return (0, e.to_string()),
        Err(e) => envelope(Err(Error::Parse(e.to_string().trim_end().to_string()))),
    };
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    text.push('\n');
    (code, text)
}
