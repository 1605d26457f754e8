use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use hyperop::classical;
use hyperop::oracle::{
    oracle_all_power_reps, oracle_hyper, oracle_is_biprime, oracle_tetration_table,
};
use hyperop::tower::UNIQUENESS_DEFAULT_BOUND;
use hyperop::{
    bi_factorize, common_r_divisors, decompositions, hyper_eval, hyper_inverse, hypothesis_scan,
    is_r_divisor, perfect_power_form, r_factorize, r_multiplicate, sgn, tower_eval,
    verify_uniqueness, DivisibilityError, DivisorSet, EvalBudget, HypothesisReport, Natural,
    RFactorOutcome, Rank,
};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{Record, Renderer};

const ORACLE_PRIME_LIMIT: u64 = 1_000_000_000_000;

/// Numbers classified per parallel batch; bounds memory for any range size.
const CLASSIFY_CHUNK: u64 = 1 << 14;

pub struct Ctx<'a> {
    pub budget: EvalBudget,
    pub verify: bool,
    pub out: &'a mut Renderer,
}

pub fn eval(ctx: &mut Ctx, rank: u32, a: &Natural, x: &Natural) -> Result<(), CliError> {
    let value = hyper_eval(Rank(rank), a, x, &ctx.budget)?;
    let rendered = ctx.out.num(&value)?;
    let verified = ctx.verify.then(|| match oracle_hyper(rank, a, x) {
        Some(want) => want == value,
        // Beyond oracle scale: the exact inverse must give back x.
        None => hyper_inverse(Rank(rank), a, &value, &ctx.budget).as_ref() == Ok(x),
    });
    let record = Record {
        operation: "eval",
        input: json!({"rank": rank, "a": ctx.out.num(a)?, "x": ctx.out.num(x)?}),
        result: json!({"value": rendered}),
        verified,
        human: rendered.clone(),
    };
    finish(ctx, record)
}

pub fn factor(ctx: &mut Ctx, m: &Natural, rank: Option<u32>) -> Result<(), CliError> {
    match rank {
        None | Some(2) => factor_tower(ctx, m),
        Some(r) if r >= 3 => factor_rank(ctx, m, r),
        Some(r) => Err(CliError::Domain(format!(
            "factor --rank takes 2 or a rank of at least 3, not {r}"
        ))),
    }
}

fn factor_tower(ctx: &mut Ctx, m: &Natural) -> Result<(), CliError> {
    let tower = bi_factorize(m)?;
    let components = ctx.out.nums(tower.components())?;
    let rendered = tower.to_string();
    let biprime = tower.len() == 1;
    let verified = if ctx.verify {
        Some(if *m <= Natural::from(UNIQUENESS_DEFAULT_BOUND) {
            verify_uniqueness(m)?;
            true
        } else {
            tower_eval(&tower, &ctx.budget).as_ref() == Ok(m)
        })
    } else {
        None
    };
    let mut human = format!(
        "{} = {rendered} [{}]",
        ctx.out.num(m)?,
        components.join(", ")
    );
    if biprime {
        human.push_str(" biprime");
    }
    let record = Record {
        operation: "factor",
        input: json!({"m": ctx.out.num(m)?}),
        result: json!({"components": components, "rendered": rendered, "biprime": biprime}),
        verified,
        human,
    };
    finish(ctx, record)
}

fn factor_rank(ctx: &mut Ctx, m: &Natural, rank: u32) -> Result<(), CliError> {
    let input = json!({"m": ctx.out.num(m)?, "rank": rank});
    let record = match r_factorize(Rank(rank), m, &ctx.budget)? {
        RFactorOutcome::Factored(f) => {
            let components = ctx.out.nums(&f.components)?;
            let verified = ctx.verify.then(|| {
                r_multiplicate(Rank(rank), &f.fold_order(), &ctx.budget).as_ref() == Ok(m)
            });
            let mut human = format!(
                "{} = [{}] at rank {rank}",
                ctx.out.num(m)?,
                components.join(", ")
            );
            if !f.complete {
                human.push_str(" (incomplete: last component undecided within budget)");
            }
            Record {
                operation: "factor",
                input,
                result: json!({"components": components, "complete": f.complete}),
                verified,
                human,
            }
        }
        RFactorOutcome::NoPrimeFactorization { decompositions } => {
            let pairs = pairs_json(ctx.out, &decompositions)?;
            let shown: Vec<String> = decompositions
                .iter()
                .map(|(a, x)| format!("H_{rank}({a}, {x})"))
                .collect();
            Record {
                operation: "factor",
                input,
                result: json!({"components": null, "decompositions": pairs}),
                verified: None,
                human: format!(
                    "{} has no factorization into {rank}-prime components; decompositions: {}",
                    ctx.out.num(m)?,
                    shown.join(", ")
                ),
            }
        }
    };
    finish(ctx, record)
}

/// Parses `M` or the inclusive range `LO..HI`.
pub fn parse_target(s: &str) -> Result<(Natural, Natural), CliError> {
    let bad = || {
        CliError::Domain(format!(
            "malformed number or range {s:?}; expected M or LO..HI"
        ))
    };
    let parse = |t: &str| t.trim().parse::<Natural>().map_err(|_| bad());
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(CliError::Domain(format!("empty range {s:?}: {lo} > {hi}")));
            }
            Ok((lo, hi))
        }
        None => {
            let m = parse(s)?;
            Ok((m.clone(), m))
        }
    }
}

struct Class {
    prime: bool,
    witness: Option<(Natural, Natural)>,
}

fn classify_one(rank: u32, m: &Natural, budget: &EvalBudget) -> Result<Class, CliError> {
    let two = Natural::from(2u32);
    let witness = match rank {
        0 => (*m >= two).then(|| (Natural::from(1u32), m - 1u32)),
        1 => {
            if classical::is_prime(m).map_err(DivisibilityError::from)? {
                None
            } else {
                let factors =
                    classical::factorize(m, budget.max_steps()).map_err(DivisibilityError::from)?;
                let p = factors[0].0.clone();
                let q = m / &p;
                Some((p, q))
            }
        }
        2 => perfect_power_form(m)?.map(|f| f.into_parts()),
        _ => decompositions(Rank(rank), m, budget)?.into_iter().next(),
    };
    Ok(Class {
        prime: witness.is_none(),
        witness,
    })
}

fn verify_class(rank: u32, m: &Natural, class: &Class) -> Option<bool> {
    if let Some((a, x)) = &class.witness {
        return Some(oracle_hyper(rank, a, x).as_ref() == Some(m));
    }
    let small = m.to_u64()?;
    Some(match rank {
        0 => small == 1,
        // Trial division is only practical for moderate sizes.
        1 if small <= ORACLE_PRIME_LIMIT => hyperop::oracle::oracle_is_prime(m),
        2 => oracle_is_biprime(m),
        3 => !oracle_tetration_table(small).iter().any(|(_, _, v)| v == m),
        _ => return None,
    })
}

pub fn classify(ctx: &mut Ctx, rank: u32, target: &str, stats: bool) -> Result<(), CliError> {
    let (lo, hi) = parse_target(target)?;
    let floor = sgn(Rank(rank));
    if lo <= floor {
        return Err(CliError::Domain(format!(
            "rank-{rank} primality is defined for numbers above {floor}, range starts at {lo}"
        )));
    }
    let (mut primes, mut compounds) = (Natural::from(0u32), Natural::from(0u32));
    let mut start = lo.clone();
    while start <= hi {
        let end = (&start + CLASSIFY_CHUNK - 1u32).min(hi.clone());
        let chunk: Vec<Natural> = naturals(&start, &end);
        let budget = ctx.budget;
        let verify = ctx.verify;
        let classes: Vec<Result<(Class, Option<bool>), CliError>> = chunk
            .par_iter()
            .map(|m| {
                let c = classify_one(rank, m, &budget)?;
                let v = if verify {
                    verify_class(rank, m, &c)
                } else {
                    None
                };
                Ok((c, v))
            })
            .collect();
        for (m, outcome) in chunk.iter().zip(classes) {
            let (class, verified) = outcome?;
            if verified == Some(false) {
                return Err(CliError::Falsified(format!(
                    "oracle disagrees with the rank-{rank} classification of {m}"
                )));
            }
            let record = class_record(ctx.out, rank, m, &class, verified)?;
            ctx.out.emit(&record)?;
            if class.prime {
                primes += 1u32;
            } else {
                compounds += 1u32;
            }
        }
        start = end + 1u32;
    }
    if stats {
        let total = &primes + &compounds;
        let record = Record {
            operation: "stats",
            input: json!({"rank": rank, "low": ctx.out.num(&lo)?, "high": ctx.out.num(&hi)?}),
            result: json!({
                "count": ctx.out.num(&total)?,
                "prime": ctx.out.num(&primes)?,
                "compound": ctx.out.num(&compounds)?,
            }),
            verified: None,
            human: format!(
                "stats: {total} numbers, {primes} {rank}-prime, {compounds} {rank}-compound"
            ),
        };
        ctx.out.emit(&record)?;
    }
    Ok(())
}

fn naturals(start: &Natural, end: &Natural) -> Vec<Natural> {
    let mut out = Vec::new();
    let mut m = start.clone();
    while m <= *end {
        out.push(m.clone());
        m += 1u32;
    }
    out
}

fn class_record(
    out: &Renderer,
    rank: u32,
    m: &Natural,
    class: &Class,
    verified: Option<bool>,
) -> Result<Record, CliError> {
    let label = if class.prime { "prime" } else { "compound" };
    let mut human = format!("{}\t{rank}-{label}", out.num(m)?);
    let witness = match &class.witness {
        Some((a, x)) => {
            human.push_str(&format!("\tH_{rank}({a}, {x})"));
            json!({"a": out.num(a)?, "x": out.num(x)?})
        }
        None => Value::Null,
    };
    Ok(Record {
        operation: "classify",
        input: json!({"m": out.num(m)?, "rank": rank}),
        result: json!({"class": label, "witness": witness}),
        verified,
        human,
    })
}

pub fn divisor(ctx: &mut Ctx, rank: u32, d: &Natural, a: &Natural) -> Result<(), CliError> {
    let witness = is_r_divisor(Rank(rank), d, a, &ctx.budget)?;
    let input = json!({"rank": rank, "d": ctx.out.num(d)?, "a": ctx.out.num(a)?});
    let verified = match (&witness, ctx.verify) {
        (Some(w), true) => {
            Some(hyper_eval(Rank(rank), d, &w.quotient, &ctx.budget).as_ref() == Ok(a))
        }
        _ => None,
    };
    let record = match witness {
        Some(w) => Record {
            operation: "divisor",
            input,
            result: json!({"divisor": true, "quotient": ctx.out.num(&w.quotient)?}),
            verified,
            human: format!(
                "yes, quotient {}: H_{rank}({d}, {}) = {a}",
                w.quotient, w.quotient
            ),
        },
        None => Record {
            operation: "divisor",
            input,
            result: json!({"divisor": false, "quotient": null}),
            verified,
            human: "no".to_owned(),
        },
    };
    finish(ctx, record)
}

fn set_json(out: &Renderer, set: &DivisorSet) -> Result<Value, CliError> {
    Ok(match set {
        DivisorSet::Interval { low, high } => json!({"low": out.num(low)?, "high": out.num(high)?}),
        DivisorSet::Listed(v) => json!(out.nums(v)?),
    })
}

fn set_human(set: &DivisorSet) -> String {
    match set {
        DivisorSet::Interval { low, high } => format!("{low}..{high}"),
        DivisorSet::Listed(v) => v
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(", "),
    }
}

/// Brute-force common divisors at rank 2, from the oracle power enumeration.
fn oracle_common_rank2(a: &Natural, b: &Natural) -> BTreeSet<Natural> {
    let bases = |n: &Natural| -> BTreeSet<Natural> {
        let mut s: BTreeSet<Natural> = oracle_all_power_reps(n)
            .into_iter()
            .map(|(d, _)| d)
            .collect();
        s.insert(n.clone());
        s
    };
    bases(a).intersection(&bases(b)).cloned().collect()
}

fn verify_set(rank: u32, a: &Natural, b: &Natural, set: &DivisorSet) -> Option<bool> {
    match (rank, set) {
        (2, DivisorSet::Listed(v)) => {
            Some(v.iter().cloned().collect::<BTreeSet<_>>() == oracle_common_rank2(a, b))
        }
        _ => None,
    }
}

pub fn coprime(ctx: &mut Ctx, rank: u32, a: &Natural, b: &Natural) -> Result<(), CliError> {
    let set = common_r_divisors(Rank(rank), a, b, &ctx.budget)?;
    let coprime = set.is_empty();
    let human = if coprime {
        "yes".to_owned()
    } else {
        format!("no, common {rank}-divisors: {}", set_human(&set))
    };
    let record = Record {
        operation: "coprime",
        input: json!({"rank": rank, "a": ctx.out.num(a)?, "b": ctx.out.num(b)?}),
        result: json!({"coprime": coprime, "common_divisors": set_json(ctx.out, &set)?}),
        verified: ctx.verify.then(|| verify_set(rank, a, b, &set)).flatten(),
        human,
    };
    finish(ctx, record)
}

pub fn gcd(ctx: &mut Ctx, rank: u32, a: &Natural, b: &Natural) -> Result<(), CliError> {
    let set = common_r_divisors(Rank(rank), a, b, &ctx.budget)?;
    let greatest = set.max();
    let (result, human) = match &greatest {
        Some(g) => (json!({"gcd": ctx.out.num(g)?}), ctx.out.num(g)?),
        None => (
            json!({"gcd": null}),
            format!("none: {a} and {b} are {rank}-coprime"),
        ),
    };
    let record = Record {
        operation: "gcd",
        input: json!({"rank": rank, "a": ctx.out.num(a)?, "b": ctx.out.num(b)?}),
        result,
        verified: ctx.verify.then(|| verify_set(rank, a, b, &set)).flatten(),
        human,
    };
    finish(ctx, record)
}

pub fn hypothesis(
    ctx: &mut Ctx,
    rank: u32,
    n_max: &Natural,
    out_file: Option<&Path>,
) -> Result<(), CliError> {
    let report = hypothesis_scan(Rank(rank), n_max, &ctx.budget)?;
    let verified = if ctx.verify && rank == 3 {
        n_max.to_u64().map(|cap| {
            let table: BTreeSet<Natural> = oracle_tetration_table(cap)
                .into_iter()
                .map(|(_, _, v)| v)
                .collect();
            report.compound.iter().cloned().collect::<BTreeSet<_>>() == table
        })
    } else {
        None
    };
    let doc = report_document(ctx.out, &report, verified)?;
    let text = if ctx.out.json() {
        doc.to_string()
    } else {
        serde_json::to_string_pretty(&doc).expect("json values serialize")
    };
    match out_file {
        Some(path) => {
            fs::write(path, format!("{text}\n"))?;
            ctx.out.line(&report.summary())?;
        }
        None => ctx.out.line(&text)?,
    }
    ctx.out.flush()?;

    if !report.existence_gaps.is_empty() {
        eprintln!(
            "note: {} rank-{rank} compound value(s) have no factorization into {rank}-prime components: {}",
            report.existence_gaps.len(),
            join(&report.existence_gaps)
        );
    }
    if !report.counterexamples.is_empty() {
        return Err(CliError::Falsified(format!(
            "uniqueness counterexample(s) at rank {rank}: {}",
            join(&report.counterexamples)
        )));
    }
    if !report.disagreements.is_empty() {
        return Err(CliError::Falsified(format!(
            "the factorizer disagrees with exhaustive enumeration at: {}",
            join(&report.disagreements)
        )));
    }
    if verified == Some(false) {
        return Err(CliError::Falsified(
            "the compound set differs from the oracle tetration table".to_owned(),
        ));
    }
    Ok(())
}

fn join(ns: &[Natural]) -> String {
    ns.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn pairs_json(out: &Renderer, pairs: &[(Natural, Natural)]) -> Result<Value, CliError> {
    let v: Result<Vec<Value>, CliError> = pairs
        .iter()
        .map(|(a, x)| Ok(json!([out.num(a)?, out.num(x)?])))
        .collect();
    Ok(Value::Array(v?))
}

fn report_document(
    out: &Renderer,
    report: &HypothesisReport,
    verified: Option<bool>,
) -> Result<Value, CliError> {
    let entries: Result<Vec<Value>, CliError> = report
        .entries
        .iter()
        .map(|e| {
            let factorizations: Result<Vec<Vec<String>>, CliError> =
                e.factorizations.iter().map(|f| out.nums(f)).collect();
            Ok(json!({
                "value": out.num(&e.value)?,
                "decompositions": pairs_json(out, &e.decompositions)?,
                "factorizations": factorizations?,
                "factorizer_agrees": e.factorizer_agrees,
            }))
        })
        .collect();
    let generated = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(json!({
        "metadata": {
            "tool": "hyperop",
            "version": env!("CARGO_PKG_VERSION"),
            "generated_unix": generated,
        },
        "operation": "hypothesis",
        "input": {"rank": report.rank.get(), "n_max": out.num(&report.n_max)?},
        "result": {
            "compound": out.nums(&report.compound)?,
            "entries": entries?,
            "counterexamples": out.nums(&report.counterexamples)?,
            "existence_gaps": out.nums(&report.existence_gaps)?,
            "disagreements": out.nums(&report.disagreements)?,
            "uniqueness_holds": report.uniqueness_holds(),
            "summary": report.summary(),
        },
        "verified": verified,
    }))
}

fn finish(ctx: &mut Ctx, record: Record) -> Result<(), CliError> {
    ctx.out.emit(&record)?;
    if record.verified == Some(false) {
        return Err(CliError::Falsified(format!(
            "{} result failed its oracle cross-check",
            record.operation
        )));
    }
    Ok(())
}
