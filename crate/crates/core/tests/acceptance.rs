//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperop::oracle::{
    oracle_all_power_reps, oracle_hyper, oracle_max_power_form, oracle_sieve,
    oracle_tetration_table, ORACLE_MAX_BITS,
};
use hyperop::{
    bi_factorize, hyper_eval, hypothesis_scan, is_biprime, is_r_divisor, is_r_prime,
    lemma2_witness_search, perfect_power_form, tower_eval, verify_uniqueness, BudgetExceeded,
    EvalBudget, Lemma2Outcome, Natural, Rank,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: false,
        detail: detail.into(),
    }
}

fn n(v: u64) -> Natural {
    Natural::from(v)
}

fn timed(f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn round_trip() -> Verdict {
    let budget = EvalBudget::default();
    for m in 2..=1_000_000u64 {
        let m = n(m);
        let tower = match bi_factorize(&m) {
            Ok(t) => t,
            Err(e) => return fail(format!("bi_factorize({m}) failed: {e}")),
        };
        if tower_eval(&tower, &budget).as_ref() != Ok(&m) {
            return fail(format!("tower {tower} does not evaluate to {m}"));
        }
        if let Some(c) = tower
            .components()
            .iter()
            .find(|c| is_biprime(c) != Ok(true))
        {
            return fail(format!("component {c} of {m} is not biprime"));
        }
    }
    pass("10^6 round trips, all components biprime")
}

fn uniqueness() -> Verdict {
    for m in 2..=100_000u64 {
        if let Err(e) = verify_uniqueness(&n(m)) {
            return fail(format!("violation at {m}: {e}"));
        }
    }
    let reps = oracle_all_power_reps(&n(64));
    let report = match verify_uniqueness(&n(64)) {
        Ok(r) => r,
        Err(e) => return fail(format!("64: {e}")),
    };
    if reps.len() != 3 || report.collapsed_reps != 3 {
        return fail(format!(
            "64 has {} oracle reps, {} collapsed; expected 3",
            reps.len(),
            report.collapsed_reps
        ));
    }
    pass("no violation in [2, 10^5]; 64 collapses 3 representations")
}

fn lemma2() -> Verdict {
    let biprimes: Vec<Natural> = (2..=100u64)
        .map(n)
        .filter(|v| is_biprime(v) == Ok(true))
        .collect();
    let mut pairs = 0;
    for a in &biprimes {
        for b in &biprimes {
            if a == b {
                continue;
            }
            match lemma2_witness_search(a, b, 200, 200) {
                Ok(Lemma2Outcome::NoWitness) => pairs += 1,
                Ok(Lemma2Outcome::Witness { x, y }) => {
                    return fail(format!("{a}^{x} = {b}^{y}"));
                }
                Err(e) => return fail(format!("({a}, {b}): {e}")),
            }
        }
    }
    pass(format!("{pairs} ordered biprime pairs, no witness"))
}

fn rank1_reduction() -> Verdict {
    let budget = EvalBudget::default();
    let sieve = oracle_sieve(100_000);
    for m in 2..=100_000u64 {
        let v = n(m);
        if is_r_prime(Rank::MULTIPLICATION, &v, &budget) != Ok(sieve[m as usize]) {
            return fail(format!("rank-1 primality disagrees with the sieve at {m}"));
        }
        if is_r_prime(Rank::EXPONENTIATION, &v, &budget).ok() != is_biprime(&v).ok() {
            return fail(format!("rank-2 primality disagrees with is_biprime at {m}"));
        }
    }
    pass("rank 1 matches the sieve, rank 2 matches is_biprime on [2, 10^5]")
}

fn worked_facts() -> Verdict {
    let budget = EvalBudget::default();
    if is_biprime(&n(6)) != Ok(true) {
        return fail("6 is not biprime");
    }
    match perfect_power_form(&n(9)) {
        Ok(Some(f)) if f.base() == &n(3) && f.exponent() == &n(2) => {}
        other => return fail(format!("9 has power form {other:?}")),
    }
    let zero_primes: Vec<u64> = (1..=1000u64)
        .filter(|&m| is_r_prime(Rank::ADDITION, &n(m), &budget) == Ok(true))
        .collect();
    if zero_primes != [1] {
        return fail(format!("0-primes in [1, 1000]: {zero_primes:?}"));
    }
    for (rank, d, a) in [(0, 3, 5), (1, 3, 6), (2, 3, 9)] {
        match is_r_divisor(Rank(rank), &n(d), &n(a), &budget) {
            Ok(Some(w)) if w.quotient == n(2) => {}
            other => return fail(format!("rank {rank}: {d} | {a} gave {other:?}")),
        }
    }
    pass("6 biprime, 9 = 3^2, 1 is the only 0-prime, three divisor facts with quotient 2")
}

fn primes_are_biprime() -> Verdict {
    let sieve = oracle_sieve(10_000);
    let mut count = 0;
    for (p, _) in sieve.iter().enumerate().filter(|(_, &is_p)| is_p) {
        if is_biprime(&n(p as u64)) != Ok(true) {
            return fail(format!("prime {p} is not biprime"));
        }
        count += 1;
    }
    if is_biprime(&n(6)) != Ok(true) || sieve[6] {
        return fail("6 does not witness a composite biprime");
    }
    pass(format!(
        "{count} primes <= 10^4 are biprime; 6 is a composite biprime"
    ))
}

fn hypothesis() -> Verdict {
    let n_max = n(1_000_000_000);
    let report = match hypothesis_scan(Rank::TETRATION, &n_max, &EvalBudget::default()) {
        Ok(r) => r,
        Err(e) => return fail(format!("scan failed: {e}")),
    };
    let table: Vec<Natural> = oracle_tetration_table(1_000_000_000)
        .into_iter()
        .map(|(_, _, v)| v)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if report.compound != table {
        return fail(format!(
            "scan found {:?}, oracle table has {:?}",
            report.compound, table
        ));
    }
    if !report.counterexamples.is_empty() {
        return fail(format!("counterexamples: {:?}", report.counterexamples));
    }
    pass(format!(
        "{} tetration values, 0 counterexamples, existence gaps {:?}",
        report.compound.len(),
        report.existence_gaps
    ))
}

fn oracle_equivalence() -> Verdict {
    let budget = EvalBudget::default();
    let mut compared = 0;
    for r in 0..=3u32 {
        for a in 0..=10u64 {
            for x in 0..=5u64 {
                let got = hyper_eval(Rank(r), &n(a), &n(x), &budget);
                match oracle_hyper(r, &n(a), &n(x)) {
                    Some(want) => {
                        if got.as_ref() != Ok(&want) {
                            return fail(format!("H_{r}({a}, {x}): {got:?} != {want}"));
                        }
                        compared += 1;
                    }
                    // Above oracle scale the evaluator must refuse as well.
                    None => {
                        if let Ok(v) = &got {
                            if v.bits() <= ORACLE_MAX_BITS {
                                return fail(format!("oracle gave up on H_{r}({a}, {x}) = {v}"));
                            }
                        }
                    }
                }
            }
        }
    }
    for m in 2..=100_000u64 {
        let want = oracle_max_power_form(&n(m));
        let got = perfect_power_form(&n(m))
            .expect("m >= 2")
            .map(|f| f.into_parts());
        if got != want {
            return fail(format!("power form of {m}: {got:?} != {want:?}"));
        }
    }
    pass(format!(
        "{compared} hyperoperator values match; power forms match on [2, 10^5]"
    ))
}

fn budget_totality() -> Verdict {
    let budget = EvalBudget::default();
    let limit = Duration::from_millis(100);
    let mut cases: Vec<(u32, u64, u64)> = Vec::new();
    for a in 3..=12 {
        cases.push((3, a, 4));
        cases.push((3, a, 5));
    }
    for r in 4..=8 {
        cases.push((r, 3, 3));
        cases.push((r, 10, 3));
    }
    cases.extend([(2, 10, 10_000_000), (3, 2, 6), (5, 2, 4), (1_000_000, 3, 2)]);
    let mut worst = Duration::ZERO;
    for (r, a, x) in &cases {
        let start = Instant::now();
        let out = hyper_eval(Rank(*r), &n(*a), &n(*x), &budget);
        let took = start.elapsed();
        worst = worst.max(took);
        if !matches!(out, Err(BudgetExceeded { .. })) {
            let shown = out.map(|v| v.bits());
            return fail(format!(
                "H_{r}({a}, {x}) did not exceed the budget: {shown:?} bits"
            ));
        }
        if took > limit {
            return fail(format!("H_{r}({a}, {x}) took {took:?}"));
        }
    }
    pass(format!(
        "{} explosive inputs refused, slowest {:.1} ms",
        cases.len(),
        worst.as_secs_f64() * 1e3
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);
    let criteria: [Criterion; 9] = [
        (
            "1 round-trip factorization",
            round_trip,
            Some(Duration::from_secs(60)),
        ),
        ("2 tower uniqueness", uniqueness, None),
        (
            "3 no common power of distinct biprimes",
            lemma2,
            Some(Duration::from_secs(10)),
        ),
        ("4 rank-1 and rank-2 reduction", rank1_reduction, None),
        ("5 worked facts", worked_facts, None),
        ("6 primes are biprime", primes_are_biprime, None),
        (
            "7 hypothesis scan to 10^9",
            hypothesis,
            Some(Duration::from_secs(5)),
        ),
        ("8 oracle equivalence", oracle_equivalence, None),
        ("9 budget totality", budget_totality, None),
    ];
    let mut failures = 0;
    for (name, check, target) in criteria {
        let (mut verdict, took) = timed(check);
        if let Some(t) = target {
            if took > t {
                verdict = fail(format!(
                    "{} (took {took:.2?}, target {t:?})",
                    verdict.detail
                ));
            }
        }
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{name}] {} ({:.2?})", verdict.detail, took);
        failures += usize::from(!verdict.pass);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
