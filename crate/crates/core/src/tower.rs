//! Unique factorization into towers of biprimes.
//!
//! Every natural `M > 1` is either a biprime or exactly one tower
//! `M = a_1^(a_2^(...^(a_{s-1}^a_s)))` whose components are all biprimes.
//! Components are stored outermost base first, so `a_s` is the innermost
//! exponent.
//!
//! The factorization is a descent: split off the biprime root, `M = a_1^M_1`,
//! then factor the exponent. Exponents strictly decrease, so it terminates.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arith::{r_multiplicate, MultiplicateError};
use crate::oracle::{oracle_all_power_reps, oracle_is_biprime};
use crate::power::{is_biprime, perfect_power_form, PowerForm};
use crate::{EvalBudget, EvalOutcome, Natural, Rank};

/// Depth cap on the descent; real towers are at most `log* M` deep.
const MAX_DEPTH: usize = 64;

/// Default upper bound for [`verify_uniqueness`].
pub const UNIQUENESS_DEFAULT_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("input must be at least 2")]
    InputBelowTwo,
    #[error("{0} is a biprime, not a perfect power")]
    NotBicompound(Natural),
    #[error("a tower needs at least one component")]
    EmptyTower,
    #[error("tower component {index} ({value}) is not a biprime")]
    NotBiprimeComponent { index: usize, value: Natural },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("factorization exceeded {MAX_DEPTH} levels")]
    DepthLimit,
    #[error("{value} exceeds the brute-force bound {bound}")]
    AboveBound { value: Natural, bound: Natural },
    #[error("uniqueness violated: {expected} and {found} evaluate to the same number")]
    UniquenessViolation { expected: Tower, found: Tower },
}

/// A nonempty sequence of biprimes `[a_1, ..., a_s]` encoding
/// `a_1^(a_2^(...^a_s))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tower {
    components: Vec<Natural>,
}

impl Tower {
    /// Checks that the sequence is nonempty and every component is a biprime.
    pub fn new(components: Vec<Natural>) -> Result<Self, TowerError> {
        if components.is_empty() {
            return Err(TowerError::EmptyTower);
        }
        for (index, value) in components.iter().enumerate() {
            if !is_biprime(value).unwrap_or(false) {
                return Err(TowerError::NotBiprimeComponent {
                    index,
                    value: value.clone(),
                });
            }
        }
        Ok(Tower { components })
    }

    pub fn components(&self) -> &[Natural] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Natural> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True for a one-component tower, i.e. a biprime.
    pub fn is_biprime(&self) -> bool {
        self.components.len() == 1
    }
}

/// Renders `2^(2^(2^2))`; a single component renders as itself.
impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (last, init) = self.components.split_last().expect("towers are nonempty");
        for (i, c) in init.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}^")?;
            } else {
                write!(f, "({c}^")?;
            }
        }
        write!(f, "{last}")?;
        for _ in 1..init.len() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Biprime root of a bi-compound number: `d = d_0^(D_0)` with `d_0` biprime
/// and `D_0 > 1`.
pub fn biprime_root(d: &Natural) -> Result<PowerForm, TowerError> {
    match perfect_power_form(d) {
        Ok(Some(form)) => Ok(form),
        _ => Err(TowerError::NotBicompound(d.clone())),
    }
}

/// The unique tower of biprimes that evaluates to `m`.
pub fn bi_factorize(m: &Natural) -> Result<Tower, TowerError> {
    if perfect_power_form(m).is_err() {
        return Err(TowerError::InputBelowTwo);
    }
    let mut components = Vec::new();
    let mut current = m.clone();
    loop {
        if components.len() >= MAX_DEPTH {
            return Err(TowerError::DepthLimit);
        }
        match perfect_power_form(&current).expect("exponents stay >= 2") {
            None => {
                components.push(current);
                break;
            }
            Some(form) => {
                let (base, exponent) = form.into_parts();
                debug_assert!(exponent < current, "exponents must strictly decrease");
                components.push(base);
                current = exponent;
            }
        }
    }
    Ok(Tower { components })
}

/// Evaluates the tower right to left: the rank-2 fold of the reversed
/// components.
pub fn tower_eval(tower: &Tower, budget: &EvalBudget) -> EvalOutcome {
    let reversed: Vec<Natural> = tower.components.iter().rev().cloned().collect();
    r_multiplicate(Rank::EXPONENTIATION, &reversed, budget).map_err(|e| match e {
        MultiplicateError::Budget(b) => b,
        MultiplicateError::EmptyVector => unreachable!("towers are nonempty"),
    })
}

/// Result of searching `a^x = b^y` over a finite box.
#[must_use = "a witness falsifies the claim that distinct biprimes have no common power"]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma2Outcome {
    NoWitness,
    Witness { x: u64, y: u64 },
}

/// Searches `1 <= x <= x_max`, `1 <= y <= y_max` for `a^x = b^y`, where `a`
/// and `b` are distinct biprimes.
///
/// Walks both power sequences in step, advancing whichever side is smaller,
/// so the cost is `O(x_max + y_max)` multiplications. For valid inputs the
/// answer is always [`Lemma2Outcome::NoWitness`]; a witness would be a
/// counterexample and is returned as such.
pub fn lemma2_witness_search(
    a: &Natural,
    b: &Natural,
    x_max: u64,
    y_max: u64,
) -> Result<Lemma2Outcome, TowerError> {
    if a == b {
        return Err(TowerError::PreconditionViolation(format!(
            "bases must differ, both are {a}"
        )));
    }
    for v in [a, b] {
        if !is_biprime(v).unwrap_or(false) {
            return Err(TowerError::PreconditionViolation(format!(
                "{v} is not a biprime"
            )));
        }
    }
    if x_max == 0 || y_max == 0 {
        return Err(TowerError::PreconditionViolation(
            "search bounds must be at least 1".to_owned(),
        ));
    }
    let (mut x, mut y) = (1u64, 1u64);
    let (mut pa, mut pb) = (a.clone(), b.clone());
    while x <= x_max && y <= y_max {
        match pa.cmp(&pb) {
            std::cmp::Ordering::Equal => return Ok(Lemma2Outcome::Witness { x, y }),
            std::cmp::Ordering::Less => {
                pa *= a;
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                pb *= b;
                y += 1;
            }
        }
    }
    Ok(Lemma2Outcome::NoWitness)
}

/// Outcome of a successful [`verify_uniqueness`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub value: Natural,
    pub tower: Tower,
    /// Every `(a, e)` with `a, e >= 2` and `a^e = value`.
    pub representations: Vec<(Natural, Natural)>,
    /// Number of those representations that were collapsed onto `tower`.
    pub collapsed_reps: usize,
    /// Number of distinct biprime towers found by exhaustive enumeration;
    /// always 1 on success.
    pub candidate_towers: usize,
}

/// Brute-force check that `m` has exactly one biprime tower, for
/// `2 <= m <= 10^6`.
pub fn verify_uniqueness(m: &Natural) -> Result<UniquenessReport, TowerError> {
    verify_uniqueness_up_to(m, &Natural::from(UNIQUENESS_DEFAULT_BOUND))
}

/// [`verify_uniqueness`] with an explicit brute-force bound.
///
/// Uses the oracle power enumeration, not the factorizer it checks:
///
/// * every representation `m = a^e` is collapsed by rewriting a
///   non-biprime base `a = c^f` as `m = c^(f e)` until the base is a biprime,
///   and must land on the factorizer's first component with an exponent
///   whose towers are exactly the factorizer's remaining components;
/// * every biprime tower equal to `m` is enumerated exhaustively and there
///   must be exactly one.
pub fn verify_uniqueness_up_to(
    m: &Natural,
    bound: &Natural,
) -> Result<UniquenessReport, TowerError> {
    if m > bound {
        return Err(TowerError::AboveBound {
            value: m.clone(),
            bound: bound.clone(),
        });
    }
    let tower = bi_factorize(m)?;
    let representations: Vec<(Natural, Natural)> = oracle_all_power_reps(m).into_iter().collect();

    let violation = |found: Vec<Natural>| TowerError::UniquenessViolation {
        expected: tower.clone(),
        found: Tower { components: found },
    };

    let mut collapsed_reps = 0;
    for (a, e) in &representations {
        let (mut base, mut exponent) = (a.clone(), e.clone());
        while let Some((c, f)) = oracle_all_power_reps(&base).into_iter().next() {
            base = c;
            exponent *= f;
        }
        let tails = all_biprime_towers(&exponent);
        if tails.is_empty() {
            return Err(TowerError::PreconditionViolation(format!(
                "exponent {exponent} has no biprime tower"
            )));
        }
        for tail in &tails {
            if base != tower.components[0] || tail[..] != tower.components[1..] {
                let mut found = vec![base.clone()];
                found.extend(tail.iter().cloned());
                return Err(violation(found));
            }
        }
        collapsed_reps += 1;
    }

    let candidates = all_biprime_towers(m);
    for c in &candidates {
        if c[..] != tower.components[..] {
            return Err(violation(c.clone()));
        }
    }
    if candidates.len() != 1 {
        return Err(TowerError::PreconditionViolation(format!(
            "found {} biprime towers for {m}",
            candidates.len()
        )));
    }
    Ok(UniquenessReport {
        value: m.clone(),
        tower,
        representations,
        collapsed_reps,
        candidate_towers: candidates.len(),
    })
}

/// Every sequence of biprimes whose tower equals `m`. The first component of
/// such a tower is a biprime `a` with `a^E = m`, `E >= 2`, so recursing over
/// the power representations of `m` finds all of them.
fn all_biprime_towers(m: &Natural) -> BTreeSet<Vec<Natural>> {
    let mut out = BTreeSet::new();
    if oracle_is_biprime(m) {
        out.insert(vec![m.clone()]);
    }
    for (a, e) in oracle_all_power_reps(m) {
        if !oracle_is_biprime(&a) {
            continue;
        }
        for tail in all_biprime_towers(&e) {
            let mut t = vec![a.clone()];
            t.extend(tail);
            out.insert(t);
        }
    }
    out
}

impl Tower {
    /// Evaluates with the default budget.
    pub fn value(&self) -> EvalOutcome {
        tower_eval(self, &EvalBudget::default())
    }
}
