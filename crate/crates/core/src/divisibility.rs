//! Rank-parametric divisibility.
//!
//! At rank `r`, `m > sgn(r)` is *r-decomposable* (r-compound) when
//! `H_r(a, x) = m` for some `a, x > sgn(r)`, and *r-prime* otherwise. `d` is
//! an *r-divisor* of `a` when `H_r(d, x) = a` for some `x >= sgn(r)`; that `x`
//! is the r-quotient. Two different numbers are *r-coprime* when they share
//! no r-divisor `d > sgn(r)`.
//!
//! Rank 1 is classical divisibility and rank 2 is perfect-power structure.
//! Ranks >= 3 are decided by a bounded search that is exact whenever it
//! finishes; when it cannot, the caller gets [`BudgetExceeded`] instead of a
//! guess.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{hyper_eval_at_most, hyper_inverse, sgn, InverseError};
use crate::classical::{self, ClassicalError};
use crate::power::perfect_power_form;
use crate::{BudgetExceeded, BudgetLimit, EvalBudget, Natural, Rank};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisibilityError {
    #[error("{value} is outside the rank-{rank} domain: values must exceed sgn({rank})")]
    DomainViolation { rank: Rank, value: Natural },
    #[error("r-coprimality is only defined for two different numbers")]
    EqualInputs,
    #[error("classical primality is only decided exactly below 3317044064679887385961981")]
    BeyondExactRange,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

impl From<ClassicalError> for DivisibilityError {
    fn from(e: ClassicalError) -> Self {
        match e {
            ClassicalError::BeyondExactRange => DivisibilityError::BeyondExactRange,
            ClassicalError::Unfactored => DivisibilityError::Budget(BudgetExceeded {
                limit: BudgetLimit::Steps,
                min_bits: 0,
            }),
        }
    }
}

/// `H_r(d, x)` equals the dividend, `d > sgn(r)`, `x >= sgn(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RDivisorWitness {
    pub divisor: Natural,
    pub quotient: Natural,
}

/// The set of common r-divisors of two numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisorSet {
    /// Every natural in `low..=high`.
    Interval { low: Natural, high: Natural },
    /// An explicit ascending list.
    Listed(Vec<Natural>),
}

impl DivisorSet {
    pub fn is_empty(&self) -> bool {
        match self {
            DivisorSet::Interval { low, high } => low > high,
            DivisorSet::Listed(v) => v.is_empty(),
        }
    }

    pub fn len(&self) -> Natural {
        match self {
            DivisorSet::Interval { low, high } if low <= high => high - low + 1u32,
            DivisorSet::Interval { .. } => Natural::zero(),
            DivisorSet::Listed(v) => Natural::from(v.len()),
        }
    }

    pub fn max(&self) -> Option<Natural> {
        match self {
            DivisorSet::Interval { low, high } => (low <= high).then(|| high.clone()),
            DivisorSet::Listed(v) => v.last().cloned(),
        }
    }

    pub fn contains(&self, d: &Natural) -> bool {
        match self {
            DivisorSet::Interval { low, high } => low <= d && d <= high,
            DivisorSet::Listed(v) => v.binary_search(d).is_ok(),
        }
    }

    /// Materializes the set. Intervals are expanded, so only call this on
    /// sets known to be small.
    pub fn to_vec(&self) -> Vec<Natural> {
        match self {
            DivisorSet::Interval { low, high } => {
                let mut out = Vec::new();
                let mut d = low.clone();
                while d <= *high {
                    out.push(d.clone());
                    d += 1u32;
                }
                out
            }
            DivisorSet::Listed(v) => v.clone(),
        }
    }
}

fn require_above_sgn(rank: Rank, value: &Natural) -> Result<(), DivisibilityError> {
    if *value <= sgn(rank) {
        return Err(DivisibilityError::DomainViolation {
            rank,
            value: value.clone(),
        });
    }
    Ok(())
}

/// Visits every `(a, x)` with `a, x >= 2` and `H_r(a, x) = m`, in increasing
/// `a`, then increasing `x`.
///
/// Both loops rely on monotonicity for `a >= 2`: `H_r(a, x)` grows with `x`,
/// and `H_r(a, 2)` grows with `a`. Each candidate costs one step of the
/// budget.
fn search<F>(
    rank: Rank,
    m: &Natural,
    budget: &EvalBudget,
    mut visit: F,
) -> Result<(), BudgetExceeded>
where
    F: FnMut(&Natural, &Natural) -> ControlFlow<()>,
{
    let two = Natural::from(2u32);
    let mut steps = 0u64;
    let mut tick = || {
        steps += 1;
        if steps > budget.max_steps() {
            Err(BudgetExceeded {
                limit: BudgetLimit::Steps,
                min_bits: m.bits(),
            })
        } else {
            Ok(())
        }
    };
    if rank.get() == 0 {
        // a + x = m with a, x >= 2.
        let mut a = two.clone();
        while &a + &two <= *m {
            tick()?;
            if visit(&a, &(m - &a)).is_break() {
                return Ok(());
            }
            a += 1u32;
        }
        return Ok(());
    }
    let mut a = two.clone();
    loop {
        tick()?;
        if hyper_eval_at_most(rank, &a, &two, m, budget)?.is_none() {
            return Ok(());
        }
        let mut x = two.clone();
        loop {
            tick()?;
            match hyper_eval_at_most(rank, &a, &x, m, budget)? {
                None => break,
                Some(v) => {
                    if v == *m && visit(&a, &x).is_break() {
                        return Ok(());
                    }
                }
            }
            x += 1u32;
        }
        a += 1u32;
    }
}

/// Every `(a, x)` with `a, x >= 2` and `H_rank(a, x) = m`, by exhaustive
/// bounded search. Intended for ranks >= 3, where the candidate set is tiny;
/// lower ranks work but cost up to `O(m)` steps.
pub fn decompositions(
    rank: Rank,
    m: &Natural,
    budget: &EvalBudget,
) -> Result<Vec<(Natural, Natural)>, BudgetExceeded> {
    let mut out = Vec::new();
    search(rank, m, budget, |a, x| {
        out.push((a.clone(), x.clone()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub(crate) fn first_decomposition(
    rank: Rank,
    m: &Natural,
    budget: &EvalBudget,
) -> Result<Option<(Natural, Natural)>, BudgetExceeded> {
    let mut found = None;
    search(rank, m, budget, |a, x| {
        found = Some((a.clone(), x.clone()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Whether `H_rank(a, x) = m` has a solution with `a, x > sgn(rank)`.
pub fn is_r_decomposable(
    rank: Rank,
    m: &Natural,
    budget: &EvalBudget,
) -> Result<bool, DivisibilityError> {
    require_above_sgn(rank, m)?;
    match rank.get() {
        0 => Ok(*m >= Natural::from(2u32)),
        1 => Ok(!classical::is_prime(m)?),
        2 => Ok(perfect_power_form(m).expect("m >= 2 was checked").is_some()),
        _ => Ok(first_decomposition(rank, m, budget)?.is_some()),
    }
}

pub fn is_r_prime(rank: Rank, m: &Natural, budget: &EvalBudget) -> Result<bool, DivisibilityError> {
    is_r_decomposable(rank, m, budget).map(|d| !d)
}

/// The r-quotient of `a` by `d`, if `d` is an r-divisor of `a`.
pub fn is_r_divisor(
    rank: Rank,
    d: &Natural,
    a: &Natural,
    budget: &EvalBudget,
) -> Result<Option<RDivisorWitness>, DivisibilityError> {
    require_above_sgn(rank, d)?;
    // d > sgn(r) makes the inverse unique, so the only x to check is the one
    // the inverse returns.
    match hyper_inverse(rank, d, a, budget) {
        Ok(x) if x >= sgn(rank) => Ok(Some(RDivisorWitness {
            divisor: d.clone(),
            quotient: x,
        })),
        Ok(_) | Err(InverseError::NotRepresentable) => Ok(None),
        Err(InverseError::DegenerateBase) => {
            unreachable!("bases above sgn(r) are never degenerate")
        }
        Err(InverseError::Budget(b)) => Err(b.into()),
    }
}

fn check_pair(rank: Rank, a: &Natural, b: &Natural) -> Result<(), DivisibilityError> {
    if a == b {
        return Err(DivisibilityError::EqualInputs);
    }
    require_above_sgn(rank, a)?;
    require_above_sgn(rank, b)
}

/// Every `d > sgn(r)` with `H_r(d, x) = a`, `H_r(d, y) = b` for some
/// `x, y >= sgn(r)`.
pub fn common_r_divisors(
    rank: Rank,
    a: &Natural,
    b: &Natural,
    budget: &EvalBudget,
) -> Result<DivisorSet, DivisibilityError> {
    check_pair(rank, a, b)?;
    match rank.get() {
        // d + x = a with x >= 0 holds for every d <= a.
        0 => Ok(DivisorSet::Interval {
            low: Natural::one(),
            high: a.min(b).clone(),
        }),
        1 => {
            let g = a.gcd(b);
            let ds = classical::divisors(&g, budget.max_steps())?;
            Ok(DivisorSet::Listed(
                ds.into_iter().filter(|d| !d.is_one()).collect(),
            ))
        }
        2 => Ok(DivisorSet::Listed(common_power_bases(a, b))),
        _ => {
            let left = bases_reaching(rank, a, budget)?;
            let right = bases_reaching(rank, b, budget)?;
            Ok(DivisorSet::Listed(
                left.intersection(&right).cloned().collect(),
            ))
        }
    }
}

/// Rank 2: `d^x = a` and `d^y = b` force `d` to share the biprime root `c`
/// of `a` and `b`, so `d = c^k` with `k` dividing both exponents.
fn common_power_bases(a: &Natural, b: &Natural) -> Vec<Natural> {
    let root_form = |n: &Natural| match perfect_power_form(n).expect("n >= 2 was checked") {
        Some(f) => f.into_parts(),
        None => (n.clone(), Natural::one()),
    };
    let (ra, ea) = root_form(a);
    let (rb, eb) = root_form(b);
    if ra != rb {
        return Vec::new();
    }
    let g = ea
        .gcd(&eb)
        .to_u64()
        .expect("exponents are bounded by bit length");
    (1..=g)
        .filter(|k| g % k == 0)
        .map(|k| Pow::pow(&ra, k))
        .collect()
}

/// Every `d >= 2` with `H_r(d, x) = n` for some `x >= 1`: `n` itself (x = 1)
/// and the bases of all decompositions.
fn bases_reaching(
    rank: Rank,
    n: &Natural,
    budget: &EvalBudget,
) -> Result<BTreeSet<Natural>, BudgetExceeded> {
    let mut out: BTreeSet<Natural> = decompositions(rank, n, budget)?
        .into_iter()
        .map(|(d, _)| d)
        .collect();
    out.insert(n.clone());
    Ok(out)
}

pub fn is_r_coprime(
    rank: Rank,
    a: &Natural,
    b: &Natural,
    budget: &EvalBudget,
) -> Result<bool, DivisibilityError> {
    Ok(common_r_divisors(rank, a, b, budget)?.is_empty())
}

/// The largest common r-divisor by value, `None` when `a` and `b` are
/// r-coprime.
pub fn greatest_common_r_divisor(
    rank: Rank,
    a: &Natural,
    b: &Natural,
    budget: &EvalBudget,
) -> Result<Option<Natural>, DivisibilityError> {
    Ok(common_r_divisors(rank, a, b, budget)?.max())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn b() -> EvalBudget {
        EvalBudget::default()
    }

    fn listed(xs: &[u64]) -> DivisorSet {
        DivisorSet::Listed(xs.iter().map(|&x| n(x)).collect())
    }

    #[test]
    fn decomposable_examples() {
        assert!(is_r_decomposable(Rank(2), &n(9), &b()).unwrap());
        assert!(is_r_decomposable(Rank(3), &n(16), &b()).unwrap());
        assert!(is_r_prime(Rank(2), &n(6), &b()).unwrap());
        assert!(is_r_prime(Rank(1), &n(7), &b()).unwrap());
        assert!(!is_r_prime(Rank(3), &n(27), &b()).unwrap());
        assert!(is_r_prime(Rank(3), &n(7), &b()).unwrap());
        assert!(is_r_prime(Rank(0), &n(1), &b()).unwrap());
        assert!(!is_r_prime(Rank(0), &n(2), &b()).unwrap());
    }

    #[test]
    fn domain_violations() {
        assert!(matches!(
            is_r_decomposable(Rank(0), &n(0), &b()),
            Err(DivisibilityError::DomainViolation { .. })
        ));
        assert!(matches!(
            is_r_prime(Rank(2), &n(1), &b()),
            Err(DivisibilityError::DomainViolation { .. })
        ));
        assert!(matches!(
            is_r_divisor(Rank(1), &n(1), &n(5), &b()),
            Err(DivisibilityError::DomainViolation { .. })
        ));
    }

    #[test]
    fn divisor_examples() {
        let w = |r, d, a| is_r_divisor(Rank(r), &n(d), &n(a), &b()).unwrap();
        for r in 0..=2 {
            let a = [5, 6, 9][r as usize];
            assert_eq!(
                w(r, 3, a),
                Some(RDivisorWitness {
                    divisor: n(3),
                    quotient: n(2)
                })
            );
        }
        assert_eq!(w(2, 3, 10), None);
        assert_eq!(w(2, 3, 1), None);
        assert_eq!(w(3, 2, 65536).unwrap().quotient, n(4));
        assert_eq!(w(3, 3, 27).unwrap().quotient, n(2));
        assert_eq!(w(2, 3, 3).unwrap().quotient, n(1));
        assert_eq!(w(0, 3, 3).unwrap().quotient, n(0));
    }

    #[test]
    fn common_divisor_examples() {
        let c = |r, x, y| common_r_divisors(Rank(r), &n(x), &n(y), &b()).unwrap();
        assert_eq!(c(2, 4, 16), listed(&[2, 4]));
        assert_eq!(c(1, 8, 15), listed(&[]));
        assert_eq!(c(0, 3, 5).to_vec(), vec![n(1), n(2), n(3)]);
        assert_eq!(c(1, 12, 18), listed(&[2, 3, 6]));
        assert_eq!(c(3, 4, 65536), listed(&[2]));
        assert_eq!(c(3, 27, 7), listed(&[]));
        assert_eq!(c(3, 3, 27), listed(&[3]));
        assert_eq!(c(2, 9, 27), listed(&[3]));
        assert_eq!(c(2, 8, 64), listed(&[2, 8]));
    }

    #[test]
    fn coprime_and_gcd_examples() {
        assert!(is_r_coprime(Rank(2), &n(2), &n(3), &b()).unwrap());
        assert!(is_r_coprime(Rank(1), &n(8), &n(15), &b()).unwrap());
        assert!(!is_r_coprime(Rank(0), &n(3), &n(5), &b()).unwrap());
        let g = |r, x, y| greatest_common_r_divisor(Rank(r), &n(x), &n(y), &b()).unwrap();
        assert_eq!(g(1, 12, 18), Some(n(6)));
        assert_eq!(g(2, 4, 16), Some(n(4)));
        assert_eq!(g(2, 2, 3), None);
        assert_eq!(
            is_r_coprime(Rank(1), &n(4), &n(4), &b()),
            Err(DivisibilityError::EqualInputs)
        );
    }

    #[test]
    fn interval_set() {
        let s = DivisorSet::Interval {
            low: n(1),
            high: n(1_000_000_000_000),
        };
        assert_eq!(s.len(), n(1_000_000_000_000));
        assert!(s.contains(&n(77)));
        assert!(!s.contains(&n(0)));
        assert_eq!(s.max(), Some(n(1_000_000_000_000)));
    }

    #[test]
    fn rank_three_search_is_budgeted() {
        let tight = EvalBudget::new(64, 3).unwrap();
        let huge: Natural = Pow::pow(&n(10), 400u32);
        assert!(matches!(
            is_r_decomposable(Rank(3), &huge, &tight),
            Err(DivisibilityError::Budget(_))
        ));
        assert!(!is_r_decomposable(Rank(3), &huge, &b()).unwrap());
    }

    #[test]
    fn rank_one_beyond_exact_range() {
        let big: Natural = "170141183460469231731687303715884105727".parse().unwrap();
        assert_eq!(
            is_r_prime(Rank(1), &big, &b()),
            Err(DivisibilityError::BeyondExactRange)
        );
    }
}
