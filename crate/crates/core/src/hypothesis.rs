//! Desk-scale exploration of unique factorization at ranks >= 3.
//!
//! At rank 2 every `M > 1` is a biprime or a unique tower of biprimes. The
//! open question is whether the same holds at every rank `r != 1`: is each
//! `M > 1` either r-prime or a unique r-product
//! `H_r(c_1, H_r(c_2, ... H_r(c_s, 1)...))` of r-prime components?
//!
//! This module does not assume the answer. [`hypothesis_scan`] enumerates every
//! r-compound number up to a bound and all of its r-prime factorizations, and
//! reports two kinds of failure separately:
//!
//! * a *counterexample*: two different component sequences for one number;
//! * an *existence gap*: an r-compound number with no factorization into
//!   r-prime components at all. At rank 3, `256 = 4↑↑2` is one: its only
//!   decomposition has base `4 = 2↑↑2`, which is itself 3-compound.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::arith::hyper_eval_at_most;
use crate::divisibility::{decompositions, first_decomposition};
use crate::{BudgetExceeded, BudgetLimit, EvalBudget, Natural, Rank};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("the scan needs rank 3 or higher, got rank {0}")]
    RankBelowThree(Rank),
    #[error("input must be at least 2")]
    InputBelowTwo,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// An r-product of components, outermost first:
/// `m = H_r(c_1, H_r(c_2, ... H_r(c_s, 1)...))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RFactorization {
    pub rank: Rank,
    pub components: Vec<Natural>,
    /// False when a nested search ran out of budget; the last component is
    /// then a number whose r-primality was not decided.
    pub complete: bool,
}

impl RFactorization {
    /// The components in the order the rank-r multiplicator folds them
    /// (innermost first).
    pub fn fold_order(&self) -> Vec<Natural> {
        self.components.iter().rev().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RFactorOutcome {
    Factored(RFactorization),
    /// `m` is r-compound, but every decomposition `H_r(a, x) = m` has an
    /// r-compound base or an exponent without a factorization of its own.
    NoPrimeFactorization {
        decompositions: Vec<(Natural, Natural)>,
    },
}

fn check_rank(rank: Rank) -> Result<(), HypothesisError> {
    if rank.get() < 3 {
        return Err(HypothesisError::RankBelowThree(rank));
    }
    Ok(())
}

/// Factors `m` into r-prime components at rank `r >= 3`.
///
/// Decompositions `H_r(a, x) = m` are tried in increasing `a`; the first one
/// whose base is r-prime and whose exponent factors recursively is used. An
/// r-prime `m` gives the single component `[m]`.
pub fn r_factorize(
    rank: Rank,
    m: &Natural,
    budget: &EvalBudget,
) -> Result<RFactorOutcome, HypothesisError> {
    check_rank(rank)?;
    if *m < Natural::from(2u32) {
        return Err(HypothesisError::InputBelowTwo);
    }
    let decomps = decompositions(rank, m, budget)?;
    if decomps.is_empty() {
        return Ok(RFactorOutcome::Factored(RFactorization {
            rank,
            components: vec![m.clone()],
            complete: true,
        }));
    }
    for (a, x) in &decomps {
        if first_decomposition(rank, a, budget)?.is_some() {
            continue;
        }
        let tail = match r_factorize(rank, x, budget) {
            Ok(RFactorOutcome::Factored(f)) => f,
            Ok(RFactorOutcome::NoPrimeFactorization { .. }) => continue,
            Err(HypothesisError::Budget(_)) => RFactorization {
                rank,
                components: vec![x.clone()],
                complete: false,
            },
            Err(e) => return Err(e),
        };
        let mut components = vec![a.clone()];
        components.extend(tail.components);
        return Ok(RFactorOutcome::Factored(RFactorization {
            rank,
            components,
            complete: tail.complete,
        }));
    }
    Ok(RFactorOutcome::NoPrimeFactorization {
        decompositions: decomps,
    })
}

/// One r-compound number found by a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub value: Natural,
    /// Every `(a, x)`, `a, x >= 2`, with `H_r(a, x) = value`.
    pub decompositions: Vec<(Natural, Natural)>,
    /// Every r-prime factorization, outermost component first.
    pub factorizations: Vec<Vec<Natural>>,
    /// Whether [`r_factorize`] returned the unique factorization (or reported
    /// none when there is none).
    pub factorizer_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub rank: Rank,
    pub n_max: Natural,
    /// Every r-compound number `<= n_max`, ascending.
    pub compound: Vec<Natural>,
    pub entries: Vec<ScanEntry>,
    /// Values with more than one factorization.
    pub counterexamples: Vec<Natural>,
    /// r-compound values with no factorization into r-prime components.
    pub existence_gaps: Vec<Natural>,
    /// Values where [`r_factorize`] disagreed with the exhaustive enumeration.
    pub disagreements: Vec<Natural>,
}

impl HypothesisReport {
    /// No uniqueness counterexample was found below `n_max`. This is never a
    /// proof.
    pub fn uniqueness_holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "rank {}: {} compound value(s) <= {}; ",
            self.rank,
            self.compound.len(),
            self.n_max
        );
        if self.counterexamples.is_empty() {
            s.push_str(&format!("no counterexample below {}", self.n_max));
        } else {
            s.push_str(&format!(
                "{} UNIQUENESS COUNTEREXAMPLE(S)",
                self.counterexamples.len()
            ));
        }
        if !self.existence_gaps.is_empty() {
            s.push_str(&format!(
                "; {} value(s) with no r-prime factorization",
                self.existence_gaps.len()
            ));
        }
        s
    }
}

/// Every `H_r(a, x) <= n_max` with `a, x >= 2`, grouped by value.
///
/// `H_r(a, 2)` grows with `a` and `H_r(a, x)` with `x`, so both loops stop at
/// the first value above `n_max`. The table is complete below `n_max`: any
/// number missing from it is r-prime.
fn value_table(
    rank: Rank,
    n_max: &Natural,
    budget: &EvalBudget,
) -> Result<BTreeMap<Natural, Vec<(Natural, Natural)>>, BudgetExceeded> {
    let two = Natural::from(2u32);
    let mut table: BTreeMap<Natural, Vec<(Natural, Natural)>> = BTreeMap::new();
    let mut steps = 0u64;
    let mut a = two.clone();
    loop {
        let mut x = two.clone();
        loop {
            steps += 1;
            if steps > budget.max_steps() {
                return Err(BudgetExceeded {
                    limit: BudgetLimit::Steps,
                    min_bits: n_max.bits(),
                });
            }
            match hyper_eval_at_most(rank, &a, &x, n_max, budget)? {
                Some(v) => table.entry(v).or_default().push((a.clone(), x.clone())),
                None => break,
            }
            x += 1u32;
        }
        if x == two {
            return Ok(table);
        }
        a += 1u32;
    }
}

fn all_factorizations(
    n: &Natural,
    table: &BTreeMap<Natural, Vec<(Natural, Natural)>>,
) -> Vec<Vec<Natural>> {
    let Some(decomps) = table.get(n) else {
        return vec![vec![n.clone()]];
    };
    let mut out = Vec::new();
    for (a, x) in decomps {
        if table.contains_key(a) {
            continue;
        }
        for tail in all_factorizations(x, table) {
            let mut f = vec![a.clone()];
            f.extend(tail);
            out.push(f);
        }
    }
    out
}

/// Scans every r-compound number up to `n_max` at rank `r >= 3`.
///
/// The value table is built once; each entry's factorizations are then
/// enumerated exhaustively from it and compared with [`r_factorize`].
pub fn hypothesis_scan(
    rank: Rank,
    n_max: &Natural,
    budget: &EvalBudget,
) -> Result<HypothesisReport, HypothesisError> {
    check_rank(rank)?;
    let table = value_table(rank, n_max, budget)?;

    let mut entries = Vec::with_capacity(table.len());
    let mut counterexamples = Vec::new();
    let mut existence_gaps = Vec::new();
    let mut disagreements = Vec::new();
    for (value, decomps) in &table {
        let factorizations: Vec<Vec<Natural>> = all_factorizations(value, &table)
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let factorizer_agrees = match (r_factorize(rank, value, budget)?, factorizations.as_slice())
        {
            (RFactorOutcome::Factored(f), [only]) => f.complete && f.components == *only,
            (RFactorOutcome::Factored(f), many) if many.len() > 1 => many.contains(&f.components),
            (RFactorOutcome::NoPrimeFactorization { .. }, []) => true,
            _ => false,
        };
        match factorizations.len() {
            0 => existence_gaps.push(value.clone()),
            1 => {}
            _ => counterexamples.push(value.clone()),
        }
        if !factorizer_agrees {
            disagreements.push(value.clone());
        }
        entries.push(ScanEntry {
            value: value.clone(),
            decompositions: decomps.clone(),
            factorizations,
            factorizer_agrees,
        });
    }
    Ok(HypothesisReport {
        rank,
        n_max: n_max.clone(),
        compound: table.keys().cloned().collect(),
        entries,
        counterexamples,
        existence_gaps,
        disagreements,
    })
}

impl ScanEntry {
    /// The single factorization, when there is exactly one.
    pub fn unique(&self) -> Option<&[Natural]> {
        match self.factorizations.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn is_counterexample(&self) -> bool {
        self.factorizations.len() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::r_multiplicate;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn factored(r: u32, m: u64) -> Vec<Natural> {
        match r_factorize(Rank(r), &n(m), &EvalBudget::default()).unwrap() {
            RFactorOutcome::Factored(f) => {
                assert!(f.complete);
                f.components
            }
            other => panic!("{m}: {other:?}"),
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factored(3, 16), vec![n(2), n(3)]);
        assert_eq!(factored(3, 7), vec![n(7)]);
        assert_eq!(factored(3, 27), vec![n(3), n(2)]);
        assert_eq!(factored(3, 65536), vec![n(2), n(2), n(2)]);
        assert_eq!(factored(4, 65536), vec![n(2), n(3)]);
    }

    #[test]
    fn factorization_recomposes() {
        let b = EvalBudget::default();
        for m in [4u64, 16, 27, 65536, 3125, 46656] {
            let RFactorOutcome::Factored(f) = r_factorize(Rank(3), &n(m), &b).unwrap() else {
                panic!("{m}")
            };
            assert_eq!(r_multiplicate(Rank(3), &f.fold_order(), &b).unwrap(), n(m));
        }
    }

    #[test]
    fn existence_gap_at_256() {
        let out = r_factorize(Rank(3), &n(256), &EvalBudget::default()).unwrap();
        assert_eq!(
            out,
            RFactorOutcome::NoPrimeFactorization {
                decompositions: vec![(n(4), n(2))]
            }
        );
    }

    #[test]
    fn domain() {
        let b = EvalBudget::default();
        assert_eq!(
            r_factorize(Rank(2), &n(16), &b),
            Err(HypothesisError::RankBelowThree(Rank(2)))
        );
        assert_eq!(
            r_factorize(Rank(3), &n(1), &b),
            Err(HypothesisError::InputBelowTwo)
        );
        assert!(hypothesis_scan(Rank(1), &n(10), &b).is_err());
    }

    #[test]
    fn scan_examples() {
        let b = EvalBudget::default();
        let r = hypothesis_scan(Rank(3), &n(100), &b).unwrap();
        assert_eq!(r.compound, vec![n(4), n(16), n(27)]);
        assert!(r.counterexamples.is_empty());
        assert!(r.existence_gaps.is_empty());
        assert!(r.disagreements.is_empty());

        let r = hypothesis_scan(Rank(3), &n(3), &b).unwrap();
        assert!(r.compound.is_empty());

        let r = hypothesis_scan(Rank(4), &n(1_000_000), &b).unwrap();
        assert_eq!(r.compound, vec![n(4), n(65536)]);
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.entries[1].unique(), Some(&[n(2), n(3)][..]));
    }

    #[test]
    fn scan_reports_the_gap() {
        let r = hypothesis_scan(Rank(3), &n(1000), &EvalBudget::default()).unwrap();
        assert_eq!(r.existence_gaps, vec![n(256)]);
        assert!(r.counterexamples.is_empty());
        assert!(r.disagreements.is_empty());
        assert!(r.summary().contains("no counterexample below 1000"));
    }
}
