//! The hyperoperation hierarchy over arbitrary-precision naturals.
//!
//! Addition, multiplication, exponentiation, tetration and every higher rank
//! are evaluated from one recursive schema. On top of that the crate provides
//! rank-parametric primality and divisibility predicates, biprime detection
//! (numbers that are not perfect powers), the unique factorization of every
//! natural `M > 1` into a tower of biprimes, and brute-force oracles that
//! cross-check all of it.
//!
//! ```
//! use hyperop::{bi_factorize, Natural};
//!
//! let tower = bi_factorize(&Natural::from(65536u32)).unwrap();
//! assert_eq!(tower.to_string(), "2^(2^(2^2))");
//! ```

pub mod arith;
pub mod classical;
pub mod divisibility;
pub mod hypothesis;
pub mod oracle;
pub mod power;
pub mod tower;

/// Arbitrary-precision nonnegative integer; the universe of every operand.
pub type Natural = num_bigint::BigUint;

pub use arith::{
    hyper_eval, hyper_eval_at_most, hyper_inverse, r_multiplicate, sgn, BudgetExceeded,
    BudgetLimit, EvalBudget, EvalOutcome, InvalidBudget, InverseError, MultiplicateError, Rank,
};
pub use divisibility::{
    common_r_divisors, decompositions, greatest_common_r_divisor, is_r_coprime, is_r_decomposable,
    is_r_divisor, is_r_prime, DivisibilityError, DivisorSet, RDivisorWitness,
};
pub use hypothesis::{
    hypothesis_scan, r_factorize, HypothesisError, HypothesisReport, RFactorOutcome,
    RFactorization, ScanEntry,
};
pub use power::{integer_kth_root, is_biprime, perfect_power_form, PowerError, PowerForm};
pub use tower::{
    bi_factorize, biprime_root, lemma2_witness_search, tower_eval, verify_uniqueness,
    verify_uniqueness_up_to, Lemma2Outcome, Tower, TowerError, UniquenessReport,
};
