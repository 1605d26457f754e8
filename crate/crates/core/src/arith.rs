//! Hyperoperator evaluation, exact inverses and the right-to-left fold.
//!
//! The hierarchy is defined by
//!
//! ```text
//! H_0(a, x)       = a + x
//! H_{r+1}(a, 0)   = 1
//! H_{r+1}(a, 1)   = a
//! H_{r+1}(a, x+1) = H_r(a, H_{r+1}(a, x))     for x >= 1
//! ```
//!
//! and it is followed literally. In particular `H_1(a, 0) = 1`, not `0`: the
//! base case `H_{r+1}(a, 0) = 1` applies at rank 1 as well. Bases 0 and 1 at
//! rank >= 2 are also evaluated by the schema, which gives `H_r(1, x) = 1` and
//! `H_r(0, x) = 1` for even `x`, `0` for odd `x`.
//!
//! Every evaluation is total: it returns a value or [`BudgetExceeded`].

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::Natural;

/// Rank of a hyperoperator: 0 is addition, 1 multiplication, 2
/// exponentiation, 3 tetration and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rank(pub u32);

impl Rank {
    pub const ADDITION: Rank = Rank(0);
    pub const MULTIPLICATION: Rank = Rank(1);
    pub const EXPONENTIATION: Rank = Rank(2);
    pub const TETRATION: Rank = Rank(3);

    pub fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for Rank {
    fn from(r: u32) -> Self {
        Rank(r)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Signum of the rank: 0 at rank 0 and 1 above. Seeds the fold and is the
/// domain threshold of the rank-parametric predicates.
pub fn sgn(rank: Rank) -> Natural {
    if rank.0 == 0 {
        Natural::zero()
    } else {
        Natural::one()
    }
}

/// Resource cap that makes evaluation total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    max_result_bits: u64,
    max_steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvalidBudget {
    #[error("max_result_bits must be at least {min}, got {got}", min = EvalBudget::MIN_RESULT_BITS)]
    ResultBits { got: u64 },
    #[error("max_steps must be at least 1")]
    Steps,
}

impl EvalBudget {
    pub const DEFAULT_MAX_RESULT_BITS: u64 = 1 << 20;
    pub const DEFAULT_MAX_STEPS: u64 = 10_000;
    pub const MIN_RESULT_BITS: u64 = 64;

    pub fn new(max_result_bits: u64, max_steps: u64) -> Result<Self, InvalidBudget> {
        if max_result_bits < Self::MIN_RESULT_BITS {
            return Err(InvalidBudget::ResultBits {
                got: max_result_bits,
            });
        }
        if max_steps == 0 {
            return Err(InvalidBudget::Steps);
        }
        Ok(EvalBudget {
            max_result_bits,
            max_steps,
        })
    }

    pub fn max_result_bits(&self) -> u64 {
        self.max_result_bits
    }

    /// Maximum number of recursive expansions (rank >= 3 chain applications
    /// and search candidates) a single call may perform.
    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_result_bits: Self::DEFAULT_MAX_RESULT_BITS,
            max_steps: Self::DEFAULT_MAX_STEPS,
        }
    }
}

/// Which limit of an [`EvalBudget`] tripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BudgetLimit {
    ResultBits,
    Steps,
}

impl fmt::Display for BudgetLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetLimit::ResultBits => f.write_str("result bit-length"),
            BudgetLimit::Steps => f.write_str("step count"),
        }
    }
}

/// Evaluation stopped before producing a value.
///
/// `min_bits` is a lower bound on the bit-length of the value that was being
/// built (saturating at `u64::MAX`). It is an estimate, never a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget exceeded ({limit} limit; result needs at least {min_bits} bits)")]
pub struct BudgetExceeded {
    pub limit: BudgetLimit,
    pub min_bits: u64,
}

pub type EvalOutcome = Result<Natural, BudgetExceeded>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error("no natural x satisfies the equation")]
    NotRepresentable,
    #[error("the base is degenerate: the equation has more than one solution")]
    DegenerateBase,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MultiplicateError {
    #[error("the operand vector is empty")]
    EmptyVector,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Internal stop reason. `Bits` carries a lower bound on the result size.
#[derive(Debug, Clone, Copy)]
enum Stop {
    Bits(u64),
    Steps(u64),
}

struct Frame {
    rank: u32,
    input: Natural,
    remaining: Natural,
    value: Natural,
}

/// Evaluates `H_rank(base, .)` for one fixed base. The memo maps
/// `(rank, x)` to `H_rank(base, x)` for ranks >= 4 and lives only as long as
/// one top-level call.
struct Evaluator<'a> {
    base: &'a Natural,
    max_bits: u64,
    max_steps: u64,
    steps: u64,
    largest_bits: u64,
    memo: HashMap<(u32, Natural), Natural>,
}

impl<'a> Evaluator<'a> {
    fn new(base: &'a Natural, max_bits: u64, max_steps: u64) -> Self {
        Evaluator {
            base,
            max_bits,
            max_steps,
            steps: 0,
            largest_bits: 0,
            memo: HashMap::new(),
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Stop::Steps(self.largest_bits));
        }
        Ok(())
    }

    fn fit(&mut self, v: Natural) -> Result<Natural, Stop> {
        let bits = v.bits();
        if bits > self.max_bits {
            return Err(Stop::Bits(bits));
        }
        self.largest_bits = self.largest_bits.max(bits);
        Ok(v)
    }

    fn eval(&mut self, rank: u32, x: &Natural) -> Result<Natural, Stop> {
        let a = self.base;
        if rank == 0 {
            return self.fit(a + x);
        }
        if x.is_zero() {
            return Ok(Natural::one());
        }
        if x.is_one() {
            return self.fit(a.clone());
        }
        // x >= 2 from here on.
        if rank == 1 {
            let lower = (a.bits() + x.bits()).saturating_sub(1);
            if !a.is_zero() && lower > self.max_bits {
                return Err(Stop::Bits(lower));
            }
            return self.fit(a * x);
        }
        if a.is_zero() {
            // H_r(0, .) alternates 1, 0, 1, 0, ... for every r >= 2.
            return Ok(if x.is_even() {
                Natural::one()
            } else {
                Natural::zero()
            });
        }
        if a.is_one() {
            return Ok(Natural::one());
        }
        // H_r(2, 2) = H_{r-1}(2, 2) = ... = H_0(2, 2) = 4.
        if *a == Natural::from(2u32) && *x == Natural::from(2u32) {
            return Ok(Natural::from(4u32));
        }
        match rank {
            2 => self.power(x),
            3 => self.tetrate(x),
            _ => self.iterate(rank, x),
        }
    }

    /// `base^x` for `base >= 2`. The bit-length check is exact: the value is
    /// refused iff it would exceed `max_bits`.
    fn power(&mut self, x: &Natural) -> Result<Natural, Stop> {
        let a = self.base;
        let Some(e) = x.to_u64() else {
            return Err(Stop::Bits(u64::MAX));
        };
        let lower = (a.bits() - 1).saturating_mul(e).saturating_add(1);
        if lower > self.max_bits {
            return Err(Stop::Bits(lower));
        }
        let v = Pow::pow(a, e);
        self.fit(v)
    }

    fn tetrate(&mut self, x: &Natural) -> Result<Natural, Stop> {
        let mut value = self.base.clone();
        let mut height = Natural::one();
        while height < *x {
            self.tick()?;
            value = self.power(&value)?;
            height += 1u32;
        }
        Ok(value)
    }

    /// Ranks >= 4, base >= 2, x >= 2. The chain
    /// `H_r(a, x) = H_{r-1}(a, H_{r-1}(a, ... H_{r-1}(a, a)))` is unrolled on
    /// an explicit stack so that deep ranks cannot overflow the call stack.
    fn iterate(&mut self, rank: u32, x: &Natural) -> Result<Natural, Stop> {
        let mut stack = vec![self.frame(rank, x.clone())];
        loop {
            let top = stack
                .last_mut()
                .expect("stack is non-empty inside the loop");
            if top.remaining.is_zero() {
                let done = stack.pop().expect("checked above");
                self.memo
                    .insert((done.rank, done.input), done.value.clone());
                match stack.last_mut() {
                    None => return Ok(done.value),
                    Some(parent) => {
                        parent.value = done.value;
                        parent.remaining -= 1u32;
                    }
                }
                continue;
            }
            self.tick()?;
            let inner = top.rank - 1;
            let arg = top.value.clone();
            let resolved = if inner <= 3 {
                Some(self.eval(inner, &arg)?)
            } else if *self.base == Natural::from(2u32) && arg == Natural::from(2u32) {
                Some(Natural::from(4u32))
            } else {
                self.memo.get(&(inner, arg.clone())).cloned()
            };
            match resolved {
                Some(v) => {
                    top.value = v;
                    top.remaining -= 1u32;
                }
                None => {
                    let frame = self.frame(inner, arg);
                    stack.push(frame);
                }
            }
        }
    }

    fn frame(&self, rank: u32, input: Natural) -> Frame {
        let remaining = &input - 1u32;
        Frame {
            rank,
            input,
            remaining,
            value: self.base.clone(),
        }
    }
}

fn budget_error(stop: Stop) -> BudgetExceeded {
    match stop {
        Stop::Bits(min_bits) => BudgetExceeded {
            limit: BudgetLimit::ResultBits,
            min_bits,
        },
        Stop::Steps(min_bits) => BudgetExceeded {
            limit: BudgetLimit::Steps,
            min_bits,
        },
    }
}

/// Evaluates `H_rank(a, x)`.
///
/// Ranks 0, 1 and 2 use addition, multiplication and exponentiation; rank 3
/// iterates exponentiation; ranks >= 4 unroll the recursion with a call-local
/// memo of the inner chains. A value whose bit-length would exceed
/// `budget.max_result_bits()` is never materialized.
pub fn hyper_eval(rank: Rank, a: &Natural, x: &Natural, budget: &EvalBudget) -> EvalOutcome {
    Evaluator::new(a, budget.max_result_bits, budget.max_steps)
        .eval(rank.0, x)
        .map_err(budget_error)
}

/// Evaluates `H_rank(a, x)` if it is at most `ceiling`, and returns `None` if
/// it is larger.
///
/// Intermediate values never exceed the final one, so the evaluation stops as
/// soon as any of them outgrows `ceiling`; the bit cap of `budget` is not
/// used. Only the step limit can produce [`BudgetExceeded`].
pub fn hyper_eval_at_most(
    rank: Rank,
    a: &Natural,
    x: &Natural,
    ceiling: &Natural,
    budget: &EvalBudget,
) -> Result<Option<Natural>, BudgetExceeded> {
    let mut ev = Evaluator::new(a, ceiling.bits(), budget.max_steps);
    match ev.eval(rank.0, x) {
        Ok(v) if v <= *ceiling => Ok(Some(v)),
        Ok(_) | Err(Stop::Bits(_)) => Ok(None),
        Err(stop @ Stop::Steps(_)) => Err(budget_error(stop)),
    }
}

/// Exact inverse: the unique `x` with `H_rank(a, x) = y`.
///
/// Rank 0 is subtraction, rank 1 exact division and rank 2 the exact discrete
/// logarithm. Higher ranks search `x = 0, 1, 2, ...` while `H_rank(a, x) <= y`,
/// bounded by `budget.max_steps()`.
///
/// Inexact input is [`InverseError::NotRepresentable`]; there is no floor
/// semantics. When more than one `x` solves the equation (base 1, or base 0
/// with the alternating values of the schema) the result is
/// [`InverseError::DegenerateBase`].
pub fn hyper_inverse(
    rank: Rank,
    a: &Natural,
    y: &Natural,
    budget: &EvalBudget,
) -> Result<Natural, InverseError> {
    use InverseError::*;
    match rank.0 {
        0 => {
            if y >= a {
                Ok(y - a)
            } else {
                Err(NotRepresentable)
            }
        }
        1 => {
            // H_1(a, 0) = 1 and H_1(a, x) = a * x for x >= 1.
            if a.is_zero() {
                return if y.is_zero() {
                    Err(DegenerateBase)
                } else if y.is_one() {
                    Ok(Natural::zero())
                } else {
                    Err(NotRepresentable)
                };
            }
            if a.is_one() {
                return if y.is_one() {
                    Err(DegenerateBase)
                } else if y.is_zero() {
                    Err(NotRepresentable)
                } else {
                    Ok(y.clone())
                };
            }
            if y.is_one() {
                return Ok(Natural::zero());
            }
            if y.is_zero() {
                return Err(NotRepresentable);
            }
            let (q, rem) = y.div_rem(a);
            if rem.is_zero() {
                Ok(q)
            } else {
                Err(NotRepresentable)
            }
        }
        r => {
            if a.is_zero() {
                return if y.is_zero() || y.is_one() {
                    Err(DegenerateBase)
                } else {
                    Err(NotRepresentable)
                };
            }
            if a.is_one() {
                return if y.is_one() {
                    Err(DegenerateBase)
                } else {
                    Err(NotRepresentable)
                };
            }
            if y.is_one() {
                return Ok(Natural::zero());
            }
            if y.is_zero() {
                return Err(NotRepresentable);
            }
            if r == 2 {
                exact_log(a, y).map(Natural::from).ok_or(NotRepresentable)
            } else {
                search_inverse(rank, a, y, budget)
            }
        }
    }
}

fn search_inverse(
    rank: Rank,
    a: &Natural,
    y: &Natural,
    budget: &EvalBudget,
) -> Result<Natural, InverseError> {
    // a >= 2 and y >= 2: values 1, a, H(a, 2), ... strictly increase.
    let mut x = Natural::one();
    for _ in 0..budget.max_steps {
        match hyper_eval_at_most(rank, a, &x, y, budget)? {
            Some(v) if v == *y => return Ok(x),
            Some(_) => x += 1u32,
            None => return Err(InverseError::NotRepresentable),
        }
    }
    Err(InverseError::Budget(BudgetExceeded {
        limit: BudgetLimit::Steps,
        min_bits: y.bits(),
    }))
}

/// `log2` of a natural to double precision; the top 64 bits carry it.
pub(crate) fn log2(n: &Natural) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap_or(u64::MAX) as f64).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// Exact `log_a y` for `a >= 2`, `y >= 1`. The float estimate only picks the
/// starting exponent; the answer is decided by integer comparison.
fn exact_log(a: &Natural, y: &Natural) -> Option<u64> {
    let mut e = (log2(y) / log2(a)).floor().max(0.0) as u64;
    let mut p: Natural = Pow::pow(a, e);
    while p > *y {
        p /= a;
        e -= 1;
    }
    loop {
        let next = &p * a;
        if next > *y {
            break;
        }
        p = next;
        e += 1;
    }
    (p == *y).then_some(e)
}

/// The rank-`r` multiplicator of a vector: `H_r(v_n, H_r(v_{n-1}, ...
/// H_r(v_1, sgn(r))...))`, bound strictly right to left.
///
/// `budget` applies to each application of `H_r`. Because `H_1(a, 0) = 1`, a
/// zero operand at rank 1 breaks the permutation invariance that ordinary
/// products enjoy.
pub fn r_multiplicate(
    rank: Rank,
    values: &[Natural],
    budget: &EvalBudget,
) -> Result<Natural, MultiplicateError> {
    if values.is_empty() {
        return Err(MultiplicateError::EmptyVector);
    }
    let mut acc = sgn(rank);
    for v in values {
        acc = hyper_eval(rank, v, &acc, budget)?;
    }
    Ok(acc)
}
