//! Perfect powers: integer k-th roots, the maximal-exponent power form and
//! the biprime test.
//!
//! A natural `n >= 2` is a *biprime* when `a^x = n` has no solution with
//! `a, x > 1`, and *bi-compound* otherwise. Every bi-compound `n` has a unique
//! form `n = b^e` with `b` biprime, which is also the form with the largest
//! exponent.

use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::classical::{is_prime_u64, pow_mod};
use crate::Natural;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PowerError {
    #[error("input must be at least 2")]
    InputBelowTwo,
    #[error("root degree must be at least 1")]
    ZeroDegree,
}

/// `source = base^exponent` with `base` biprime and `exponent` maximal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerForm {
    base: Natural,
    exponent: Natural,
}

impl PowerForm {
    pub fn base(&self) -> &Natural {
        &self.base
    }

    pub fn exponent(&self) -> &Natural {
        &self.exponent
    }

    pub fn into_parts(self) -> (Natural, Natural) {
        (self.base, self.exponent)
    }
}

const SMALL_PRIMES: [u32; 18] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
];

/// `(floor(n^(1/k)), root^k == n)`.
///
/// Exactness is always decided by multiplying back in integer arithmetic.
pub fn integer_kth_root(n: &Natural, k: u32) -> Result<(Natural, bool), PowerError> {
    if k == 0 {
        return Err(PowerError::ZeroDegree);
    }
    if let Some(small) = n.to_u64() {
        let (root, exact) = kth_root_u64(small, k);
        return Ok((Natural::from(root), exact));
    }
    let root = n.nth_root(k);
    let exact = Pow::pow(&root, k) == *n;
    Ok((root, exact))
}

fn kth_root_u64(n: u64, k: u32) -> (u64, bool) {
    if k == 1 || n < 2 {
        return (n, true);
    }
    if k >= 64 {
        return (1, false);
    }
    // Float seed, integer correction.
    let mut r = (n as f64).powf(1.0 / f64::from(k)).round() as u64;
    let fits = |r: u64| r.checked_pow(k).is_some_and(|p| p <= n);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    (r, r.pow(k) == n)
}

fn descend_u64(n: u64) -> (u64, u64) {
    let mut base = n;
    let mut exponent = 1u64;
    let mut i = 0;
    while i < SMALL_PRIMES.len() {
        let p = SMALL_PRIMES[i];
        if u64::from(p) > u64::from(63 - base.leading_zeros()) {
            break;
        }
        let (r, exact) = kth_root_u64(base, p);
        if exact {
            base = r;
            exponent *= u64::from(p);
            // A root found at p is not a q-th power for any q < p, so the
            // search resumes at p rather than restarting.
            continue;
        }
        i += 1;
    }
    (base, exponent)
}

/// Trial-division bound for the smooth part of big inputs; every prime factor
/// of the remaining rough part exceeds `2^TRIAL_BITS`.
const TRIAL_BOUND: u64 = 4096;
const TRIAL_BITS: u64 = 12;

fn descend_big(n: &Natural) -> (Natural, u64) {
    // n is a k-th power iff k divides every prime valuation, so the smooth
    // part pins k to divisors of g and the rough part only needs testing for
    // the primes dividing g.
    let mut rest = n.clone();
    let mut g = rest.trailing_zeros().unwrap_or(0);
    rest >>= g;
    for q in primes_up_to(TRIAL_BOUND).into_iter().skip(1) {
        if g == 1 {
            return (n.clone(), 1);
        }
        let v = strip_factor(&mut rest, Natural::from(q));
        if v > 0 {
            g = g.gcd(&v);
        }
    }
    let k = if rest.is_one() {
        g
    } else {
        rough_exponent(&rest, g)
    };
    if k <= 1 {
        return (n.clone(), 1);
    }
    let k32 = u32::try_from(k).expect("exponents are bounded by the bit length");
    (n.nth_root(k32), k)
}

/// Divides out every factor `q` and returns the multiplicity, dividing by
/// `q^(2^j)` for the largest `j` that still fits.
fn strip_factor(n: &mut Natural, q: Natural) -> u64 {
    if !(&*n % &q).is_zero() {
        return 0;
    }
    let mut ladder = vec![q];
    loop {
        let next: Natural = ladder.last().map(|p| p * p).expect("ladder is nonempty");
        if next.bits() > n.bits() {
            break;
        }
        ladder.push(next);
    }
    let mut v = 0u64;
    for (j, p) in ladder.iter().enumerate().rev() {
        loop {
            let (quot, r) = n.div_rem(p);
            if !r.is_zero() {
                break;
            }
            *n = quot;
            v += 1 << j;
        }
    }
    v
}

/// Largest `k` with `rough` a k-th power, restricted to divisors of `g` when
/// `g > 0`. Every prime factor of `rough` exceeds `2^TRIAL_BITS`.
fn rough_exponent(rough: &Natural, g: u64) -> u64 {
    let primes = primes_up_to(rough.bits() / TRIAL_BITS);
    let mut base = rough.clone();
    let mut k = 1u64;
    let mut i = 0;
    while i < primes.len() {
        let p = primes[i];
        if p * TRIAL_BITS > base.bits() {
            break;
        }
        let allowed = g == 0 || (g / k).is_multiple_of(p);
        if allowed && passes_residue_test(&base, p) {
            let p32 = u32::try_from(p).expect("prime exponents stay far below 2^32");
            let root = base.nth_root(p32);
            if Pow::pow(&root, p32) == base {
                base = root;
                k *= p;
                continue;
            }
        }
        i += 1;
    }
    k
}

/// False when some prime `q = jp + 1` proves `n` is not a p-th power:
/// p-th powers mod such `q` satisfy `n^((q-1)/p) = 1`.
fn passes_residue_test(n: &Natural, p: u64) -> bool {
    let mut tested = 0;
    let mut q = p + 1;
    while tested < 8 {
        if is_prime_u64(q) {
            let r = (n % q).to_u64().expect("residue is below q");
            if r != 0 && pow_mod(r, (q - 1) / p, q) != 1 {
                return false;
            }
            tested += 1;
        }
        q += p;
    }
    true
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = usize::try_from(limit).unwrap_or(usize::MAX);
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The maximal-exponent form `n = b^e` (`e >= 2`, `b` biprime), or `None`
/// when `n` is biprime.
///
/// Only prime exponents `p <= log2(n)` are tried; each exact root replaces the
/// base and multiplies into the exponent until the base admits no root.
pub fn perfect_power_form(n: &Natural) -> Result<Option<PowerForm>, PowerError> {
    if n.to_u64().is_some_and(|v| v < 2) {
        return Err(PowerError::InputBelowTwo);
    }
    if n.to_u64().is_some_and(|v| v <= 3) {
        return Ok(None);
    }
    let (base, exponent) = match n.to_u64() {
        Some(small) => {
            let (b, e) = descend_u64(small);
            (Natural::from(b), e)
        }
        None => descend_big(n),
    };
    if exponent == 1 {
        return Ok(None);
    }
    Ok(Some(PowerForm {
        base,
        exponent: Natural::from(exponent),
    }))
}

/// True iff `n` is not a perfect power. Defined for `n >= 2` only; 0 and 1
/// are neither biprime nor bi-compound.
pub fn is_biprime(n: &Natural) -> Result<bool, PowerError> {
    Ok(perfect_power_form(n)?.is_none())
}
