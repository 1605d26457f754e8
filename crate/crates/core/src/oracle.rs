//! Brute-force reference implementations.
//!
//! Nothing here shares code with the modules it checks: the hyperoperator is
//! a literal transcription of the recursive schema, power representations
//! come from binary search on `a^x`, and the tetration table is built in
//! `u128`. The routines are deliberately naive and carry hard scale caps
//! instead of budgets. The CLI's `--verify` flag and the test suites use them.

use std::collections::BTreeSet;

use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::Natural;

/// Largest result, in bits, the literal evaluator will build.
pub const ORACLE_MAX_BITS: u64 = 1 << 20;

/// Largest number of schema applications the literal evaluator will perform.
pub const ORACLE_MAX_OPS: u64 = 1 << 20;

/// `H_r(a, x)` by direct recursion on the schema, or `None` above oracle
/// scale.
///
/// Rank 1 for `x >= 1` is taken as `a * x`, the closed form of the rank-0
/// iteration `a + (a + (... + a))`; every higher rank is the literal chain of
/// `x - 1` applications of the rank below.
pub fn oracle_hyper(r: u32, a: &Natural, x: &Natural) -> Option<Natural> {
    let mut ops = 0u64;
    literal(r, a, x, &mut ops)
}

fn literal(r: u32, a: &Natural, x: &Natural, ops: &mut u64) -> Option<Natural> {
    *ops += 1;
    if *ops > ORACLE_MAX_OPS {
        return None;
    }
    let v = if r == 0 {
        a + x
    } else if x.is_zero() {
        Natural::one()
    } else if x.is_one() {
        a.clone()
    } else if r == 1 {
        a * x
    } else if r == 2
        && a.bits() > 1
        && x.to_u64()
            .is_none_or(|x| (a.bits() - 1) * x > ORACLE_MAX_BITS)
    {
        // a^x has at least (bits(a) - 1) * x + 1 bits; refuse before grinding.
        return None;
    } else {
        let mut v = a.clone();
        let mut i = Natural::one();
        while i < *x {
            v = literal(r - 1, a, &v, ops)?;
            i += 1u32;
        }
        v
    };
    (v.bits() <= ORACLE_MAX_BITS).then_some(v)
}

/// Rank 1 by repeated addition, the schema with no closed form at all. Only
/// sensible for small `x`.
pub fn oracle_repeated_sum(a: &Natural, x: u64) -> Natural {
    if x == 0 {
        return Natural::one();
    }
    let mut v = a.clone();
    for _ in 1..x {
        v = a + v;
    }
    v
}

/// Every `(a, x)` with `a, x >= 2` and `a^x = m`.
pub fn oracle_all_power_reps(m: &Natural) -> BTreeSet<(Natural, Natural)> {
    let mut out = BTreeSet::new();
    let bits = m.bits();
    if bits < 2 {
        return out;
    }
    for x in 2..bits {
        // a^x = m needs 2 <= a < 2^ceil(bits / x) + 1.
        let mut lo = Natural::from(2u32);
        let mut hi: Natural = Natural::one() << bits.div_ceil(x);
        hi += 1u32;
        while lo < hi {
            let mid: Natural = (&lo + &hi) >> 1u32;
            let p: Natural = Pow::pow(&mid, x);
            if p < *m {
                lo = mid + 1u32;
            } else {
                hi = mid;
            }
        }
        if Pow::pow(&lo, x) == *m {
            out.insert((lo, Natural::from(x)));
        }
    }
    out
}

/// The representation with the largest exponent, which is the biprime-root
/// form; `None` for biprimes.
pub fn oracle_max_power_form(m: &Natural) -> Option<(Natural, Natural)> {
    oracle_all_power_reps(m)
        .into_iter()
        .max_by(|l, r| l.1.cmp(&r.1))
}

/// True iff `m >= 2` has no power representation.
pub fn oracle_is_biprime(m: &Natural) -> bool {
    *m >= Natural::from(2u32) && oracle_all_power_reps(m).is_empty()
}

/// Every `(a, x, a↑↑x)` with `a, x >= 2` and `a↑↑x <= n_max`, ordered by
/// `(a, x)`.
pub fn oracle_tetration_table(n_max: u64) -> BTreeSet<(Natural, Natural, Natural)> {
    let cap = u128::from(n_max);
    let mut out = BTreeSet::new();
    let mut a: u128 = 2;
    loop {
        let mut tower = a;
        let mut height = 1u64;
        let mut any = false;
        // Exponents above 127 overflow u128 for any a >= 2.
        while let Some(next) = u32::try_from(tower)
            .ok()
            .filter(|&e| e < 128)
            .and_then(|e| a.checked_pow(e))
            .filter(|&v| v <= cap)
        {
            tower = next;
            height += 1;
            any = true;
            out.insert((
                Natural::from(a),
                Natural::from(height),
                Natural::from(tower),
            ));
        }
        if !any {
            break;
        }
        a += 1;
    }
    out
}

/// Sieve of Eratosthenes: `sieve[n]` is true iff `n` is prime.
pub fn oracle_sieve(limit: usize) -> Vec<bool> {
    let mut sieve = vec![true; limit + 1];
    for flag in sieve.iter_mut().take(2) {
        *flag = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if sieve[i] {
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
}

/// Trial-division primality.
pub fn oracle_is_prime(n: &Natural) -> bool {
    let Some(n) = n.to_u64() else {
        panic!("oracle primality is limited to u64");
    };
    n >= 2 && (2u64..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
