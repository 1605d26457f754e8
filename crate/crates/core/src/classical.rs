//! Classical primality and factorization, needed by the rank-1 predicates.
//!
//! Primality is deterministic Miller-Rabin with the first thirteen prime
//! bases, which is exact below 3,317,044,064,679,887,385,961,981. Beyond that
//! bound no verdict is given.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::Natural;

const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Upper end (exclusive) of the range where [`BASES`] are a proof.
const EXACT_LIMIT: &str = "3317044064679887385961981";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("primality is only decided exactly below 3317044064679887385961981")]
    BeyondExactRange,
    #[error("factorization did not finish within the step budget")]
    Unfactored,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(n: &Natural) -> bool {
    let one = Natural::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let a = Natural::from(a);
        if (&a % n).is_zero() {
            return *n == a;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Classical primality.
pub fn is_prime(n: &Natural) -> Result<bool, ClassicalError> {
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    if BASES.iter().any(|&p| (n % p).is_zero()) {
        return Ok(false);
    }
    let limit: Natural = EXACT_LIMIT.parse().expect("constant parses");
    if *n >= limit {
        return Err(ClassicalError::BeyondExactRange);
    }
    Ok(is_prime_big(n))
}

fn rho(n: u64) -> u64 {
    // Pollard-Brent; n is odd, composite and has no tiny factors.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Prime factorization as sorted `(prime, multiplicity)` pairs.
///
/// Cofactors beyond `u64` are handled by trial division for at most
/// `max_steps` candidates; a composite cofactor that survives is reported as
/// [`ClassicalError::Unfactored`].
pub fn factorize(n: &Natural, max_steps: u64) -> Result<Vec<(Natural, u32)>, ClassicalError> {
    let mut primes: Vec<Natural> = Vec::new();
    let mut rest = n.clone();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let p = Natural::from(p);
        while !rest.is_zero() && (&rest % &p).is_zero() {
            rest /= &p;
            primes.push(p.clone());
        }
    }
    let mut candidate = Natural::from(17u32);
    let mut steps = 0u64;
    while rest.to_u64().is_none() {
        if is_prime(&rest) == Ok(true) {
            primes.push(rest.clone());
            rest = Natural::one();
            break;
        }
        if steps >= max_steps || &candidate * &candidate > rest {
            return Err(ClassicalError::Unfactored);
        }
        while (&rest % &candidate).is_zero() {
            rest /= &candidate;
            primes.push(candidate.clone());
        }
        candidate += 2u32;
        steps += 1;
    }
    if let Some(small) = rest.to_u64() {
        if small > 1 {
            let mut found = Vec::new();
            factor_u64(small, &mut found);
            primes.extend(found.into_iter().map(Natural::from));
        }
    }
    primes.sort();
    let mut grouped: Vec<(Natural, u32)> = Vec::new();
    for p in primes {
        match grouped.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => grouped.push((p, 1)),
        }
    }
    Ok(grouped)
}

/// All divisors of `n >= 1`, ascending.
pub fn divisors(n: &Natural, max_steps: u64) -> Result<Vec<Natural>, ClassicalError> {
    let mut out = vec![Natural::one()];
    for (p, k) in factorize(n, max_steps)? {
        let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
        for d in &out {
            let mut q = d.clone();
            next.push(q.clone());
            for _ in 0..k {
                q *= &p;
                next.push(q.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}
