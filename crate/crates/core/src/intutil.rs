//! Integer primitives: deterministic primality and integer factorization.
//!
//! Factorization is exact and complete: trial division by small primes, then
//! Miller-Rabin plus Brent's variant of Pollard rho on the remaining cofactor.
//! Heights and formal log arithmetic factor every numerator and denominator,
//! so these run on inputs far below cryptographic sizes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::powmod;

/// Deterministic Miller-Rabin for u64 (the 7-base certificate covers all u64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    // Fixed witnesses: deterministic for the sizes that reach here, and far
    // beyond the honesty bar for a pre-check feeding an exact factorizer
    // (every claimed factorization is verified by multiplication below).
    for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        let mut composite = true;
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                composite = false;
                break;
            }
        }
        if composite {
            return false;
        }
    }
    true
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n.
fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = BigUint::from(1u32);
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x >= y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}

fn factor_into(n: BigUint, out: &mut BTreeMap<u64, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime_big(&n) {
        let p = n
            .to_u64()
            .expect("prime factor exceeds u64: input far outside supported height range");
        *out.entry(p).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    let q = &n / &d;
    factor_into(d, out);
    factor_into(q, out);
}

/// Complete prime factorization of a positive integer, smallest prime first.
/// The product of the returned powers is verified to reproduce the input.
pub fn factor_u(n: &BigUint) -> BTreeMap<u64, u32> {
    assert!(!n.is_zero(), "factor of zero");
    let mut out = BTreeMap::new();
    let mut m = n.clone();
    // Strip small primes first; rho only sees the hard cofactor.
    for p in SMALL_PRIMES {
        let pb = BigUint::from(p);
        while (&m % &pb).is_zero() {
            m /= &pb;
            *out.entry(p).or_insert(0) += 1;
        }
        if m.is_one() {
            break;
        }
    }
    if !m.is_one() {
        factor_into(m, &mut out);
    }
    let mut check = BigUint::one();
    for (p, e) in &out {
        check *= BigUint::from(*p).pow(*e);
    }
    assert_eq!(&check, n, "factorization self-check failed");
    out
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_carmichael() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn factor_mixed() {
        let n = BigUint::from(2u32).pow(10) * BigUint::from(3u32) * BigUint::from(1_000_003u32);
        let f = factor_u(&n);
        assert_eq!(f.get(&2), Some(&10));
        assert_eq!(f.get(&3), Some(&1));
        assert_eq!(f.get(&1_000_003), Some(&1));
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn factor_semiprime() {
        // Forces the rho path: both factors above the trial-division bound.
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        let f = factor_u(&n);
        assert_eq!(f.get(&1_000_003), Some(&1));
        assert_eq!(f.get(&1_000_033), Some(&1));
    }
}
