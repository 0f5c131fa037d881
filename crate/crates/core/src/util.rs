//! Small shared helpers: integer logs, primality, hashing, Wilson intervals.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::hash::Hasher;

/// Trial-division primality for small integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factors of `n` without multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest `k` with `base^k >= n`, by exact integer comparison.
///
/// `n >= 1`, `base >= 2`. This is `ceil(log n / log base)` without floats.
pub fn ceil_log(n: &BigUint, base: u64) -> u32 {
    assert!(base >= 2);
    if n <= &BigUint::one() {
        return 0;
    }
    let base = BigUint::from(base);
    let mut pow = BigUint::one();
    let mut k = 0u32;
    while &pow < n {
        pow *= &base;
        k += 1;
    }
    k
}

/// `floor(log2 n)` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1);
    63 - n.leading_zeros()
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `base^exp` as a BigUint.
pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}

/// Wilson 95% score interval for `successes` out of `samples`.
pub fn wilson_interval(successes: u64, samples: u64) -> (f64, f64) {
    assert!(samples >= 1);
    let z = 1.959963984540054_f64;
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        ((centre - half) / denom).max(0.0)
    };
    let hi = if successes == samples {
        1.0
    } else {
        ((centre + half) / denom).min(1.0)
    };
    (lo, hi)
}

/// Deterministic 128-bit hash of a byte slice (two fixed-key FNV-variant passes).
///
/// Used to dedupe permutations in conjugation orbits without storing them.
pub fn hash128(bytes: &[u8]) -> u128 {
    let mut h1 = std::collections::hash_map::DefaultHasher::new();
    h1.write_u64(0x9e3779b97f4a7c15);
    h1.write(bytes);
    let a = h1.finish();
    let mut h2 = std::collections::hash_map::DefaultHasher::new();
    h2.write_u64(0xc2b2ae3d27d4eb4f);
    h2.write(bytes);
    let b = h2.finish();
    ((a as u128) << 64) | b as u128
}

/// True iff `big` is zero.
pub fn is_zero(b: &BigUint) -> bool {
    b.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(13));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
        assert_eq!(prime_factors(40320), vec![2, 3, 5, 7]);
    }

    #[test]
    fn integer_logs() {
        // 120 > 25 and 120 <= 125, so the bound for S5 on 5 points is 3
        assert_eq!(ceil_log(&BigUint::from(120u32), 5), 3);
        assert_eq!(ceil_log(&BigUint::from(1u32), 7), 0);
        assert_eq!(ceil_log(&BigUint::from(40320u32), 35), 3);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(floor_log2(5), 2);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(floor_log2(1), 0);
    }

    #[test]
    fn wilson_basic() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && 0.5 < hi);
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        let (_, hi) = wilson_interval(10, 10);
        assert_eq!(hi, 1.0);
    }
}
