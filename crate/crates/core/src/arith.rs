//! Rational-integer helpers: primality, factorization, small prime lists.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

fn mr_witness(n: &BigInt, a: u64, d: &BigInt, s: u32) -> bool {
    let a = BigInt::from(a);
    if (&a % n).is_zero() {
        return true;
    }
    let nm1 = n - 1;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24).
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == &BigInt::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let nm1: BigInt = n - 1;
    let s = nm1.trailing_zeros().unwrap_or(0) as u32;
    let d = &nm1 >> s;
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| mr_witness(n, a, &d, s))
}

fn pollard_brent(n: &BigInt, c: u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut r: u64 = 1;
    let mut q = BigInt::one();
    let m = 64;
    let mut g;
    let mut x;
    let mut ys;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
            if k >= r || !g.is_one() {
                break;
            }
        }
        r *= 2;
        if !g.is_one() || r > 1 << 24 {
            break;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g.is_one() || &g == n {
        None
    } else {
        Some(g)
    }
}

fn factor_into(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1u64.. {
        if let Some(d) = pollard_brent(&n, c) {
            let e = &n / &d;
            factor_into(d, out);
            factor_into(e, out);
            return;
        }
    }
}

/// Factorization of |n| (n != 0) into primes with multiplicities, ascending.
pub fn factor_int(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factorization of zero");
    let mut m = n.abs();
    let mut raw = Vec::new();
    for p in primes_up_to(1000) {
        let pb = BigInt::from(p);
        while (&m % &pb).is_zero() {
            m /= &pb;
            raw.push(pb.clone());
        }
    }
    factor_into(m, &mut raw);
    raw.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in raw {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor_int(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: &BigInt) -> u32 {
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

/// Integer square root (floor) of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "square root of a negative number");
    n.sqrt()
}

pub fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_primality() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
        assert!(!is_prime(&BigInt::from(1_000_000_007u64 * 3)));
        assert!(!is_prime(&BigInt::from(561)));
    }

    #[test]
    fn factorization() {
        let f = factor_int(&BigInt::from(-2840));
        assert_eq!(f, vec![(2.into(), 3), (5.into(), 1), (71.into(), 1)]);
        let big = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * BigInt::from(12);
        let f = factor_int(&big);
        assert_eq!(f.len(), 4);
        assert_eq!(f[3].0, BigInt::from(1_000_000_007u64));
        assert_eq!(is_square(&BigInt::from(49)), Some(7.into()));
        assert_eq!(is_square(&BigInt::from(50)), None);
    }
}
