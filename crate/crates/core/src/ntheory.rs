//! Integer helpers: square roots, valuations, factorization, small primes.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Some(r)` with `r ≥ 0`, `r² = n`, when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_sqrt_u128(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

pub fn isqrt_u128(n: u128) -> u128 {
    n.isqrt()
}

/// p-adic valuation of a nonzero integer. Returns `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Positive mod.
pub fn modp(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(p as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(p as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
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

/// Miller–Rabin with fixed bases; deterministic below 3.3·10²⁴ and a
/// strong probable-prime test above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let n1 = n - &one;
    let mut d = n1.clone();
    let mut s = 0;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigUint::from(2u32), BigUint::from(2u32), one.clone());
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs.
/// Zero and ±1 give an empty list.
pub fn factorize(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut p = 2u32;
    while p < 1 << 12 {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(m, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Prime divisors of `n` that fit in a `u64`; panics if a factor does not,
/// which no input arising here comes near.
pub fn prime_divisors_u64(n: &BigInt) -> Vec<u64> {
    factorize(n)
        .into_iter()
        .map(|(p, _)| p.to_u64().expect("prime factor exceeds u64"))
        .collect()
}

/// Signed squarefree kernel: `n = sign · k · m²` with `k` squarefree.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    let mut k = BigInt::one();
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            k *= BigInt::from(p);
        }
    }
    if n.sign() == Sign::Minus {
        -k
    } else {
        k
    }
}

/// All positive divisors of `|n|`, ascending. `n` must be nonzero.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let p = BigInt::from(p);
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            for _ in 0..=e {
                next.push(pk.clone());
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let a = modp(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn next_prime_u64(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&BigInt::from(5184)), Some(BigInt::from(72)));
        assert_eq!(exact_sqrt(&BigInt::from(5233)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        assert_eq!(exact_sqrt_u128(576), Some(24));
        assert_eq!(isqrt_u128(u64::MAX as u128 * 3), 7_439_101_573);
    }

    #[test]
    fn factorization() {
        let f = factorize(&BigInt::from(82944));
        assert_eq!(f, vec![(BigUint::from(2u32), 10), (BigUint::from(3u32), 4)]);
        // product of two primes beyond the trial-division range
        let n = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![
                (BigUint::from(1_000_003u32), 1),
                (BigUint::from(998_244_353u32), 1)
            ]
        );
        assert_eq!(divisors(&BigInt::from(-12)).len(), 6);
        assert_eq!(squarefree_part(&BigInt::from(-72)), BigInt::from(-2));
    }

    #[test]
    fn primes_and_symbols() {
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(3_215_031_751));
        assert_eq!(next_prime_u64(7), 11);
        assert_eq!(legendre(&BigInt::from(2), 7), 1);
        assert_eq!(legendre(&BigInt::from(2), 5), -1);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(valuation(&BigInt::from(-48), 2), Some(4));
        assert_eq!(valuation(&BigInt::zero(), 2), None);
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..1_000_000_000_000u64) {
            let n = BigInt::from(n);
            let back: BigInt = factorize(&n)
                .into_iter()
                .map(|(p, e)| BigInt::from(p).pow(e))
                .product();
            prop_assert_eq!(back, n);
        }
    }
}
