//! Machine-integer number theory: modular powers, primality, factorization,
//! Kronecker symbols and square parts.

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    pow_mod_u128(base, exp as u128, m)
}

/// `base^exp mod m` with a 128-bit exponent (residue-field norms can exceed 2^64).
pub fn pow_mod_u128(base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
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

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..r.min(128).min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization of `1 <= n <= 2^63`, primes strictly increasing.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if n > 1 << 63 {
        return Err(Error::InvalidArgument(format!("{n} exceeds 2^63")));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            primes.push(x);
            continue;
        }
        let d = pollard_brent(x);
        stack.push(d);
        stack.push(x / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Splits `n = squarefree * square` with `square` the largest square divisor.
pub fn square_part(n: i64) -> Result<(u64, u64)> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("square_part needs n >= 1, got {n}")));
    }
    let mut free = 1u64;
    let mut square = 1u64;
    for (p, e) in factorize(n as u64)? {
        square *= p.pow(e - e % 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    Ok((free, square))
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

/// `Some((p, k))` when `n = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).ok()?.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n).map(|f| f.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()).unwrap_or(0)
}

/// Multiplicative order of `a` modulo `n`; `None` if `gcd(a, n) != 1`.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd_u64(a % n, n) != 1 {
        return None;
    }
    let mut order = euler_phi(n);
    for (p, _) in factorize(order).ok()? {
        while order.is_multiple_of(p) && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// The Kronecker symbol `(a | n)`, with `(a | 0) = [|a| = 1]`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let mut a = a as i128;
    let mut b = n as i128;
    if b == 0 {
        return i32::from(a.abs() == 1);
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k = if v.is_multiple_of(2) { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on.
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Signed squarefree kernel: `n = kernel * s^2` with `kernel` squarefree.
pub fn squarefree_kernel(n: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("squarefree kernel of 0".into()));
    }
    let (free, _) = square_part(n.abs())?;
    Ok(n.signum() * free as i64)
}

/// Fundamental discriminant of `Q(sqrt(n))` for a non-square `n`.
pub fn fundamental_discriminant(n: i64) -> Result<i64> {
    let m = squarefree_kernel(n)?;
    if m == 1 {
        return Err(Error::InvalidArgument(format!("{n} is a perfect square")));
    }
    Ok(if m.rem_euclid(4) == 1 { m } else { 4 * m })
}

/// A square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Primes `<= bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(33, 2), 1);
        assert_eq!(kronecker(1, 1), 1);
        assert_eq!(kronecker(-3, 11), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(12, 2), 0);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        // Oracle: brute-force search for squares mod p.
        for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                for x in 1..p {
                    s[(x * x % p) as usize] = true;
                }
                s
            };
            for a in -199i64..200 {
                let r = a.rem_euclid(p as i64) as u64;
                let expected = if r == 0 {
                    0
                } else if squares[r as usize] {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p as i64), expected, "({a}|{p})");
                if r != 0 {
                    let e = pow_mod(r, (p - 1) / 2, p);
                    assert_eq!(if e == 1 { 1 } else { -1 }, expected);
                }
            }
        }
    }

    #[test]
    fn kronecker_at_two_follows_octal_rule() {
        for a in -200i64..200 {
            let expected = match a.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            };
            assert_eq!(kronecker(a, 2), expected, "({a}|2)");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(144).unwrap(), vec![(2, 4), (3, 2)]);
        assert_eq!(factorize(725).unwrap(), vec![(5, 2), (29, 1)]);
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert!(factorize(0).is_err());
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(big).unwrap(), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(factorize(1 << 63).unwrap(), vec![(2, 63)]);
    }

    #[test]
    fn square_part_examples() {
        assert_eq!(square_part(18).unwrap(), (2, 9));
        assert_eq!(square_part(16).unwrap(), (1, 16));
        assert_eq!(square_part(1).unwrap(), (1, 1));
        assert!(square_part(0).is_err());
        assert!(square_part(-4).is_err());
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(7, 8), Some(2));
        assert_eq!(multiplicative_order(29, 4), Some(1));
        assert_eq!(multiplicative_order(2, 4), None);
        for p in primes_up_to(500).into_iter().skip(1) {
            for a in 0..p.min(60) {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                } else {
                    assert_eq!(kronecker(a as i64, p as i64), -1);
                }
            }
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(fundamental_discriminant(17).unwrap(), 17);
        assert_eq!(fundamental_discriminant(2).unwrap(), 8);
        assert_eq!(fundamental_discriminant(-1).unwrap(), -4);
        assert_eq!(fundamental_discriminant(-3).unwrap(), -3);
        assert_eq!(fundamental_discriminant(-33).unwrap(), -132);
        assert_eq!(fundamental_discriminant(28).unwrap(), 28);
        assert!(fundamental_discriminant(9).is_err());
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..=(1u64 << 40)) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }

        #[test]
        fn square_part_kernel_is_squarefree(n in 1i64..5_000_000) {
            let (free, sq) = square_part(n).unwrap();
            prop_assert_eq!(free * sq, n as u64);
            prop_assert!(factorize(free).unwrap().iter().all(|&(_, e)| e == 1));
            let r = (sq as f64).sqrt().round() as u64;
            prop_assert_eq!(r * r, sq);
        }

        #[test]
        fn kronecker_is_multiplicative(a in -300i64..300, b in -300i64..300, n in 1i64..300) {
            prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
            prop_assert_eq!(kronecker(a, n * (b.abs() + 1)), kronecker(a, n) * kronecker(a, b.abs() + 1));
        }
    }
}
