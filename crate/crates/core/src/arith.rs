//! Integer arithmetic: primality, factorization, divisor functions, and
//! prime searches in arithmetic progressions.
//!
//! Everything works on `u64`. Primality is the deterministic Miller–Rabin
//! witness set valid for the full 64-bit range; factorization is trial
//! division with a Brent–Pollard rho fallback for stubborn cofactors.

use crate::error::{Error, Result};

/// `(a * b) mod m` without overflow.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(a ^ e) mod m`.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
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
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd composite, not a prime power of 2.
    debug_assert!(n > 3 && n % 2 == 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd_u64(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow("lcm".into()))
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factorize(1)` is
/// empty; 0 is rejected.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Invalid("factorize(0)".into()));
    }
    let mut n = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut p = 7u64;
    let inc = [4u64, 2, 4, 2, 4, 6, 2, 6]; // wheel mod 30
    let mut wi = 0;
    while p.saturating_mul(p) <= n && p < 1 << 20 {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += inc[wi];
        wi = (wi + 1) % 8;
    }
    // what's left is 1, a prime, or a product of two large primes
    let mut stack = vec![n];
    let mut extra: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            extra.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    extra.sort_unstable();
    for q in extra {
        if let Some(last) = out.last_mut() {
            if last.0 == q {
                last.1 += 1;
                continue;
            }
        }
        out.push((q, 1));
    }
    out.sort_unstable();
    Ok(out)
}

/// All divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut out = vec![1u64];
    for (p, e) in f {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk = pk
                .checked_mul(p)
                .ok_or_else(|| Error::Overflow("divisors".into()))?;
            for d in &prev {
                out.push(d * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    let mut out = n;
    for (p, _) in factorize(n)? {
        out = out / p * (p - 1);
    }
    Ok(out)
}

/// Moebius function: 0 on non-squarefree, else (-1)^(number of prime factors).
pub fn moebius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// Smallest prime `q` with `q ≡ 1 (mod t)`, `q >= floor`, and `q` not a
/// divisor of `avoid`. Errors once candidates exceed `cap`.
pub fn prime_in_progression(t: u64, floor: u64, avoid: u64, cap: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::Invalid("progression modulus 0".into()));
    }
    let lo = floor.max(2);
    // first candidate >= lo congruent to 1 mod t
    let mut q = if t == 1 {
        lo
    } else {
        let rem = lo % t;
        if rem == 1 {
            lo
        } else {
            lo + (t + 1 - rem) % t
        }
    };
    while q <= cap {
        if is_prime(q) && (avoid == 0 || avoid % q != 0) {
            return Ok(q);
        }
        q = q
            .checked_add(if t == 1 { 1 } else { t })
            .ok_or_else(|| Error::Overflow("prime_in_progression".into()))?;
    }
    Err(Error::SearchCapExceeded {
        cap,
        what: format!("searching primes ≡ 1 (mod {t}) from {lo} avoiding divisors of {avoid}"),
    })
}
