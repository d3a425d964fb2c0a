//! Small number-theory helpers over machine integers.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Reduce `a` into `0..m`.
pub fn modp(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut b = base % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    if g.gcd != 1 && g.gcd != -1 {
        return None;
    }
    Some(modp(g.x * g.gcd, m))
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = modp(a, p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a nonresidue")
}

pub fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime has a primitive root")
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Prime-power factorization as (prime, prime^exponent) pairs.
pub fn prime_power_parts(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut q = 1;
            while n % d == 0 {
                n /= d;
                q *= d;
            }
            out.push((d, q));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_power_parts(n).iter().map(|&(p, q)| q / p * (p - 1)).product()
}

pub fn lcm_all(xs: &[u64]) -> u64 {
    xs.iter().fold(1u64, |acc, &x| acc.lcm(&x))
}

pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0u64, |acc, &x| acc.gcd(&x))
}

/// For a prime p >= 5 not 2 or 3, returns (n, eps) with p = 6n + eps.
pub fn six_n_eps(p: u64) -> Option<(u64, i64)> {
    if !is_prime(p) || p < 5 {
        return None;
    }
    match p % 6 {
        1 => Some(((p - 1) / 6, 1)),
        5 => Some(((p + 1) / 6, -1)),
        _ => None,
    }
}
