//! Dense polynomials over F_p, little-endian coefficient vectors.
//!
//! Only what ring validation and residue-field arithmetic need: products
//! modulo a monic polynomial, gcd and Rabin's irreducibility test.

pub(crate) fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a unit modulo a prime.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `m` (any nonzero `m`) over F_p.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|&c| c % p).collect();
    trim(&mut r);
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_mod_prime(m[dm], p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mulmod_u64(r[dr], lead_inv, p);
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            let t = mulmod_u64(c, mc, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod_u64(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y % p) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// x^(p^k) modulo `m`.
fn frobenius_power_of_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut cur = rem(&[0, 1], m, p);
    for _ in 0..k {
        cur = pow_poly(&cur, p, m, p);
    }
    cur
}

fn pow_poly(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Rabin's test. `u` must have a unit leading coefficient mod p.
pub(crate) fn is_irreducible(u: &[u64], p: u64) -> bool {
    let mut u: Vec<u64> = u.iter().map(|&c| c % p).collect();
    trim(&mut u);
    let Some(f) = degree(&u) else { return false };
    if f == 0 {
        return false;
    }
    if f == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    if sub(&frobenius_power_of_x(f as u32, &u, p), &rem(&x, &u, p), p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(f as u64) {
        let h = sub(&frobenius_power_of_x((f as u64 / r) as u32, &u, p), &x, p);
        let g = gcd(&u, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
