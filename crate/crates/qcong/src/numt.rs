//! Small number-theoretic utilities: modular inverses, Legendre symbols,
//! primality, pentagonal and triangular supports.

/// a^e mod m.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    a %= m;
    let mut r: u64 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % m as u128) as u64;
        }
        a = ((a as u128 * a as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Inverse of a mod m when gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Legendre symbol (a | p) for odd prime p, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// The real character chi_12: +1 for n == +-1 (mod 12), -1 for n == +-5, else 0.
pub fn chi12(n: i64) -> i32 {
    match n.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// Deterministic Miller-Rabin for u64.
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
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

/// Primes p with lo <= p, ascending.
pub fn primes_from(lo: u64) -> impl Iterator<Item = u64> {
    (lo..).filter(|&n| is_prime(n))
}

/// Generalized pentagonal exponents k(3k-1)/2 (k in Z) below `limit`,
/// with the sign (-1)^k of the pentagonal number theorem.
pub fn pentagonal_terms(limit: u64) -> Vec<(u64, i64)> {
    let mut out = vec![(0u64, 1i64)];
    let mut k: u64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= limit && g2 >= limit {
            break;
        }
        let s = if k % 2 == 0 { 1 } else { -1 };
        if g1 < limit {
            out.push((g1, s));
        }
        if g2 < limit {
            out.push((g2, s));
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

/// Terms of E(q)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2} below `limit`.
pub fn triangular_terms(limit: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut k: u64 = 0;
    loop {
        let t = k * (k + 1) / 2;
        if t >= limit {
            break;
        }
        let c = (2 * k + 1) as i64;
        out.push((t, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 7), 1);
        assert_eq!(legendre(14, 7), 0);
        assert_eq!(legendre(13, 19), -1);
        assert_eq!(legendre(-1, 5), 1);
    }

    #[test]
    fn chi12_values() {
        assert_eq!(chi12(19), -1);
        assert_eq!(chi12(25), 1);
        assert_eq!(chi12(6), 0);
        assert_eq!(chi12(-1), 1);
    }

    #[test]
    fn primality() {
        let ps: Vec<u64> = primes_from(2).take(10).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_009u64 * 3));
    }

    #[test]
    fn pentagonal_sequence() {
        let e: Vec<u64> = pentagonal_terms(30).iter().map(|t| t.0).collect();
        assert_eq!(e, vec![0, 1, 2, 5, 7, 12, 15, 22, 26]);
    }
}
