//! Elementary integer arithmetic: factorization, totients, primes, orders.
//!
//! Everything here is desk scale (moduli up to ~10^6), so trial division
//! and direct sieves are the right tools.

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization as (prime, exponent) pairs, ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product::<u64>()
        .max(1)
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Primes up to and including `bound`, by Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// a^e mod m.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = a % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of a modulo m. Requires gcd(a, m) = 1.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert_eq!(gcd(a, m), 1, "order needs gcd(a,m)=1");
    if m == 1 {
        return 1;
    }
    // The order divides phi(m); scan its divisors ascending.
    let phi = euler_phi(m);
    for d in divisors(phi) {
        if pow_mod(a, d, m) == 1 {
            return d;
        }
    }
    unreachable!("order must divide phi(m)")
}

/// p-adic valuation of n.
pub fn valuation(n: u64, p: u64) -> u32 {
    let mut n = n;
    let mut v = 0;
    while n % p == 0 && n > 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Chinese remainder: x ≡ r_i mod m_i with pairwise coprime moduli.
/// Returns x mod ∏ m_i.
pub fn crt(congruences: &[(u64, u64)]) -> u64 {
    let mut x = 0u64;
    let mut modulus = 1u64;
    for &(r, m) in congruences {
        // Solve x + modulus*t ≡ r (mod m) by scanning t < m.
        let mut t = 0;
        while (x + modulus * t) % m != r % m {
            t += 1;
            assert!(t < m, "crt moduli must be pairwise coprime");
        }
        x += modulus * t;
        modulus *= m;
    }
    x
}

/// Smallest primitive root modulo p^e (p an odd prime) or modulo 2, 4.
pub fn primitive_root(q: u64) -> u64 {
    if q == 1 || q == 2 {
        return 1;
    }
    if q == 4 {
        return 3;
    }
    let fac = factorize(q);
    assert!(fac.len() == 1 && fac[0].0 != 2, "no primitive root mod {q}");
    let (p, e) = fac[0];
    let phi_p = p - 1;
    let prime_divs: Vec<u64> = factorize(phi_p).into_iter().map(|(l, _)| l).collect();
    let mut g = 2u64;
    loop {
        if gcd(g, p) == 1 && prime_divs.iter().all(|&l| pow_mod(g, phi_p / l, p) != 1) {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    // Lift: g stays primitive mod p^e unless g^(p-1) ≡ 1 mod p^2.
    if pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    g % q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(49), 42);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 5), 4);
        assert_eq!(multiplicative_order(3, 4), 2);
        assert_eq!(multiplicative_order(1, 1), 1);
        assert_eq!(multiplicative_order(7, 12), 2);
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn crt_basic() {
        let x = crt(&[(2, 3), (3, 5), (2, 7)]);
        assert_eq!(x, 23);
    }

    #[test]
    fn primitive_roots() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let g = primitive_root(q);
            assert_eq!(multiplicative_order(g, q), euler_phi(q), "q={q}");
        }
    }
}
