//! Splitting of rational primes in cyclotomic fields Q(ζ_m).
//!
//! Everything is driven by the Galois group (Z/mZ)*: the residue degree f
//! is the order of p modulo m/p^{ν_p}, the ramification index is φ(p^{ν_p}),
//! the decomposition group is generated by the class of p together with the
//! units ≡ 1 mod m/p^{ν_p}, and the inertia group is the latter alone.

use crate::arith::{self, euler_phi, multiplicative_order, valuation};
use crate::characters::{DirichletCharacter, UnitGroup};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Canonical modulus: m ≡ 2 mod 4 defines the same field as m/2
/// (including 2 → 1, since Q(ζ_2) = Q).
pub fn canonical_modulus(m: u64) -> u64 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// Q(ζ_m) with its signature and discriminant (by conductor-discriminant).
#[derive(Debug, Clone, Serialize)]
pub struct CyclotomicField {
    pub m: u64,
    /// true when the requested modulus was ≡ 2 mod 4 and got replaced by m/2
    pub canonicalized: bool,
    pub degree: u64,
    pub r1: u64,
    pub r2: u64,
    pub abs_discriminant: u64,
}

impl CyclotomicField {
    pub fn new(m_raw: u64) -> Self {
        assert!(m_raw >= 1);
        let m = canonical_modulus(m_raw);
        let degree = euler_phi(m);
        let (r1, r2) = if m <= 2 { (degree, 0) } else { (0, degree / 2) };
        let abs_discriminant = crate::characters::enumerate_characters(m)
            .iter()
            .map(|chi| chi.conductor())
            .product();
        CyclotomicField {
            m,
            canonicalized: m != m_raw,
            degree,
            r1,
            r2,
            abs_discriminant,
        }
    }
}

/// Shape of p·O_K = (P_1 ... P_r)^e with N(P_j) = p^f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeSplitting {
    pub p: u64,
    pub e: u64,
    pub f: u64,
    pub r: u64,
}

impl PrimeSplitting {
    /// N(P) = p^f. f64 because f can exceed what u64 holds (p = 97 in
    /// Q(ζ_29) already has norm 97^28).
    pub fn norm(&self) -> f64 {
        (self.p as f64).powi(self.f as i32)
    }

    pub fn log_norm(&self) -> f64 {
        self.f as f64 * (self.p as f64).ln()
    }
}

/// e = φ(p^{ν_p(m)}), f = ord of p mod m/p^{ν_p}, r = φ(m)/(e f).
pub fn split_prime(m: u64, p: u64) -> PrimeSplitting {
    assert!(arith::is_prime(p), "{p} is not prime");
    let m = canonical_modulus(m.max(1));
    let nu = valuation(m, p);
    let e = euler_phi(p.pow(nu));
    let m_prime = m / p.pow(nu);
    let f = multiplicative_order(p % m_prime.max(1), m_prime.max(1)).max(1);
    let r = euler_phi(m) / (e * f);
    PrimeSplitting { p, e, f, r }
}

/// Decomposition and inertia subgroups of (Z/mZ)* at p, with the
/// Frobenius-exponent map a(h) defined by h ≡ p^{a(h)} mod m/p^{ν_p}.
#[derive(Debug, Clone)]
pub struct DecompositionData {
    pub m: u64,
    pub splitting: PrimeSplitting,
    pub decomposition_group: Vec<u64>,
    pub inertia_group: Vec<u64>,
    pub frobenius_class: u64,
    /// (h, a(h) mod f) for every h in the decomposition group.
    pub exponent_map: Vec<(u64, u64)>,
}

impl DecompositionData {
    pub fn exponent_of(&self, h: u64) -> Option<u64> {
        self.exponent_map
            .iter()
            .find(|(g, _)| *g == h % self.m)
            .map(|(_, a)| *a)
    }
}

pub fn decomposition_data(m: u64, p: u64) -> DecompositionData {
    let m = canonical_modulus(m);
    assert!(m >= 3, "decomposition data needs m >= 3");
    let splitting = split_prime(m, p);
    let nu = valuation(m, p);
    let m_prime = m / p.pow(nu);
    let group = UnitGroup::new(m);
    let units = group.units();

    let inertia_group: Vec<u64> = units
        .iter()
        .copied()
        .filter(|&x| x % m_prime.max(1) == 1 % m_prime.max(1))
        .collect();

    // h belongs to D iff h ≡ p^a mod m' for some a.
    let mut pow_residues = Vec::new();
    let mut acc = 1 % m_prime.max(1);
    for _ in 0..splitting.f {
        pow_residues.push(acc);
        acc = acc * (p % m_prime.max(1)) % m_prime.max(1);
    }
    let mut decomposition_group = Vec::new();
    let mut exponent_map = Vec::new();
    for &h in &units {
        let residue = h % m_prime.max(1);
        if let Some(a) = pow_residues.iter().position(|&pr| pr == residue) {
            decomposition_group.push(h);
            exponent_map.push((h, a as u64 % splitting.f));
        }
    }

    // A Frobenius lift: ≡ p mod m', ≡ 1 mod p^{ν}.
    let frobenius_class = if nu == 0 {
        p % m
    } else {
        arith::crt(&[(p % m_prime, m_prime), (1, p.pow(nu))]) % m
    };

    let data = DecompositionData {
        m,
        splitting,
        decomposition_group,
        inertia_group,
        frobenius_class,
        exponent_map,
    };
    debug_assert_eq!(
        data.decomposition_group.len() as u64,
        splitting.e * splitting.f
    );
    debug_assert_eq!(data.inertia_group.len() as u64, splitting.e);
    debug_assert_eq!(data.exponent_of(data.frobenius_class), Some(1 % splitting.f));
    data
}

/// Local Artin data of a one-dimensional representation at p.
#[derive(Debug, Clone)]
pub struct ArtinLocalData {
    pub p: u64,
    /// dim V^{I_P}: 1 when χ is unramified at p (p does not divide the
    /// conductor), else 0.
    pub invariant_dim: u8,
    /// χ*(p) when unramified, absent otherwise.
    pub frobenius_value: Option<Complex64>,
    pub n_plus: u64,
    pub n_minus: u64,
}

pub fn artin_local_data(chi: &DirichletCharacter, p: u64) -> ArtinLocalData {
    let ramified = chi.conductor() % p == 0;
    let (n_plus, n_minus) = archimedean_signature(chi, chi.modulus());
    ArtinLocalData {
        p,
        invariant_dim: if ramified { 0 } else { 1 },
        frobenius_value: if ramified {
            None
        } else {
            Some(chi.primitive_value(p as i64))
        },
        n_plus,
        n_minus,
    }
}

/// det(Id - x ρ(Φ_P); V^{I_P}) for the 1-dim representation χ:
/// 1 - χ*(p) x off the conductor, 1 on it.
pub fn artin_local_factor(chi: &DirichletCharacter, p: u64, x: Complex64) -> Complex64 {
    if chi.conductor() % p == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0) - chi.primitive_value(p as i64) * x
    }
}

/// Tr(ρ(Φ_P^k); V^{I_P}) for the 1-dim representation χ.
pub fn artin_frobenius_trace(chi: &DirichletCharacter, p: u64, k: i64) -> Complex64 {
    if chi.conductor() % p == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        chi.primitive_value_pow(p as i64, k)
    }
}

/// (n⁺, n⁻) at the archimedean places of Q(ζ_m): all places are complex for
/// m ≥ 3 and the distinguished involution is -1, so n⁺ = 1 for even χ and
/// n⁻ = 1 for odd χ. For m ≤ 2 the places are real and n⁺ = dim V = 1.
pub fn archimedean_signature(chi: &DirichletCharacter, m: u64) -> (u64, u64) {
    if canonical_modulus(m.max(1)) <= 2 {
        (1, 0)
    } else if chi.parity() == 0 {
        (1, 0)
    } else {
        (0, 1)
    }
}

/// JSON splitting report per the external interface.
#[derive(Debug, Clone, Serialize)]
pub struct SplittingReport {
    pub m: u64,
    pub p: u64,
    pub e: u64,
    pub f: u64,
    pub r: u64,
    pub decomposition_order: u64,
    pub inertia_order: u64,
}

pub fn splitting_report(m: u64, p: u64) -> Result<SplittingReport> {
    let m = canonical_modulus(m);
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let s = split_prime(m, p);
    Ok(SplittingReport {
        m,
        p,
        e: s.e,
        f: s.f,
        r: s.r,
        decomposition_order: s.e * s.f,
        inertia_order: s.e,
    })
}

/// The primitive characters inducing the characters mod m; their L-functions
/// are the factors of ζ_K for K = Q(ζ_m), trivial factor included.
pub fn dedekind_factor_characters(m: u64) -> Vec<DirichletCharacter> {
    let m = canonical_modulus(m);
    crate::characters::enumerate_characters(m)
        .iter()
        .map(|chi| chi.induced_primitive())
        .collect()
}

/// Shared group handle for callers that need raw unit-group access.
pub fn unit_group(m: u64) -> Arc<UnitGroup> {
    UnitGroup::new(canonical_modulus(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    #[test]
    fn splitting_examples() {
        // modular-order oracle: 2,4,3,1 mod 5 so f = 4
        let s = split_prime(5, 2);
        assert_eq!((s.e, s.f, s.r), (1, 4, 1));
        // 5 ≡ 1 mod 4 splits in Q(i)
        let s = split_prime(4, 5);
        assert_eq!((s.e, s.f, s.r), (1, 1, 2));
        // ν_3(12) = 1, ord(3 mod 4) = 2
        let s = split_prime(12, 3);
        assert_eq!((s.e, s.f, s.r), (2, 2, 1));
        // ramified prime of Q(i)
        let s = split_prime(4, 2);
        assert_eq!((s.e, s.f, s.r), (2, 1, 1));
        assert_eq!(s.norm(), 2.0);
    }

    #[test]
    fn efr_identity_desk_range() {
        for m in 1..=30u64 {
            let mc = canonical_modulus(m);
            let phi = euler_phi(mc);
            for p in crate::arith::primes_up_to(100) {
                let s = split_prime(m, p);
                assert_eq!(s.e * s.f * s.r, phi, "m={m} p={p}");
                assert_eq!(s.e == 1, mc % p != 0, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = decomposition_data(5, 2);
        assert_eq!(d.decomposition_group.len(), 4);
        assert_eq!(d.inertia_group, vec![1]);
        assert_eq!(d.exponent_of(2), Some(1));

        let d = decomposition_data(12, 3);
        assert_eq!(d.decomposition_group.len(), 4);
        assert_eq!(d.inertia_group.len(), 2);

        let d = decomposition_data(4, 5);
        assert_eq!(d.decomposition_group, vec![1]);
        assert_eq!(d.inertia_group, vec![1]);
    }

    #[test]
    fn exponent_map_is_homomorphism_with_inertia_kernel() {
        for m in 3..=30u64 {
            if canonical_modulus(m) != m {
                continue;
            }
            for p in crate::arith::primes_up_to(100) {
                let d = decomposition_data(m, p);
                let f = d.splitting.f;
                // surjectivity onto Z/fZ
                for a in 0..f {
                    assert!(
                        d.exponent_map.iter().any(|&(_, e)| e == a),
                        "m={m} p={p} misses exponent {a}"
                    );
                }
                // homomorphism and kernel = inertia, by exhaustion
                for &(g, ag) in &d.exponent_map {
                    for &(h, ah) in &d.exponent_map {
                        let gh = g * h % m;
                        assert_eq!(d.exponent_of(gh), Some((ag + ah) % f));
                    }
                    let in_kernel = ag == 0;
                    assert_eq!(in_kernel, d.inertia_group.contains(&g));
                }
            }
        }
    }

    #[test]
    fn artin_local_examples() {
        let chi4 = crate::characters::character_by_index(4, 1).unwrap();
        // ramified at 2: V^I = 0
        assert_eq!(
            artin_local_factor(&chi4, 2, Complex64::new(0.7, 0.0)),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(artin_local_data(&chi4, 2).invariant_dim, 0);
        // χ4(5 mod 4) = 1
        let v = artin_local_factor(&chi4, 5, Complex64::new(0.5, 0.0));
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        // trivial character mod 4 has conductor 1: unramified everywhere
        let triv = crate::characters::character_by_index(4, 0).unwrap();
        let t = Complex64::new(0.37, -0.2);
        let v = artin_local_factor(&triv, 3, t);
        assert!((v - (Complex64::new(1.0, 0.0) - t)).norm() < 1e-15);
    }

    #[test]
    fn euler_factor_product_identity() {
        // ∏_χ artin_local_factor(χ, p, x) = (1 - x^f)^r, all m ≤ 30, p ≤ 100
        let grid = [0.31, -0.45, 0.12, 0.6, -0.27];
        for m in 1..=30u64 {
            let mc = canonical_modulus(m);
            let chars = enumerate_characters(mc);
            for p in crate::arith::primes_up_to(100) {
                let s = split_prime(mc, p);
                for &x in &grid {
                    let xx = Complex64::new(x, 0.0);
                    let mut lhs = Complex64::new(1.0, 0.0);
                    for chi in &chars {
                        lhs *= artin_local_factor(chi, p, xx);
                    }
                    let rhs = (1.0 - x.powi(s.f as i32)).powi(s.r as i32);
                    assert!(
                        (lhs - Complex64::new(rhs, 0.0)).norm() < 1e-10,
                        "m={mc} p={p} x={x}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn archimedean_signatures() {
        let chi4 = crate::characters::character_by_index(4, 1).unwrap();
        assert_eq!(archimedean_signature(&chi4, 4), (0, 1));
        for chi in enumerate_characters(5) {
            if chi.parity() == 0 {
                assert_eq!(archimedean_signature(&chi, 5), (1, 0));
            } else {
                assert_eq!(archimedean_signature(&chi, 5), (0, 1));
            }
        }
        // real-place case: trivial representation over Q itself
        let triv = crate::characters::character_by_index(1, 0).unwrap();
        assert_eq!(archimedean_signature(&triv, 1), (1, 0));
    }

    #[test]
    fn conductor_discriminant_product() {
        let expect = [(3u64, 3u64), (4, 4), (5, 125), (7, 16807), (8, 256), (9, 19683), (12, 144)];
        for (m, d) in expect {
            let k = CyclotomicField::new(m);
            assert_eq!(k.abs_discriminant, d, "m = {m}");
            assert_eq!(k.r1 + 2 * k.r2, k.degree);
        }
        // canonicalization: Q(ζ_6) = Q(ζ_3)
        let k = CyclotomicField::new(6);
        assert!(k.canonicalized);
        assert_eq!(k.m, 3);
        assert_eq!(k.abs_discriminant, 3);
    }
}
