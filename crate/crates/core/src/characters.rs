//! Dirichlet characters mod m: construction, conductor, parity, Gauss sums.
//!
//! The unit group (Z/mZ)* is decomposed into cyclic factors (CRT on prime
//! powers, with the usual {-1, 3} pair for 2^e, e ≥ 3). A character is a
//! tuple of exponents against those generators, so character values are
//! exact roots of unity: χ(n) = e^{2πi k/D} is stored as the integer k
//! modulo the group exponent D. Group-law identities can therefore be
//! tested with integer arithmetic, no floating point involved.

use crate::arith;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// Cyclic decomposition of (Z/mZ)* with a full discrete-log table.
#[derive(Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    /// lcm of the generator orders; common denominator for value exponents.
    pub exponent: u64,
    dlog: HashMap<u64, Vec<u64>>,
}

impl UnitGroup {
    pub fn new(m: u64) -> Arc<Self> {
        assert!(m >= 1, "modulus must be positive");
        assert!(m <= 1_000_000, "unit group table capped at m = 10^6");
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for (p, e) in arith::factorize(m) {
            let q = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        generators.push(lift(3, q, m));
                        orders.push(2);
                    }
                    _ => {
                        generators.push(lift(q - 1, q, m));
                        orders.push(2);
                        generators.push(lift(3, q, m));
                        orders.push(q / 4);
                    }
                }
            } else {
                generators.push(lift(arith::primitive_root(q), q, m));
                orders.push(arith::euler_phi(q));
            }
        }
        let exponent = orders.iter().fold(1u64, |acc, &d| lcm(acc, d));
        // Enumerate every exponent tuple once; φ(m) entries.
        let mut dlog = HashMap::new();
        let mut tuple = vec![0u64; orders.len()];
        loop {
            let mut x = 1u64 % m;
            for (g, e) in generators.iter().zip(&tuple) {
                x = x * arith::pow_mod(*g, *e, m) % m;
            }
            dlog.insert(x, tuple.clone());
            if !increment(&mut tuple, &orders) {
                break;
            }
        }
        debug_assert_eq!(dlog.len() as u64, arith::euler_phi(m));
        Arc::new(UnitGroup {
            modulus: m,
            generators,
            orders,
            exponent,
            dlog,
        })
    }

    /// Exponent tuple of a residue, or None off the units.
    pub fn discrete_log(&self, n: u64) -> Option<&Vec<u64>> {
        self.dlog.get(&(n % self.modulus))
    }

    pub fn units(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.dlog.keys().copied().collect();
        v.sort_unstable();
        v
    }
}

fn lift(g_local: u64, q: u64, m: u64) -> u64 {
    if q == m {
        return g_local % m;
    }
    arith::crt(&[(g_local % q, q), (1, m / q)])
}

fn lcm(a: u64, b: u64) -> u64 {
    a / arith::gcd(a, b) * b
}

fn increment(tuple: &mut [u64], radices: &[u64]) -> bool {
    for i in (0..tuple.len()).rev() {
        tuple[i] += 1;
        if tuple[i] < radices[i] {
            return true;
        }
        tuple[i] = 0;
    }
    false
}

/// A Dirichlet character mod m with exact root-of-unity values.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    /// Image exponents: χ(g_i) = e^{2πi exps[i]/orders[i]}.
    exps: Vec<u64>,
    conductor: u64,
    parity: u8,
}

impl DirichletCharacter {
    fn build(group: Arc<UnitGroup>, exps: Vec<u64>) -> Self {
        let mut chi = DirichletCharacter {
            group,
            exps,
            conductor: 0,
            parity: 0,
        };
        chi.conductor = chi.compute_conductor();
        let m = chi.modulus();
        chi.parity = if m <= 2 {
            0
        } else {
            match chi.unit_exponent(m - 1) {
                Some(0) => 0,
                Some(k) if 2 * k == chi.group.exponent => 1,
                other => unreachable!("χ(-1) must be ±1, exponent {other:?}"),
            }
        };
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// q ∈ {0,1} with χ(-1) = (-1)^q.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn generator_images(&self) -> &[u64] {
        &self.exps
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    /// Exponent k with χ(class of n) = e^{2πi k/D} for n a unit residue,
    /// None otherwise. This is the residue-class value; it treats the
    /// class itself, so mod 1 every integer (including 0) is the unit.
    pub fn unit_exponent(&self, n: u64) -> Option<u64> {
        let d = self.group.exponent;
        let tuple = self.group.discrete_log(n)?;
        let mut k = 0u64;
        for ((a, e), ord) in self.exps.iter().zip(tuple).zip(&self.group.orders) {
            k = (k + (a * e) % ord * (d / ord)) % d;
        }
        Some(k)
    }

    /// χ extended to Z: zero at 0 and off the units, otherwise the class value.
    pub fn value_exponent(&self, n: i64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        let m = self.modulus() as i64;
        let r = n.rem_euclid(m) as u64;
        self.unit_exponent(r)
    }

    /// χ(n) as a complex number (exactly 0 off the units and at 0).
    pub fn value(&self, n: i64) -> Complex64 {
        match self.value_exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.group.exponent),
        }
    }

    /// χ(n)^p as a complex number, exponent arithmetic done on integers.
    pub fn value_pow(&self, n: i64, p: i64) -> Complex64 {
        match self.value_exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => {
                let d = self.group.exponent as i64;
                let e = ((k as i64) * p).rem_euclid(d) as u64;
                root_of_unity(e, self.group.exponent)
            }
        }
    }

    /// Pointwise product; both characters must share the modulus.
    pub fn product(&self, other: &DirichletCharacter) -> DirichletCharacter {
        assert_eq!(self.modulus(), other.modulus(), "modulus mismatch");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.orders)
            .map(|((a, b), ord)| (a + b) % ord)
            .collect();
        DirichletCharacter::build(self.group.clone(), exps)
    }

    /// Complex conjugate character (the group inverse).
    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(a, ord)| (ord - a) % ord)
            .collect();
        DirichletCharacter::build(self.group.clone(), exps)
    }

    /// Smallest divisor f of m with χ trivial on every unit ≡ 1 mod f.
    fn compute_conductor(&self) -> u64 {
        let m = self.modulus();
        for f in arith::divisors(m) {
            let factors_through = self
                .group
                .dlog
                .keys()
                .filter(|&&x| x % f == 1 % f)
                .all(|&x| self.unit_exponent(x) == Some(0));
            if factors_through {
                return f;
            }
        }
        m
    }

    /// Value χ*(n) of the inducing primitive character mod f at n coprime
    /// to f: lift n to a residue t mod m with t ≡ n on the primes of f and
    /// t ≡ 1 on the remaining primes of m, then evaluate χ(t).
    pub fn primitive_value_exponent(&self, n: i64) -> Option<u64> {
        let f = self.conductor;
        if n == 0 {
            return if f == 1 { Some(0) } else { None };
        }
        let r = n.rem_euclid(f as i64) as u64;
        if arith::gcd(r, f) != 1 {
            return None;
        }
        let mut congruences = Vec::new();
        for (p, e) in arith::factorize(self.modulus()) {
            let q = p.pow(e);
            if f % p == 0 {
                congruences.push((r % q, q));
            } else {
                congruences.push((1, q));
            }
        }
        let t = if congruences.is_empty() {
            0
        } else {
            arith::crt(&congruences)
        };
        self.unit_exponent(t % self.modulus().max(1))
    }

    pub fn primitive_value(&self, n: i64) -> Complex64 {
        match self.primitive_value_exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.group.exponent),
        }
    }

    /// χ*(n)^p for the inducing primitive character.
    pub fn primitive_value_pow(&self, n: i64, p: i64) -> Complex64 {
        match self.primitive_value_exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => {
                let d = self.group.exponent as i64;
                let e = ((k as i64) * p).rem_euclid(d) as u64;
                root_of_unity(e, self.group.exponent)
            }
        }
    }

    /// The primitive character mod f(χ) inducing χ.
    pub fn induced_primitive(&self) -> DirichletCharacter {
        let f = self.conductor;
        if f == self.modulus() {
            return self.clone();
        }
        let group = UnitGroup::new(f);
        for chi in enumerate_characters_on(&group) {
            let matches = self
                .group
                .dlog
                .keys()
                .all(|&x| self.unit_exponent(x) == map_exponent(&chi, x, self.group.exponent));
            if matches {
                return chi;
            }
        }
        unreachable!("inducing primitive character must exist")
    }

    /// Position of this character in `enumerate_characters(m)`.
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for (e, ord) in self.exps.iter().zip(&self.group.orders) {
            idx = idx * (*ord as usize) + *e as usize;
        }
        idx
    }

    pub fn descriptor(&self) -> CharacterDescriptor {
        CharacterDescriptor {
            modulus: self.modulus(),
            conductor: self.conductor,
            parity: self.parity,
            generator_images: self.exps.clone(),
            primitive: self.is_primitive(),
        }
    }
}

/// χ' evaluated at x, rescaled onto denominator d, or None off units of f.
fn map_exponent(chi: &DirichletCharacter, x: u64, d: u64) -> Option<u64> {
    let k = chi.unit_exponent(x % chi.modulus().max(1))?;
    Some(k * (d / chi.group.exponent) % d)
}

/// e^{2πi k/d}, exact on quarter turns so that ±1 and ±i come out clean.
pub fn root_of_unity(k: u64, d: u64) -> Complex64 {
    let k = k % d;
    if (4 * k) % d == 0 {
        return match (4 * k) / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * PI * (k as f64) / (d as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// JSON-facing view of a character.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterDescriptor {
    pub modulus: u64,
    pub conductor: u64,
    pub parity: u8,
    pub generator_images: Vec<u64>,
    pub primitive: bool,
}

fn enumerate_characters_on(group: &Arc<UnitGroup>) -> Vec<DirichletCharacter> {
    let mut out = Vec::new();
    let mut tuple = vec![0u64; group.orders.len()];
    loop {
        out.push(DirichletCharacter::build(group.clone(), tuple.clone()));
        if !increment(&mut tuple, &group.orders) {
            break;
        }
    }
    out.sort_by_key(|c| c.index());
    out
}

/// All φ(m) Dirichlet characters mod m, ordered by exponent tuple
/// (index 0 is the trivial character).
pub fn enumerate_characters(m: u64) -> Vec<DirichletCharacter> {
    enumerate_characters_on(&UnitGroup::new(m))
}

/// Character by enumeration index.
pub fn character_by_index(m: u64, index: usize) -> Result<DirichletCharacter> {
    let chars = enumerate_characters(m);
    chars.get(index).cloned().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "character index {index} out of range for modulus {m} ({} characters)",
            arith::euler_phi(m)
        ))
    })
}

/// Primitivity via the divisor criterion: for every proper divisor m' of m
/// (including 1) some a ≡ 1 mod m', coprime to m, has χ(a) ≠ 1. Excluding
/// m' = m is forced (the condition is vacuous there); excluding m' = 1
/// would misclassify trivial characters of prime modulus, so 1 stays in.
pub fn is_primitive_by_criterion(chi: &DirichletCharacter) -> bool {
    let m = chi.modulus();
    for mp in arith::divisors(m) {
        if mp == m {
            continue;
        }
        let witness = (1..=m)
            .filter(|&a| arith::gcd(a, m) == 1 && a % mp == 1 % mp)
            .any(|a| chi.unit_exponent(a) != Some(0));
        if !witness {
            return false;
        }
    }
    true
}

/// Gauss sum τ(χ) = Σ_{a=0}^{m-1} χ(a) e^{2πia/m}, evaluated on residue
/// classes (so the modulus-1 sum is the single unit class and equals 1).
#[derive(Debug, Clone)]
pub struct GaussSum {
    pub value: Complex64,
    pub modulus: u64,
}

pub fn gauss_sum(chi: &DirichletCharacter) -> GaussSum {
    let m = chi.modulus();
    let d = chi.group.exponent;
    let mut value = Complex64::new(0.0, 0.0);
    for a in 0..m {
        if let Some(k) = chi.unit_exponent(a) {
            let phase = 2.0 * PI * (a as f64) / (m as f64);
            value += root_of_unity(k, d) * Complex64::new(phase.cos(), phase.sin());
        }
    }
    GaussSum { value, modulus: m }
}

/// W(χ) = τ(χ) / (i^q √m) for primitive nontrivial χ; |W| = 1.
pub fn root_number(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::ImprimitiveCharacter {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter(chi.modulus()));
    }
    let tau = gauss_sum(chi).value;
    let iq = match chi.parity() {
        0 => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let w = tau / (iq * (chi.modulus() as f64).sqrt());
    debug_assert!((w.norm() - 1.0).abs() < 1e-10, "|W| = {}", w.norm());
    Ok(w)
}
