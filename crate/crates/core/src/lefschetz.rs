//! Finite symbolic orbit model of a flow on a Galois-covered foliated
//! space.
//!
//! An OrbitModel carries exactly the data the equivariant trace formula
//! consumes: primitive orbit lengths, holonomies, stabilizers (inertia),
//! per-iterate signs, and fixed points with their place types. The
//! statement side sums monodromy traces over unramified orbits only; the
//! proof side enumerates every coset/inertia-labeled curve upstairs and
//! averages over the group, so the ramified cancellation Σ_{u∈H} ρ(u) = 0
//! is exercised numerically rather than assumed.

use crate::error::{Error, Result};
use crate::explicit::TestFunction;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A finite group as a multiplication table; element 0 is the identity.
#[derive(Debug)]
pub struct FiniteGroupSpec {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroupSpec {
    /// Z/n with addition.
    pub fn cyclic(n: usize) -> Arc<Self> {
        assert!(n >= 1);
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        Self::from_raw(n, mul)
    }

    /// Direct product of cyclic groups; elements are mixed-radix indices
    /// with the last factor fastest.
    pub fn product(radices: &[usize]) -> Arc<Self> {
        let n: usize = radices.iter().product();
        assert!(n >= 1);
        let decode = |mut x: usize| -> Vec<usize> {
            let mut t = vec![0; radices.len()];
            for (i, r) in radices.iter().enumerate().rev() {
                t[i] = x % r;
                x /= r;
            }
            t
        };
        let encode = |t: &[usize]| -> usize {
            t.iter()
                .zip(radices)
                .fold(0, |acc, (x, r)| acc * r + x % r)
        };
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ta = decode(a);
                let tb = decode(b);
                let sum: Vec<usize> = ta
                    .iter()
                    .zip(&tb)
                    .zip(radices)
                    .map(|((x, y), r)| (x + y) % r)
                    .collect();
                mul[a * n + b] = encode(&sum);
            }
        }
        Self::from_raw(n, mul)
    }

    /// Arbitrary composition table; validates the group axioms
    /// exhaustively and requires element 0 to be the identity.
    pub fn from_table(mul_table: Vec<Vec<usize>>) -> Result<Arc<Self>> {
        let n = mul_table.len();
        if n == 0 || mul_table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidModel("composition table must be square".into()));
        }
        let mut mul = vec![0; n * n];
        for (a, row) in mul_table.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidModel(format!("entry {v} out of range")));
                }
                mul[a * n + b] = v;
            }
        }
        for a in 0..n {
            if mul[a] != a || mul[a * n] != a {
                return Err(Error::InvalidModel("element 0 must be the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab_c = mul[mul[a * n + b] * n + c];
                    let a_bc = mul[a * n + mul[b * n + c]];
                    if ab_c != a_bc {
                        return Err(Error::InvalidModel(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a * n + b] == 0 && mul[b * n + a] == 0) {
                Some(b) => inv[a] = b,
                None => {
                    return Err(Error::InvalidModel(format!("element {a} has no inverse")))
                }
            }
        }
        Ok(Arc::new(FiniteGroupSpec { order: n, mul, inv }))
    }

    fn from_raw(n: usize, mul: Vec<usize>) -> Arc<Self> {
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).unwrap();
        }
        Arc::new(FiniteGroupSpec { order: n, mul, inv })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k >= 0 { a } else { self.inv(a) };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        if !elements.contains(&0) {
            return false;
        }
        elements.iter().all(|&a| {
            a < self.order
                && elements.contains(&self.inv(a))
                && elements.iter().all(|&b| elements.contains(&self.mul(a, b)))
        })
    }

    pub fn normalizes(&self, g: usize, subgroup: &[usize]) -> bool {
        subgroup
            .iter()
            .all(|&h| subgroup.contains(&self.conjugate(g, h)))
    }

    /// Left coset representatives of a subgroup, ascending.
    pub fn coset_representatives(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if !seen[g] {
                reps.push(g);
                for &h in subgroup {
                    seen[self.mul(g, h)] = true;
                }
            }
        }
        reps
    }

    /// Cyclic subgroup generated by one element.
    pub fn generated_by(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.mul(x, g);
        }
        out.sort_unstable();
        out
    }
}

/// A unitary representation as one matrix per group element.
#[derive(Debug, Clone)]
pub struct FiniteRep {
    pub group: Arc<FiniteGroupSpec>,
    pub dim: usize,
    mats: Vec<DMatrix<Complex64>>,
}

fn mat_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl FiniteRep {
    pub fn trivial(group: Arc<FiniteGroupSpec>, dim: usize) -> Self {
        let mats = (0..group.order())
            .map(|_| DMatrix::identity(dim, dim))
            .collect();
        FiniteRep { group, dim, mats }
    }

    /// One-dimensional representation from its value list.
    pub fn one_dim(group: Arc<FiniteGroupSpec>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidRepresentation(
                "need one value per group element".into(),
            ));
        }
        let mats = values
            .iter()
            .map(|v| DMatrix::from_element(1, 1, *v))
            .collect();
        let rep = FiniteRep {
            group,
            dim: 1,
            mats,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn from_matrices(group: Arc<FiniteGroupSpec>, mats: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if mats.len() != group.order() || mats.is_empty() {
            return Err(Error::InvalidRepresentation(
                "need one matrix per group element".into(),
            ));
        }
        let dim = mats[0].nrows();
        if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::InvalidRepresentation("matrices must share a square shape".into()));
        }
        let rep = FiniteRep { group, dim, mats };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let id = DMatrix::<Complex64>::identity(self.dim, self.dim);
        for a in 0..n {
            let unitary_defect = mat_norm(&(&self.mats[a] * self.mats[a].adjoint() - &id));
            if unitary_defect > 1e-12 {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {a} is not unitary (defect {unitary_defect:.2e})"
                )));
            }
            for b in 0..n {
                let hom_defect =
                    mat_norm(&(&self.mats[a] * &self.mats[b] - &self.mats[self.group.mul(a, b)]));
                if hom_defect > 1e-12 {
                    return Err(Error::InvalidRepresentation(format!(
                        "homomorphism fails at ({a},{b}) with defect {hom_defect:.2e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self, g: usize) -> &DMatrix<Complex64> {
        &self.mats[g]
    }

    pub fn trace(&self, g: usize) -> Complex64 {
        self.mats[g].trace()
    }

    pub fn direct_sum(parts: &[&FiniteRep]) -> Result<Self> {
        let group = parts[0].group.clone();
        let dim: usize = parts.iter().map(|r| r.dim).sum();
        let mut mats = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            let mut off = 0;
            for part in parts {
                if !Arc::ptr_eq(&part.group, &group) && part.group.order() != group.order() {
                    return Err(Error::InvalidRepresentation(
                        "direct sum needs a common group".into(),
                    ));
                }
                m.view_mut((off, off), (part.dim, part.dim))
                    .copy_from(part.matrix(g));
                off += part.dim;
            }
            mats.push(m);
        }
        FiniteRep::from_matrices(group, mats)
    }
}

/// Character values of the product-of-cyclics group built by
/// `FiniteGroupSpec::product(radices)`, with image exponents `exps`.
pub fn product_character(radices: &[usize], exps: &[usize]) -> Vec<Complex64> {
    let n: usize = radices.iter().product();
    (0..n)
        .map(|mut x| {
            let mut angle = 0.0;
            for (i, r) in radices.iter().enumerate().rev() {
                let coord = x % r;
                x /= r;
                angle += 2.0 * PI * (exps[i] % r) as f64 * coord as f64 / *r as f64;
            }
            Complex64::from_polar(1.0, angle)
        })
        .collect()
}

/// Per-orbit sign data ε_{kγ}.
#[derive(Debug, Clone, PartialEq)]
pub enum SignRule {
    /// eq of a direct similitude: every sign is +1
    AllPlus,
    /// explicit per-(k, coset) table
    Table(BTreeMap<i64, SignRow>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignRow {
    Uniform(i8),
    PerCoset(Vec<i8>),
}

/// Place type of a flow fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceType {
    Real,
    Complex,
}

#[derive(Debug, Clone)]
pub struct FixedPointDatum {
    pub place_type: PlaceType,
    /// conjugation model h with h² = identity; complex places only
    pub involution: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct PrimitiveOrbit {
    pub length: f64,
    pub holonomy: usize,
    pub stabilizer: Vec<usize>,
    pub signs: SignRule,
}

impl PrimitiveOrbit {
    pub fn is_ramified(&self) -> bool {
        self.stabilizer.len() > 1
    }

    fn sign_for(&self, orbit_index: usize, k: i64, coset: usize) -> Result<f64> {
        match &self.signs {
            SignRule::AllPlus => Ok(1.0),
            SignRule::Table(table) => match table.get(&k) {
                None => Err(Error::SignTableIncomplete {
                    orbit: orbit_index,
                    k,
                }),
                Some(SignRow::Uniform(s)) => Ok(*s as f64),
                Some(SignRow::PerCoset(v)) => v
                    .get(coset)
                    .map(|s| *s as f64)
                    .ok_or_else(|| Error::InvalidModel(format!(
                        "orbit {orbit_index}: sign row for k={k} misses coset {coset}"
                    ))),
            },
        }
    }
}

/// The full model: group, primitive orbits, fixed points.
#[derive(Debug, Clone)]
pub struct OrbitModel {
    pub group: Arc<FiniteGroupSpec>,
    pub orbits: Vec<PrimitiveOrbit>,
    pub fixed_points: Vec<FixedPointDatum>,
}

impl OrbitModel {
    pub fn validate(&self) -> Result<()> {
        for (i, orbit) in self.orbits.iter().enumerate() {
            if !(orbit.length.is_finite() && orbit.length > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "orbit {i}: length must be positive"
                )));
            }
            if orbit.holonomy >= self.group.order() {
                return Err(Error::InvalidModel(format!("orbit {i}: holonomy out of range")));
            }
            if !self.group.is_subgroup(&orbit.stabilizer) {
                return Err(Error::NotASubgroup(format!("orbit {i} stabilizer")));
            }
            if !self.group.normalizes(orbit.holonomy, &orbit.stabilizer) {
                return Err(Error::InvalidModel(format!(
                    "orbit {i}: holonomy does not normalize the stabilizer"
                )));
            }
            if let SignRule::Table(table) = &orbit.signs {
                let n_cosets = self.group.order() / orbit.stabilizer.len();
                for (k, row) in table {
                    match row {
                        SignRow::Uniform(s) if s.abs() == 1 => {}
                        SignRow::Uniform(_) => {
                            return Err(Error::InvalidModel(format!(
                                "orbit {i}: sign for k={k} must be ±1"
                            )))
                        }
                        SignRow::PerCoset(v) => {
                            if v.len() != n_cosets {
                                return Err(Error::InvalidModel(format!(
                                    "orbit {i}: sign row for k={k} needs {n_cosets} coset entries"
                                )));
                            }
                            if v.iter().any(|s| s.abs() != 1) {
                                return Err(Error::InvalidModel(format!(
                                    "orbit {i}: signs must be ±1"
                                )));
                            }
                            // unramified orbits must carry one common sign
                            if !orbit.is_ramified() && v.windows(2).any(|w| w[0] != w[1]) {
                                return Err(Error::InvalidModel(format!(
                                    "orbit {i}: unramified per-coset signs must agree"
                                )));
                            }
                        }
                    }
                }
            }
        }
        for (i, fp) in self.fixed_points.iter().enumerate() {
            match (fp.place_type, fp.involution) {
                (PlaceType::Real, Some(_)) => {
                    return Err(Error::InvalidModel(format!(
                        "fixed point {i}: real places carry no involution"
                    )))
                }
                (PlaceType::Complex, Some(h)) => {
                    if h >= self.group.order() || self.group.mul(h, h) != 0 {
                        return Err(Error::InvalidModel(format!(
                            "fixed point {i}: involution must square to the identity"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// One fixed-curve instance of the proof-side enumeration.
#[derive(Debug, Clone, Copy)]
pub struct CurveTerm {
    pub orbit: usize,
    pub k: i64,
    pub coset: usize,
    pub stabilizer_element: usize,
    pub sign: f64,
    pub monodromy_trace: Complex64,
    pub length: f64,
}

fn iterate_range(length: f64, lo: f64, hi: f64) -> impl Iterator<Item = i64> {
    let k_pos_max = if hi > 0.0 { (hi / length).floor() as i64 } else { 0 };
    let k_neg_max = if lo < 0.0 { (-lo / length).floor() as i64 } else { 0 };
    (1..=k_pos_max).chain((1..=k_neg_max).map(|k| -k))
}

/// Statement side: unramified primitive orbits only,
/// Σ_γ Σ_{k≥1} l(γ) ( ε_{-kγ} Tr ρ(h₀^{-k}) α(-k l) + ε_{kγ} Tr ρ(h₀^k) α(k l) ).
pub fn statement_side(
    model: &OrbitModel,
    rep: &FiniteRep,
    alpha: &TestFunction,
) -> Result<Complex64> {
    alpha.require_avoids_zero()?;
    model.validate()?;
    let (lo, hi) = alpha.support();
    let mut acc = c64(0.0, 0.0);
    for (i, orbit) in model.orbits.iter().enumerate() {
        if orbit.is_ramified() {
            continue;
        }
        for k in iterate_range(orbit.length, lo, hi) {
            let sign = orbit.sign_for(i, k, 0)?;
            let tr = rep.trace(model.group.pow(orbit.holonomy, k));
            acc += orbit.length * sign * tr * alpha.eval(k as f64 * orbit.length);
        }
    }
    Ok(acc)
}

/// Every coset/inertia-labeled fixed curve of the proof-side enumeration
/// over the support of α.
pub fn proof_side_curves(
    model: &OrbitModel,
    rep: &FiniteRep,
    alpha: &TestFunction,
) -> Result<Vec<CurveTerm>> {
    alpha.require_avoids_zero()?;
    model.validate()?;
    let (lo, hi) = alpha.support();
    let group = &model.group;
    let mut out = Vec::new();
    for (i, orbit) in model.orbits.iter().enumerate() {
        let reps = group.coset_representatives(&orbit.stabilizer);
        for k in iterate_range(orbit.length, lo, hi) {
            let hk = group.pow(orbit.holonomy, k);
            for (ci, &l) in reps.iter().enumerate() {
                let sign = orbit.sign_for(i, k, ci)?;
                for &u in &orbit.stabilizer {
                    // the curve closing under g = l h₀^k u l^{-1} carries
                    // monodromy ρ(g)
                    let g = group.mul(group.mul(l, group.mul(hk, u)), group.inv(l));
                    out.push(CurveTerm {
                        orbit: i,
                        k,
                        coset: ci,
                        stabilizer_element: u,
                        sign,
                        monodromy_trace: rep.trace(g),
                        length: orbit.length,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Proof side: (1/|G|) Σ over all fixed-curve instances of
/// l(γ) · ε · Tr(monodromy) · α(k l(γ)).
pub fn proof_side(model: &OrbitModel, rep: &FiniteRep, alpha: &TestFunction) -> Result<Complex64> {
    let curves = proof_side_curves(model, rep, alpha)?;
    let mut acc = c64(0.0, 0.0);
    for c in &curves {
        acc += c.length * c.sign * c.monodromy_trace * alpha.eval(c.k as f64 * c.length);
    }
    Ok(acc / model.group.order() as f64)
}

/// P = (1/|H|) Σ_{u∈H} ρ(u), the projector onto the H-invariants.
/// Idempotency and commutation with every normalizing element are checked.
pub fn inertia_projector(rep: &FiniteRep, subgroup: &[usize]) -> Result<DMatrix<Complex64>> {
    if !rep.group.is_subgroup(subgroup) {
        return Err(Error::NotASubgroup("inertia projector input".into()));
    }
    let mut p = DMatrix::<Complex64>::zeros(rep.dim, rep.dim);
    for &u in subgroup {
        p += rep.matrix(u);
    }
    p /= c64(subgroup.len() as f64, 0.0);
    let idem = mat_norm(&(&p * &p - &p));
    if idem > 1e-12 {
        return Err(Error::InvalidRepresentation(format!(
            "projector not idempotent (defect {idem:.2e})"
        )));
    }
    for g in 0..rep.group.order() {
        if rep.group.normalizes(g, subgroup) {
            let comm = mat_norm(&(&p * rep.matrix(g) - rep.matrix(g) * &p));
            if comm > 1e-12 {
                return Err(Error::InvalidRepresentation(format!(
                    "projector does not commute with normalizing element {g}"
                )));
            }
        }
    }
    Ok(p)
}

/// Fixed-point factor of the transversal trace formula:
/// 1/|1-e^{-2t}| at a real place, 1/|1-e^{-t}| at a complex place.
pub fn gs_fixed_point_factor(place: PlaceType, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(
            "fixed-point factor needs t ≠ 0 (transversality)".into(),
        ));
    }
    let rate = match place {
        PlaceType::Real => 2.0,
        PlaceType::Complex => 1.0,
    };
    // expm1 keeps full relative accuracy near t = 0
    Ok(1.0 / (-rate * t).exp_m1().abs())
}

/// Averaged two-sheet factor
/// (1/2)(1/(1-e^{-t}) + ε/(1+e^{-t})) for t > 0 and its e^t-weighted
/// mirror for t < 0; ε is the involution character value.
pub fn averaged_fixed_point_factor(t: f64, involution_character: Complex64) -> Result<Complex64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument("averaged factor needs t ≠ 0".into()));
    }
    if (involution_character.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(
            "involution character must have modulus 1".into(),
        ));
    }
    let e = involution_character;
    if t > 0.0 {
        let emt = (-t).exp();
        Ok(0.5 * (c64(1.0 / -(-t).exp_m1(), 0.0) + e / (1.0 + emt)))
    } else {
        let et = t.exp();
        Ok(0.5 * et * (c64(1.0 / -t.exp_m1(), 0.0) + e / (1.0 + et)))
    }
}

/// The real-place weight of the Dedekind-formula density at t.
pub fn efk_real_place_weight(t: f64) -> f64 {
    if t > 0.0 {
        1.0 / -(-2.0 * t).exp_m1()
    } else {
        t.exp() / -(2.0 * t).exp_m1()
    }
}

/// Comparison of the raw fixed-point factor against the formula weight
/// at a real place; they disagree for t < 0 and the averaged factor
/// repairs the match.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RealPlaceRiddle {
    pub t: f64,
    pub gs_factor: f64,
    pub efk_weight: f64,
    pub averaged: f64,
    pub raw_matches_efk: bool,
    pub averaged_matches_efk: bool,
}

pub fn real_place_riddle(t: f64) -> Result<RealPlaceRiddle> {
    let gs = gs_fixed_point_factor(PlaceType::Real, t)?;
    let efk = efk_real_place_weight(t);
    let averaged = averaged_fixed_point_factor(t, c64(1.0, 0.0))?.re;
    Ok(RealPlaceRiddle {
        t,
        gs_factor: gs,
        efk_weight: efk,
        averaged,
        raw_matches_efk: (gs - efk).abs() <= 1e-12,
        averaged_matches_efk: (averaged - efk).abs() <= 1e-12,
    })
}

/// Matrix exponential by scaling and squaring with a Taylor kernel;
/// adequate for the small well-scaled operators used here.
pub fn matrix_exp(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let norm = mat_norm(m) * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / c64(2f64.powi(squarings as i32), 0.0);
    let mut acc = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for j in 1..=24 {
        term = &term * &scaled / c64(j as f64, 0.0);
        acc += &term;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// Trace of e^{tθ} on the group-invariant subspace of W against the
/// expected d·e^{tz}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvariantTraceReport {
    pub dim: usize,
    pub residual: f64,
}

/// Checks Tr(e^{tθ}; (1/|G|)Σ_h h·W) = d e^{tz} for θ commuting with the
/// action and θ - z·Id nilpotent on the invariants (verified by powering
/// up to dim W).
pub fn invariant_trace_check(
    rep: &FiniteRep,
    theta: &DMatrix<Complex64>,
    z: Complex64,
    t: f64,
) -> Result<InvariantTraceReport> {
    let n = rep.dim;
    if theta.nrows() != n || theta.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "operator must be {n}x{n} to act on W"
        )));
    }
    let scale = 1.0 + mat_norm(theta);
    for g in 0..rep.group.order() {
        let defect = mat_norm(&(theta * rep.matrix(g) - rep.matrix(g) * theta));
        if defect > 1e-10 * scale {
            return Err(Error::NonCommuting(defect));
        }
    }
    let all: Vec<usize> = (0..rep.group.order()).collect();
    let p = inertia_projector(rep, &all)?;
    let dim = p.trace().re.round();
    if (p.trace().re - dim).abs() > 1e-10 || p.trace().im.abs() > 1e-10 {
        return Err(Error::InvalidRepresentation(
            "projector trace is not a clean integer".into(),
        ));
    }
    let dim = dim as usize;
    // nilpotency of (θ - z) restricted to Im P: (θ - z)P powered to dim W
    let id = DMatrix::<Complex64>::identity(n, n);
    let nil = (theta - &id * z) * &p;
    let mut power = id.clone();
    for _ in 0..n {
        power = &power * &nil;
    }
    let nil_defect = mat_norm(&power);
    if nil_defect > 1e-8 * scale.powi(n as i32) {
        return Err(Error::NotNilpotent(nil_defect));
    }
    let exp_t_theta = matrix_exp(&(theta * c64(t, 0.0)));
    let trace_on_invariants = (&exp_t_theta * &p).trace();
    let expected = c64(dim as f64, 0.0) * (z * t).exp();
    Ok(InvariantTraceReport {
        dim,
        residual: (trace_on_invariants - expected).norm(),
    })
}

/// 1/|det A|: the factor picked up by a Dirac mass under a linear change
/// of variables.
pub fn dirac_jacobian_factor(a: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::InvalidArgument("need a square matrix".into()));
    }
    let det = a.clone().lu().determinant();
    let scale = a.iter().map(|x| x.abs()).fold(1.0_f64, f64::max);
    if det.abs() < 1e-12 * scale.powi(a.nrows() as i32) {
        return Err(Error::SingularMatrix(det.abs()));
    }
    Ok(1.0 / det.abs())
}

/// Randomized abelian orbit model plus a 1-dim representation nontrivial
/// on every nontrivial stabilizer, fit for the trace-identity suites.
pub fn random_model<R: Rng>(rng: &mut R) -> (OrbitModel, FiniteRep) {
    let shapes: [&[usize]; 10] = [
        &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[2, 2], &[2, 4], &[2, 2, 2],
    ];
    let radices = shapes[rng.gen_range(0..shapes.len())];
    let group = FiniteGroupSpec::product(radices);
    // a character nontrivial somewhere
    let values = loop {
        let exps: Vec<usize> = radices.iter().map(|&r| rng.gen_range(0..r)).collect();
        if exps.iter().zip(radices).any(|(e, r)| e % r != 0) {
            break product_character(radices, &exps);
        }
    };
    let rep = FiniteRep::one_dim(group.clone(), values.clone()).expect("valid character");
    // stabilizer candidates: cyclic subgroups where the character is
    // nontrivial, plus the trivial subgroup
    let mut ramified_choices: Vec<Vec<usize>> = Vec::new();
    for g in 1..group.order() {
        let h = group.generated_by(g);
        if h.iter().any(|&u| (values[u] - c64(1.0, 0.0)).norm() > 1e-9) {
            ramified_choices.push(h);
        }
    }
    let n_orbits = rng.gen_range(1..=4);
    let mut orbits = Vec::with_capacity(n_orbits);
    for _ in 0..n_orbits {
        let stabilizer = if !ramified_choices.is_empty() && rng.gen_bool(0.5) {
            ramified_choices[rng.gen_range(0..ramified_choices.len())].clone()
        } else {
            vec![0]
        };
        orbits.push(PrimitiveOrbit {
            length: rng.gen_range(0.3..2.0),
            holonomy: rng.gen_range(0..group.order()),
            stabilizer,
            signs: SignRule::AllPlus,
        });
    }
    (
        OrbitModel {
            group,
            orbits,
            fixed_points: vec![],
        },
        rep,
    )
}

// ---- JSON schema ----

#[derive(Debug, Serialize, Deserialize)]
struct OrbitModelJson {
    group: GroupJson,
    orbits: Vec<OrbitJson>,
    #[serde(default)]
    fixed_points: Vec<FixedPointJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
enum GroupJson {
    Cyclic(usize),
    Product(Vec<usize>),
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Serialize, Deserialize)]
struct OrbitJson {
    length: f64,
    holonomy: usize,
    stabilizer: Vec<usize>,
    #[serde(default)]
    signs: SignsJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SignsJson {
    Named(String),
    Table { table: Vec<SignEntryJson> },
}

impl Default for SignsJson {
    fn default() -> Self {
        SignsJson::Named("all_plus".into())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SignEntryJson {
    k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coset_signs: Option<Vec<i8>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FixedPointJson {
    place_type: PlaceType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    involution: Option<usize>,
}

impl OrbitModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: OrbitModelJson = serde_json::from_str(text)?;
        let group = match raw.group {
            GroupJson::Cyclic(n) => FiniteGroupSpec::cyclic(n),
            GroupJson::Product(radices) => FiniteGroupSpec::product(&radices),
            GroupJson::Table(table) => FiniteGroupSpec::from_table(table)?,
        };
        let orbits = raw
            .orbits
            .into_iter()
            .map(|o| {
                let signs = match o.signs {
                    SignsJson::Named(name) if name == "all_plus" => Ok(SignRule::AllPlus),
                    SignsJson::Named(other) => Err(Error::Parse(format!(
                        "unknown sign rule {other:?}; expected \"all_plus\" or a table"
                    ))),
                    SignsJson::Table { table } => {
                        let mut map = BTreeMap::new();
                        for entry in table {
                            let row = match (entry.sign, entry.coset_signs) {
                                (Some(s), None) => SignRow::Uniform(s),
                                (None, Some(v)) => SignRow::PerCoset(v),
                                _ => {
                                    return Err(Error::Parse(
                                        "sign entry needs exactly one of sign/coset_signs".into(),
                                    ))
                                }
                            };
                            map.insert(entry.k, row);
                        }
                        Ok(SignRule::Table(map))
                    }
                }?;
                Ok(PrimitiveOrbit {
                    length: o.length,
                    holonomy: o.holonomy,
                    stabilizer: o.stabilizer,
                    signs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let fixed_points = raw
            .fixed_points
            .into_iter()
            .map(|fp| FixedPointDatum {
                place_type: fp.place_type,
                involution: fp.involution,
            })
            .collect();
        let model = OrbitModel {
            group,
            orbits,
            fixed_points,
        };
        model.validate()?;
        Ok(model)
    }
}

/// The two-orbit ladder cover: Z/2 symmetry, one orbit with nontrivial
/// holonomy, one ramified orbit fixed by the whole group, and the two
/// rotation-axis fixed points.
pub fn jacob_ladder_model() -> OrbitModel {
    let group = FiniteGroupSpec::cyclic(2);
    OrbitModel {
        group,
        orbits: vec![
            PrimitiveOrbit {
                length: (2.0f64).ln(),
                holonomy: 1,
                stabilizer: vec![0],
                signs: SignRule::AllPlus,
            },
            PrimitiveOrbit {
                length: (3.0f64).ln(),
                holonomy: 0,
                stabilizer: vec![0],
                signs: SignRule::AllPlus,
            },
            PrimitiveOrbit {
                length: (5.0f64).ln(),
                holonomy: 0,
                stabilizer: vec![0, 1],
                signs: SignRule::AllPlus,
            },
        ],
        fixed_points: vec![
            FixedPointDatum {
                place_type: PlaceType::Real,
                involution: None,
            },
            FixedPointDatum {
                place_type: PlaceType::Real,
                involution: None,
            },
        ],
    }
}

/// The Gaussian-field cover: orbits mirror the splitting of 2, 3, 5 in
/// Q(i) (ramified, inert, split) and the single complex place carries the
/// conjugation involution.
pub fn gauss_qi_model() -> OrbitModel {
    let group = FiniteGroupSpec::cyclic(2);
    OrbitModel {
        group,
        orbits: vec![
            PrimitiveOrbit {
                length: (2.0f64).ln(),
                holonomy: 0,
                stabilizer: vec![0, 1],
                signs: SignRule::AllPlus,
            },
            PrimitiveOrbit {
                length: (3.0f64).ln(),
                holonomy: 1,
                stabilizer: vec![0],
                signs: SignRule::AllPlus,
            },
            PrimitiveOrbit {
                length: (5.0f64).ln(),
                holonomy: 0,
                stabilizer: vec![0],
                signs: SignRule::AllPlus,
            },
        ],
        fixed_points: vec![FixedPointDatum {
            place_type: PlaceType::Complex,
            involution: Some(1),
        }],
    }
}
