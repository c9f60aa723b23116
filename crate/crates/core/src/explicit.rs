//! Both sides of the explicit formulas, driven by compactly supported
//! bump test functions.
//!
//! Spectral sides pair Φ(s) = ∫ e^{st} α(t) dt against certified zero
//! lists (plus pole terms where the source has poles); geometric sides
//! are sieved prime-power sums plus archimedean integrals. Conjugate
//! zero pairs are combined first and sums run in a fixed ascending-height
//! order, so truncating a list at a lower height reproduces the exact
//! partial sum.

use crate::arith::primes_up_to;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numberfield::{
    archimedean_signature, artin_frobenius_trace, canonical_modulus, split_prime,
    CyclotomicField,
};
use crate::quadrature;
use crate::zeros::ZeroList;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Smooth bump α(t) = scale · e^{-1/(1-u²)}, u = (t-center)/width,
/// supported on [center-width, center+width].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
    pub scale: f64,
}

impl TestFunction {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if width <= 0.0 || !width.is_finite() || !center.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bump needs finite center and positive width, got ({center}, {width})"
            )));
        }
        Ok(TestFunction {
            center,
            width,
            scale: 1.0,
        })
    }

    pub fn with_scale(center: f64, width: f64, scale: f64) -> Result<Self> {
        let mut b = Self::new(center, width)?;
        b.scale = scale;
        Ok(b)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        self.scale * (-1.0 / (1.0 - u * u)).exp()
    }

    pub fn require_avoids_zero(&self) -> Result<()> {
        let (lo, hi) = self.support();
        if lo < 0.0 && hi > 0.0 {
            return Err(Error::SupportContainsZero { lo, hi });
        }
        Ok(())
    }

    pub fn require_positive_support(&self) -> Result<()> {
        let (lo, hi) = self.support();
        if lo < 0.0 {
            return Err(Error::SupportNotPositive { lo, hi });
        }
        Ok(())
    }
}

/// Φ(s) = ∫ e^{st} α(t) dt by adaptive panels over the support.
pub fn phi_transform(alpha: &TestFunction, s: Complex64) -> Complex64 {
    phi_transform_with_error(alpha, s).0
}

pub fn phi_transform_with_error(alpha: &TestFunction, s: Complex64) -> (Complex64, f64) {
    let (lo, hi) = alpha.support();
    let magnitude = (s.re * lo).exp().max((s.re * hi).exp());
    let tol = 1e-14 * (magnitude * alpha.scale.abs() * 2.0 * alpha.width).max(1e-30);
    quadrature::integrate_complex(|t| (s * t).exp() * alpha.eval(t), lo, hi, tol)
}

/// Which explicit formula a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaId {
    Ef,
    Efchi,
    Efk,
    Artin,
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FormulaId::Ef => "ef",
            FormulaId::Efchi => "efchi",
            FormulaId::Efk => "efk",
            FormulaId::Artin => "artin",
        };
        write!(f, "{s}")
    }
}

/// Two-sided evaluation of one formula.
#[derive(Debug, Clone)]
pub struct FormulaReport {
    pub formula: FormulaId,
    pub spectral: Complex64,
    pub geometric: Complex64,
    pub residual: f64,
    pub height: f64,
    pub prime_bound: u64,
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub bump: (f64, f64),
    /// Φ at each pole of the source, already included in `spectral`.
    /// Structurally empty for the pole-free formulas.
    pub pole_terms: Vec<Complex64>,
    /// second spectral route where the formula has one (the factor-
    /// multiplicity form of the Artin identity)
    pub spectral_alt: Option<Complex64>,
}

impl FormulaReport {
    fn finish(mut self) -> Self {
        self.residual = (self.spectral - self.geometric).norm();
        self
    }
}

fn require_source(zeros: &ZeroList, expected: &str) -> Result<()> {
    if zeros.source != expected {
        return Err(Error::SourceMismatch {
            expected: expected.to_string(),
            found: zeros.source.clone(),
        });
    }
    Ok(())
}

/// Σ over the stored zeros of mult·Φ(ρ), conjugate pairs combined first,
/// ascending height order.
fn phi_sum_over_zeros(zeros: &ZeroList, alpha: &TestFunction) -> Complex64 {
    if zeros.conjugate_paired {
        let mut acc = c64(0.0, 0.0);
        for e in zeros.upper() {
            let phi = phi_transform(alpha, e.location);
            acc += e.multiplicity as f64 * 2.0 * phi.re;
        }
        // unpaired real-axis zeros would land here; none at desk scale
        for e in zeros.entries.iter().filter(|e| e.location.im == 0.0) {
            acc += e.multiplicity as f64 * phi_transform(alpha, e.location);
        }
        acc
    } else {
        let mut ordered: Vec<_> = zeros.entries.iter().collect();
        ordered.sort_by(|a, b| {
            a.location
                .im
                .abs()
                .total_cmp(&b.location.im.abs())
                .then(a.location.im.total_cmp(&b.location.im))
        });
        ordered
            .iter()
            .map(|e| e.multiplicity as f64 * phi_transform(alpha, e.location))
            .sum()
    }
}

/// Empirical spectral tail: max |Φ(1/2+it)| sampled on [T, 2T] times the
/// zero-density increment heuristic 2 (T/2π) log(T/2π).
fn spectral_tail_estimate(alpha: &TestFunction, t: f64) -> f64 {
    let mut max_phi: f64 = 0.0;
    for k in 0..=16 {
        let tt = t + t * k as f64 / 16.0;
        max_phi = max_phi.max(phi_transform(alpha, c64(0.5, tt)).norm());
    }
    let x = (t / (2.0 * PI)).max(1.1);
    max_phi * 2.0 * x * x.ln()
}

/// Φ(0) + Φ(1) - Σ_ρ Φ(ρ) over a ζ̂ zero list.
pub fn spectral_side_ef(zeros: &ZeroList, alpha: &TestFunction) -> Result<Complex64> {
    require_source(zeros, "zeta")?;
    let pole_part = phi_transform(alpha, c64(0.0, 0.0)) + phi_transform(alpha, c64(1.0, 0.0));
    Ok(pole_part - phi_sum_over_zeros(zeros, alpha))
}

/// W_∞(α) = α(0) log π + ∫_0^∞ [ (α(t) + e^{-t} α(-t))/(1-e^{-2t})
/// - α(0) e^{-2t}/t ] dt. The integrand has the finite limit 5α(0)/2 at
/// t = 0; below t = 1e-3 a series expansion replaces the cancelling pair.
pub fn archimedean_w_infinity(alpha: &TestFunction) -> (f64, f64) {
    let (lo, hi) = alpha.support();
    let a0 = alpha.eval(0.0);
    if a0 == 0.0 {
        // only the two support pieces contribute
        let mut value = 0.0;
        let mut err = 0.0;
        let pos = (lo.max(0.0), hi.max(0.0));
        if pos.1 > pos.0 {
            let (v, e) = quadrature::integrate(
                |t| alpha.eval(t) / (1.0 - (-2.0 * t).exp()),
                pos.0,
                pos.1,
                1e-12,
            );
            value += v;
            err += e;
        }
        let neg = ((-hi).max(0.0), (-lo).max(0.0));
        if neg.1 > neg.0 {
            let (v, e) = quadrature::integrate(
                |t| (-t).exp() * alpha.eval(-t) / (1.0 - (-2.0 * t).exp()),
                neg.0,
                neg.1,
                1e-12,
            );
            value += v;
            err += e;
        }
        return (value, err);
    }
    let integrand = |t: f64| -> f64 {
        (alpha.eval(t) + (-t).exp() * alpha.eval(-t)) / (1.0 - (-2.0 * t).exp())
            - a0 * (-2.0 * t).exp() / t
    };
    let upper = hi.abs().max(lo.abs()).max(25.0);
    let t0 = 1e-3;
    let h = 1e-4;
    let b = (alpha.eval(h) - alpha.eval(-h)) / (2.0 * h);
    let c = (alpha.eval(h) - 2.0 * a0 + alpha.eval(-h)) / (h * h);
    // f(t) = 5a/2 + t((b+c)/2 - 23a/12) + t²((b+c)/4 + 4a/3) + O(t³)
    let head = 2.5 * a0 * t0
        + ((b + c) / 2.0 - 23.0 * a0 / 12.0) * t0 * t0 / 2.0
        + ((b + c) / 4.0 + 4.0 * a0 / 3.0) * t0.powi(3) / 3.0;
    let (body, err) = quadrature::integrate(integrand, t0, upper, 1e-12);
    (a0 * PI.ln() + head + body, err)
}

/// Sieved prime-power sum of the ζ̂ formula plus W_∞(α):
/// Σ_p log p ( Σ_{k≥1} α(k log p) + Σ_{k≤-1} p^k α(k log p) ).
pub fn geometric_side_ef(alpha: &TestFunction, prime_bound: u64) -> Result<(f64, f64)> {
    let (lo, hi) = alpha.support();
    let needed = hi.abs().max(lo.abs()).exp();
    if (prime_bound as f64) < needed {
        return Err(Error::InsufficientPrimeBound {
            bound: prime_bound,
            needed,
        });
    }
    let mut sum = 0.0;
    for p in primes_up_to(prime_bound) {
        let lp = (p as f64).ln();
        let mut k = 1;
        while k as f64 * lp <= hi {
            sum += lp * alpha.eval(k as f64 * lp);
            k += 1;
        }
        let mut k = 1;
        while -(k as f64) * lp >= lo {
            sum += lp * (-(k as f64) * lp).exp() * alpha.eval(-(k as f64) * lp);
            k += 1;
        }
    }
    let (w_inf, err) = archimedean_w_infinity(alpha);
    Ok((sum + w_inf, err))
}

/// The ζ̂ formula with both sides assembled into a report.
pub fn both_sides_ef(
    zeros: &ZeroList,
    alpha: &TestFunction,
    prime_bound: u64,
) -> Result<FormulaReport> {
    let spectral = spectral_side_ef(zeros, alpha)?;
    let (geo, quad_err) = geometric_side_ef(alpha, prime_bound)?;
    Ok(FormulaReport {
        formula: FormulaId::Ef,
        spectral,
        geometric: c64(geo, 0.0),
        residual: 0.0,
        height: zeros.height_bound,
        prime_bound,
        tail_estimate: spectral_tail_estimate(alpha, zeros.height_bound),
        quadrature_error: quad_err,
        bump: (alpha.center, alpha.width),
        pole_terms: vec![
            phi_transform(alpha, c64(0.0, 0.0)),
            phi_transform(alpha, c64(1.0, 0.0)),
        ],
        spectral_alt: None,
    }
    .finish())
}

fn default_prime_bound(alpha: &TestFunction) -> u64 {
    let (lo, hi) = alpha.support();
    hi.abs().max(lo.abs()).exp().ceil() as u64 + 1
}

/// Geometric side of the twisted formula: ramified primes are excluded
/// and the archimedean density carries the parity weights e^{-qx} and
/// e^{-x(1+q)}.
pub fn efchi_geometric(
    chi: &DirichletCharacter,
    alpha: &TestFunction,
) -> Result<(Complex64, f64)> {
    alpha.require_avoids_zero()?;
    let (lo, hi) = alpha.support();
    let m = chi.modulus();
    let mut prime_sum = c64(0.0, 0.0);
    for p in primes_up_to(default_prime_bound(alpha)) {
        if m % p == 0 {
            continue;
        }
        let lp = (p as f64).ln();
        let mut n = 1i64;
        while n as f64 * lp <= hi {
            prime_sum += lp * chi.value_pow(p as i64, n) * alpha.eval(n as f64 * lp);
            n += 1;
        }
        let mut n = 1i64;
        while -(n as f64) * lp >= lo {
            prime_sum += lp
                * (-(n as f64) * lp).exp()
                * chi.value_pow(p as i64, -n)
                * alpha.eval(-(n as f64) * lp);
            n += 1;
        }
    }
    let q = chi.parity() as f64;
    let mut arch = 0.0;
    let mut err = 0.0;
    let pos = (lo.max(0.0), hi.max(0.0));
    if pos.1 > pos.0 {
        let (v, e) = quadrature::integrate(
            |x| alpha.eval(x) * (-q * x).exp() / (1.0 - (-2.0 * x).exp()),
            pos.0,
            pos.1,
            1e-12,
        );
        arch += v;
        err += e;
    }
    let neg = ((-hi).max(0.0), (-lo).max(0.0));
    if neg.1 > neg.0 {
        let (v, e) = quadrature::integrate(
            |x| alpha.eval(-x) * (-x * (1.0 + q)).exp() / (1.0 - (-2.0 * x).exp()),
            neg.0,
            neg.1,
            1e-12,
        );
        arch += v;
        err += e;
    }
    Ok((prime_sum + arch, err))
}

/// Twisted formula: -Σ_ρ Φ(ρ) against the χ-weighted prime sum. No pole
/// terms on either side.
pub fn both_sides_efchi(
    chi: &DirichletCharacter,
    zeros: &ZeroList,
    alpha: &TestFunction,
) -> Result<FormulaReport> {
    if !chi.is_primitive() || chi.is_trivial() {
        return Err(Error::ImprimitiveCharacter {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    alpha.require_avoids_zero()?;
    require_source(zeros, &format!("dirichlet:{}:{}", chi.modulus(), chi.index()))?;
    let spectral = -phi_sum_over_zeros(zeros, alpha);
    let (geo, quad_err) = efchi_geometric(chi, alpha)?;
    Ok(FormulaReport {
        formula: FormulaId::Efchi,
        spectral,
        geometric: geo,
        residual: 0.0,
        height: zeros.height_bound,
        prime_bound: default_prime_bound(alpha),
        tail_estimate: spectral_tail_estimate(alpha, zeros.height_bound),
        quadrature_error: quad_err,
        bump: (alpha.center, alpha.width),
        pole_terms: vec![],
        spectral_alt: None,
    }
    .finish())
}

/// Geometric side of the Dedekind formula: every prime ideal contributes,
/// ramified ones included, with norm weights; archimedean densities scale
/// with the signature (r1, r2).
pub fn efk_geometric(m: u64, alpha: &TestFunction) -> Result<(f64, f64)> {
    alpha.require_avoids_zero()?;
    let field = CyclotomicField::new(m);
    let (lo, hi) = alpha.support();
    let mut sum = 0.0;
    for p in primes_up_to(default_prime_bound(alpha)) {
        let sp = split_prime(field.m, p);
        let ln_norm = sp.log_norm();
        let weight = sp.r as f64 * ln_norm;
        let mut k = 1;
        while k as f64 * ln_norm <= hi {
            sum += weight * alpha.eval(k as f64 * ln_norm);
            k += 1;
        }
        let mut k = 1;
        while -(k as f64) * ln_norm >= lo {
            sum += weight * (-(k as f64) * ln_norm).exp() * alpha.eval(-(k as f64) * ln_norm);
            k += 1;
        }
    }
    let (r1, r2) = (field.r1 as f64, field.r2 as f64);
    // g(x) = α(x) + e^{-x} α(-x) against r1/(1-e^{-2x}) + r2/(1-e^{-x})
    let mut arch = 0.0;
    let mut err = 0.0;
    let pos = (lo.max(0.0), hi.max(0.0));
    if pos.1 > pos.0 {
        let (v, e) = quadrature::integrate(
            |x| alpha.eval(x) * (r1 / (1.0 - (-2.0 * x).exp()) + r2 / (1.0 - (-x).exp())),
            pos.0,
            pos.1,
            1e-12,
        );
        arch += v;
        err += e;
    }
    let neg = ((-hi).max(0.0), (-lo).max(0.0));
    if neg.1 > neg.0 {
        let (v, e) = quadrature::integrate(
            |x| {
                (-x).exp()
                    * alpha.eval(-x)
                    * (r1 / (1.0 - (-2.0 * x).exp()) + r2 / (1.0 - (-x).exp()))
            },
            neg.0,
            neg.1,
            1e-12,
        );
        arch += v;
        err += e;
    }
    Ok((sum + arch, err))
}

/// Dedekind formula for K = Q(ζ_m): Φ(0) + Φ(1) - Σ Φ(ρ) over the
/// factor-union zero list against the prime-ideal sum.
pub fn both_sides_efk(m: u64, zeros: &ZeroList, alpha: &TestFunction) -> Result<FormulaReport> {
    alpha.require_avoids_zero()?;
    let mc = canonical_modulus(m);
    require_source(zeros, &format!("dedekind:{mc}"))?;
    let pole_terms = vec![
        phi_transform(alpha, c64(0.0, 0.0)),
        phi_transform(alpha, c64(1.0, 0.0)),
    ];
    let spectral = pole_terms[0] + pole_terms[1] - phi_sum_over_zeros(zeros, alpha);
    let (geo, quad_err) = efk_geometric(mc, alpha)?;
    Ok(FormulaReport {
        formula: FormulaId::Efk,
        spectral,
        geometric: c64(geo, 0.0),
        residual: 0.0,
        height: zeros.height_bound,
        prime_bound: default_prime_bound(alpha),
        tail_estimate: spectral_tail_estimate(alpha, zeros.height_bound),
        quadrature_error: quad_err,
        bump: (alpha.center, alpha.width),
        pole_terms,
        spectral_alt: None,
    }
    .finish())
}

/// Geometric side of the Artin-type formula for a one-dimensional
/// representation: Frobenius traces on inertia invariants plus the
/// (n⁺ + n⁻ e^{-x})/(1-e^{-2x}) archimedean density.
pub fn artin_geometric(
    chi: &DirichletCharacter,
    alpha: &TestFunction,
) -> Result<(Complex64, f64)> {
    alpha.require_positive_support()?;
    let (lo, hi) = alpha.support();
    let mut sum = c64(0.0, 0.0);
    for p in primes_up_to(default_prime_bound(alpha)) {
        let lp = (p as f64).ln();
        let mut k = 1i64;
        while k as f64 * lp <= hi {
            let tr = artin_frobenius_trace(chi, p, k);
            if tr.norm_sqr() > 0.0 {
                sum += lp * tr * alpha.eval(k as f64 * lp);
            }
            k += 1;
        }
    }
    let (n_plus, n_minus) = archimedean_signature(chi, chi.modulus());
    let (arch, err) = quadrature::integrate(
        |x| {
            alpha.eval(x) * (n_plus as f64 + n_minus as f64 * (-x).exp())
                / (1.0 - (-2.0 * x).exp())
        },
        lo.max(1e-9),
        hi,
        1e-12,
    );
    Ok((sum + arch, err))
}

/// Artin-type explicit formula for χ viewed as a 1-dim representation of
/// (Z/mZ)*. The spectral side is computed along two routes: half-line
/// quadratures -Σ_λ ∫_0^∞ α(s) e^{sλ} ds over the Λ(χ*,·) zeros plus Φ at
/// the poles (none for nontrivial χ*), and the d_q-weighted transform sum
/// over the same multiset. Both land in the report; they must agree.
pub fn both_sides_artin(
    chi: &DirichletCharacter,
    zeros: &ZeroList,
    alpha: &TestFunction,
) -> Result<FormulaReport> {
    alpha.require_positive_support()?;
    let primitive = chi.induced_primitive();
    let expected_source = if primitive.is_trivial() {
        "zeta".to_string()
    } else {
        format!("dirichlet:{}:{}", primitive.modulus(), primitive.index())
    };
    require_source(zeros, &expected_source)?;
    let (lo, hi) = alpha.support();
    let half_line_phi = |lambda: Complex64| -> Complex64 {
        let tol = 1e-14 * ((lambda.re * hi).exp() * 2.0 * alpha.width).max(1e-30);
        quadrature::integrate_complex(
            |t| (lambda * t).exp() * alpha.eval(t),
            lo.max(0.0),
            hi,
            tol,
        )
        .0
    };
    let mut standard = c64(0.0, 0.0);
    if zeros.conjugate_paired {
        for e in zeros.upper() {
            standard -= e.multiplicity as f64 * 2.0 * half_line_phi(e.location).re;
        }
    } else {
        for e in &zeros.entries {
            standard -= e.multiplicity as f64 * half_line_phi(e.location);
        }
    }
    let source = if primitive.is_trivial() {
        crate::lseries::CompletedLFunction::zeta()
    } else {
        crate::lseries::CompletedLFunction::dirichlet(&primitive)?
    };
    let mut pole_terms = Vec::new();
    for (pole, order) in &source.poles {
        let term = *order as f64 * half_line_phi(*pole);
        pole_terms.push(term);
        standard += term;
    }
    let alt = -phi_sum_over_zeros(zeros, alpha) + pole_terms.iter().sum::<Complex64>();
    let (geo, quad_err) = artin_geometric(chi, alpha)?;
    Ok(FormulaReport {
        formula: FormulaId::Artin,
        spectral: standard,
        geometric: geo,
        residual: 0.0,
        height: zeros.height_bound,
        prime_bound: default_prime_bound(alpha),
        tail_estimate: spectral_tail_estimate(alpha, zeros.height_bound),
        quadrature_error: quad_err,
        bump: (alpha.center, alpha.width),
        pole_terms,
        spectral_alt: Some(alt),
    }
    .finish())
}

/// Power-sum moments Σ mult/(u-2)^{2+r}, r = 0..R, over a strip multiset.
pub fn moment_vector(points: &[(Complex64, u32)], order: usize) -> Result<Vec<Complex64>> {
    for (u, _) in points {
        if !(-1e-12..=1.0 + 1e-12).contains(&u.re) {
            return Err(Error::PointOutsideStrip(*u));
        }
    }
    let mut out = vec![c64(0.0, 0.0); order + 1];
    for (u, mult) in points {
        let inv = 1.0 / (u - 2.0);
        let mut w = inv * inv;
        for slot in out.iter_mut() {
            *slot += *mult as f64 * w;
            w *= inv;
        }
    }
    Ok(out)
}

/// True when some moment of order ≤ R separates the multisets beyond tol.
pub fn moments_distinguish(
    a: &[(Complex64, u32)],
    b: &[(Complex64, u32)],
    order: usize,
    tol: f64,
) -> Result<bool> {
    let ma = moment_vector(a, order)?;
    let mb = moment_vector(b, order)?;
    Ok(ma.iter().zip(&mb).any(|(x, y)| (x - y).norm() > tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character_by_index, enumerate_characters};
    use crate::lseries::CompletedLFunction;
    use crate::zeros::{find_zeros, ZeroEntry};

    fn bump(c: f64, w: f64) -> TestFunction {
        TestFunction::new(c, w).unwrap()
    }

    /// composite-Simpson oracle for Φ at doubled node counts
    fn phi_oracle(alpha: &TestFunction, s: Complex64) -> Complex64 {
        let (lo, hi) = alpha.support();
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let mut acc = c64(0.0, 0.0);
        for i in 0..n {
            let a = lo + i as f64 * h;
            let f0 = (s * a).exp() * alpha.eval(a);
            let f1 = (s * (a + 0.5 * h)).exp() * alpha.eval(a + 0.5 * h);
            let f2 = (s * (a + h)).exp() * alpha.eval(a + h);
            acc += (f0 + 4.0 * f1 + f2) * (h / 6.0);
        }
        acc
    }

    #[test]
    fn phi_at_zero_is_mass() {
        let b = bump(1.0, 0.5);
        let mass = phi_transform(&b, c64(0.0, 0.0));
        // ∫_{-1}^{1} e^{-1/(1-u²)} du = 0.443994, scaled by width
        assert!((mass.re - 0.5 * 0.44399381616807943).abs() < 1e-10);
        assert!(mass.im == 0.0);
        let oracle = phi_oracle(&b, c64(0.0, 0.0));
        assert!((mass - oracle).norm() < 1e-12);
    }

    #[test]
    fn phi_even_symmetry_at_origin() {
        let b = bump(0.0, 0.7);
        for &s in &[0.3, 1.1, 2.0] {
            let plus = phi_transform(&b, c64(s, 0.0));
            let minus = phi_transform(&b, c64(-s, 0.0));
            assert!((plus - minus).norm() < 1e-13);
        }
    }

    #[test]
    fn phi_oscillatory_accuracy() {
        let b = bump(1.0, 0.6);
        for &t in &[14.134725, 100.0, 400.0] {
            let s = c64(0.5, t);
            let got = phi_transform(&b, s);
            let want = phi_oracle(&b, s);
            assert!((got - want).norm() < 1e-12, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn spectral_ef_with_empty_list_is_pole_part() {
        let empty = ZeroList {
            entries: vec![],
            height_bound: 10.0,
            source: "zeta".into(),
            verified_count: 0,
            conjugate_paired: true,
        };
        let b = bump(0.5, 0.4);
        let got = spectral_side_ef(&empty, &b).unwrap();
        let want = phi_transform(&b, c64(0.0, 0.0)) + phi_transform(&b, c64(1.0, 0.0));
        assert_eq!(got, want);
    }

    #[test]
    fn spectral_ef_source_mismatch() {
        let wrong = ZeroList {
            entries: vec![],
            height_bound: 10.0,
            source: "dirichlet:4:1".into(),
            verified_count: 0,
            conjugate_paired: true,
        };
        assert!(spectral_side_ef(&wrong, &bump(0.5, 0.4)).is_err());
    }

    #[test]
    fn spectral_ef_real_output() {
        let zeros = find_zeros(&CompletedLFunction::zeta(), 30.0).unwrap();
        let v = spectral_side_ef(&zeros, &bump(0.69, 0.1)).unwrap();
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn w_infinity_examples() {
        // support inside (0.55, 0.65): only the α(t)/(1-e^{-2t}) piece
        let b = bump(0.6, 0.05);
        let (w, _) = archimedean_w_infinity(&b);
        let (direct, _) = quadrature::integrate(
            |t| b.eval(t) / (1.0 - (-2.0 * t).exp()),
            0.55,
            0.65,
            1e-13,
        );
        assert!((w - direct).abs() < 1e-12);
        // zero function
        let z = TestFunction::with_scale(0.6, 0.05, 0.0).unwrap();
        assert_eq!(archimedean_w_infinity(&z).0, 0.0);
    }

    #[test]
    fn w_infinity_symmetric_bump_refinement() {
        // α symmetric at 0: finite integrand at 0; value must match a
        // finer evaluation with a smaller series switch point
        let b = bump(0.0, 0.5);
        let (w, _) = archimedean_w_infinity(&b);
        let a0 = b.eval(0.0);
        let t0 = 1e-5;
        let head = 2.5 * a0 * t0;
        let (body, _) = quadrature::integrate(
            |t| {
                (b.eval(t) + (-t).exp() * b.eval(-t)) / (1.0 - (-2.0 * t).exp())
                    - a0 * (-2.0 * t).exp() / t
            },
            t0,
            30.0,
            1e-13,
        );
        let oracle = a0 * PI.ln() + head + body;
        assert!((w - oracle).abs() < 1e-9, "{w} vs {oracle}");
    }

    #[test]
    fn geometric_ef_examples() {
        // support (0.55, 0.65) below log 2: no prime terms at all
        let b = bump(0.6, 0.05);
        let (total, _) = geometric_side_ef(&b, 10).unwrap();
        let (w_inf, _) = archimedean_w_infinity(&b);
        assert_eq!(total, w_inf);
        // single term log 2 · α(log 2)
        let b = bump(0.7, 0.01);
        let (total, _) = geometric_side_ef(&b, 10).unwrap();
        let lp = std::f64::consts::LN_2;
        let expected = lp * b.eval(lp) + archimedean_w_infinity(&b).0;
        assert!((total - expected).abs() < 1e-15);
        // negative side carries the p^k weight, k = -1
        let b = bump(-0.7, 0.01);
        let (total, _) = geometric_side_ef(&b, 10).unwrap();
        let expected = lp * 0.5 * b.eval(-lp) + archimedean_w_infinity(&b).0;
        assert!((total - expected).abs() < 1e-15);
    }

    #[test]
    fn geometric_ef_insufficient_bound() {
        let b = bump(2.0, 0.5);
        // needs primes to e^{2.5} ≈ 12.2
        assert!(geometric_side_ef(&b, 11).is_err());
        assert!(geometric_side_ef(&b, 13).is_ok());
    }

    #[test]
    fn geometric_ef_support_completeness() {
        let b = bump(1.0, 0.6);
        let (a, _) = geometric_side_ef(&b, 5).unwrap();
        let (c, _) = geometric_side_ef(&b, 1000).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn efchi_geometric_examples() {
        let chi4 = character_by_index(4, 1).unwrap();
        let arch = |b: &TestFunction| {
            // q = 1 parity weight on the positive side
            let (lo, hi) = b.support();
            quadrature::integrate(
                |x| b.eval(x) * (-x).exp() / (1.0 - (-2.0 * x).exp()),
                lo,
                hi,
                1e-13,
            )
            .0
        };
        // support around log 5: single split-prime term, χ4(5) = 1
        let b = bump(1.62, 0.05);
        let (geo, _) = efchi_geometric(&chi4, &b).unwrap();
        let l5 = (5.0f64).ln();
        let expected = l5 * b.eval(l5) + arch(&b);
        assert!((geo - c64(expected, 0.0)).norm() < 1e-12);
        // support around log 2: the ramified prime contributes nothing,
        // only the archimedean density remains
        let b = bump(0.70, 0.01);
        let (geo, _) = efchi_geometric(&chi4, &b).unwrap();
        assert!((geo - c64(arch(&b), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn efchi_rejects_bad_inputs() {
        let chi4 = character_by_index(4, 1).unwrap();
        let zeros = ZeroList {
            entries: vec![],
            height_bound: 1.0,
            source: "dirichlet:4:1".into(),
            verified_count: 0,
            conjugate_paired: true,
        };
        // support containing zero
        assert!(both_sides_efchi(&chi4, &zeros, &bump(0.1, 0.5)).is_err());
        // imprimitive character
        let lifted = enumerate_characters(8)
            .into_iter()
            .find(|c| c.conductor() == 4)
            .unwrap();
        assert!(both_sides_efchi(&lifted, &zeros, &bump(1.0, 0.5)).is_err());
    }

    #[test]
    fn efk_geometric_split_and_ramified() {
        // p = 5 splits in Q(i): r = 2 ideals of norm 5
        let l5 = (5.0f64).ln();
        let b = bump(l5, 0.02);
        let (geo, _) = efk_geometric(4, &b).unwrap();
        let (arch_val, _) = quadrature::integrate(
            |x| b.eval(x) / (1.0 - (-x).exp()),
            l5 - 0.02,
            l5 + 0.02,
            1e-13,
        );
        let expected = 2.0 * l5 * b.eval(l5) + arch_val;
        assert!((geo - expected).abs() < 1e-12, "{geo} vs {expected}");
        // p = 2 ramified: the single ideal of norm 2 still contributes
        let l2 = std::f64::consts::LN_2;
        let b = bump(l2, 0.01);
        let (geo, _) = efk_geometric(4, &b).unwrap();
        let (arch_val, _) = quadrature::integrate(
            |x| b.eval(x) / (1.0 - (-x).exp()),
            l2 - 0.01,
            l2 + 0.01,
            1e-13,
        );
        let expected = l2 * b.eval(l2) + arch_val;
        assert!((geo - expected).abs() < 1e-12);
    }

    #[test]
    fn artin_traces_examples() {
        let chi4 = character_by_index(4, 1).unwrap();
        assert_eq!(artin_frobenius_trace(&chi4, 2, 1), c64(0.0, 0.0));
        assert_eq!(artin_frobenius_trace(&chi4, 5, 1), c64(1.0, 0.0));
    }

    #[test]
    fn artin_geometric_equals_efchi_on_positive_support() {
        // term-by-term identity: e^{-qx} = n⁺ + n⁻ e^{-x} for 1-dim reps
        for m in [3u64, 4, 5, 7, 8, 11, 12] {
            for chi in enumerate_characters(m) {
                if !chi.is_primitive() || chi.is_trivial() {
                    continue;
                }
                for b in [bump(1.0, 0.6), bump(1.62, 0.3)] {
                    let (artin, _) = artin_geometric(&chi, &b).unwrap();
                    let (efchi, _) = efchi_geometric(&chi, &b).unwrap();
                    assert!(
                        (artin - efchi).norm() <= 1e-12,
                        "m={m} idx={} diff {}",
                        chi.index(),
                        (artin - efchi).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn artin_rejects_non_positive_support() {
        let chi4 = character_by_index(4, 1).unwrap();
        let zeros = ZeroList {
            entries: vec![],
            height_bound: 1.0,
            source: "dirichlet:4:1".into(),
            verified_count: 0,
            conjugate_paired: true,
        };
        assert!(both_sides_artin(&chi4, &zeros, &bump(-1.0, 0.4)).is_err());
        assert!(both_sides_artin(&chi4, &zeros, &bump(0.3, 0.4)).is_err());
    }

    #[test]
    fn moment_vector_examples() {
        let a = vec![(c64(0.5, 14.13), 1u32), (c64(0.5, -14.13), 1)];
        let b = vec![(c64(0.5, 21.02), 1u32), (c64(0.5, -21.02), 1)];
        let ma = moment_vector(&a, 0).unwrap();
        let mb = moment_vector(&b, 0).unwrap();
        assert!((ma[0] - mb[0]).norm() > 1e-4);
        // permutation invariance, exactly
        let ma2 = moment_vector(&a, 6).unwrap();
        let shuffled = vec![a[1], a[0]];
        let ms = moment_vector(&shuffled, 6).unwrap();
        for (x, y) in ma2.iter().zip(&ms) {
            assert!((x - y).norm() < 1e-16);
        }
        // outside the strip
        assert!(moment_vector(&[(c64(1.5, 0.0), 1)], 2).is_err());
    }

    #[test]
    fn moments_distinguish_examples() {
        let a = vec![(c64(0.5, 3.0), 1u32), (c64(0.2, 1.0), 1)];
        let same = a.clone();
        assert!(!moments_distinguish(&a, &same, 8, 1e-8).unwrap());
        let mut b = a.clone();
        b[0].0 += c64(0.0, 0.5);
        assert!(moments_distinguish(&a, &b, 8, 1e-8).unwrap());
        // an extra point shows in the moment magnitudes
        let mut c = a.clone();
        c.push((c64(0.7, 2.0), 1));
        assert!(moments_distinguish(&a, &c, 8, 1e-8).unwrap());
        // multiplicity differences count
        let mut d = a.clone();
        d[1].1 = 2;
        assert!(moments_distinguish(&a, &d, 8, 1e-8).unwrap());
    }

    #[test]
    fn ef_cross_side_small() {
        // modest height here; the acceptance suite runs the full scale
        let zeros = find_zeros(&CompletedLFunction::zeta(), 60.0).unwrap();
        let b = bump(1.0, 0.6);
        let report = both_sides_ef(&zeros, &b, 5).unwrap();
        assert!(report.residual < 5e-3, "residual {}", report.residual);
        assert!(report.spectral.im.abs() < 1e-12);
        assert_eq!(report.pole_terms.len(), 2);
    }

    #[test]
    fn efchi_cross_side_small() {
        let chi4 = character_by_index(4, 1).unwrap();
        let l = CompletedLFunction::dirichlet(&chi4).unwrap();
        let zeros = find_zeros(&l, 60.0).unwrap();
        let b = bump(1.0, 0.6);
        let report = both_sides_efchi(&chi4, &zeros, &b).unwrap();
        assert!(report.residual < 5e-3, "residual {}", report.residual);
        assert!(report.pole_terms.is_empty());
    }

    #[test]
    fn zero_list_prefix_stability() {
        // truncating a list reproduces the exact partial sum
        let zeros = find_zeros(&CompletedLFunction::zeta(), 60.0).unwrap();
        let b = bump(1.0, 0.6);
        let full = phi_sum_over_zeros(&zeros, &b);
        let truncated = ZeroList {
            entries: zeros
                .entries
                .iter()
                .copied()
                .filter(|e| e.location.im.abs() <= 30.0)
                .collect::<Vec<ZeroEntry>>(),
            height_bound: 30.0,
            source: zeros.source.clone(),
            verified_count: 6,
            conjugate_paired: true,
        };
        let part = phi_sum_over_zeros(&truncated, &b);
        let tail: f64 = zeros
            .upper()
            .filter(|e| e.location.im > 30.0)
            .map(|e| 2.0 * phi_transform(&b, e.location).re * e.multiplicity as f64)
            .sum();
        assert!((full - part - c64(tail, 0.0)).norm() < 1e-15);
    }
}
