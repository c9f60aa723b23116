//! Zero location and certification for completed L-functions.
//!
//! Counting goes through the argument principle: the winding of the
//! Dirichlet-series part along a rectangle boundary, corrected by the
//! gamma-factor poles and the known poles of the completed function.
//! Location uses sign changes of the phase-rotated central function for
//! self-dual sources and recursive box subdivision otherwise. Every
//! produced list is certified: located count must equal the box count.

use crate::error::{Error, Result};
use crate::lseries::CompletedLFunction;
use num_complex::Complex64;
use rayon::prelude::*;

const MAX_HEIGHT: f64 = 450.0;

/// Rectangle in the critical strip.
#[derive(Debug, Clone, Copy)]
pub struct StripBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl StripBox {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        StripBox {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }
}

/// One zero with multiplicity.
#[derive(Debug, Clone, Copy)]
pub struct ZeroEntry {
    pub location: Complex64,
    pub multiplicity: u32,
}

/// Multiset of located zeros with its certification data.
#[derive(Debug, Clone)]
pub struct ZeroList {
    /// sorted by increasing imaginary part
    pub entries: Vec<ZeroEntry>,
    pub height_bound: f64,
    pub source: String,
    /// argument-principle count over |Im| ≤ height_bound
    pub verified_count: i64,
    /// true when the lower half mirrors the upper half exactly
    pub conjugate_paired: bool,
}

impl ZeroList {
    /// Entries with Im > 0, ascending.
    pub fn upper(&self) -> impl Iterator<Item = &ZeroEntry> {
        self.entries.iter().filter(|e| e.location.im > 0.0)
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.entries.iter().map(|e| e.multiplicity as i64).sum()
    }

    pub fn max_re_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.location.re - 0.5).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header re,im,multiplicity, rows sorted by Im.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{:.12},{:.12},{}\n",
                e.location.re, e.location.im, e.multiplicity
            ));
        }
        out
    }
}

/// Search controls; the defaults satisfy the desk-scale contracts.
#[derive(Debug, Clone, Copy)]
pub struct SearchParams {
    pub scan_step: f64,
    pub bisect_tol: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            scan_step: 0.05,
            bisect_tol: 1e-12,
        }
    }
}

/// e^{iφ(t)} L(1/2 + it) with φ the prefactor phase; real-valued for
/// self-dual sources with root number 1.
pub fn rotated_central(l: &CompletedLFunction, t: f64) -> Result<Complex64> {
    let s = Complex64::new(0.5, t);
    let phase = l.log_prefactor(s)?.im;
    Ok(Complex64::from_polar(1.0, phase) * l.finite_part(s)?)
}

/// Maximum base step along a boundary edge. Argument rates of the
/// finite parts stay far below 2π per step at desk scale, so a wrapped
/// increment cannot masquerade as a small one.
const MAX_EDGE_STEP: f64 = 0.25;

/// Walk one oriented segment accumulating the argument increment of the
/// finite part. Each base piece is bisected until both halves turn less
/// than 0.4 rad and their sum is consistent with the parent increment.
fn arg_along_segment(
    l: &CompletedLFunction,
    a: Complex64,
    b: Complex64,
    min_modulus: &mut f64,
) -> Result<f64> {
    let pieces = ((b - a).norm() / MAX_EDGE_STEP).ceil().max(1.0) as usize;
    let mut total = 0.0;
    let mut prev_point = a;
    let mut prev_value = l.finite_part(a)?;
    *min_modulus = min_modulus.min(prev_value.norm());
    for i in 1..=pieces {
        let next_point = a + (b - a) * (i as f64 / pieces as f64);
        let next_value = l.finite_part(next_point)?;
        *min_modulus = min_modulus.min(next_value.norm());
        let mut stack = vec![(prev_point, prev_value, next_point, next_value, 0u32)];
        while let Some((s0, v0, s1, v1, depth)) = stack.pop() {
            if depth >= 48 {
                return Err(Error::UnstableWinding(format!(
                    "no convergence at depth {depth} near {s0}"
                )));
            }
            let parent = (v1 / v0).arg();
            let mid = 0.5 * (s0 + s1);
            let vm = l.finite_part(mid)?;
            *min_modulus = min_modulus.min(vm.norm());
            let d1 = (vm / v0).arg();
            let d2 = (v1 / vm).arg();
            if d1.abs() <= 0.4 && d2.abs() <= 0.4 && (d1 + d2 - parent).abs() <= 1e-9 {
                total += d1 + d2;
            } else {
                stack.push((mid, vm, s1, v1, depth + 1));
                stack.push((s0, v0, mid, vm, depth + 1));
            }
        }
        prev_point = next_point;
        prev_value = next_value;
    }
    Ok(total)
}

/// Winding of the finite part around the box, in turns, plus the smallest
/// boundary modulus seen.
fn winding_turns(l: &CompletedLFunction, bx: StripBox) -> Result<(f64, f64)> {
    let corners = [
        Complex64::new(bx.re_lo, bx.im_lo),
        Complex64::new(bx.re_hi, bx.im_lo),
        Complex64::new(bx.re_hi, bx.im_hi),
        Complex64::new(bx.re_lo, bx.im_hi),
    ];
    let mut min_modulus = f64::INFINITY;
    let mut total = 0.0;
    for i in 0..4 {
        total += arg_along_segment(l, corners[i], corners[(i + 1) % 4], &mut min_modulus)?;
    }
    Ok((total / (2.0 * std::f64::consts::PI), min_modulus))
}

/// Argument-principle zero count inside the box. The completed function's
/// winding equals the finite-part winding minus enclosed gamma poles;
/// adding back its own poles gives the zero count. The boundary is
/// perturbed outward when it runs too close to a zero or pole.
pub fn count_zeros_in_box(l: &CompletedLFunction, bx: StripBox) -> Result<i64> {
    let mut bx = bx;
    let mut last_modulus = f64::INFINITY;
    for attempt in 0..5 {
        let (turns, min_modulus) = winding_turns(l, bx)?;
        last_modulus = min_modulus;
        if min_modulus >= 1e-12 {
            let rounded = turns.round();
            if (turns - rounded).abs() > 0.01 {
                return Err(Error::UnstableWinding(format!(
                    "accumulated {turns:.4} turns over {bx:?}"
                )));
            }
            let gamma_poles =
                l.gamma_poles_in_box(bx.re_lo, bx.re_hi, bx.im_lo, bx.im_hi) as i64;
            let spec_poles =
                l.spec_poles_in_box(bx.re_lo, bx.re_hi, bx.im_lo, bx.im_hi) as i64;
            return Ok(rounded as i64 - gamma_poles + spec_poles);
        }
        let delta = 2e-4 * (attempt + 1) as f64;
        bx = StripBox::new(
            bx.re_lo - delta,
            bx.re_hi + delta,
            (bx.im_lo - delta).max(bx.im_lo / 2.0),
            bx.im_hi + delta,
        );
    }
    Err(Error::BoundaryTooClose {
        min_modulus: last_modulus,
        attempts: 5,
    })
}

fn bisect_sign_change<F: Fn(f64) -> Result<f64>>(
    f: &F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<f64> {
    let mut fa = f(a)?;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Heights of the sign changes of the rotated central function on (0, t_max].
fn scan_central_line(
    l: &CompletedLFunction,
    t_max: f64,
    params: SearchParams,
) -> Result<Vec<f64>> {
    let t0 = 0.02;
    let n = ((t_max - t0) / params.scan_step).ceil() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| t0 + i as f64 * (t_max - t0) / n as f64)
        .collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| rotated_central(l, t).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    let f = |t: f64| rotated_central(l, t).map(|z| z.re);
    let mut zeros = Vec::new();
    for i in 0..n {
        if values[i] == 0.0 {
            zeros.push(grid[i]);
        } else if values[i] * values[i + 1] < 0.0 {
            zeros.push(bisect_sign_change(
                &f,
                grid[i],
                grid[i + 1],
                params.bisect_tol,
            )?);
        }
    }
    Ok(zeros)
}

/// Newton refinement on the finite part, for the box-subdivision path.
fn newton_refine(l: &CompletedLFunction, start: Complex64, bx: StripBox) -> Result<Complex64> {
    let mut s = start;
    let h = 1e-6;
    for _ in 0..60 {
        let f = l.finite_part(s)?;
        let df = (l.finite_part(s + h)? - l.finite_part(s - h)?) / (2.0 * h);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        s -= step;
        if s.re < bx.re_lo - 0.2 || s.re > bx.re_hi + 0.2 || s.im < bx.im_lo - 1.0 {
            return Err(Error::UnstableWinding(format!(
                "newton escaped the box from {start}"
            )));
        }
        if step.norm() < 1e-12 {
            return Ok(s);
        }
    }
    Ok(s)
}

/// Upper-half zeros by recursive box subdivision (non-self-dual path).
fn subdivide_boxes(l: &CompletedLFunction, t_max: f64) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut stack = vec![(1e-3, t_max)];
    while let Some((lo, hi)) = stack.pop() {
        let bx = StripBox::new(-0.1, 1.1, lo, hi);
        let count = count_zeros_in_box(l, bx)?;
        if count == 0 {
            continue;
        }
        if count == 1 && hi - lo <= 0.2 {
            let center = Complex64::new(0.5, 0.5 * (lo + hi));
            out.push(newton_refine(l, center, bx)?);
            continue;
        }
        if hi - lo < 1e-6 {
            // unresolvable cluster; report the center with the count
            for _ in 0..count {
                out.push(Complex64::new(0.5, 0.5 * (lo + hi)));
            }
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.im.total_cmp(&b.im));
    Ok(out)
}

/// Per-zero simplicity certificate: a shrinking box around the zero whose
/// count is the reported multiplicity.
fn certify_multiplicity(
    l: &CompletedLFunction,
    t: f64,
    gap_below: f64,
    gap_above: f64,
) -> Result<u32> {
    let mut h = (0.45 * gap_below.min(gap_above)).min(0.05);
    for _ in 0..3 {
        let count = count_zeros_in_box(l, StripBox::new(-0.1, 1.1, t - h, t + h))?;
        if count == 1 {
            return Ok(1);
        }
        if count > 1 && h < 1e-6 {
            return Ok(count as u32);
        }
        h /= 4.0;
    }
    let count = count_zeros_in_box(l, StripBox::new(-0.1, 1.1, t - h, t + h))?;
    Ok(count.max(1) as u32)
}

/// Locate and certify the zeros with 0 < Im ≤ t_max of one source.
fn upper_zeros(
    l: &CompletedLFunction,
    t_max: f64,
    params: SearchParams,
) -> Result<Vec<ZeroEntry>> {
    let self_dual = l.is_self_dual();
    let mut step = params.scan_step;
    let mut attempt = 0;
    loop {
        // overshoot so the certification box top can sit inside a zero gap
        let raw: Vec<Complex64> = if self_dual {
            scan_central_line(
                l,
                t_max + 1.0,
                SearchParams {
                    scan_step: step,
                    ..params
                },
            )?
            .into_iter()
            .map(|t| Complex64::new(0.5, t))
            .collect()
        } else {
            subdivide_boxes(l, t_max + 1.0)?
        };
        let kept: Vec<Complex64> = raw.iter().copied().filter(|z| z.im <= t_max).collect();
        let first_above = raw
            .iter()
            .map(|z| z.im)
            .find(|&im| im > t_max)
            .unwrap_or(t_max + 1.0);
        // top edge halfway between the bound and the next zero above it
        let top = 0.5 * (t_max + first_above.min(t_max + 0.9));
        let expected = count_zeros_in_box(l, StripBox::new(-0.1, 1.1, 1e-3, top))?;

        let mut entries = Vec::with_capacity(kept.len());
        for (i, z) in kept.iter().enumerate() {
            let below = if i == 0 { z.im } else { z.im - kept[i - 1].im };
            let above = if i + 1 == kept.len() {
                first_above - z.im
            } else {
                kept[i + 1].im - z.im
            };
            entries.push(ZeroEntry {
                location: *z,
                multiplicity: certify_multiplicity(l, z.im, below, above)?,
            });
        }
        let located: i64 = entries.iter().map(|e| e.multiplicity as i64).sum();
        if located == expected {
            return Ok(entries);
        }
        attempt += 1;
        if !self_dual || attempt > 2 {
            return Err(Error::CompletenessMismatch {
                label: l.label.clone(),
                located: located as usize,
                expected,
                t: t_max,
            });
        }
        step /= 4.0;
    }
}

/// All zeros with |Im| ≤ t_max, certified. For self-dual sources the lower
/// half is the conjugate of the upper half; otherwise it comes from the
/// dual character's upper zeros reflected through the functional equation.
pub fn find_zeros_with(
    l: &CompletedLFunction,
    t_max: f64,
    params: SearchParams,
) -> Result<ZeroList> {
    if !(0.0 < t_max && t_max <= MAX_HEIGHT) {
        return Err(Error::InvalidArgument(format!(
            "height bound must be in (0, {MAX_HEIGHT}], got {t_max}"
        )));
    }
    let upper = upper_zeros(l, t_max, params)?;
    let lower_src = if l.is_self_dual() {
        upper.clone()
    } else {
        upper_zeros(&l.dual(), t_max, params)?
    };
    let lower: Vec<ZeroEntry> = lower_src
        .iter()
        .map(|e| ZeroEntry {
            location: e.location.conj(),
            multiplicity: e.multiplicity,
        })
        .collect();
    let verified = upper.iter().map(|e| e.multiplicity as i64).sum::<i64>()
        + lower.iter().map(|e| e.multiplicity as i64).sum::<i64>();
    let mut entries = lower;
    entries.extend(upper);
    entries.sort_by(|a, b| a.location.im.total_cmp(&b.location.im));
    for e in &entries {
        debug_assert!((0.0..=1.0).contains(&e.location.re));
    }
    Ok(ZeroList {
        entries,
        height_bound: t_max,
        source: l.label.clone(),
        verified_count: verified,
        conjugate_paired: true,
    })
}

pub fn find_zeros(l: &CompletedLFunction, t_max: f64) -> Result<ZeroList> {
    find_zeros_with(l, t_max, SearchParams::default())
}

/// Truncate a conjugate-paired list to a lower height and re-certify the
/// kept part with a fresh box count. The kept entries are bitwise the
/// same values, so spectral sums over the truncation are exact prefixes.
pub fn truncate_certified(
    l: &CompletedLFunction,
    list: &ZeroList,
    t_new: f64,
) -> Result<ZeroList> {
    if !list.conjugate_paired {
        return Err(Error::InvalidArgument(
            "truncation requires a conjugate-paired list".into(),
        ));
    }
    if t_new > list.height_bound {
        return Err(Error::InvalidArgument(format!(
            "cannot truncate {} up to {t_new}",
            list.height_bound
        )));
    }
    let entries: Vec<ZeroEntry> = list
        .entries
        .iter()
        .copied()
        .filter(|e| e.location.im.abs() <= t_new)
        .collect();
    let first_dropped = list
        .entries
        .iter()
        .map(|e| e.location.im)
        .filter(|&im| im > t_new)
        .fold(f64::INFINITY, f64::min);
    let top = if first_dropped.is_finite() {
        0.5 * (t_new + first_dropped)
    } else {
        t_new
    };
    let expected = count_zeros_in_box(l, StripBox::new(-0.1, 1.1, 1e-3, top))?;
    let located: i64 = entries
        .iter()
        .filter(|e| e.location.im > 0.0)
        .map(|e| e.multiplicity as i64)
        .sum();
    if located != expected {
        return Err(Error::CompletenessMismatch {
            label: list.source.clone(),
            located: located as usize,
            expected,
            t: t_new,
        });
    }
    Ok(ZeroList {
        entries,
        height_bound: t_new,
        source: list.source.clone(),
        verified_count: 2 * expected,
        conjugate_paired: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_by_index;

    fn zeta() -> CompletedLFunction {
        CompletedLFunction::zeta()
    }

    fn lambda_chi4() -> CompletedLFunction {
        let chi4 = character_by_index(4, 1).unwrap();
        CompletedLFunction::dirichlet(&chi4).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_zeros_in_box(&zeta(), StripBox::new(-0.1, 1.1, 1.0, 5.0)).unwrap(),
            0
        );
        assert_eq!(
            count_zeros_in_box(&zeta(), StripBox::new(-0.1, 1.1, 1.0, 30.0)).unwrap(),
            3
        );
        assert_eq!(
            count_zeros_in_box(&lambda_chi4(), StripBox::new(-0.1, 1.1, 0.5, 10.0)).unwrap(),
            1
        );
    }

    /// Independent oracle: sign changes of the rotated central function.
    fn sign_change_count(l: &CompletedLFunction, lo: f64, hi: f64) -> usize {
        let n = 4000;
        let mut count = 0;
        let mut prev = rotated_central(l, lo).unwrap().re;
        for i in 1..=n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let v = rotated_central(l, t).unwrap().re;
            if prev * v < 0.0 {
                count += 1;
            }
            prev = v;
        }
        count
    }

    #[test]
    fn count_matches_sign_change_oracle() {
        assert_eq!(sign_change_count(&zeta(), 1.0, 30.0), 3);
        assert_eq!(sign_change_count(&lambda_chi4(), 0.5, 10.0), 1);
    }

    #[test]
    fn rotated_central_is_real_for_self_dual() {
        for &t in &[1.0, 7.3, 14.0, 25.7, 60.0] {
            let z = rotated_central(&zeta(), t).unwrap();
            assert!(z.im.abs() < 1e-9 * z.norm().max(1e-3), "t={t}: {z}");
        }
    }

    #[test]
    fn zeta_zeros_to_30() {
        let list = find_zeros(&zeta(), 30.0).unwrap();
        let ups: Vec<f64> = list.upper().map(|e| e.location.im).collect();
        let reference = [14.134725141734, 21.022039638771, 25.010857580145];
        assert_eq!(ups.len(), 3);
        for (got, want) in ups.iter().zip(reference) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
        assert_eq!(list.total_multiplicity(), list.verified_count);
        assert_eq!(list.entries.len(), 6);
    }

    #[test]
    fn zeta_zero_count_to_50() {
        let list = find_zeros(&zeta(), 50.0).unwrap();
        assert_eq!(list.upper().count(), 10);
        assert_eq!(list.verified_count, 20);
        assert!(list.max_re_deviation() <= 1e-6);
    }

    #[test]
    fn chi4_zeros_to_12() {
        let list = find_zeros(&lambda_chi4(), 12.0).unwrap();
        let ups: Vec<f64> = list.upper().map(|e| e.location.im).collect();
        assert_eq!(ups.len(), 2);
        assert!((ups[0] - 6.0209489046976).abs() < 1e-6, "{}", ups[0]);
        assert!((ups[1] - 10.2437703436379).abs() < 1e-6, "{}", ups[1]);
    }

    #[test]
    fn refinement_stability() {
        let coarse = find_zeros_with(
            &zeta(),
            30.0,
            SearchParams {
                bisect_tol: 1e-6,
                ..Default::default()
            },
        )
        .unwrap();
        let fine = find_zeros_with(
            &zeta(),
            30.0,
            SearchParams {
                bisect_tol: 1e-7,
                ..Default::default()
            },
        )
        .unwrap();
        for (a, b) in coarse.entries.iter().zip(&fine.entries) {
            assert!((a.location - b.location).norm() < 1e-6);
        }
    }

    #[test]
    fn non_self_dual_location_mod5() {
        // complex character mod 5: box-subdivision path with dual assembly
        let chi = crate::characters::enumerate_characters(5)
            .into_iter()
            .find(|c| c.generator_images() != c.conjugate().generator_images())
            .unwrap();
        let l = CompletedLFunction::dirichlet(&chi).unwrap();
        let list = find_zeros(&l, 8.0).unwrap();
        assert_eq!(list.total_multiplicity(), list.verified_count);
        assert!(list.max_re_deviation() <= 1e-6);
        for e in &list.entries {
            if e.location.im > 0.0 {
                let v = l.finite_part(e.location).unwrap();
                assert!(v.norm() < 1e-9, "|L| = {} at {}", v.norm(), e.location);
            }
        }
        assert!(!list.entries.is_empty());
    }

    #[test]
    fn csv_format() {
        let list = find_zeros(&zeta(), 30.0).unwrap();
        let csv = list.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "re,im,multiplicity");
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.contains(",1\n"));
    }

    #[test]
    fn height_cap() {
        assert!(find_zeros(&zeta(), 500.0).is_err());
    }
}
