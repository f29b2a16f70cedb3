//! The coefficients a₀(t), a₁(t) of the trace-formula expansion, the
//! functionals ν₁ and ν̃₁, and the geodesic kernels G_t, R_t.

use std::f64::consts::PI;

use serde::Serialize;

use super::TestFunction;
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::scalar::{bernoulli, rational_to_f64};
use crate::volumes::leading_simple_integral;

/// Truncation budget for the ∫_P^∞ tail of a₀.
const A0_TAIL: f64 = 1e-13;
/// Required agreement of the two a₀ quadratures.
const A0_AGREE: f64 = 1e-8;
/// Total quadrature budget of each a₀ route, split over unit pieces.
const A0_QUAD: f64 = 1e-10;
/// Required bound on the neglected part of the k-sum in a₁.
const A1_TAIL: f64 = 1e-10;
/// Required agreement of the k = 1 slice with the simple-geodesic route.
const A1_SLICE_AGREE: f64 = 1e-8;
/// Terms k < K0 of the a₁ sum are integrated one by one.
const K0: u32 = 32;

#[derive(Clone, Debug, Serialize)]
pub struct A0Report {
    pub t: usize,
    /// ∫_0^∞ 2ρ f(ρ)ᵗ tanh(πρ) dρ.
    pub value: f64,
    /// ∫_{1/4}^∞ f(√(r−¼))ᵗ tanh(π√(r−¼)) dr.
    pub r_route: f64,
    pub diff: f64,
    /// ρ cutoff.
    pub cutoff: f64,
    /// Bound on the neglected ∫_P^∞.
    pub tail_bound: f64,
}

/// Smallest P with f(0)^{t−1}·2B_k²/((2k−2)P^{2k−2}) ≤ `tol` over k = 2..9,
/// where B_k = ‖g₀^{(k)}‖₁ and fᵗ ≤ f(0)^{t−1}(B_k/ρᵏ)².
fn a0_cutoff(tf: &TestFunction, t: usize, tol: f64) -> Result<(f64, f64)> {
    let f0 = tf.f_eval(0.0);
    let mut best: Option<(f64, f64)> = None;
    for k in 2..=9usize {
        let b = tf.bump_derivative_norm(k)?;
        let e = 2.0 * k as f64 - 2.0;
        let c = f0.powi(t as i32 - 1) * 2.0 * b * b / e;
        let p = (c / tol).powf(1.0 / e).max(1.0);
        let bound = c / p.powf(e);
        if best.map_or(true, |(bp, _)| p < bp) {
            best = Some((p, bound));
        }
    }
    let (p, bound) = best.expect("k range is non-empty");
    if p >= PI / tf.spacing() / 2.0 {
        return Err(Error::numeric(format!("a0 cutoff {p} beyond the grid's resolved band")));
    }
    Ok((p, bound))
}

/// Sum of adaptive integrals over unit pieces of [lo, hi].
fn piecewise(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let pieces = (hi - lo).ceil().max(1.0) as usize;
    let step = (hi - lo) / pieces as f64;
    let mut s = 0.0;
    for i in 0..pieces {
        let a = lo + i as f64 * step;
        s += integrate(&f, a, a + step, tol / pieces as f64, 1e-12)?.value;
    }
    Ok(s)
}

/// a₀(t), the spectral-side integral of fᵗ, by two independent quadratures.
pub fn a0(tf: &TestFunction, t: usize) -> Result<A0Report> {
    if t == 0 {
        return Err(Error::domain("a0 needs t >= 1"));
    }
    let (cutoff, tail_bound) = a0_cutoff(tf, t, A0_TAIL)?;
    let ti = t as i32;
    let value = piecewise(|rho| 2.0 * rho * tf.f_eval(rho).powi(ti) * (PI * rho).tanh(), 0.0, cutoff, A0_QUAD)?;
    let r_hi = 0.25 + cutoff * cutoff;
    // unit pieces in ρ keep the sqrt endpoint inside the first piece
    let pieces = cutoff.ceil() as usize;
    let mut r_route = 0.0;
    for i in 0..pieces {
        let a = 0.25 + (i as f64 * cutoff / pieces as f64).powi(2);
        let b = if i + 1 == pieces { r_hi } else { 0.25 + ((i + 1) as f64 * cutoff / pieces as f64).powi(2) };
        r_route += integrate(
            |r: f64| {
                let rho = (r - 0.25).max(0.0).sqrt();
                tf.f_eval(rho).powi(ti) * (PI * rho).tanh()
            },
            a,
            b,
            A0_QUAD / pieces as f64,
            1e-12,
        )?
        .value;
    }
    let diff = (value - r_route).abs();
    if diff > A0_AGREE {
        return Err(Error::numeric(format!("a0({t}) quadratures disagree by {diff:e}")));
    }
    Ok(A0Report { t, value, r_route, diff, cutoff, tail_bound })
}

#[derive(Clone, Debug, Serialize)]
pub struct A1Report {
    pub t: usize,
    pub value: f64,
    /// Terms k = 1..K0−1, each (1/k)∫_0^t 2sinh²(u/2k)/sinh(u/2) f₀^{*t}(u) du.
    pub direct: Vec<f64>,
    /// Σ_{k≥K0} through the moment series.
    pub tail: f64,
    pub tail_bound: f64,
    /// The k = 1 slice through the simple-geodesic integral.
    pub slice_check: f64,
    pub slice_diff: f64,
}

/// ζ(s, a) = Σ_{k≥a} k^{−s} by Euler–Maclaurin, with a bound on the remainder.
fn hurwitz(s: u32, a: u32) -> (f64, f64) {
    let a = a as f64;
    let sf = s as f64;
    let mut v = a.powf(1.0 - sf) / (sf - 1.0) + 0.5 * a.powf(-sf);
    let mut rising = sf; // (s)_{2m−1}
    let mut fact = 2.0; // (2m)!
    let mut last = 0.0;
    for m in 1..=7usize {
        if m > 1 {
            rising *= (sf + 2.0 * m as f64 - 3.0) * (sf + 2.0 * m as f64 - 2.0);
            fact *= (2 * m - 1) as f64 * (2 * m) as f64;
        }
        let term = rational_to_f64(&bernoulli(2 * m)) / fact * rising * a.powf(-sf - 2.0 * m as f64 + 1.0);
        if m == 7 {
            last = term.abs();
        } else {
            v += term;
        }
    }
    (v, 2.0 * last)
}

/// a₁(t) = Σ_{k≥1} ∫_0^∞ 2sinh²(ℓ/2)/sinh(kℓ/2) f₀^{*t}(kℓ) dℓ.
///
/// Terms k < K0 are integrated on the grid. For k ≥ K0, sinh²(x) =
/// Σ_j 2^{2j−1}x^{2j}/(2j)! turns the tail into Σ_j M_j/(2j)!·ζ(2j+1, K0) with
/// moments M_j = ∫_0^t u^{2j}/sinh(u/2) f₀^{*t}(u) du.
pub fn a1(tf: &TestFunction, t: usize) -> Result<A1Report> {
    if t == 0 {
        return Err(Error::domain("a1 needs t >= 1"));
    }
    let f = tf.conv_power_checked(t)?;
    let direct: Vec<f64> = (1..K0)
        .map(|k| {
            let kf = k as f64;
            f.half_line_integral(0.0, |u| 2.0 * (u / (2.0 * kf)).sinh().powi(2) / (0.5 * u).sinh() / kf)
        })
        .collect();
    let tf64 = t as f64;
    let mut tail = 0.0;
    let mut err = 0.0;
    let mut fact = 1.0; // (2j)!
    let mut last_term = f64::INFINITY;
    let mut j = 1u32;
    loop {
        fact *= (2 * j - 1) as f64 * (2 * j) as f64;
        let m = f.half_line_integral(0.0, |u| u.powi(2 * j as i32) / (0.5 * u).sinh());
        let (z, ze) = hurwitz(2 * j + 1, K0);
        let term = m / fact * z;
        tail += term;
        err += m / fact * ze;
        last_term = last_term.min(term);
        let q = tf64 * tf64 / ((2 * j + 1) as f64 * (2 * j + 2) as f64 * (K0 * K0) as f64);
        let rest = term * q / (1.0 - q);
        if (q < 1.0 && rest < 1e-3 * A1_TAIL) || j == 40 {
            err += if q < 1.0 { rest } else { f64::INFINITY };
            break;
        }
        j += 1;
    }
    if err > A1_TAIL {
        return Err(Error::numeric(format!("a1({t}) tail bound {err:e} above {A1_TAIL:e}")));
    }
    let slice = leading_simple_integral(
        &|l| {
            let k = if l < 1e-8 { 1.0 } else { l / (2.0 * (0.5 * l).sinh()) };
            k * f.eval(l)
        },
        tf64,
    )?;
    let slice_diff = (slice.value - direct[0]).abs();
    if slice_diff > A1_SLICE_AGREE {
        return Err(Error::numeric(format!("a1({t}) k = 1 slice routes disagree by {slice_diff:e}")));
    }
    let value = direct.iter().sum::<f64>() + tail;
    Ok(A1Report { t, value, direct, tail, tail_bound: err, slice_check: slice.value, slice_diff })
}

/// ν₁(x^p) = a₁(p + 1).
pub fn nu1_monomial(tf: &TestFunction, p: usize) -> Result<f64> {
    Ok(a1(tf, p + 1)?.value)
}

#[derive(Clone, Debug, Serialize)]
pub struct NuTildeReport {
    /// f(i/2)·P(f(i/2)).
    pub value: f64,
    /// Σ_j s_j ∫_0^∞ 2cosh(r/2) f₀^{*(j+1)}(r) dr.
    pub quadrature: f64,
    pub diff: f64,
    pub f_half: f64,
}

/// ν̃₁(P) for P = Σ s_j x^j, in closed form and by quadrature.
pub fn nu_tilde1(tf: &TestFunction, coeffs: &[f64]) -> Result<NuTildeReport> {
    let f_half = tf.f_eval_imag(0.5);
    let value = f_half * coeffs.iter().rev().fold(0.0, |acc, s| acc * f_half + s);
    let mut quadrature = 0.0;
    for (j, s) in coeffs.iter().enumerate() {
        if *s != 0.0 {
            let f = tf.conv_power(j + 1)?;
            quadrature += s * f.half_line_integral(2.0, |u| 2.0 * (0.5 * u).cosh());
        }
    }
    let diff = (value - quadrature).abs();
    if diff > 1e-6 * value.abs().max(1.0) {
        return Err(Error::numeric(format!("nu-tilde routes disagree by {diff:e}")));
    }
    Ok(NuTildeReport { value, quadrature, diff, f_half })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportRow {
    pub p: usize,
    pub nu1: f64,
    pub nu_tilde: f64,
    pub diff: f64,
    /// (π²/6) f(0)^{p+1}.
    pub bound: f64,
    pub pass: bool,
}

/// |(ν₁ − ν̃₁)(x^p)| ≤ (π²/6) f(0)^{p+1} for p = 0..=p_max.
pub fn support_check(tf: &TestFunction, p_max: usize) -> Result<Vec<SupportRow>> {
    if p_max > 12 {
        return Err(Error::domain(format!("support check runs up to p = 12, got {p_max}")));
    }
    let f0 = tf.f_eval(0.0);
    (0..=p_max)
        .map(|p| {
            let nu1 = nu1_monomial(tf, p)?;
            let mut mono = vec![0.0; p + 1];
            mono[p] = 1.0;
            let nu_tilde = nu_tilde1(tf, &mono)?.value;
            let diff = (nu1 - nu_tilde).abs();
            let bound = PI * PI / 6.0 * f0.powi(p as i32 + 1);
            Ok(SupportRow { p, nu1, nu_tilde, diff, bound, pass: diff <= bound * (1.0 + 1e-6) })
        })
        .collect()
}

/// sinh(x/2)/k − sinh²(x/2k), which is ≥ 0 for x ≥ 0 and k ≥ 2. At k = 2 it
/// equals (1 − e^{−x/2})/2, used directly to avoid cancellation.
pub fn sinh_inequality_margin(x: f64, k: u32) -> Result<f64> {
    if k < 2 || x < 0.0 {
        return Err(Error::domain(format!("needs k >= 2 and x >= 0, got k = {k}, x = {x}")));
    }
    if k == 2 {
        return Ok(-0.5 * (-0.5 * x).exp_m1());
    }
    Ok((0.5 * x).sinh() / k as f64 - (x / (2.0 * k as f64)).sinh().powi(2))
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicKernels {
    pub t: usize,
    pub ell: Vec<f64>,
    /// G_t(ℓ) = Σ_{k≥1} ℓ/(2sinh(kℓ/2)) f₀^{*t}(kℓ).
    pub g: Vec<f64>,
    /// R_t, the same sum cut at k ≤ ⌈t/(2 arcsinh 1)⌉.
    pub r: Vec<f64>,
    pub k_cut: usize,
    pub r_sup: f64,
    pub f_sup: f64,
}

/// G_t and R_t on the grid ℓ = h, 2h, …, t.
pub fn geodesic_kernels(tf: &TestFunction, t: usize) -> Result<GeodesicKernels> {
    if t == 0 {
        return Err(Error::domain("kernels need t >= 1"));
    }
    let f = tf.conv_power(t)?;
    let mid = (f.values.len() - 1) / 2;
    let k_cut = (t as f64 / (2.0 * 1f64.asinh())).ceil() as usize;
    let (mut ell, mut g, mut r) = (Vec::with_capacity(mid), Vec::with_capacity(mid), Vec::with_capacity(mid));
    for i in 1..=mid {
        let l = i as f64 * f.h;
        let (mut sg, mut sr) = (0.0, 0.0);
        let mut k = 1;
        while k * i <= mid {
            let v = l / (2.0 * (0.5 * k as f64 * l).sinh()) * f.values[mid + k * i];
            sg += v;
            if k <= k_cut {
                sr += v;
            }
            k += 1;
        }
        ell.push(l);
        g.push(sg);
        r.push(sr);
    }
    let r_sup = r.iter().copied().fold(0.0, f64::max);
    Ok(GeodesicKernels { t, ell, g, r, k_cut, r_sup, f_sup: f.sup() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_matches_direct_sum() {
        for s in [3u32, 5, 9] {
            let (v, e) = hurwitz(s, 32);
            let direct: f64 = (32..200_000u32).map(|k| (k as f64).powi(-(s as i32))).sum();
            let rest = (200_000f64).powi(1 - s as i32) / (s as f64 - 1.0);
            assert!((v - direct - rest).abs() < 1e-14 + e, "s = {s}");
            assert!(e < 1e-20);
        }
    }

    #[test]
    fn sinh_margin() {
        for k in 2..50 {
            for x in [0.0, 0.3, 5.0, 49.0] {
                assert!(sinh_inequality_margin(x, k).unwrap() >= 0.0);
            }
        }
        assert!(sinh_inequality_margin(1.0, 1).is_err());
    }
}
