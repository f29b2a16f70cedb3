//! The mollified window h, the angular function w(θ) = h(f(i/2)cosθ)/(f(i/2)cosθ),
//! its cosine coefficients and derivative norms.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use super::TestFunction;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Highest derivative order whose norm is estimated.
pub const MAX_ORDER: usize = 6;
/// Finite-difference steps across one transition.
const STEPS_PER_TRANSITION: f64 = 40.0;
/// Relative energy in the top quarter of the modes that signals aliasing.
const ALIAS_ENERGY: f64 = 1e-6;

fn gl() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(48))
}

fn bump1(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

/// ∫_a^b of the unit bump by a fixed composite Gauss–Legendre rule, smooth in a, b.
fn bump_integral(a: f64, b: f64) -> f64 {
    const PANELS: usize = 6;
    let (x, w) = gl();
    let step = (b - a) / PANELS as f64;
    let mut s = 0.0;
    for p in 0..PANELS {
        let c = a + (p as f64 + 0.5) * step;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * bump1(c + 0.5 * step * xi);
        }
    }
    0.5 * step * s
}

fn bump_mass() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| bump_integral(-1.0, 1.0))
}

/// Normalized cumulative bump, rising from 0 at s = −1 to 1 at s = 1.
fn step_fn(s: f64) -> f64 {
    if s <= -1.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else if s <= 0.0 {
        bump_integral(-1.0, s) / bump_mass()
    } else {
        1.0 - bump_integral(s, 1.0) / bump_mass()
    }
}

/// Cushions between the plateau, the zero set and f(i/2), in the λ = ¼ − t² variable.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WindowParams {
    /// Plateau ends at f(i√(¼ − lo_gap)).
    pub lo_gap: f64,
    /// h vanishes beyond f(i√(¼ − hi_gap)).
    pub hi_gap: f64,
}

impl Default for WindowParams {
    fn default() -> Self {
        WindowParams { lo_gap: 0.0024, hi_gap: 0.0023 }
    }
}

/// h = 1_{[a′, b′]} ⋆ φ_δ, equal to 1 on [f(i√ε), f(i√(¼−lo_gap))] and 0
/// outside (f(0), f(i√(¼−hi_gap))).
#[derive(Clone, Debug, Serialize)]
pub struct Window {
    pub eps: f64,
    pub f_zero: f64,
    pub plateau_lo: f64,
    pub plateau_hi: f64,
    pub zero_hi: f64,
    /// f(i/2).
    pub f_half: f64,
    pub centre_lo: f64,
    pub centre_hi: f64,
    /// Mollifier half-width.
    pub delta: f64,
    /// Finite-difference estimates of sup|w^{(m)}|, m = 1..=6.
    pub norms: Vec<f64>,
}

impl Window {
    pub fn h(&self, x: f64) -> f64 {
        step_fn((x - self.centre_lo) / self.delta) - step_fn((x - self.centre_hi) / self.delta)
    }

    pub fn w(&self, theta: f64) -> f64 {
        let x = self.f_half * theta.cos();
        if x <= 0.0 {
            0.0
        } else {
            self.h(x) / x
        }
    }

    /// w near θ_c = arccos(c/f(i/2)) as a function of τ = θ − θ_c, with
    /// x − c formed from small quantities only.
    fn w_local(&self, c: f64, tau: f64) -> f64 {
        let k = self.f_half;
        let tc = (c / k).acos();
        let r0 = k * tc.cos() - c;
        let dx = r0 + k * (-2.0 * tc.cos() * (0.5 * tau).sin().powi(2) - tc.sin() * tau.sin());
        let x = c + dx;
        let h = if c == self.centre_lo {
            step_fn(dx / self.delta) - step_fn((x - self.centre_hi) / self.delta)
        } else {
            step_fn((x - self.centre_lo) / self.delta) - step_fn(dx / self.delta)
        };
        h / x
    }
}

fn derivative_norms(win: &Window) -> Vec<f64> {
    let mut norms = vec![0.0; MAX_ORDER];
    for c in [win.centre_lo, win.centre_hi] {
        let tc = (c / win.f_half).acos();
        let width = 2.0 * win.delta / (win.f_half * tc.sin());
        let step = width / STEPS_PER_TRANSITION;
        let span = (0.6 * width / step).ceil() as i64;
        for (m, norm) in norms.iter_mut().enumerate() {
            let m = m + 1;
            let binom: Vec<f64> = (0..=m)
                .scan(1.0, |b, i| {
                    let v = *b;
                    *b = *b * (m - i) as f64 / (i + 1) as f64;
                    Some(v)
                })
                .collect();
            for j in -span..=span {
                let centre = j as f64 * step;
                let mut s = 0.0;
                for (i, b) in binom.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    s += sign * b * win.w_local(c, centre + (0.5 * m as f64 - i as f64) * step);
                }
                *norm = f64::max(*norm, (s / step.powi(m as i32)).abs());
            }
        }
    }
    norms
}

/// Builds the window for a given ε and estimates its derivative norms.
pub fn build_window(tf: &TestFunction, eps: f64, params: WindowParams) -> Result<Window> {
    let WindowParams { lo_gap, hi_gap } = params;
    if !(hi_gap > 0.0 && lo_gap > hi_gap && lo_gap < 0.25) {
        return Err(Error::domain(format!("need 0 < hi_gap < lo_gap < 1/4, got {hi_gap}, {lo_gap}")));
    }
    if !(eps > 0.0 && eps < 0.25 - lo_gap) {
        return Err(Error::domain(format!("eps must lie in (0, {}), got {eps}", 0.25 - lo_gap)));
    }
    let f_zero = tf.f_eval(0.0);
    let plateau_lo = f_zero + tf.f_imag_excess(eps.sqrt());
    let plateau_hi = f_zero + tf.f_imag_excess((0.25 - lo_gap).sqrt());
    let zero_hi = f_zero + tf.f_imag_excess((0.25 - hi_gap).sqrt());
    let f_half = tf.f_eval_imag(0.5);
    let delta = 0.5 * (plateau_lo - f_zero).min(zero_hi - plateau_hi);
    let centre_lo = 0.5 * (f_zero + plateau_lo);
    let centre_hi = 0.5 * (plateau_hi + zero_hi);
    if !(delta > 0.0) || centre_lo + delta >= centre_hi - delta {
        return Err(Error::domain(format!("window transitions overlap at eps = {eps}")));
    }
    let mut win = Window {
        eps,
        f_zero,
        plateau_lo,
        plateau_hi,
        zero_hi,
        f_half,
        centre_lo,
        centre_hi,
        delta,
        norms: Vec::new(),
    };
    win.norms = derivative_norms(&win);
    Ok(win)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevReport {
    /// a_k with w(θ) = Σ a_k cos(kθ).
    pub coeffs: Vec<f64>,
    /// Max deviation of the cosine sum from the samples.
    pub reconstruction_error: f64,
    /// √(top-quarter energy / total energy).
    pub top_energy: f64,
    /// Σ |a_k| k^s for s = 0..=6.
    pub weighted_sums: Vec<f64>,
}

/// Cosine coefficients of an even function sampled at θ_j = 2πj/M.
pub fn chebyshev_coeffs(samples: &[f64]) -> Result<ChebyshevReport> {
    let m = samples.len();
    if m < 16 || m % 2 != 0 {
        return Err(Error::domain(format!("need an even sample count >= 16, got {m}")));
    }
    let scale = samples.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    for j in 1..m / 2 {
        if (samples[j] - samples[m - j]).abs() > 1e-12 * scale {
            return Err(Error::domain("samples are not even in θ"));
        }
    }
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let half = m / 2;
    let coeffs: Vec<f64> = (0..=half)
        .map(|k| {
            let c = buf[k].re / m as f64;
            if k == 0 || k == half {
                c
            } else {
                2.0 * c
            }
        })
        .collect();
    let reconstruction_error = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            let v: f64 = coeffs.iter().enumerate().map(|(k, a)| a * (k as f64 * th).cos()).sum();
            (v - samples[j]).abs()
        })
        .fold(0.0, f64::max);
    if reconstruction_error > 1e-9 * scale.max(1.0) {
        return Err(Error::numeric(format!("cosine reconstruction off by {reconstruction_error:e}")));
    }
    let total: f64 = coeffs.iter().map(|a| a * a).sum();
    let top: f64 = coeffs[3 * half / 4..].iter().map(|a| a * a).sum();
    let top_energy = if total > 0.0 { (top / total).sqrt() } else { 0.0 };
    if top_energy > ALIAS_ENERGY {
        return Err(Error::numeric(format!(
            "{m} samples under-resolve the function: top-mode energy fraction {top_energy:e}"
        )));
    }
    let weighted_sums = (0..=6)
        .map(|s| coeffs.iter().enumerate().map(|(k, a)| a.abs() * (k as f64).powi(s)).sum())
        .collect();
    Ok(ChebyshevReport { coeffs, reconstruction_error, top_energy, weighted_sums })
}

/// C·ε^{−m/2}/g, the bound on the probability of a small eigenvalue in (ε, ¼ − ε).
pub fn gap_probability_report(g: u32, eps: f64, m: u32, c: f64) -> Result<f64> {
    if g == 0 || !(eps > 0.0 && eps < 0.25) || !(c > 0.0) {
        return Err(Error::domain(format!("bad gap parameters g = {g}, eps = {eps}, C = {c}")));
    }
    Ok(c * eps.powf(-(m as f64) / 2.0) / g as f64)
}
