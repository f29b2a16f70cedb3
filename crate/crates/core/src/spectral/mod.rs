//! The test function f₀ = g₀ ⋆ g₀, its transform f = f̂₀, convolution powers
//! f₀^{*t}, and the trace-formula quantities built on them.
//!
//! Fourier convention: φ̂(r) = ∫ e^{−irx} φ(x) dx, so f̌ = f₀ and
//! (f₀^{*t})^ = fᵗ with no stray factors of 2π.

mod trace;
mod window;

use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::integrate;

pub use trace::{
    a0, a1, geodesic_kernels, nu1_monomial, nu_tilde1, sinh_inequality_margin, support_check, A0Report,
    A1Report, GeodesicKernels, NuTildeReport, SupportRow,
};
pub use window::{
    build_window, chebyshev_coeffs, gap_probability_report, ChebyshevReport, Window, WindowParams,
};

/// Smallest allowed number of grid intervals on [−1, 1].
pub const MIN_INTERVALS: usize = 1 << 12;

/// Tolerance of the fine-versus-coarse convolution power comparison.
const SELF_CONSISTENCY: f64 = 1e-9;

/// exp(−1/(1 − (y/w)²)) on (−w, w).
fn bump(y: f64, w: f64) -> f64 {
    let s = y / w;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// f₀ sampled on a uniform grid of [−1, 1].
#[derive(Debug)]
pub struct TestFunction {
    n: usize,
    h: f64,
    width: f64,
    g0: Vec<f64>,
    f0: Vec<f64>,
    powers: Mutex<Vec<Arc<ConvolutionPower>>>,
}

impl TestFunction {
    /// f₀ = g₀ ⋆ g₀ with g₀ the standard bump on (−w, w); w = ½ gives
    /// support exactly (−1, 1). `intervals` must be a power of two ≥ 2¹².
    pub fn build(intervals: usize, width: f64) -> Result<Self> {
        if intervals < MIN_INTERVALS || !intervals.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid needs a power of two >= {MIN_INTERVALS} intervals, got {intervals}"
            )));
        }
        Self::build_unchecked(intervals, width)
    }

    fn build_unchecked(intervals: usize, width: f64) -> Result<Self> {
        let h = 2.0 / intervals as f64;
        let m = width / h;
        if !(width > 0.0 && width <= 0.5) || (m - m.round()).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "bump half-width must lie in (0, 1/2] on the grid, got {width}"
            )));
        }
        let m = m.round() as usize;
        let mut g0 = vec![0.0; 2 * m + 1];
        for i in 0..=m {
            let v = bump(i as f64 * h, width);
            g0[m + i] = v;
            g0[m - i] = v;
        }
        let conv: Vec<f64> = (0..=4 * m)
            .into_par_iter()
            .map(|c| {
                let lo = c.saturating_sub(2 * m);
                let hi = c.min(2 * m);
                h * (lo..=hi).map(|i| g0[i] * g0[c - i]).sum::<f64>()
            })
            .collect();
        let mut f0 = vec![0.0; intervals + 1];
        let off = intervals / 2 - 2 * m;
        for (c, v) in conv.into_iter().enumerate() {
            f0[off + c] = v;
        }
        for j in 0..intervals / 2 {
            let v = 0.5 * (f0[j] + f0[intervals - j]);
            f0[j] = v;
            f0[intervals - j] = v;
        }
        Ok(TestFunction { n: intervals, h, width, g0, f0, powers: Mutex::new(Vec::new()) })
    }

    pub fn default_grid() -> Result<Self> {
        Self::build(MIN_INTERVALS, 0.5)
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Grid node x_j = −1 + j h.
    pub fn node(&self, j: usize) -> f64 {
        -1.0 + j as f64 * self.h
    }

    pub fn samples(&self) -> &[f64] {
        &self.f0
    }

    /// Trapezoid sum of w(x_j) f₀(x_j) using evenness of f₀ and of w.
    fn even_sum(&self, w: impl Fn(f64) -> f64) -> f64 {
        let mid = self.n / 2;
        let mut s = 0.5 * w(0.0) * self.f0[mid];
        for j in mid + 1..self.n {
            s += w(self.node(j)) * self.f0[j];
        }
        2.0 * self.h * s
    }

    /// f(ρ) = ∫ cos(ρx) f₀(x) dx.
    pub fn f_eval(&self, rho: f64) -> f64 {
        self.even_sum(|x| (rho * x).cos())
    }

    /// f(it) = ∫ cosh(tx) f₀(x) dx.
    pub fn f_eval_imag(&self, t: f64) -> f64 {
        self.even_sum(|x| (t * x).cosh())
    }

    /// f(it) − f(0) = ∫ 2sinh²(tx/2) f₀, free of cancellation for small t.
    pub fn f_imag_excess(&self, t: f64) -> f64 {
        self.even_sum(|x| 2.0 * (0.5 * t * x).sinh().powi(2))
    }

    /// ĝ₀(ρ) from the bump samples; f = ĝ₀² is the test oracle for [`Self::f_eval`].
    pub fn g_hat(&self, rho: f64) -> f64 {
        let m = (self.g0.len() - 1) / 2;
        let mut s = 0.5 * self.g0[m];
        for i in 1..=m {
            s += (rho * i as f64 * self.h).cos() * self.g0[m + i];
        }
        2.0 * self.h * s
    }

    /// ‖g₀^{(k)}‖₁, used for |ĝ₀(ρ)| ≤ ‖g₀^{(k)}‖₁/ρᵏ.
    ///
    /// The integral is split at the sign changes of P_k so each piece is
    /// smooth; the quadrature error estimate is added since the norm only
    /// enters upper bounds.
    pub fn bump_derivative_norm(&self, k: usize) -> Result<f64> {
        let p = bump_derivative_poly(k);
        let f = |y: f64| {
            let u = 1.0 - y * y;
            if u <= 0.0 {
                return 0.0;
            }
            let log_scale = -1.0 / u - 2.0 * k as f64 * u.ln();
            poly_eval(&p, y) * log_scale.exp()
        };
        const SCAN: usize = 20_000;
        let mut cuts = vec![-1.0];
        let step = 2.0 / SCAN as f64;
        for i in 1..SCAN - 1 {
            let (mut a, mut b) = (-1.0 + i as f64 * step, -1.0 + (i + 1) as f64 * step);
            let (pa, pb) = (poly_eval(&p, a), poly_eval(&p, b));
            if pa == 0.0 {
                cuts.push(a);
            } else if pa * pb < 0.0 {
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if poly_eval(&p, m) * pa > 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                cuts.push(0.5 * (a + b));
            }
        }
        cuts.push(1.0);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let r = integrate(f, w[0], w[1], 0.0, 1e-8)?;
            total += r.value.abs() + r.error;
        }
        Ok(total * self.width.powi(1 - k as i32))
    }

    /// f₀^{*t}, cached; power t is power t−1 convolved with f₀.
    pub fn conv_power(&self, t: usize) -> Result<Arc<ConvolutionPower>> {
        if t == 0 {
            return Err(Error::domain("convolution power needs t >= 1"));
        }
        let mut cache = self.powers.lock().expect("power cache poisoned");
        if cache.is_empty() {
            cache.push(Arc::new(ConvolutionPower { t: 1, h: self.h, values: self.f0.clone(), self_error: 0.0 }));
        }
        while cache.len() < t {
            let prev = cache.last().expect("non-empty").clone();
            let values = convolve(&prev.values, &self.f0, self.h);
            cache.push(Arc::new(ConvolutionPower { t: prev.t + 1, h: self.h, values, self_error: 0.0 }));
        }
        Ok(cache[t - 1].clone())
    }

    /// f₀^{*t} together with its agreement with the same power built on the
    /// grid of spacing 2h, compared at the shared nodes.
    pub fn conv_power_checked(&self, t: usize) -> Result<Arc<ConvolutionPower>> {
        let fine = self.conv_power(t)?;
        if fine.self_error > 0.0 || t == 1 {
            return Ok(fine);
        }
        let coarse = TestFunction::build_unchecked(self.n / 2, self.width)?;
        let c = coarse.conv_power(t)?;
        let scale = fine.sup().max(f64::MIN_POSITIVE);
        let err = c
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (fine.values[2 * i] - v).abs())
            .fold(0.0, f64::max)
            / scale;
        if err > SELF_CONSISTENCY {
            return Err(Error::numeric(format!(
                "convolution power t = {t} not resolved: fine/coarse relative gap {err:e}"
            )));
        }
        let checked = Arc::new(ConvolutionPower { self_error: err.max(f64::MIN_POSITIVE), ..(*fine).clone() });
        let mut cache = self.powers.lock().expect("power cache poisoned");
        cache[t - 1] = checked.clone();
        Ok(checked)
    }
}

fn convolve(a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let len = a.len() + b.len() - 1;
    (0..len)
        .into_par_iter()
        .map(|c| {
            let lo = c.saturating_sub(b.len() - 1);
            let hi = c.min(a.len() - 1);
            h * (lo..=hi).map(|i| a[i] * b[c - i]).sum::<f64>()
        })
        .collect()
}

/// P_k with G^{(k)} = P_k/u^{2k}·G, G = exp(−1/u), u = 1 − y²:
/// P_{k+1} = P_k'u² + 4k y P_k u − 2y P_k.
fn bump_derivative_poly(k: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    let u = [1.0, 0.0, -1.0];
    let u2 = poly_mul(&u, &u);
    for j in 0..k {
        let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        let mut next = poly_mul(&if dp.is_empty() { vec![0.0] } else { dp }, &u2);
        let yp = poly_mul(&[0.0, 1.0], &p);
        add_into(&mut next, &poly_mul(&yp, &u), 4.0 * j as f64);
        add_into(&mut next, &yp, -2.0);
        p = next;
    }
    p
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(acc: &mut Vec<f64>, p: &[f64], scale: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += scale * c;
    }
}

fn poly_eval(p: &[f64], y: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

/// f₀^{*t} sampled on [−t, t] with the grid spacing of its test function.
#[derive(Clone, Debug)]
pub struct ConvolutionPower {
    pub t: usize,
    pub h: f64,
    pub values: Vec<f64>,
    /// Relative gap to the coarse-grid power (0 when not checked).
    pub self_error: f64,
}

impl ConvolutionPower {
    pub fn node(&self, i: usize) -> f64 {
        -(self.t as f64) + i as f64 * self.h
    }

    fn mid(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    /// Trapezoid integral over [−t, t].
    pub fn mass(&self) -> f64 {
        self.h * self.values.iter().sum::<f64>()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Six-point Lagrange interpolation; zero outside (−t, t).
    pub fn eval(&self, x: f64) -> f64 {
        let t = self.t as f64;
        if x.abs() >= t {
            return 0.0;
        }
        let pos = (x + t) / self.h;
        let last = self.values.len() - 1;
        let base = (pos.floor() as isize - 2).clamp(0, last as isize - 5) as usize;
        let mut s = 0.0;
        for i in base..base + 6 {
            let mut l = 1.0;
            for j in base..base + 6 {
                if j != i {
                    l *= (pos - j as f64) / (i as f64 - j as f64);
                }
            }
            s += l * self.values[i];
        }
        s
    }

    /// Simpson rule for ∫_0^t w(u) f₀^{*t}(u) du on the grid; w(0) is taken
    /// as `w0` so removable singularities can be passed in.
    pub fn half_line_integral(&self, w0: f64, w: impl Fn(f64) -> f64 + Sync) -> f64 {
        let mid = self.mid();
        let ys: Vec<f64> = (mid..self.values.len())
            .into_par_iter()
            .map(|i| {
                let u = self.node(i);
                let wi = if i == mid { w0 } else { w(u) };
                wi * self.values[i]
            })
            .collect();
        crate::quad::simpson(&ys, self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf() -> TestFunction {
        TestFunction::default_grid().unwrap()
    }

    #[test]
    fn even_and_supported() {
        let t = tf();
        let f = t.samples();
        let n = t.intervals();
        for j in 0..=n {
            assert_eq!(f[j], f[n - j]);
            assert!(f[j] >= 0.0);
        }
        assert_eq!(f[0], 0.0);
        assert!(f[n / 2] > 0.0);
        assert!(TestFunction::build(1000, 0.5).is_err());
    }

    #[test]
    fn transform_is_square_of_bump_transform() {
        let t = tf();
        for rho in [0.0, 0.7, 3.0, 11.5, 40.0] {
            let a = t.f_eval(rho);
            let b = t.g_hat(rho).powi(2);
            assert!((a - b).abs() < 1e-15, "rho = {rho}: {a} vs {b}");
        }
    }

    #[test]
    fn imaginary_axis_above_real_value() {
        let t = tf();
        assert!(t.f_eval_imag(0.5) > t.f_eval(0.0));
        let d = t.f_eval_imag(0.1) - t.f_eval(0.0);
        assert!((t.f_imag_excess(0.1) - d).abs() < 1e-15);
    }

    #[test]
    fn derivative_norm_bounds_transform() {
        let t = tf();
        for k in 1..6 {
            let b = t.bump_derivative_norm(k).unwrap();
            for rho in [5.0, 20.0, 60.0] {
                assert!(t.g_hat(rho).abs() <= b / rho.powi(k as i32) * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn powers_mass_and_young() {
        let t = tf();
        let f0 = t.f_eval(0.0);
        let sup1 = t.conv_power(1).unwrap().sup();
        for p in 1..=3 {
            let c = t.conv_power(p).unwrap();
            assert!((c.mass() - f0.powi(p as i32)).abs() < 1e-14);
            assert!(c.sup() <= sup1 * f0.powi(p as i32 - 1) * (1.0 + 1e-12));
            assert_eq!(c.values.len(), p * t.intervals() + 1);
        }
        assert!(t.conv_power_checked(2).unwrap().self_error < 1e-9);
    }

    #[test]
    fn interpolation_matches_nodes() {
        let t = tf();
        let c = t.conv_power(2).unwrap();
        for i in [100, 4096, 5000, 8000] {
            assert!((c.eval(c.node(i)) - c.values[i]).abs() < 1e-15);
        }
        assert_eq!(c.eval(2.5), 0.0);
    }
}
