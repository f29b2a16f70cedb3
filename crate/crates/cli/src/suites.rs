//! Verification checks, one function per property family. `verify` composes
//! them into suites and the acceptance tests call them individually.

use std::f64::consts::PI;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wpvol::asymptotics::{
    coeff_product_bound, expansion_product, expansion_product_leading_zeros, shift_base, shift_coefficients,
    tail_zeta_bound, verify_suite, Expansion, Suite,
};
use wpvol::intersection::{recursion_i_residual, recursion_ii_residual, recursion_iii_residual};
use wpvol::spectral::{
    a0, build_window, nu_tilde1, sinh_inequality_margin, support_check, TestFunction, WindowParams,
};
use wpvol::volumes::{
    expbound_check, leading_simple_integral, monotonicity_holds, rho, simple_expectation, volume,
    volume_at, volume_from_dilaton_sum,
};
use wpvol::{intersection_number, MemoStore, Rational, TauIndex};

use crate::error::CliResult;
use crate::report::{Check, Report};

/// Stable (g, n) with 3g − 3 + n ≤ `max_c`, ordered by complexity then g.
pub fn stable_pairs(max_c: i64) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for c in -1..=max_c {
        for g in 0..=((c + 3) / 3) as u32 {
            let n = c + 3 - 3 * g as i64;
            if n >= 0 && 2 * g as i64 - 2 + n > 0 {
                out.push((g, n as usize));
            }
        }
    }
    out
}

/// Non-increasing length-n vectors with entry sum ≤ `max_sum`.
pub fn descending_vectors(n: usize, max_sum: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left.min(cap) {
            cur.push(v);
            rec(n, left - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_sum, max_sum, &mut Vec::new(), &mut out);
    out
}

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Recursions i, ii and iii against the stored values for every instance
/// whose left-hand index has complexity ≤ `max_c`.
pub fn cross_recursions(store: &MemoStore, max_c: i64) -> CliResult<Report> {
    let mut report = Report::new("recursions");
    let (mut checked, mut failed) = ([0usize; 3], [0usize; 3]);
    let mut first_bad = None;
    for (g, n) in stable_pairs(max_c + 3) {
        // iii on (g, n) itself
        if dim(g, n) <= max_c {
            for d in descending_vectors(n, dim(g, n) as u32) {
                checked[2] += 1;
                if !recursion_iii_residual(g, n, &d, store)?.is_zero() {
                    failed[2] += 1;
                    first_bad.get_or_insert(format!("iii at ({g}, {n}, {d:?})"));
                }
            }
        }
        // i has left index (g, n+2)
        if dim(g, n + 2) <= max_c {
            for d in descending_vectors(n, (dim(g, n + 2) - 1).max(0) as u32) {
                checked[0] += 1;
                if !recursion_i_residual(g, n, &d, store)?.is_zero() {
                    failed[0] += 1;
                    first_bad.get_or_insert(format!("i at ({g}, {n}, {d:?})"));
                }
            }
        }
        // ii has left index (g, n+3) with τ_{l+1}
        if dim(g, n + 3) <= max_c {
            let top = dim(g, n + 3) - 1;
            for l in 0..=top.max(0) as u32 {
                for d in descending_vectors(n, (top - l as i64).max(0) as u32) {
                    checked[1] += 1;
                    if !recursion_ii_residual(g, n, &d, l, store)?.is_zero() {
                        failed[1] += 1;
                        first_bad.get_or_insert(format!("ii at ({g}, {n}, {d:?}, l = {l})"));
                    }
                }
            }
        }
    }
    for (i, name) in ["recursion_i", "recursion_ii", "recursion_iii"].into_iter().enumerate() {
        report.push(Check::exact(
            name,
            failed[i],
            Some(format!("{} instances, {} nonzero residuals", checked[i], failed[i])),
        ));
    }
    if let Some(bad) = first_bad {
        report.checks.last_mut().expect("pushed").detail = Some(bad);
    }
    Ok(report)
}

/// Out-of-dimension indices vanish; values are invariant under permuting d
/// and under permuting the boundary lengths.
pub fn vanishing_and_symmetry(store: &MemoStore, seed: u64, max_c: i64, samples: usize) -> CliResult<Report> {
    let mut report = Report::new("recursions");
    let mut nonzero = 0;
    let mut count = 0;
    for (g, n) in stable_pairs(max_c) {
        if n == 0 {
            continue;
        }
        let top = dim(g, n) as u32;
        for extra in 1..=2 {
            for d in descending_vectors(n, top + extra) {
                if d.iter().sum::<u32>() > top {
                    count += 1;
                    if !intersection_number(&TauIndex::new(g, d)?, store)?.is_zero() {
                        nonzero += 1;
                    }
                }
            }
        }
    }
    report.push(Check::exact("vanishing", nonzero, Some(format!("{count} out-of-dimension indices"))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u32, usize)> = stable_pairs(max_c).into_iter().filter(|p| p.1 >= 2).collect();
    let mut broken = 0;
    for _ in 0..samples {
        let (g, n) = *pairs.choose(&mut rng).expect("pairs exist");
        let top = dim(g, n) as u32;
        let mut d: Vec<u32> = vec![0; n];
        let mut left = rng.gen_range(0..=top);
        while left > 0 {
            d[rng.gen_range(0..n)] += 1;
            left -= 1;
        }
        let mut p = d.clone();
        p.shuffle(&mut rng);
        let a = intersection_number(&TauIndex::new(g, d)?, store)?;
        let b = intersection_number(&TauIndex::new(g, p)?, store)?;
        let x: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(0..=12), rng.gen_range(1..=4))).collect();
        let mut y = x.clone();
        y.shuffle(&mut rng);
        if a != b || volume_at(g, n, &x, store)? != volume_at(g, n, &y, store)? {
            broken += 1;
        }
    }
    report.push(Check::exact("permutation_invariance", broken, Some(format!("{samples} random permutations"))));
    Ok(report)
}

/// [τ₀ⁿ]_{g,n} from the store against the dilaton-sum route.
pub fn normalization(store: &MemoStore, max_c: i64) -> CliResult<Report> {
    let mut report = Report::new("recursions");
    let mut bad = Vec::new();
    let pairs = stable_pairs(max_c);
    for &(g, n) in &pairs {
        if volume(g, n, store)? != volume_from_dilaton_sum(g, n, store)? {
            bad.push(format!("({g}, {n})"));
        }
    }
    report.push(Check::exact(
        "normalization",
        bad.len(),
        Some(format!("{} pairs; mismatches: [{}]", pairs.len(), bad.join(", "))),
    ));
    Ok(report)
}

/// 1 ≤ V(x)/V ≤ exp(Σx/2) at random rational lengths with Σx ≤ 10, and
/// V_{g,n} ≤ V_{g+1,n−2} for n ≥ 4.
pub fn expbound_sandwich(store: &MemoStore, seed: u64, samples: usize, max_c: i64) -> CliResult<Report> {
    let mut report = Report::new("bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u32, usize)> = stable_pairs(max_c).into_iter().filter(|p| p.1 >= 1).collect();
    let (mut low, mut up, mut worst) = (0, 0, 0.0f64);
    for _ in 0..samples {
        let (g, n) = *pairs.choose(&mut rng).expect("pairs exist");
        // Σ x ≤ 10 with denominators up to 8
        let mut budget = 80i64;
        let mut x = Vec::with_capacity(n);
        for _ in 0..n {
            let p = rng.gen_range(0..=budget);
            budget -= p;
            x.push(q(p, 8));
        }
        x.shuffle(&mut rng);
        let c = expbound_check(g, n, &x, store)?;
        low += usize::from(!c.lower);
        up += usize::from(!c.upper);
        worst = worst.max(c.ratio / c.exp_bound);
    }
    report.push(Check::exact("expbound_lower", low, Some(format!("{samples} samples"))));
    report.push(Check::exact("expbound_upper", up, None).with_detail(format!("max ratio/exp bound {worst:.6}")));
    let mut mono = 0;
    let mut count = 0;
    for (g, n) in stable_pairs(max_c) {
        if n >= 4 {
            count += 1;
            mono += usize::from(!monotonicity_holds(g, n, store)?);
        }
    }
    report.push(Check::exact("monotonicity_n_ge_4", mono, Some(format!("{count} pairs"))));
    Ok(report)
}

/// |ρ_{g+1}/ρ_g − 1| ≤ 5/g for g = gmin..=gmax.
pub fn mz_trend(store: &MemoStore, gmin: u32, gmax: u32) -> CliResult<Report> {
    let mut report = Report::new("mz");
    let mut prev = rho(gmin.max(2), store)?;
    for g in gmin.max(2)..=gmax {
        let next = rho(g + 1, store)?;
        report.push(Check::at_most(format!("rho_ratio_g{g}"), (next / prev - 1.0).abs(), 5.0 / g as f64));
        prev = next;
    }
    Ok(report)
}

/// Envelope spreads of one ratio family.
pub fn envelope_suite(store: &MemoStore, suite: Suite, gmin: u32, gmax: u32) -> CliResult<Report> {
    let r = verify_suite(suite, gmin, gmax, store)?;
    let name = serde_json::to_value(suite).expect("suite serializes").as_str().unwrap_or("suite").to_string();
    let mut report = Report::new("expansions");
    for s in r.series {
        report.push(
            Check::at_most(format!("{name}_{}", s.label), s.spread, wpvol::asymptotics::ENVELOPE_FACTOR)
                .with_detail(format!("g·|ratio − limit| from {:.4e} to {:.4e}", s.envelope[0], s.envelope[s.envelope.len() - 1])),
        );
    }
    Ok(report)
}

/// Σ(a_{i+1} − a_i)i^r ≤ 2·r! for r = 0..=max_r, and the r = 0 value.
pub fn tail_zeta(max_r: u32) -> Report {
    let mut report = Report::new("bounds");
    let mut failed = Vec::new();
    for r in 0..=max_r {
        let t = tail_zeta_bound(r);
        if !t.holds {
            failed.push(r);
        }
    }
    report.push(Check::exact("tail_zeta_bound", failed.len(), Some(format!("r = 0..={max_r}, failing {failed:?}"))));
    let r0 = tail_zeta_bound(0);
    let target = 1.0 - PI * PI / 12.0;
    let gap = (r0.partial_lo - target).abs().max((r0.partial_hi - target).abs());
    report.push(Check::at_most("tail_zeta_r0", gap, 1e-10));
    report
}

/// Partitions of every total up to `max_total`; the product side is
/// symmetric in t so orderings add nothing.
fn partitions(max_total: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for v in (1..=left.min(cap)).rev() {
            cur.push(v);
            rec(left - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_total, max_total, &mut Vec::new(), &mut out);
    out
}

/// The coefficient product inequality on all t with Σt ≤ `max_total`.
pub fn coeff_products(max_total: u32) -> CliResult<Report> {
    let mut report = Report::new("bounds");
    const VALUES: [u64; 4] = [2, 3, 10, 600];
    let ts = partitions(max_total);
    let mut failed = Vec::new();
    let mut count = 0;
    for &b in &VALUES {
        for &c in &VALUES {
            for t in &ts {
                count += 1;
                if !coeff_product_bound(t, b, c)?.holds {
                    failed.push(format!("{t:?}, b = {b}, c = {c}"));
                }
            }
        }
    }
    report.push(Check::exact("coeff_product", failed.len(), Some(format!("{count} instances {failed:?}"))));
    Ok(report)
}

/// A(h) = Σ a_t/h^t + C·u/(h^k(h + v)), h = g − m, with |u| ≤ 1 and v ≥ 0,
/// which satisfies its own expansion contract exactly.
#[derive(Clone, Debug)]
pub struct SyntheticExpansion {
    pub base: i64,
    pub coeffs: Vec<Rational>,
    pub err: Rational,
    pub u: Rational,
    pub v: Rational,
    pub g_min: Rational,
}

impl SyntheticExpansion {
    pub fn random(rng: &mut ChaCha8Rng, base: i64, k: usize, g_min: Rational) -> Self {
        let coeffs = (0..=k).map(|_| q(rng.gen_range(-20..=20), rng.gen_range(1..=9))).collect();
        let err = q(rng.gen_range(1..=50), rng.gen_range(1..=5));
        let den = rng.gen_range(1..=6);
        let u = q(rng.gen_range(-den..=den), den);
        let v = q(rng.gen_range(0..=20), rng.gen_range(1..=3));
        SyntheticExpansion { base, coeffs, err, u, v, g_min }
    }

    pub fn value(&self, g: &Rational) -> Rational {
        let h = g - Rational::from_integer(self.base.into());
        let inv = h.recip();
        let mut s = Rational::zero();
        for c in self.coeffs.iter().rev() {
            s = s * &inv + c;
        }
        let k = self.coeffs.len() as i32 - 1;
        s + &self.err * &self.u / (h.pow(k) * (&h + &self.v))
    }

    pub fn expansion(&self) -> wpvol::Result<Expansion> {
        Expansion::new(self.base, self.coeffs.clone(), self.err.clone(), self.g_min.clone())
    }
}

/// Integers g in (g_min, g_min + count].
fn sample_gs(g_min: &Rational, count: i64) -> Vec<Rational> {
    let start = g_min.floor().to_integer() + 1;
    (0..count).map(|i| Rational::from_integer(&start + i)).collect()
}

/// Σ a_i/(g−m)^i re-expanded in 1/g by multiplying geometric series
/// 1/(g−m) = Σ_j m^j/g^{j+1}, truncated at the order of `a`.
pub fn symbolic_shift(a: &[Rational], m: i64) -> Vec<Rational> {
    let k = a.len() - 1;
    let mr = Rational::from_integer(m.into());
    let mut geo = vec![Rational::zero(); k + 1];
    for j in 0..k {
        geo[j + 1] = mr.pow(j as i32);
    }
    let mut out = vec![Rational::zero(); k + 1];
    out[0] = a[0].clone();
    let mut power = {
        let mut one = vec![Rational::zero(); k + 1];
        one[0] = Rational::from_integer(1.into());
        one
    };
    for ai in &a[1..] {
        let mut next = vec![Rational::zero(); k + 1];
        for (i, x) in power.iter().enumerate() {
            for (j, y) in geo.iter().enumerate() {
                if i + j <= k {
                    next[i + j] += x * y;
                }
            }
        }
        power = next;
        for (o, p) in out.iter_mut().zip(&power) {
            *o += ai * p;
        }
    }
    out
}

/// Error contracts of product, leading-zero product and base shift on
/// random synthetic instances, plus the shift coefficients against the
/// geometric-series oracle.
pub fn expansion_algebra(seed: u64, instances: usize) -> CliResult<Report> {
    let mut report = Report::new("expansions");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut violations, mut oracle_bad) = ([0usize; 3], 0usize);
    let mut counts = [0usize; 3];
    for i in 0..instances {
        match i % 3 {
            0 => {
                let m = rng.gen_range(0..=3i64);
                let parts: Vec<SyntheticExpansion> = (0..rng.gen_range(2..=3))
                    .map(|_| {
                        let gm = q(2 * m + 2 + rng.gen_range(0..=8), 2);
                        let k = rng.gen_range(1..=4);
                        SyntheticExpansion::random(&mut rng, m, k, gm)
                    })
                    .collect();
                let exps = parts.iter().map(SyntheticExpansion::expansion).collect::<wpvol::Result<Vec<_>>>()?;
                let p = expansion_product(&exps)?;
                for g in sample_gs(&p.g_min, 40) {
                    counts[0] += 1;
                    let v = parts.iter().fold(Rational::from_integer(1.into()), |acc, s| acc * s.value(&g));
                    violations[0] += usize::from(!p.contract_holds(&g, &v));
                }
            }
            1 => {
                let m = rng.gen_range(0..=2i64);
                let r = rng.gen_range(0..=2usize);
                let k = rng.gen_range(1..=3usize);
                let s = rng.gen_range(k.saturating_sub(r + 1)..=k);
                let gm = Rational::from_integer((m + 1 + rng.gen_range(0..4)).into());
                let mut a1 = SyntheticExpansion::random(&mut rng, m, s + r + 1, gm);
                for c in &mut a1.coeffs[..=r] {
                    *c = Rational::zero();
                }
                let rest: Vec<SyntheticExpansion> = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        let gm = Rational::from_integer((m + 1 + rng.gen_range(0..4)).into());
                        SyntheticExpansion::random(&mut rng, m, k, gm)
                    })
                    .collect();
                let rest_e = rest.iter().map(SyntheticExpansion::expansion).collect::<wpvol::Result<Vec<_>>>()?;
                let p = expansion_product_leading_zeros(&a1.expansion()?, &rest_e, r, s)?;
                for g in sample_gs(&p.g_min, 40) {
                    counts[1] += 1;
                    let v = rest.iter().fold(a1.value(&g), |acc, e| acc * e.value(&g));
                    violations[1] += usize::from(!p.contract_holds(&g, &v));
                }
            }
            _ => {
                let k = rng.gen_range(1..=4usize);
                let m = rng.gen_range(1..=k as i64 + 1);
                let gm = Rational::from_integer(((k as i64 + 1).pow(3) + rng.gen_range(0..=5)).into());
                let a = SyntheticExpansion::random(&mut rng, m, k, gm);
                let shifted = shift_base(&a.expansion()?, m)?;
                if shift_coefficients(&a.coeffs, m) != symbolic_shift(&a.coeffs, m) {
                    oracle_bad += 1;
                }
                for g in sample_gs(&shifted.g_min, 40) {
                    counts[2] += 1;
                    violations[2] += usize::from(!shifted.contract_holds(&g, &a.value(&g)));
                }
            }
        }
    }
    for (i, name) in ["product_contract", "leading_zero_contract", "shift_contract"].into_iter().enumerate() {
        report.push(Check::exact(name, violations[i], Some(format!("{} sampled g", counts[i]))));
    }
    report.push(Check::exact("shift_symbolic_oracle", oracle_bad, None));
    Ok(report)
}

/// A fixed smooth bump on (0, 3).
pub fn bump_on_0_3(x: f64) -> f64 {
    if x <= 0.0 || x >= 3.0 {
        0.0
    } else {
        (-1.0 / (x * (3.0 - x))).exp()
    }
}

/// g·|E_simple(g, F)/I_lead(F) − 1| within the envelope factor over the
/// g range, and the quadrature self-error.
pub fn simple_expectation_convergence(store: &MemoStore, gmin: u32, gmax: u32) -> CliResult<Report> {
    let mut report = Report::new("expansions");
    let lead = leading_simple_integral(&bump_on_0_3, 3.0)?;
    let mut env = Vec::new();
    let mut self_err = lead.self_error;
    for g in gmin..=gmax {
        let e = simple_expectation(g, &bump_on_0_3, 3.0, store)?;
        env.push(g as f64 * (e.value / lead.value - 1.0).abs());
        self_err = self_err.max(e.self_error);
    }
    let max = env.iter().copied().fold(f64::MIN, f64::max);
    let min = env.iter().copied().fold(f64::MAX, f64::min);
    report.push(
        Check::at_most("simple_expectation_envelope", max / min, wpvol::asymptotics::ENVELOPE_FACTOR)
            .with_detail(format!("envelope from {:.5} to {:.5}", env[0], env[env.len() - 1])),
    );
    report.push(Check::at_most("simple_expectation_self_error", self_err, 1e-9));
    Ok(report)
}

/// Non-negativity of f on [−50, 50], growth of f(it) on [0, ½], evenness
/// and support of the samples.
pub fn test_function_checks(tf: &TestFunction) -> Report {
    let mut report = Report::new("spectral");
    let min = (0..=10_000).map(|i| tf.f_eval(-50.0 + 0.01 * i as f64)).fold(f64::MAX, f64::min);
    report.push(Check::at_most("fhat_nonnegative", -min, 1e-12));
    let ts: Vec<f64> = (0..100).map(|i| 0.5 * i as f64 / 99.0).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| tf.f_imag_excess(t)).collect();
    let drops = vals.windows(2).filter(|w| w[1] <= w[0]).count();
    report.push(Check::exact("f_imag_increasing", drops, Some("100-point grid".into())));
    let f = tf.samples();
    let n = tf.intervals();
    let uneven = (0..=n).filter(|&j| f[j] != f[n - j]).count();
    let outside = usize::from(f[0] != 0.0 || f[n] != 0.0) + f.iter().filter(|v| **v < 0.0).count();
    report.push(Check::exact("f0_even", uneven, None));
    report.push(Check::exact("f0_support", outside, None));
    report
}

/// Dual quadrature of a₀ and the mass identity of the convolution powers.
pub fn trace_quadrature(tf: &TestFunction, quad_tol: f64) -> CliResult<Report> {
    let mut report = Report::new("spectral");
    for t in 1..=4 {
        let r = a0(tf, t)?;
        report.push(Check::at_most(format!("a0_dual_t{t}"), r.diff, quad_tol.min(1e-8)));
    }
    let f0 = tf.f_eval(0.0);
    for t in 1..=6 {
        let c = tf.conv_power_checked(t)?;
        report.push(
            Check::at_most(format!("mass_identity_t{t}"), (c.mass() - f0.powi(t as i32)).abs(), 1e-8)
                .with_detail(format!("coarse-grid gap {:e}", c.self_error)),
        );
    }
    Ok(report)
}

/// ν̃₁ routes, the support bound for p ≤ 12 and the sinh inequality.
pub fn nu_tilde_checks(tf: &TestFunction, seed: u64, samples: usize) -> CliResult<Report> {
    let mut report = Report::new("spectral");
    for j in 0..=5 {
        let mut p = vec![0.0; j + 1];
        p[j] = 1.0;
        let r = nu_tilde1(tf, &p)?;
        report.push(Check::at_most(format!("nu_tilde_x{j}"), r.diff / r.value.abs(), 1e-6));
    }
    for row in support_check(tf, 12)? {
        report.push(Check::at_most(format!("support_bound_p{}", row.p), row.diff, row.bound * (1.0 + 1e-6)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..samples {
        let x = rng.gen_range(0.0..60.0);
        let k = rng.gen_range(2..=100u32);
        if sinh_inequality_margin(x, k)? < 0.0 {
            bad += 1;
        }
    }
    report.push(Check::exact("sinh_inequality", bad, Some(format!("{samples} samples"))));
    Ok(report)
}

/// Base ε of the window scaling check; the left transition is the binding
/// one for ε and ε/4.
pub const WINDOW_EPS: f64 = 1e-5;

/// ‖w^{(m)}‖(ε/4)/‖w^{(m)}‖(ε) within a factor 4 of 2^m, m = 1..=4.
pub fn window_scaling(tf: &TestFunction) -> CliResult<Report> {
    let mut report = Report::new("spectral");
    let a = build_window(tf, WINDOW_EPS, WindowParams::default())?;
    let b = build_window(tf, WINDOW_EPS / 4.0, WindowParams::default())?;
    for m in 1..=4 {
        let ratio = b.norms[m - 1] / a.norms[m - 1];
        let target = 2f64.powi(m as i32);
        // within a factor 4 either way, measured on a log scale
        let off = (ratio / target).ln().abs();
        report.push(
            Check::at_most(format!("window_scaling_m{m}"), off, 4f64.ln())
                .with_detail(format!("ratio {ratio:.4}, expected about {target}")),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_counts() {
        assert_eq!(stable_pairs(1), vec![(0, 3), (0, 4), (1, 1)]);
        // complexity 3 adds (0, 6), (1, 3), (2, 0)
        assert_eq!(stable_pairs(3).len(), 1 + 2 + 2 + 3);
    }

    #[test]
    fn symbolic_shift_small() {
        // 1/(g−1) = 1/g + 1/g² + 1/g³
        let a = vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)];
        assert_eq!(symbolic_shift(&a, 1), vec![q(0, 1), q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(shift_coefficients(&a, 1), symbolic_shift(&a, 1));
    }

    #[test]
    fn synthetic_instances_meet_their_own_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let s = SyntheticExpansion::random(&mut rng, 1, 3, q(5, 2));
            let e = s.expansion().unwrap();
            for g in sample_gs(&e.g_min, 10) {
                assert!(e.contract_holds(&g, &s.value(&g)));
            }
        }
    }

    #[test]
    fn partition_listing() {
        assert_eq!(partitions(4).len(), 1 + 2 + 3 + 5);
    }
}
