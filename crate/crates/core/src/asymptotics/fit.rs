use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersection::MemoStore;
use crate::scalar::{PiPoly, Rational};
use crate::volumes::{a4_ratio, closed_volume, mz_ratio, volume, volume_at, ExactRatio};

/// Largest allowed max/min of g·|ratio − limit| over the g range.
pub const ENVELOPE_FACTOR: f64 = 3.0;

/// Condition numbers above this are flagged.
const ILL_CONDITIONED: f64 = 1e12;

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    /// c₀..c_k of Σ c_t/g^t.
    pub coeffs: Vec<f64>,
    pub condition_number: f64,
    pub ill_conditioned: bool,
    pub residuals: Vec<f64>,
    /// Slope of log|residual| against log g, a rough decay exponent.
    pub residual_slope: Option<f64>,
}

/// Least-squares fit of Σ_{t≤k} c_t/g^t through SVD.
pub fn fit_expansion(samples: &[(f64, f64)], k: usize) -> Result<FitReport> {
    let mut gs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    gs.sort_by(f64::total_cmp);
    gs.dedup();
    if gs.len() < k + 3 {
        return Err(Error::domain(format!(
            "fit of order {k} needs at least {} distinct g values, got {}",
            k + 3,
            gs.len()
        )));
    }
    let rows = samples.len();
    let a = DMatrix::from_fn(rows, k + 1, |i, j| samples[i].0.powi(-(j as i32)));
    let y = DVector::from_iterator(rows, samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd
        .solve(&y, smax * 1e-15)
        .map_err(|e| Error::numeric(format!("least squares failed: {e}")))?;
    let residuals: Vec<f64> = (&y - &a * &x).iter().copied().collect();
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .zip(&residuals)
        .filter(|(_, r)| r.abs() > 0.0)
        .map(|(s, r)| (s.0.ln(), r.abs().ln()))
        .collect();
    let residual_slope = (pts.len() >= 2).then(|| {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(FitReport {
        coeffs: x.iter().copied().collect(),
        condition_number,
        ill_conditioned: condition_number > ILL_CONDITIONED,
        residuals,
        residual_slope,
    })
}

/// Which ratio family to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// 4π²(2g−2+n)V_{g,n}/V_{g,n+1} → 1, n ≤ 3.
    A3,
    /// V_{g−1,n+2}/V_{g,n} → 1, n ≤ 3.
    A4,
    /// V_{g,1}(x)/V_{g,1} → sinh(x/2)/(x/2), x ∈ {1/2, 1, 2}.
    WpVols,
    /// V_{g−1,2}(ℓ,ℓ)/V_g → 4sinh²(ℓ/2)/ℓ², ℓ ∈ {1/2, 1, 2}.
    Corollary,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a3" => Ok(Suite::A3),
            "a4" => Ok(Suite::A4),
            "wpvols" => Ok(Suite::WpVols),
            "corollary" => Ok(Suite::Corollary),
            _ => Err(Error::domain(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub label: String,
    pub limit: f64,
    pub gs: Vec<u32>,
    pub values: Vec<f64>,
    /// g·|value − limit|.
    pub envelope: Vec<f64>,
    /// max/min of the envelope.
    pub spread: f64,
    pub pass: bool,
    pub fit: Option<FitReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub series: Vec<SeriesReport>,
    pub pass: bool,
}

fn series(label: String, limit: f64, gs: &[u32], values: Vec<f64>) -> SeriesReport {
    let envelope: Vec<f64> = gs.iter().zip(&values).map(|(&g, v)| g as f64 * (v - limit).abs()).collect();
    let max = envelope.iter().copied().fold(f64::MIN, f64::max);
    let min = envelope.iter().copied().fold(f64::MAX, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    let samples: Vec<(f64, f64)> = gs.iter().map(|&g| g as f64).zip(values.iter().copied()).collect();
    let fit = fit_expansion(&samples, 2).ok();
    SeriesReport { label, limit, gs: gs.to_vec(), values, envelope, spread, pass: spread <= ENVELOPE_FACTOR, fit }
}

fn sinhc(x: f64) -> f64 {
    (x / 2.0).sinh() / (x / 2.0)
}

const LENGTHS: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

/// Envelope check g·|ratio − limit| within [`ENVELOPE_FACTOR`] over g = gmin..=gmax.
pub fn verify_suite(suite: Suite, gmin: u32, gmax: u32, store: &MemoStore) -> Result<SuiteReport> {
    if gmin < 2 || gmax < gmin {
        return Err(Error::domain(format!("bad genus range {gmin}..={gmax}")));
    }
    let gs: Vec<u32> = (gmin..=gmax).collect();
    let mut out = Vec::new();
    match suite {
        Suite::A3 | Suite::A4 => {
            for n in 0..=3usize {
                let values = gs
                    .iter()
                    .map(|&g| {
                        let r = if suite == Suite::A3 { mz_ratio(g, n, store)? } else { a4_ratio(g, n, store)? };
                        Ok(r.to_f64())
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(series(format!("n={n}"), 1.0, &gs, values));
            }
        }
        Suite::WpVols => {
            for (p, q) in LENGTHS {
                let x = Rational::new(p.into(), q.into());
                let values = gs
                    .iter()
                    .map(|&g| {
                        let num = volume_at(g, 1, std::slice::from_ref(&x), store)?;
                        Ok(ExactRatio::new(num, volume(g, 1, store)?)?.to_f64())
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(series(format!("x={p}/{q}"), sinhc(p as f64 / q as f64), &gs, values));
            }
        }
        Suite::Corollary => {
            for (p, q) in LENGTHS {
                let l = Rational::new(p.into(), q.into());
                let values = gs
                    .iter()
                    .map(|&g| {
                        let num: PiPoly = volume_at(g - 1, 2, &[l.clone(), l.clone()], store)?;
                        Ok(ExactRatio::new(num, closed_volume(g, store)?)?.to_f64())
                    })
                    .collect::<Result<Vec<_>>>()?;
                let lf = p as f64 / q as f64;
                out.push(series(format!("l={p}/{q}"), sinhc(lf).powi(2), &gs, values));
            }
        }
    }
    let pass = out.iter().all(|s| s.pass);
    Ok(SuiteReport { suite, series: out, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_fit() {
        let s: Vec<(f64, f64)> = (5..13).map(|g| (g as f64, 1.0 + 2.0 / g as f64)).collect();
        let r = fit_expansion(&s, 1).unwrap();
        assert!((r.coeffs[0] - 1.0).abs() < 1e-9 && (r.coeffs[1] - 2.0).abs() < 1e-9);
        let c: Vec<(f64, f64)> = (5..13).map(|g| (g as f64, 4.5)).collect();
        let r = fit_expansion(&c, 2).unwrap();
        assert!((r.coeffs[0] - 4.5).abs() < 1e-9);
        assert!(r.coeffs[1..].iter().all(|x| x.abs() < 1e-8));
        assert!(fit_expansion(&s[..3], 1).is_err());
    }

    #[test]
    fn suite_names() {
        assert_eq!("wpvols".parse::<Suite>().unwrap(), Suite::WpVols);
        assert!("a5".parse::<Suite>().is_err());
    }
}
