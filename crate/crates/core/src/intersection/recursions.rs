//! Residuals of the verification-only recursions. Each returns LHS − RHS,
//! which must vanish exactly.

use num_bigint::BigInt;

use super::engine::intersection_number;
use super::index::{is_stable, TauIndex};
use super::store::MemoStore;
use crate::error::{Error, Result};
use crate::scalar::{factorial, PiPoly, Rational};

/// Value with unstable indices read as zero.
fn val(store: &MemoStore, g: i64, d: Vec<u32>) -> Result<PiPoly> {
    if g < 0 || !is_stable(g as u32, d.len()) {
        return Ok(PiPoly::zero());
    }
    intersection_number(&TauIndex::new(g as u32, d)?, store)
}

fn cat(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().chain(b).copied().collect()
}

/// All ordered pairs (I, J) with I ⊔ J = d, by bitmask over positions.
fn subset_pairs(d: &[u32]) -> impl Iterator<Item = (Vec<u32>, Vec<u32>)> + '_ {
    (0u64..(1u64 << d.len())).map(move |mask| {
        let mut i = Vec::new();
        let mut j = Vec::new();
        for (pos, &x) in d.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                i.push(x);
            } else {
                j.push(x);
            }
        }
        (i, j)
    })
}

fn check_len(d: &[u32], n: usize) -> Result<()> {
    if d.len() != n {
        return Err(Error::domain(format!("expected {n} entries in d, got {}", d.len())));
    }
    Ok(())
}

/// (2g−2+n)[∏τ_{dᵢ}]_{g,n} − ½ Σ_{l=1}^{3g−2+n} (−1)^{l−1} l π^{2l−2}/(2l+1)! · [τ_l ∏τ_{dᵢ}]_{g,n+1}.
pub fn recursion_iii_residual(g: u32, n: usize, d: &[u32], store: &MemoStore) -> Result<PiPoly> {
    check_len(d, n)?;
    let lhs_idx = TauIndex::new(g, d.to_vec())?;
    let chi = 2 * g as i64 - 2 + n as i64;
    let lhs = intersection_number(&lhs_idx, store)?.scale(&Rational::from_integer(chi.into()));
    let mut rhs = PiPoly::zero();
    let top = 3 * g as i64 - 2 + n as i64;
    for l in 1..=top {
        let c = Rational::new(BigInt::from(l), BigInt::from(factorial(2 * l as u32 + 1)) * 2);
        let c = if l % 2 == 1 { c } else { -c };
        let weight = PiPoly::monomial(c, (l - 1) as usize);
        let v = val(store, g as i64, cat(&[l as u32], d))?;
        rhs += &(&weight * &v);
    }
    Ok(&lhs - &rhs)
}

/// [τ₀τ₁∏τ_{dᵢ}]_{g,n+2} − [τ₀⁴∏]_{g−1,n+4} − 6 Σ [τ₀²∏_I]_{g₁,|I|+2}[τ₀²∏_J]_{g₂,|J|+2},
/// the sum over g₁+g₂ = g and ordered I ⊔ J = {1..n}.
pub fn recursion_i_residual(g: u32, n: usize, d: &[u32], store: &MemoStore) -> Result<PiPoly> {
    check_len(d, n)?;
    let g = g as i64;
    let lhs = intersection_number(&TauIndex::new(g as u32, cat(&[0, 1], d))?, store)?;
    let mut rhs = val(store, g - 1, cat(&[0, 0, 0, 0], d))?;
    let mut split = PiPoly::zero();
    for g1 in 0..=g {
        for (i, j) in subset_pairs(d) {
            let a = val(store, g1, cat(&[0, 0], &i))?;
            if a.is_zero() {
                continue;
            }
            let b = val(store, g - g1, cat(&[0, 0], &j))?;
            split += &(&a * &b);
        }
    }
    rhs += &split.scale(&Rational::from_integer(6.into()));
    Ok(&lhs - &rhs)
}

/// [τ₀²τ_{ℓ+1}∏]_{g,n+3} − [τ₀⁴τ_ℓ∏]_{g−1,n+5}
///   − 8 Σ [τ₀²τ_ℓ∏_I]_{g₁,|I|+3}[τ₀²∏_J]_{g₂,|J|+2}
///   − 4 Σ [τ₀τ_ℓ∏_I]_{g₁,|I|+2}[τ₀³∏_J]_{g₂,|J|+3}.
pub fn recursion_ii_residual(
    g: u32,
    n: usize,
    d: &[u32],
    l: u32,
    store: &MemoStore,
) -> Result<PiPoly> {
    check_len(d, n)?;
    let g = g as i64;
    let lhs = intersection_number(&TauIndex::new(g as u32, cat(&[0, 0, l + 1], d))?, store)?;
    let mut rhs = val(store, g - 1, cat(&[0, 0, 0, 0, l], d))?;
    let mut eight = PiPoly::zero();
    let mut four = PiPoly::zero();
    for g1 in 0..=g {
        let g2 = g - g1;
        for (i, j) in subset_pairs(d) {
            let a = val(store, g1, cat(&[0, 0, l], &i))?;
            if !a.is_zero() {
                eight += &(&a * &val(store, g2, cat(&[0, 0], &j))?);
            }
            let b = val(store, g1, cat(&[0, l], &i))?;
            if !b.is_zero() {
                four += &(&b * &val(store, g2, cat(&[0, 0, 0], &j))?);
            }
        }
    }
    rhs += &eight.scale(&Rational::from_integer(8.into()));
    rhs += &four.scale(&Rational::from_integer(4.into()));
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_instances_vanish() {
        let s = MemoStore::new();
        assert!(recursion_iii_residual(0, 3, &[0, 0, 0], &s).unwrap().is_zero());
        assert!(recursion_iii_residual(1, 1, &[0], &s).unwrap().is_zero());
        assert!(recursion_iii_residual(2, 0, &[], &s).unwrap().is_zero());
        assert!(recursion_i_residual(1, 0, &[], &s).unwrap().is_zero());
        assert!(recursion_ii_residual(1, 0, &[], 0, &s).unwrap().is_zero());
    }

    #[test]
    fn wrong_length_is_a_domain_error() {
        let s = MemoStore::new();
        assert!(recursion_iii_residual(1, 2, &[0], &s).is_err());
    }
}
