//! The index set 𝒜_{g₀,n₀} of ways to complete a (g₀, n₀) subsurface to a
//! closed genus g surface, and the volume function φ built on it.

use num_traits::{One, Signed, Zero};

use super::{check_lengths, closed_volume, volume_at, ExactRatio};
use crate::error::{Error, Result};
use crate::intersection::MemoStore;
use crate::scalar::{PiPoly, Rational};

/// One element of 𝒜_{g₀,n₀}: blocks I_1..I_q of {1..n₀} (1-based, ordered by
/// least element) and a genus for each.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitIndex {
    pub genera: Vec<u32>,
    pub blocks: Vec<Vec<usize>>,
}

impl SplitIndex {
    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    /// Σ (2gᵢ − 2 + nᵢ).
    pub fn euler_budget(&self) -> i64 {
        self.genera
            .iter()
            .zip(&self.blocks)
            .map(|(&g, b)| 2 * g as i64 - 2 + b.len() as i64)
            .sum()
    }
}

/// All set partitions of {1..n}, blocks ordered by least element.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i > n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(1, n, &mut Vec::new(), &mut out);
    out
}

fn check_split_pre(g: u32, g0: u32, n0: usize) -> Result<()> {
    if !(2 * g0 as usize + n0 >= 3 || (g0 == 0 && n0 == 2)) {
        return Err(Error::domain(format!(
            "(g0, n0) = ({g0}, {n0}) needs 2g0 + n0 >= 3 or (0, 2)"
        )));
    }
    if g <= g0 {
        return Err(Error::domain(format!("need g > g0, got g = {g}, g0 = {g0}")));
    }
    Ok(())
}

/// Enumerates 𝒜_{g₀,n₀} for the closed genus g surface: conditions
/// 2gᵢ + nᵢ − 2 ≥ 1 and Σ(2gᵢ − 2 + nᵢ) = 2g − 2g₀ − n₀.
pub fn enumerate_splits(g: u32, g0: u32, n0: usize) -> Result<Vec<SplitIndex>> {
    check_split_pre(g, g0, n0)?;
    let budget = 2 * g as i64 - 2 * g0 as i64 - n0 as i64;
    let mut out = Vec::new();
    for blocks in set_partitions(n0) {
        let q = blocks.len() as i64;
        // Σ gᵢ follows from the budget
        let twice = budget + 2 * q - n0 as i64;
        if twice < 0 || twice % 2 != 0 {
            continue;
        }
        let total = (twice / 2) as u32;
        let lower: Vec<u32> = blocks.iter().map(|b| u32::from(b.len() <= 2)).collect();
        let mut genera = Vec::with_capacity(blocks.len());
        distribute(total, &lower, &mut genera, &mut |gs| {
            out.push(SplitIndex { genera: gs.to_vec(), blocks: blocks.clone() });
        });
    }
    out.sort();
    Ok(out)
}

/// Calls `emit` for every vector with entries ≥ `lower` summing to `total`.
fn distribute(total: u32, lower: &[u32], cur: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    let i = cur.len();
    if i == lower.len() {
        if total == 0 {
            emit(cur);
        }
        return;
    }
    let rest: u32 = lower[i + 1..].iter().sum();
    if total < lower[i] + rest {
        return;
    }
    for gi in lower[i]..=total - rest {
        cur.push(gi);
        distribute(total - gi, lower, cur, emit);
        cur.pop();
    }
}

/// φ_g^{(g₀,n₀)}(x) = x₁⋯x_{n₀} · V_{g₀,n₀}(x)/V_g · Σ_𝒜 ∏ V_{gᵢ,nᵢ}(x^{(i)}),
/// with V_{0,2} read as 1.
pub fn phi(g: u32, g0: u32, n0: usize, x: &[Rational], store: &MemoStore) -> Result<ExactRatio> {
    check_split_pre(g, g0, n0)?;
    check_lengths(n0, x)?;
    let vg = closed_volume(g, store)?;
    if x.iter().any(|v| v.is_zero()) {
        return ExactRatio::new(PiPoly::zero(), vg);
    }
    debug_assert!(x.iter().all(|v| v.is_positive()));
    let inner = if g0 == 0 && n0 == 2 {
        PiPoly::one()
    } else {
        volume_at(g0, n0, x, store)?
    };
    let mut sum = PiPoly::zero();
    for s in enumerate_splits(g, g0, n0)? {
        let mut prod = PiPoly::one();
        for (&gi, block) in s.genera.iter().zip(&s.blocks) {
            let xi: Vec<Rational> = block.iter().map(|&j| x[j - 1].clone()).collect();
            prod = &prod * &volume_at(gi, block.len(), &xi, store)?;
        }
        sum += &prod;
    }
    let lengths = x.iter().fold(Rational::one(), |a, b| a * b);
    ExactRatio::new((&inner * &sum).scale(&lengths), vg)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every (q, genera, partition) with genera up to g, filtered by the two
    /// conditions directly.
    fn brute_force(g: u32, g0: u32, n0: usize) -> Vec<SplitIndex> {
        let budget = 2 * g as i64 - 2 * g0 as i64 - n0 as i64;
        let mut out = Vec::new();
        for blocks in set_partitions(n0) {
            let q = blocks.len();
            let mut gs = vec![0u32; q];
            loop {
                let s = SplitIndex { genera: gs.clone(), blocks: blocks.clone() };
                let ok_i = gs.iter().zip(&blocks).all(|(&gi, b)| 2 * gi as i64 + b.len() as i64 - 2 >= 1);
                if ok_i && s.euler_budget() == budget {
                    out.push(s);
                }
                let mut i = 0;
                while i < q && gs[i] == g {
                    gs[i] = 0;
                    i += 1;
                }
                if i == q {
                    break;
                }
                gs[i] += 1;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn matches_brute_force() {
        for (g, g0, n0) in [(3, 1, 1), (4, 0, 3), (5, 1, 2), (4, 0, 4), (6, 2, 3), (3, 0, 2)] {
            let got = enumerate_splits(g, g0, n0).unwrap();
            assert_eq!(got, brute_force(g, g0, n0), "({g}, {g0}, {n0})");
            let budget = 2 * g as i64 - 2 * g0 as i64 - n0 as i64;
            assert!(got.iter().all(|s| s.euler_budget() == budget));
        }
    }

    #[test]
    fn small_instances() {
        // one boundary on a genus 1 piece inside genus 3: the rest is (2, 1)
        let s = enumerate_splits(3, 1, 1).unwrap();
        assert_eq!(s, vec![SplitIndex { genera: vec![2], blocks: vec![vec![1]] }]);
        // budget would be negative
        assert!(enumerate_splits(2, 1, 4).unwrap().is_empty());
        assert!(enumerate_splits(1, 1, 1).is_err());
        assert!(enumerate_splits(3, 0, 1).is_err());
    }

    /// φ over (0, 2) at (ℓ, ℓ) sums the separating pairs (i, g − i) over all
    /// i = 1..g−1, while the simple-geodesic integrand stops at ⌊g/2⌋. The two
    /// routes differ by exactly ℓ · Σ_{i>⌊g/2⌋} V_{i,1}(ℓ)V_{g−i,1}(ℓ).
    #[test]
    fn phi_against_simple_integrand() {
        let store = MemoStore::new();
        for g in [2u32, 3, 4, 5] {
            for l in [Rational::new(1.into(), 1.into()), Rational::new(5.into(), 2.into())] {
                let p = phi(g, 0, 2, &[l.clone(), l.clone()], &store).unwrap();
                let m = super::super::simple_integrand_at(g, &l, &store).unwrap();
                assert_eq!(p.den, m.den);
                let mut extra = PiPoly::zero();
                for i in g / 2 + 1..g {
                    let a = volume_at(i, 1, std::slice::from_ref(&l), &store).unwrap();
                    let b = volume_at(g - i, 1, std::slice::from_ref(&l), &store).unwrap();
                    extra += &(&a * &b);
                }
                let expect = (&m.num + &extra.scale(&l)).scale(&l);
                assert_eq!(p.num, expect, "g = {g}");
            }
        }
    }

    #[test]
    fn phi_vanishes_on_zero_length() {
        let store = MemoStore::new();
        let x = vec![Rational::zero(), Rational::one()];
        assert!(phi(3, 0, 2, &x, &store).unwrap().num.is_zero());
        let neg = vec![-Rational::one(), Rational::one()];
        assert!(phi(3, 0, 2, &neg, &store).is_err());
    }
}
