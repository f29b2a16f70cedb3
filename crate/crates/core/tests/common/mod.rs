//! Independent reference values for the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use wpvol::{PiPoly, Rational};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// (2k − 1)!! with (−1)!! = 1.
fn odd_df(k: i64) -> BigInt {
    let mut out = BigInt::from(1);
    let mut j = 2 * k - 1;
    while j > 1 {
        out *= j;
        j -= 2;
    }
    out
}

/// Pure ψ-class intersection numbers ⟨τ_{d₁}⋯τ_{dₙ}⟩_g through the
/// Dijkgraaf–Verlinde–Verlinde form of the Virasoro constraints.
#[derive(Default)]
pub struct Witten {
    memo: HashMap<(u32, Vec<u32>), Rational>,
}

impl Witten {
    pub fn get(&mut self, g: u32, mut d: Vec<u32>) -> Rational {
        let n = d.len() as i64;
        if 2 * g as i64 - 2 + n <= 0 || d.iter().map(|&x| x as i64).sum::<i64>() != 3 * g as i64 - 3 + n {
            return q(0, 1);
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.memo.get(&(g, d.clone())) {
            return v.clone();
        }
        let v = match (g, d.as_slice()) {
            (0, [0, 0, 0]) => q(1, 1),
            (1, [1]) => q(1, 24),
            _ => self.dvv(g, &d),
        };
        self.memo.insert((g, d), v.clone());
        v
    }

    fn dvv(&mut self, g: u32, d: &[u32]) -> Rational {
        let k = d[0] as i64;
        let s = &d[1..];
        let mut acc = q(0, 1);
        for j in 0..s.len() {
            let dj = s[j] as i64;
            let mut rest: Vec<u32> = s.to_vec();
            rest[j] = (k + dj - 1) as u32;
            let c = Rational::new(odd_df(k + dj), odd_df(dj));
            acc += c * self.get(g, rest);
        }
        for a in 0..=(k - 2).max(-1) {
            let b = k - 2 - a;
            if b < 0 {
                continue;
            }
            let c = Rational::from_integer(odd_df(a + 1) * odd_df(b + 1)) / BigInt::from(2);
            let mut joined = vec![a as u32, b as u32];
            joined.extend_from_slice(s);
            let mut inner = if g > 0 { self.get(g - 1, joined) } else { q(0, 1) };
            let m = s.len();
            for mask in 0..(1u32 << m) {
                let (mut i, mut jv) = (vec![a as u32], vec![b as u32]);
                for (t, &x) in s.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        i.push(x);
                    } else {
                        jv.push(x);
                    }
                }
                for g1 in 0..=g {
                    inner += self.get(g1, i.clone()) * self.get(g - g1, jv.clone());
                }
            }
            acc += c * inner;
        }
        acc / Rational::from_integer(odd_df(k + 1))
    }

    /// [τ_d]_{g,n} for |d| = 3g − 3 + n: 4^{|d|}∏(2dᵢ+1)!!⟨τ_d⟩_g.
    pub fn normalized(&mut self, g: u32, d: &[u32]) -> Rational {
        let mut c = Rational::from_integer(BigInt::from(4).pow(d.iter().sum::<u32>()));
        for &x in d {
            c *= Rational::from_integer(odd_df(x as i64 + 1));
        }
        c * self.get(g, d.to_vec())
    }
}

/// Published values V_{g,n} = c·π^{2j} as (g, n, c, j).
pub fn literature_volumes() -> Vec<(u32, usize, Rational, usize)> {
    vec![
        (0, 3, q(1, 1), 0),
        (0, 4, q(2, 1), 1),
        (1, 1, q(1, 12), 1),
        (0, 5, q(10, 1), 2),
        (1, 2, q(1, 4), 2),
        (0, 6, q(244, 3), 3),
        (1, 3, q(14, 9), 3),
        (2, 0, q(43, 2160), 3),
        (2, 1, q(29, 192), 4),
        (1, 4, q(529, 36), 4),
        (0, 7, q(2758, 3), 4),
        (3, 0, q(176_557, 1_209_600), 6),
    ]
}

pub fn monomial(c: Rational, j: usize) -> PiPoly {
    PiPoly::monomial(c, j)
}

/// ĝ₀(ρ) for the bump exp(−1/(1 − (x/w)²)) on (−w, w) by composite
/// Simpson on the half interval with the substitution x = w sin θ, which
/// keeps every derivative bounded at the endpoints.
pub fn bump_transform(rho: f64, w: f64) -> f64 {
    let n = 20_000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    let f = |t: f64| {
        let c = t.cos();
        if c <= 0.0 {
            return 0.0;
        }
        let x = w * t.sin();
        (-1.0 / (c * c)).exp() * (rho * x).cos() * w * c
    };
    let mut s = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}
