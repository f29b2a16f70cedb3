mod common;

use common::{bump_transform, literature_volumes, monomial, q, Witten};
use wpvol::asymptotics::tail_zeta_bound;
use wpvol::scalar::{bernoulli, zeta_even};
use wpvol::spectral::{a0, TestFunction};
use wpvol::volumes::{closed_volume, volume, volume_at};
use wpvol::{intersection_number, MemoStore, PiPoly, Rational, TauIndex};

fn descending(n: usize, total: u32, cap: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for v in (0..=total.min(cap)).rev() {
        for mut rest in descending(n - 1, total - v, v) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

#[test]
fn top_degree_matches_witten_kontsevich() {
    let store = MemoStore::new();
    let mut wk = Witten::default();
    let mut checked = 0;
    for g in 0..=4u32 {
        for n in 1..=7usize {
            let dim = 3 * g as i64 - 3 + n as i64;
            if 2 * g as i64 - 2 + n as i64 <= 0 || dim > 9 {
                continue;
            }
            for d in descending(n, dim as u32, dim as u32) {
                let got = intersection_number(&TauIndex::new(g, d.clone()).unwrap(), &store).unwrap();
                assert_eq!(got, PiPoly::from_rational(wk.normalized(g, &d)), "({g}, {d:?})");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn known_witten_values() {
    let mut wk = Witten::default();
    assert_eq!(wk.get(1, vec![1]), q(1, 24));
    assert_eq!(wk.get(0, vec![1, 0, 0, 0]), q(1, 1));
    assert_eq!(wk.get(2, vec![4]), q(1, 1152));
    assert_eq!(wk.get(1, vec![1, 1]), q(1, 24));
}

#[test]
fn published_volumes() {
    let store = MemoStore::new();
    for (g, n, c, j) in literature_volumes() {
        assert_eq!(volume(g, n, &store).unwrap(), monomial(c, j), "V_({g},{n})");
    }
    assert_eq!(closed_volume(2, &store).unwrap(), monomial(q(43, 2160), 3));
}

#[test]
fn low_volume_polynomials() {
    let store = MemoStore::new();
    let pi2 = PiPoly::pi_squared();
    let c = |r: Rational| PiPoly::from_rational(r);
    for (a, b) in [(0, 1), (1, 2), (3, 1), (7, 5)] {
        let l = q(a, b);
        let l2 = &l * &l;
        // V_{1,1}(L) = (L² + 4π²)/48
        let v11 = (&c(l2.clone()) + &pi2.scale(&q(4, 1))).scale(&q(1, 48));
        assert_eq!(volume_at(1, 1, &[l.clone()], &store).unwrap(), v11);
        // V_{0,4} = 2π² + ½ΣL²
        let x = vec![l.clone(), q(1, 3), q(2, 1), l.clone()];
        let s: Rational = x.iter().map(|t| t * t).sum();
        assert_eq!(volume_at(0, 4, &x, &store).unwrap(), &pi2.scale(&q(2, 1)) + &c(s / q(2, 1)));
        // V_{1,2} = (4π² + L₁² + L₂²)(12π² + L₁² + L₂²)/192
        let m = q(5, 2);
        let s2 = &l2 + &m * &m;
        let a = &pi2.scale(&q(4, 1)) + &c(s2.clone());
        let b = &pi2.scale(&q(12, 1)) + &c(s2);
        assert_eq!(volume_at(1, 2, &[l, m], &store).unwrap(), (&a * &b).scale(&q(1, 192)));
    }
}

#[test]
fn zeta_values_from_bernoulli() {
    assert_eq!(bernoulli(2), q(1, 6));
    assert_eq!(bernoulli(12), q(-691, 2730));
    assert_eq!(zeta_even(1), monomial(q(1, 6), 1));
    assert_eq!(zeta_even(2), monomial(q(1, 90), 2));
    assert_eq!(zeta_even(3), monomial(q(1, 945), 3));
    let direct: f64 = (1..200_000).map(|k| (k as f64).powi(-8)).sum();
    assert!((zeta_even(4).to_f64() - direct).abs() < 1e-14);
}

#[test]
fn tail_zeta_first_value() {
    let t = tail_zeta_bound(0);
    let target = 1.0 - std::f64::consts::PI.powi(2) / 12.0;
    assert!(t.partial_lo - 1e-10 <= target && target <= t.partial_hi + 1e-10);
    assert!(t.holds);
}

#[test]
fn test_function_transform_against_direct_quadrature() {
    let tf = TestFunction::default_grid().unwrap();
    for rho in [0.0, 0.5, 1.7, 6.0, 15.0] {
        let g = bump_transform(rho, tf.width());
        assert!((tf.g_hat(rho) - g).abs() < 1e-12, "rho = {rho}");
        assert!((tf.f_eval(rho) - g * g).abs() < 1e-12, "rho = {rho}");
    }
    // frozen reference values of this test function
    assert!((tf.f_eval(0.0) - 0.049_282_6).abs() < 1e-7);
    let a = a0(&tf, 1).unwrap();
    assert!((a.value - 1.122_548_9).abs() < 1e-6);
}
