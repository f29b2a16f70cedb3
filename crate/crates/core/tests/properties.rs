mod common;

use std::sync::OnceLock;

use common::q;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use wpvol::asymptotics::{shift_coefficients, Expansion};
use wpvol::scalar::{format_rational, parse_rational, Interval};
use wpvol::spectral::{sinh_inequality_margin, TestFunction};
use wpvol::volumes::{volume, volume_at};
use wpvol::{intersection_number, MemoStore, PiPoly, Rational, TauIndex};

fn store() -> &'static MemoStore {
    static S: OnceLock<MemoStore> = OnceLock::new();
    S.get_or_init(MemoStore::new)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..12).prop_map(|(p, d)| q(p, d))
}

fn pipoly() -> impl Strategy<Value = PiPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(PiPoly::from_coeffs)
}

/// Stable (g, n) with n ≥ 1 and complexity ≤ 7, plus a d with |d| ≤ dim + 2.
fn tau_index() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=3, 1usize..=6)
        .prop_filter("stable, small", |&(g, n)| {
            let (g, n) = (g as i64, n as i64);
            2 * g - 2 + n > 0 && 3 * g - 3 + n <= 7
        })
        .prop_flat_map(|(g, n)| {
            let top = 3 * g + n as u32 - 3 + 2;
            (Just(g), prop::collection::vec(0..=top, n))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersection_symmetric_under_permutation((g, d) in tau_index(), seed in any::<u64>()) {
        let mut p = d.clone();
        let k = p.len();
        p.rotate_left((seed as usize) % k);
        if k > 1 { p.swap(0, (seed as usize >> 8) % k); }
        let a = intersection_number(&TauIndex::new(g, d).unwrap(), store()).unwrap();
        let b = intersection_number(&TauIndex::new(g, p).unwrap(), store()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn intersection_vanishes_out_of_dimension_and_is_nonnegative((g, d) in tau_index()) {
        let dim = 3 * g as i64 - 3 + d.len() as i64;
        let v = intersection_number(&TauIndex::new(g, d.clone()).unwrap(), store()).unwrap();
        if d.iter().map(|&x| x as i64).sum::<i64>() > dim {
            prop_assert!(v.is_zero());
        } else {
            prop_assert!(v.has_nonnegative_coeffs());
            prop_assert!(!v.is_zero());
        }
    }

    #[test]
    fn value_independent_of_evaluation_order((g, d) in tau_index()) {
        let fresh = MemoStore::new();
        let idx = TauIndex::new(g, d).unwrap();
        prop_assert_eq!(intersection_number(&idx, &fresh).unwrap(), intersection_number(&idx, store()).unwrap());
    }

    #[test]
    fn volume_at_zero_is_volume(g in 0u32..=2, n in 1usize..=4) {
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let zeros = vec![Rational::zero(); n];
        prop_assert_eq!(volume_at(g, n, &zeros, store()).unwrap(), volume(g, n, store()).unwrap());
    }

    #[test]
    fn volume_increases_in_each_length(g in 0u32..=2, n in 1usize..=3, x in rational(), i in 0usize..3) {
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let mut lo = vec![q(1, 2); n];
        let mut hi = lo.clone();
        let x = x.abs();
        hi[i % n] = &lo[i % n] + &x + q(1, 7);
        lo[i % n] = x.clone();
        let a = volume_at(g, n, &lo, store()).unwrap();
        let b = volume_at(g, n, &hi, store()).unwrap();
        // V_{0,3} = 1 is the one constant volume
        if (g, n) == (0, 3) {
            prop_assert_eq!(a, b);
        } else {
            prop_assert!((&b - &a).to_f64() > 0.0);
        }
    }

    #[test]
    fn pipoly_ring_laws(a in pipoly(), b in pipoly(), c in pipoly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn interval_encloses_float_value(a in pipoly()) {
        let iv = a.eval_interval(128);
        let v = a.to_f64();
        let scale = 1.0 + v.abs();
        prop_assert!(iv.lo_f64() <= v + 1e-12 * scale && v - 1e-12 * scale <= iv.hi_f64());
        let wide = a.eval_interval(64);
        prop_assert!(iv.width() <= wide.width());
    }

    #[test]
    fn interval_arithmetic_contains_exact_results(a in rational(), b in rational()) {
        let ia = Interval::from_rational(&a, 96);
        let ib = Interval::from_rational(&b, 96);
        prop_assert!(ia.add(&ib).contains(&(&a + &b)));
        prop_assert!(ia.mul(&ib).contains(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(ia.div(&ib).unwrap().contains(&(&a / &b)));
        }
    }

    #[test]
    fn rational_text_round_trip(a in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
    }

    #[test]
    fn shift_round_trip(coeffs in prop::collection::vec(rational(), 1..7), m in -4i64..=4) {
        let there = shift_coefficients(&coeffs, m);
        prop_assert_eq!(shift_coefficients(&there, -m), coeffs);
    }

    #[test]
    fn partial_sum_alone_meets_contract(coeffs in prop::collection::vec(rational(), 1..5), m in 0i64..3, extra in 1i64..10) {
        let e = Expansion::new(m, coeffs, q(1, 1), q(m + extra, 1)).unwrap();
        for g in (m + extra + 1)..(m + extra + 15) {
            let g = q(g, 1);
            prop_assert!(e.contract_holds(&g, &e.partial_sum(&g)));
        }
    }

    #[test]
    fn sinh_inequality_holds(x in 0.0f64..60.0, k in 2u32..200) {
        prop_assert!(sinh_inequality_margin(x, k).unwrap() >= 0.0);
    }
}

fn tf() -> &'static TestFunction {
    static T: OnceLock<TestFunction> = OnceLock::new();
    T.get_or_init(|| TestFunction::default_grid().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_bounded_by_centre_and_even(rho in -60.0f64..60.0) {
        let f = tf().f_eval(rho);
        prop_assert!(f >= -1e-12);
        prop_assert!(f <= tf().f_eval(0.0) + 1e-15);
        prop_assert!((f - tf().f_eval(-rho)).abs() < 1e-15);
    }
}

#[test]
fn store_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.tsv");
    let s = MemoStore::new();
    volume(2, 2, &s).unwrap();
    s.save(&path).unwrap();
    let back = MemoStore::load(&path).unwrap();
    assert_eq!(back.entries(), s.entries());

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // flip one digit of a value but keep its checksum
    let row = lines.iter().position(|l| l.split('\t').nth(1).is_some_and(|v| v.contains('3'))).unwrap();
    let mut fields: Vec<String> = lines[row].split('\t').map(str::to_string).collect();
    fields[1] = fields[1].replacen('3', "4", 1);
    lines[row] = fields.join("\t");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(MemoStore::load(&path).is_err());
}
