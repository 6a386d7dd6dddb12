mod common;

use syzrep::implicit::verify_implicit;
use syzrep::koszul::{general_forms_hilbert_model, threshold_report};
use syzrep::parse::parse_poly;
use syzrep::poly::MultiPoly;
use syzrep::Rational;

use common::*;

fn tq(s: &str) -> MultiPoly<Rational> {
    parse_poly(s, &ts(3), &()).unwrap()
}

/// Coefficients of `(1 + t + ... + t^(d-1))^(n+1) * (1 - t)`, the same
/// series as `(1-t^d)^(n+1) / (1-t)^n`, by plain convolution.
fn model_by_convolution(n: usize, d: u32) -> Vec<i64> {
    let mut acc = vec![1i64];
    for _ in 0..=n {
        let mut next = vec![0; acc.len() + d as usize - 1];
        for (i, a) in acc.iter().enumerate() {
            for j in 0..d as usize {
                next[i + j] += a;
            }
        }
        acc = next;
    }
    let mut out = vec![0; acc.len() + 1];
    for (i, a) in acc.iter().enumerate() {
        out[i] += a;
        out[i + 1] -= a;
    }
    out
}

#[test]
fn hilbert_model_matches_convolution() {
    for n in 2..=5 {
        for d in 1..=5 {
            let conv = model_by_convolution(n, d);
            let m = general_forms_hilbert_model(n, d).unwrap();
            for (i, &h) in m.table.iter().enumerate() {
                assert_eq!(h, conv[i].max(0), "n={n} d={d} degree {i}");
            }
            assert!(conv[m.table.len()..].iter().all(|&c| c <= 0), "n={n} d={d}");
            assert_eq!(m.end, ((n as i64 + 1) * (d as i64 - 1)).div_euclid(2));
        }
    }
}

#[test]
fn example_equation_by_expansion() {
    let s = base_points_example();
    let h = tq("T0*T1*T2 + T0*T1*T3 - T2*T3^2");
    assert!(h.compose(s.forms()).is_zero());
    let v = verify_implicit(&h, &s).unwrap();
    assert!(v.passed() && v.primitive && v.repeated_factor.is_none());
}

#[test]
fn verification_verdicts() {
    let s = base_points_example();
    let v = verify_implicit(&tq("T0"), &s).unwrap();
    assert!(!v.passed());
    assert_eq!(v.residual_degree, Some(3));
    let sq = tq("T0*T1*T2 + T0*T1*T3 - T2*T3^2").pow(2);
    let v = verify_implicit(&sq, &s).unwrap();
    assert!(v.passed());
    assert_eq!(v.repeated_factor_vanishes, Some(true));
}

#[test]
fn general_hilbert_tables_by_rank() {
    for &(n, d) in &GENERAL_CASES {
        let s = general(n, d, 42);
        let r = threshold_report(&s).unwrap();
        let conv = model_by_convolution(n, d);
        for (&nu, &h) in &r.hilb_RmodI {
            assert_eq!(h as i64, conv.get(nu as usize).copied().unwrap_or(0).max(0), "({n},{d}) degree {nu}");
        }
    }
}
