mod common;

use proptest::prelude::*;
use syzrep::downgrade::{downgrade_once, in_koszul_slice};
use syzrep::implicit::{det_square, gcd_minors, poly_gcd};
use syzrep::koszul::threshold_report;
use syzrep::linalg::ExactMatrix;
use syzrep::parse::{format_poly, parse_poly};
use syzrep::poly::{binomial, monomial_basis, one_minus_power, poly_series_coeffs, BigradedPoly, Monomial, MultiPoly};
use syzrep::system::ParamSystem;
use syzrep::syzygy::{build_matrix, equation_vectors, koszul_slice_vectors, BiBasis};
use syzrep::{Field, Fp, Rational};

use common::*;

fn q(v: i64) -> Rational {
    Rational::from_i64(&(), v)
}

fn poly_in(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly<Rational>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -20i64..=20), 0..6).prop_map(move |terms| {
        MultiPoly::from_terms(nvars, &(), terms.into_iter().map(|(e, c)| (Monomial::new(&e).unwrap(), q(c))))
    })
}

fn form(nvars: usize, deg: u32) -> impl Strategy<Value = MultiPoly<Rational>> {
    prop::collection::vec(-9i64..=9, monomial_basis(nvars, deg).len()).prop_map(move |cs| {
        MultiPoly::from_terms(nvars, &(), monomial_basis(nvars, deg).into_iter().zip(cs.into_iter().map(q)))
    })
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn quadrics() -> ParamSystem<Rational> {
    ParamSystem::from_strings(
        xs(3),
        &["X1^2 + 2*X2*X3", "X2^2 - X1*X3 + 3*X3^2", "X3^2 + X1*X2", "X1^2 - X2^2 + 5*X1*X3 - X2*X3"],
        &(),
    )
    .unwrap()
}

fn bigraded(mu: u32, ell: u32, coeffs: &[i64]) -> BigradedPoly<Rational> {
    let b = BiBasis::new(3, mu, ell);
    let v: Vec<Rational> = (0..b.len()).map(|i| q(coeffs[i % coeffs.len()])).collect();
    b.to_poly(&v, &())
}

fn combine(vs: &[Vec<Rational>], coeffs: &[i64]) -> Vec<Rational> {
    let mut out = vec![q(0); vs[0].len()];
    for (v, &c) in vs.iter().zip(coeffs.iter().cycle()) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.add(&x.mul(&q(c)));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(p in poly_in(3, 3), r in poly_in(3, 3), s in poly_in(3, 3)) {
        prop_assert_eq!(p.add(&r).mul(&s), p.mul(&s).add(&r.mul(&s)));
        prop_assert_eq!(p.mul(&r), r.mul(&p));
        prop_assert_eq!(p.mul(&r).mul(&s), p.mul(&r.mul(&s)));
        prop_assert!(p.sub(&p).is_zero());
        prop_assert_eq!(p.add(&r).sub(&r), p);
    }

    #[test]
    fn print_then_parse(p in poly_in(3, 4)) {
        let names = xs(3);
        let text = format_poly(&p, &names);
        prop_assert_eq!(parse_poly::<Rational>(&text, &names, &()).unwrap(), p);
    }

    #[test]
    fn substitution_is_linear_and_multiplicative(a in prop::collection::vec(-5i64..=5, 1..8), b in prop::collection::vec(-5i64..=5, 1..8)) {
        let s = quadrics();
        let fs = &s.exact;
        let (p1, p2, p3) = (bigraded(1, 1, &a), bigraded(1, 1, &b), bigraded(0, 2, &b));
        let sub = |p: &BigradedPoly<Rational>| fs.substitute(p).unwrap();
        prop_assert_eq!(sub(&p1.add(&p2)), sub(&p1).add(&sub(&p2)));
        prop_assert_eq!(sub(&p1.scale(&q(7))), sub(&p1).scale(&q(7)));
        prop_assert_eq!(sub(&p1.mul(&p3)), sub(&p1).mul(&sub(&p3)));
    }

    #[test]
    fn rank_nullity(m in int_matrix()) {
        let cols = m[0].len();
        let rows: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let a = ExactMatrix::from_rows(rows, cols, &());
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.len(), cols);
        for v in &k {
            prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let r1 = a.rref();
        let r2 = r1.matrix.rref();
        prop_assert_eq!(r1.matrix.into_rows(), r2.matrix.into_rows());
    }

    #[test]
    fn ranks_agree_over_large_prime(m in int_matrix()) {
        let p = (1u64 << 61) - 1;
        let cols = m[0].len();
        let qa = ExactMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols, &());
        let pa = ExactMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| Fp::from_i64(&p, x)).collect()).collect(), cols, &p);
        prop_assert_eq!(qa.rank(), pa.rank());
    }

    #[test]
    fn downgrade_respects_koszul_slice(c in prop::collection::vec(-4i64..=4, 1..10)) {
        let s = quadrics();
        let fs = &s.exact;
        let ks = koszul_slice_vectors(fs, 3, 2);
        let b = BiBasis::new(3, 3, 2);
        let k = b.to_poly(&combine(&ks, &c), &());
        prop_assert!(in_koszul_slice(fs, &downgrade_once(&k, fs).unwrap()));
    }

    #[test]
    fn downgrade_keeps_equations(c in prop::collection::vec(-4i64..=4, 1..10)) {
        let s = quadrics();
        let fs = &s.exact;
        let j = equation_vectors(fs, 1, 2);
        let b = BiBasis::new(3, 1, 2);
        let p = b.to_poly(&combine(&j, &c), &());
        prop_assert!(fs.substitute(&p).unwrap().is_zero());
        prop_assert!(fs.substitute(&downgrade_once(&p, fs).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn gcd_recovers_common_factor(a in form(3, 2), b in form(3, 1), g in form(3, 2)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
        prop_assume!(poly_gcd(&[a.clone(), b.clone()]).unwrap().is_constant());
        let h = poly_gcd(&[a.mul(&g), b.mul(&g)]).unwrap();
        prop_assert!(associate(&h, &g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn columns_are_equations_and_homology_is_consistent(seed in 0u64..1000, d in 2u32..4, extra in 0u32..3) {
        let s = general(2, d, seed + 100);
        let r = threshold_report(&s).unwrap();
        prop_assert!(r.all_checks_pass());
        let mu = r.mu0.max(0) as u32 + extra;
        let m = build_matrix(&s, &r, mu, None).unwrap();
        prop_assert!(m.verify_columns(&s.exact).is_ok());
    }

    #[test]
    fn determinant_and_minor_gcd_agree(seed in 0u64..1000) {
        let s = general(2, 2, seed + 500);
        let r = threshold_report(&s).unwrap();
        let m = build_matrix(&s, &r, r.mu0.max(0) as u32, None).unwrap();
        prop_assert!(m.is_square());
        prop_assert!(associate(&det_square(&m).unwrap(), &gcd_minors(&m, 16).unwrap()));
    }
}

#[test]
fn monomial_basis_sizes() {
    for n in 1..=6 {
        for mu in 0..=12 {
            assert_eq!(monomial_basis(n, mu).len() as i64, binomial(n as i64 + mu as i64 - 1, mu as i64));
        }
    }
}

#[test]
fn series_expansions() {
    let num = one_minus_power(3, 4);
    let den = one_minus_power(1, 3);
    assert_eq!(poly_series_coeffs(&num, &den, 12).unwrap()[..10], [1, 3, 6, 6, 3, -3, -6, -6, -3, -1]);
    let num = one_minus_power(3, 3);
    let den = one_minus_power(1, 2);
    assert_eq!(poly_series_coeffs(&num, &den, 10).unwrap()[..8], [1, 2, 3, 1, -1, -3, -2, -1]);
}
