//! Acceptance suite. Runs every criterion, prints one line per criterion
//! and exits nonzero if any of them fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use syzrep::appendix::{annihilation_grid, kernel_grid, lefschetz_grid, sign_grid};
use syzrep::downgrade::{downgrade_once, lambda_check, lambda_forms, same_mod_linear, upgrade, KoszulClass};
use syzrep::implicit::{
    det_square, gcd_minors, implicitize, poly_gcd, verify_implicit, GcdOptions, DEFAULT_SAMPLE_BUDGET,
};
use syzrep::koszul::{general_forms_hilbert_model, hilbert_r_mod_i, threshold_report, ThresholdReport};
use syzrep::linalg::ExactMatrix;
use syzrep::parse::{format_poly, parse_poly};
use syzrep::poly::{binomial, count_monomials, MultiPoly};
use syzrep::system::ParamSystem;
use syzrep::syzygy::{
    build_matrix, cgz_condition, linear_syzygies, new_column_count, new_columns, predicted_new_columns,
    resolution_ranks, MatrixRep,
};
use syzrep::{Field, Rational};

use common::*;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn report(s: &ParamSystem<Rational>) -> Result<ThresholdReport, String> {
    threshold_report(s).map_err(|e| e.to_string())
}

fn mu0(r: &ThresholdReport) -> u32 {
    r.mu0.max(0) as u32
}

fn matrix(
    s: &ParamSystem<Rational>,
    r: &ThresholdReport,
    mu: u32,
    lmax: Option<u32>,
) -> Result<MatrixRep<Rational>, String> {
    build_matrix(s, r, mu, lmax).map_err(|e| format!("M_{mu}: {e}"))
}

/// Determinant when square, gcd of maximal minors otherwise.
fn equation(m: &MatrixRep<Rational>) -> Result<MultiPoly<Rational>, String> {
    let h = if m.is_square() { det_square(m) } else { gcd_minors(m, DEFAULT_SAMPLE_BUDGET) };
    h.map_err(|e| format!("M_{}: {e}", m.mu))
}

/// The base points example, the Hilbert-Burch fixture and its random
/// trials, and the random general forms.
fn all_fixtures() -> Vec<(String, ParamSystem<Rational>)> {
    let mut v = vec![("base_points".to_string(), fixture("base_points.json"))];
    v.extend(hb_fixtures());
    v.extend(general_fixtures());
    v
}

fn hb_fixtures() -> Vec<(String, ParamSystem<Rational>)> {
    let mut v = vec![("hilbert_burch".to_string(), fixture("hilbert_burch.json"))];
    v.extend((0..TRIALS).map(|s| (format!("hilbert_burch#{s}"), hilbert_burch(s))));
    v
}

fn general_fixtures() -> Vec<(String, ParamSystem<Rational>)> {
    GENERAL_CASES
        .iter()
        .flat_map(|&(n, d)| (0..TRIALS).map(move |s| (format!("general({n},{d})#{s}"), general(n, d, s))))
        .collect()
}

fn c1_base_points() -> Check {
    let s = fixture("base_points.json");
    let r = report(&s)?;
    ensure!(r.mu0 == 0 && r.nu0 == 2, "mu0 = {}, nu0 = {}", r.mu0, r.nu0);
    ensure!(r.indeg_H1 == Some(4), "indeg H1 = {:?}", r.indeg_H1);
    ensure!(r.indeg_Isat == 2, "indeg I^sat = {}", r.indeg_Isat);
    ensure!(r.multiplicity == 6, "multiplicity {}", r.multiplicity);
    for nu in 8..=24 {
        let h = hilbert_r_mod_i(&s.count, nu);
        ensure!(h == 6, "dim (R/I)_{nu} = {h}");
    }
    let torsion: Vec<(i64, usize)> = r.h0m_H1.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect();
    ensure!(torsion == vec![(7, 1)], "H0m(H1) = {torsion:?}");

    let m0 = matrix(&s, &r, 0, None)?;
    ensure!(m0.shape() == (1, 1), "M_0 is {:?}", m0.shape());
    let m1 = matrix(&s, &r, 1, None)?;
    ensure!(
        m1.shape() == (3, 4) && m1.count_of_degree(1) == 3 && m1.count_of_degree(2) == 1,
        "M_1 is {:?} with {} linear columns",
        m1.shape(),
        m1.count_of_degree(1)
    );
    let m2 = matrix(&s, &r, 2, Some(1))?;
    ensure!(m2.shape() == (6, 9), "M_2 (linear part) is {:?}", m2.shape());

    let target = parse_poly::<Rational>("T0*T1*T2 + T0*T1*T3 - T2*T3^2", &ts(3), &()).unwrap();
    for (mu, m) in [(0, &m0), (1, &m1), (2, &m2)] {
        let h = equation(m)?;
        ensure!(associate(&h, &target), "mu = {mu}: extracted {}", format_poly(&h, &ts(3)));
    }
    for mu in 0..=2 {
        let ex = implicitize(&s, &r, mu, &GcdOptions::default()).map_err(|e| e.to_string())?;
        ensure!(associate(&ex.equation, &target), "implicitize at mu = {mu} disagrees");
        ensure!(ex.verdict.passed(), "verification failed at mu = {mu}");
    }
    Ok(())
}

fn c2_hilbert_burch() -> Check {
    for (name, s) in hb_fixtures() {
        let r = report(&s)?;
        ensure!(r.mu0 == 0 && r.nu0 == 1, "{name}: mu0 = {}, nu0 = {}", r.mu0, r.nu0);
        ensure!(r.h0m_H1.values().all(|&v| v == 0), "{name}: H0m(H1) = {:?}", r.h0m_H1);
        for mu in 0..=2 {
            let c = new_column_count(&s.count, mu, 2);
            ensure!(c == 0, "{name}: {c} quadratic columns at mu = {mu}");
        }
        let ex = implicitize(&s, &r, 0, &GcdOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            ex.verdict.degree == 3 && ex.verdict.passed(),
            "{name}: degree {} verified {}",
            ex.verdict.degree,
            ex.verdict.passed()
        );
    }
    Ok(())
}

fn c3_general_thresholds() -> Check {
    for (name, s) in general_fixtures() {
        let (n, d) = (s.n() as i64, s.d() as i64);
        let r = report(&s)?;
        ensure!(r.mprimary, "{name}: not m-primary");
        let want = ((n - 1) * (d - 1)).div_euclid(2);
        ensure!(r.mu0 == want, "{name}: mu0 = {}, expected {want}", r.mu0);
        let end = r.hilb_RmodI.iter().filter(|(_, &v)| v > 0).map(|(&k, _)| k).max().unwrap();
        ensure!(end == ((n + 1) * (d - 1)).div_euclid(2), "{name}: end(R/I) = {end}");
        let model = general_forms_hilbert_model(s.n(), s.d()).map_err(|e| e.to_string())?;
        for (&nu, &h) in &r.hilb_RmodI {
            let m = model.table.get(nu as usize).copied().unwrap_or(0);
            ensure!(h as i64 == m, "{name}: dim (R/I)_{nu} = {h}, model {m}");
        }
    }
    Ok(())
}

fn c4_rank_formula() -> Check {
    for (name, s) in all_fixtures() {
        let r = report(&s)?;
        for mu in mu0(&r)..=mu0(&r) + 2 {
            for ell in 2..=s.n() as u32 {
                let found = new_column_count(&s.count, mu, ell);
                let predicted = predicted_new_columns(&s.count, &r, mu, ell).map_err(|e| e.to_string())?;
                ensure!(found == predicted, "{name}: (mu, ell) = ({mu}, {ell}): {found} columns, formula {predicted}");
            }
        }
    }
    Ok(())
}

fn c5_resolution() -> Check {
    for (name, s) in general_fixtures() {
        let r = report(&s)?;
        for mu in mu0(&r)..=mu0(&r) + 1 {
            resolution_ranks(&s, &r, mu).map_err(|e| format!("{name}, mu = {mu}: {e}"))?;
        }
    }
    let s = general(3, 2, 0);
    let r = report(&s)?;
    let rr = resolution_ranks(&s, &r, 1).map_err(|e| e.to_string())?;
    ensure!(rr.b[&1] == 0 && rr.beta[&1] == 2 && rr.beta[&2] == 1, "n=3, d=2: b1 = {}, beta = {:?}", rr.b[&1], rr.beta);
    let m = matrix(&s, &r, 1, None)?;
    ensure!(m.shape() == (3, 3), "M_1 is {:?}", m.shape());
    let h = det_square(&m).map_err(|e| e.to_string())?;
    let v = verify_implicit(&h, &s).map_err(|e| e.to_string())?;
    ensure!(v.degree == 4 && v.passed(), "det has degree {} verified {}", v.degree, v.passed());
    Ok(())
}

fn c6_downgrading() -> Check {
    for (name, s) in general_fixtures() {
        let r = report(&s)?;
        let m0 = mu0(&r);
        for mu in 0..=m0 + 2 {
            let v = if mu >= m0 {
                lambda_check(&s, &r, mu, 2).map_err(|e| format!("{name}: {e}"))?
            } else {
                lambda_forms(&s.count, mu, 2).map_err(|e| e.to_string())?
            };
            ensure!(v.injective, "{name}: lambda_2 at mu = {mu} is not injective");
            ensure!(mu < m0 || v.bijective, "{name}: lambda_2 at mu = {mu} is not bijective");
        }
        let fs = &s.exact;
        for q in new_columns(&s, &r, m0, 2).map_err(|e| e.to_string())?.reps {
            let sigma = downgrade_once(&q, fs).map_err(|e| e.to_string())?;
            let back = upgrade(&s, m0, &sigma).map_err(|e| format!("{name}: {e}"))?;
            ensure!(same_mod_linear(fs, &back, &q), "{name}: upgrade(downgrade(Q)) differs from Q");
        }
        let syz = linear_syzygies(fs, m0 + s.d()).map_err(|e| e.to_string())?;
        let sigmas = syz.as_bigraded(s.n(), &());
        for (v, sigma) in syz.vectors.iter().zip(&sigmas) {
            if v.koszul {
                continue;
            }
            let q = upgrade(&s, m0, sigma).map_err(|e| format!("{name}: {e}"))?;
            let down = downgrade_once(&q, fs).map_err(|e| e.to_string())?;
            ensure!(
                KoszulClass::new(down).same_class(&KoszulClass::new(sigma.clone()), fs),
                "{name}: downgrade(upgrade(sigma)) differs from sigma"
            );
        }
    }
    Ok(())
}

fn c7_stability() -> Check {
    let mut cases = vec![("base_points".to_string(), fixture("base_points.json"))];
    cases.extend(hb_fixtures());
    cases.extend(general_fixtures());
    for (name, s) in cases {
        let r = report(&s)?;
        let mu = mu0(&r);
        let a = equation(&matrix(&s, &r, mu, None)?)?;
        let b = equation(&matrix(&s, &r, mu + 1, None)?)?;
        ensure!(
            associate(&a, &b),
            "{name}: gcd at mu = {mu} is {}, at mu + 1 {}",
            format_poly(&a, &ts(s.n())),
            format_poly(&b, &ts(s.n()))
        );
    }
    Ok(())
}

fn c8_appendix() -> Check {
    let bad = lefschetz_grid(4, 4).map_err(|e| e.to_string())?.into_iter().filter(|v| !v.passed()).count();
    ensure!(bad == 0, "{bad} multiplication maps contradict the theorem");
    let bad = sign_grid(6, 6).map_err(|e| e.to_string())?.into_iter().filter(|v| !v.passed()).count();
    ensure!(bad == 0, "{bad} sign patterns fail");
    let bad = annihilation_grid(5, 5).map_err(|e| e.to_string())?.into_iter().filter(|v| !v.vanishes).count();
    ensure!(bad == 0, "{bad} polynomials P_j are not annihilated");
    let bad = kernel_grid(3, 3, 4).map_err(|e| e.to_string())?.into_iter().filter(|v| !v.passed()).count();
    ensure!(bad == 0, "{bad} kernels differ from the predicted span");
    Ok(())
}

fn c9_rank_condition() -> Check {
    for d in [2, 3] {
        for seed in 0..TRIALS {
            let s = general(3, d, seed);
            let r = report(&s)?;
            let c = cgz_condition(&s, &r).map_err(|e| e.to_string())?;
            ensure!(c.condition_holds, "d = {d}#{seed}: dim (Z_1)_{} = {}", 2 * d - 1, c.dim_z1);
            ensure!(c.consequences_hold == Some(true), "d = {d}#{seed}: mu0 = {}, shape {:?}", c.mu0, c.shape);
        }
    }
    Ok(())
}

fn random_poly(nvars: usize, rng: &mut rand_chacha::ChaCha8Rng) -> MultiPoly<Rational> {
    let d = rng.gen_range(0..=3);
    random_form(nvars, d, rng, 9).add(&random_form(nvars, rng.gen_range(0..=2), rng, 9))
}

fn c10_properties() -> Check {
    let mut g = rng(10);
    for _ in 0..40 {
        let (p, q, r) = (random_poly(3, &mut g), random_poly(3, &mut g), random_poly(3, &mut g));
        ensure!(p.add(&q).mul(&r) == p.mul(&r).add(&q.mul(&r)), "distributivity fails");
        ensure!(p.mul(&q) == q.mul(&p), "commutativity fails");
        ensure!(p.mul(&q).mul(&r) == p.mul(&q.mul(&r)), "associativity fails");
    }
    for _ in 0..30 {
        let (rows, cols) = (g.gen_range(1..7), g.gen_range(1..7));
        let data: Vec<Vec<Rational>> =
            (0..rows).map(|_| (0..cols).map(|_| Rational::from_i64(&(), g.gen_range(-3..=3))).collect()).collect();
        let m = ExactMatrix::from_rows(data, cols, &());
        let k = m.kernel_basis();
        ensure!(m.rank() + k.len() == cols, "rank-nullity fails");
        ensure!(k.iter().all(|v| m.mul_vec(v).iter().all(|x| x.is_zero())), "kernel vector not annihilated");
    }
    for _ in 0..8 {
        let (a, b, c) = (random_form(3, 2, &mut g, 9), random_form(3, 1, &mut g, 9), random_form(3, 2, &mut g, 9));
        if a.is_zero() || b.is_zero() || c.is_zero() {
            continue;
        }
        let h = poly_gcd(&[a.mul(&c), b.mul(&c)]).map_err(|e| e.to_string())?;
        ensure!(associate(&h, &c), "gcd(a g, b g) = {} is not an associate of g", format_poly(&h, &xs(3)));
    }
    for (name, s) in all_fixtures() {
        let r = report(&s)?;
        let (n, d) = (s.n() as i64, s.d() as i64);
        for nu in 0..=r.degree_window {
            let mut k = 0;
            let mut h = 0;
            for i in 0..=s.n() + 1 {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                k += sign * binomial(n + 1, i as i64) * count_monomials(s.n(), nu - i as i64 * d);
                h += sign * r.homology[&i][&nu] as i64;
            }
            ensure!(k == h, "{name}: Euler characteristic differs at degree {nu}");
        }
        if let (Some(i1), Some(i2)) = (r.indeg_H1, r.indeg_H2) {
            ensure!(i2 >= i1 + d, "{name}: indeg H2 = {i2} < indeg H1 + d = {}", i1 + d);
        }
        ensure!(r.all_checks_pass(), "{name}: failing bound checks");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("base points example regression", 5, c1_base_points),
        ("Hilbert-Burch regression", 10, c2_hilbert_burch),
        ("threshold bounds for general forms", 60, c3_general_thresholds),
        ("new column rank formula", 60, c4_rank_formula),
        ("resolution ranks", 30, c5_resolution),
        ("downgrading maps", 30, c6_downgrading),
        ("gcd stability at mu0 and mu0 + 1", 30, c7_stability),
        ("truncated monomial algebra grids", 60, c8_appendix),
        ("rank condition for surfaces", 30, c9_rank_condition),
        ("property suites", 60, c10_properties),
    ];
    let mut failed = 0;
    for (i, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let line = format!("criterion {:>2} {title}: {:.1} s (budget {budget} s)", i + 1, took.as_secs_f64());
        match outcome {
            Ok(()) if !over => println!("PASS {line}"),
            Ok(()) => {
                failed += 1;
                println!("FAIL {line}: over budget");
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {line}: {e}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
