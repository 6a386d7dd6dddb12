#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzrep::parse::default_names;
use syzrep::poly::{monomial_basis, MultiPoly};
use syzrep::system::ParamSystem;
use syzrep::{Field, Rational};

pub const GENERAL_CASES: [(usize, u32); 7] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2)];
pub const TRIALS: u64 = 5;

pub fn xs(n: usize) -> Vec<String> {
    default_names("X", 1, n)
}

pub fn ts(n: usize) -> Vec<String> {
    default_names("T", 0, n + 1)
}

/// Six base points, one of them not a local complete intersection.
pub fn base_points_example() -> ParamSystem<Rational> {
    ParamSystem::from_strings(xs(3), &["X1*X3^2", "X2^2*(X1+X3)", "X1*X2*(X1+X3)", "X2*X3*(X1+X3)"], &()).unwrap()
}

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tag)
}

pub fn random_form(n: usize, d: u32, rng: &mut ChaCha8Rng, bound: i64) -> MultiPoly<Rational> {
    let terms = monomial_basis(n, d).into_iter().map(|m| (m, Rational::from_i64(&(), rng.gen_range(-bound..=bound))));
    MultiPoly::from_terms(n, &(), terms)
}

/// `n + 1` forms of degree `d` with integer coefficients in [-50, 50].
pub fn general(n: usize, d: u32, seed: u64) -> ParamSystem<Rational> {
    let mut r = rng(seed * 1000 + n as u64 * 10 + d as u64);
    let forms = (0..=n).map(|_| random_form(n, d, &mut r, 50)).collect();
    ParamSystem::new(xs(n), forms, &()).unwrap()
}

fn det3(m: &[Vec<MultiPoly<Rational>>]) -> MultiPoly<Rational> {
    let t = |a: usize, b: usize, c: usize| m[0][a].mul(&m[1][b]).mul(&m[2][c]);
    t(0, 1, 2).add(&t(1, 2, 0)).add(&t(2, 0, 1)).sub(&t(2, 1, 0)).sub(&t(0, 2, 1)).sub(&t(1, 0, 2))
}

/// Signed 3-minors of a random 4x3 matrix of linear forms in three
/// variables: a codimension two saturated ideal of cubics.
pub fn hilbert_burch(seed: u64) -> ParamSystem<Rational> {
    let mut r = rng(0xb0c4 + seed);
    let m: Vec<Vec<MultiPoly<Rational>>> =
        (0..4).map(|_| (0..3).map(|_| random_form(3, 1, &mut r, 9)).collect()).collect();
    let forms = (0..4)
        .map(|i| {
            let rows: Vec<Vec<MultiPoly<Rational>>> = (0..4).filter(|&k| k != i).map(|k| m[k].clone()).collect();
            let d = det3(&rows);
            if i % 2 == 1 {
                d.neg()
            } else {
                d
            }
        })
        .collect();
    ParamSystem::new(xs(3), forms, &()).unwrap()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> ParamSystem<Rational> {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    match syzrep::system::AnySystem::from_json(&text).unwrap() {
        syzrep::system::AnySystem::Rational(s) => s,
        syzrep::system::AnySystem::Prime(_) => panic!("{name} is not over Q"),
    }
}

/// `a` and `b` are nonzero and differ by a unit.
pub fn associate<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>) -> bool {
    match (a.leading(), b.leading()) {
        (Some((_, ca)), Some((_, cb))) => a.scale(cb) == b.scale(ca),
        _ => false,
    }
}
