//! Chinese remaindering and rational reconstruction for objects computed
//! over several prime fields.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{is_prime, Field, Rational};

pub const MAX_PRIMES: usize = 400;

/// Primes just below 2^31, largest first.
pub fn lifting_primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31)).rev().filter(|&p| is_prime(p))
}

/// The fraction `r/s` with `|r|, |s| <= sqrt(m/2)` congruent to `a`, if any.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// CRT accumulator for a vector of residues.
pub struct VectorLifter {
    residues: Vec<BigInt>,
    modulus: BigInt,
    candidate: Option<Vec<Rational>>,
}

impl VectorLifter {
    pub fn new(p: u64, vals: &[u64]) -> Self {
        let mut l = VectorLifter {
            residues: vals.iter().map(|&v| BigInt::from(v)).collect(),
            modulus: BigInt::from(p),
            candidate: None,
        };
        l.reconstruct();
        l
    }

    fn reconstruct(&mut self) {
        self.candidate = self.residues.iter().map(|r| rational_reconstruct(r, &self.modulus)).collect();
    }

    /// Adds the image modulo `p`; returns the reconstruction once it already
    /// agreed with this prime.
    pub fn push(&mut self, p: u64, vals: &[u64]) -> Option<Vec<Rational>> {
        if let Some(c) = &self.candidate {
            if c.iter().zip(vals).all(|(q, &v)| q.to_prime(p).map(|f| f.value()) == Some(v)) {
                return Some(c.clone());
            }
        }
        let pb = BigInt::from(p);
        let mm = (&self.modulus % &pb).to_u64().unwrap();
        let minv = pow_mod(mm, p - 2, p);
        for (r, &v) in self.residues.iter_mut().zip(vals) {
            let rp = (&*r % &pb).to_u64().unwrap();
            let t = (v + p - rp) % p * minv % p;
            *r += &self.modulus * BigInt::from(t);
        }
        self.modulus *= &pb;
        self.reconstruct();
        None
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Lifts an object known through its images modulo primes. `image(p)`
/// returns a shape key and the residues, or `None` for a prime that does
/// not apply. Images are grouped by key, so the rare primes with a
/// degenerate shape never mix with the others.
pub fn lift_keyed<K: Eq + Hash + Clone>(
    what: &str,
    mut image: impl FnMut(u64) -> Result<Option<(K, Vec<u64>)>>,
) -> Result<(K, Vec<Rational>)> {
    let mut lifters: HashMap<K, VectorLifter> = HashMap::new();
    for p in lifting_primes().take(MAX_PRIMES) {
        let Some((key, vals)) = image(p)? else { continue };
        match lifters.get_mut(&key) {
            Some(l) => {
                if let Some(v) = l.push(p, &vals) {
                    return Ok((key, v));
                }
            }
            None => {
                lifters.insert(key, VectorLifter::new(p, &vals));
            }
        }
    }
    Err(Error::Stabilization { what: what.to_string(), cap: MAX_PRIMES })
}
