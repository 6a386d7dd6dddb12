//! Exact scalar fields: the rationals and word-size prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rationals, always stored in lowest terms.
pub type Rational = BigRational;

/// The Mersenne prime 2^61 - 1. Dimension counts for rational inputs are
/// carried out in this field.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Which field a computation lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u64),
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Prime(p) => *p,
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not a prime")));
        }
        if p >= 1 << 63 {
            return Err(Error::Validation(format!("prime {p} exceeds the 63-bit word limit")));
        }
        Ok(FieldDescriptor::Prime(p))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Operations shared by every scalar field used here.
///
/// Constructors take a context because prime-field elements need to know
/// their modulus; for the rationals the context is `()`.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    /// Image of a rational number, `None` if its denominator vanishes.
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Option<Self>;
    fn descriptor(ctx: &Self::Ctx) -> FieldDescriptor;
    fn ctx(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.sub(&a.mul(b));
    }

    /// Scalar that turns a coefficient list into its canonical associate:
    /// integer coprime coefficients with positive leading entry over Q,
    /// leading entry one over a prime field. `coeffs` must not be empty.
    fn normalizer(coeffs: &[Self]) -> Self;

    /// Reduction into GF(p), `None` when a denominator vanishes mod p or the
    /// element lives in a different prime field.
    fn to_prime(&self, p: u64) -> Option<Fp>;

    /// Size measure used to pick pivots with the least coefficient growth.
    fn height(&self) -> u64 {
        0
    }

    /// Sign and magnitude for printing. Prime-field elements use the
    /// symmetric lift.
    fn signed_parts(&self) -> (bool, String);
}

impl Field for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(_: &(), q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn descriptor(_: &()) -> FieldDescriptor {
        FieldDescriptor::Rationals
    }
    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self -= a * b;
    }

    fn normalizer(coeffs: &[Self]) -> Self {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in coeffs {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut s = Rational::new(den, num);
        if coeffs[0].is_negative() {
            s = -s;
        }
        s
    }

    fn to_prime(&self, p: u64) -> Option<Fp> {
        let pb = BigInt::from(p);
        let num = self.numer().mod_floor(&pb).to_u64().unwrap();
        let den = self.denom().mod_floor(&pb).to_u64().unwrap();
        if den == 0 {
            return None;
        }
        let f = Fp::new(num, p);
        Some(f.mul(&Fp::new(den, p).inv()))
    }

    fn height(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn signed_parts(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

/// Element of GF(p) for a word-size prime p < 2^63.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    #[inline]
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.v
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Symmetric lift into (-p/2, p/2].
    pub fn signed_value(&self) -> i128 {
        if self.v > self.p / 2 {
            self.v as i128 - self.p as i128
        } else {
            self.v as i128
        }
    }

    #[inline]
    fn reduce_wide(x: u128, p: u64) -> u64 {
        if p == MERSENNE_61 {
            let lo = (x as u64) & MERSENNE_61;
            let hi = (x >> 61) as u64;
            let s = lo + (hi & MERSENNE_61) + (hi >> 61);
            let s = (s & MERSENNE_61) + (s >> 61);
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (x % p as u128) as u64
        }
    }

    pub fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut r = Fp::new(1, self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = Field::mul(&r, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        r
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Field for Fp {
    type Ctx = u64;

    fn zero(p: &u64) -> Self {
        Fp { v: 0, p: *p }
    }
    fn one(p: &u64) -> Self {
        Fp::new(1, *p)
    }
    fn from_i64(p: &u64, v: i64) -> Self {
        Fp { v: (v as i128).rem_euclid(*p as i128) as u64, p: *p }
    }
    fn from_rational(p: &u64, q: &Rational) -> Option<Self> {
        q.to_prime(*p)
    }
    fn descriptor(p: &u64) -> FieldDescriptor {
        FieldDescriptor::Prime(*p)
    }
    fn ctx(&self) -> u64 {
        self.p
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    #[inline]
    fn is_one(&self) -> bool {
        self.v == 1
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        let s = self.v + rhs.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        let v = if self.v >= rhs.v { self.v - rhs.v } else { self.v + self.p - rhs.v };
        Fp { v, p: self.p }
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        Fp { v: Fp::reduce_wide(self.v as u128 * rhs.v as u128, self.p), p: self.p }
    }
    #[inline]
    fn neg(&self) -> Self {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero");
        // extended Euclid on (v, p)
        let (mut a, mut b) = (self.v as i128, self.p as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Fp { v: x0.rem_euclid(self.p as i128) as u64, p: self.p }
    }
    #[inline]
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.sub(&a.mul(b));
    }

    fn normalizer(coeffs: &[Self]) -> Self {
        coeffs[0].inv()
    }

    fn to_prime(&self, p: u64) -> Option<Fp> {
        (p == self.p).then_some(*self)
    }

    fn signed_parts(&self) -> (bool, String) {
        let s = self.signed_value();
        (s < 0, s.unsigned_abs().to_string())
    }
}

/// Parses a decimal integer or `a/b` rational literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(MERSENNE_61));
        assert!(!is_prime(MERSENNE_61 - 2));
        assert!(is_prime(2_147_483_647));
    }

    #[test]
    fn mersenne_reduction_matches_generic() {
        let p = MERSENNE_61;
        let samples = [0u64, 1, 2, p - 1, p - 2, 1 << 60, 123_456_789_012_345_678 % p];
        for &a in &samples {
            for &b in &samples {
                let fast = Field::mul(&Fp::new(a, p), &Fp::new(b, p)).value();
                let slow = ((a as u128 * b as u128) % p as u128) as u64;
                assert_eq!(fast, slow, "{a} * {b}");
            }
        }
    }

    #[test]
    fn prime_field_inverse() {
        let p = 101u64;
        for v in 1..p {
            let x = Fp::new(v, p);
            assert!(Field::mul(&x, &x.inv()).is_one());
        }
    }

    #[test]
    fn rational_reduction() {
        let q = parse_rational("3/4").unwrap();
        let r = q.to_prime(7).unwrap();
        assert_eq!(Field::mul(&r, &Fp::new(4, 7)).value(), 3);
        assert!(parse_rational("1/7").unwrap().to_prime(7).is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn rational_normalizer() {
        let cs: Vec<Rational> = ["-2/3", "4/9", "2"].iter().map(|s| parse_rational(s).unwrap()).collect();
        let s = Rational::normalizer(&cs);
        let scaled: Vec<String> = cs.iter().map(|c| (c * &s).to_string()).collect();
        assert_eq!(scaled, vec!["3", "-2", "-9"]);
    }
}
