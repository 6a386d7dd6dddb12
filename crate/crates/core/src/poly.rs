//! Sparse multivariate polynomials over an exact field.
//!
//! Monomials are packed into a single `u64`: the top byte holds the total
//! degree and the remaining seven bytes hold the exponents of up to seven
//! variables, first variable most significant. Comparing the packed words
//! therefore compares monomials in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

pub const MAX_VARS: usize = 7;
pub const MAX_DEGREE: u32 = 255;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::Validation(format!("at most {MAX_VARS} variables are supported, got {}", exps.len())));
        }
        let deg: u32 = exps.iter().sum();
        if deg > MAX_DEGREE {
            return Err(Error::Validation(format!("total degree {deg} exceeds {MAX_DEGREE}")));
        }
        let mut w = (deg as u64) << 56;
        for (i, &e) in exps.iter().enumerate() {
            w |= (e as u64) << (48 - 8 * i);
        }
        Ok(Monomial(w))
    }

    /// The variable `i` to the first power.
    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial((1 << 56) | (1 << (48 - 8 * i)))
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        (self.0 >> 56) as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> (48 - 8 * i)) & 0xff) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.degree() + other.degree() <= MAX_DEGREE);
        Monomial(self.0 + other.0)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.degree() > self.degree() {
            return None;
        }
        for i in 0..MAX_VARS {
            if other.exp(i) > self.exp(i) {
                return None;
            }
        }
        Some(Monomial(self.0 - other.0))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    pub fn pow(&self, e: u32) -> Monomial {
        debug_assert!(self.degree() * e <= MAX_DEGREE);
        Monomial(self.0 * e as u64)
    }

    /// Drops variable `i` entirely.
    pub fn without_var(&self, i: usize) -> Monomial {
        let e = self.exp(i) as u64;
        Monomial(self.0 - (e << 56) - (e << (48 - 8 * i)))
    }

    /// Index of the first variable with positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        (0..MAX_VARS).find(|&i| self.exp(i) > 0)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.exp(i) {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents(MAX_VARS))
    }
}

/// All monomials of degree `deg` in `nvars` variables, in decreasing graded
/// lexicographic order.
pub fn monomial_basis(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::new(exps).expect("monomial within limits"));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, deg, &mut exps, &mut out);
    out
}

/// Position lookup for a monomial basis of one degree.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    pub monomials: Vec<Monomial>,
    pos: std::collections::HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, deg: i64) -> Self {
        let monomials = if deg < 0 { Vec::new() } else { monomial_basis(nvars, deg as u32) };
        let pos = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonomialIndex { monomials, pos }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index(&self, m: &Monomial) -> Option<usize> {
        self.pos.get(m).copied()
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn count_monomials(nvars: usize, deg: i64) -> i64 {
    if deg < 0 {
        return 0;
    }
    if nvars == 0 {
        return (deg == 0) as i64;
    }
    binomial(deg + nvars as i64 - 1, nvars as i64 - 1)
}

/// Sparse polynomial: terms sorted by decreasing monomial, no zero
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<F: Field> {
    nvars: usize,
    ctx: F::Ctx,
    terms: Vec<(Monomial, F)>,
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_string_with(&names))
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize, ctx: &F::Ctx) -> Self {
        MultiPoly { nvars, ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let ctx = c.ctx();
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::ONE, c)] };
        MultiPoly { nvars, ctx, terms }
    }

    pub fn one(nvars: usize, ctx: &F::Ctx) -> Self {
        Self::constant(nvars, F::one(ctx))
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        let ctx = c.ctx();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { nvars, ctx, terms }
    }

    pub fn var(nvars: usize, i: usize, ctx: &F::Ctx) -> Self {
        Self::monomial(nvars, Monomial::var(i), F::one(ctx))
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(nvars: usize, ctx: &F::Ctx, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars, ctx: ctx.clone(), terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => F::zero(&self.ctx),
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(var)).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, |c| c.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, |c| c.neg())
    }

    fn merge(&self, other: &Self, map_other: impl Fn(&F) -> F) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, map_other(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca.add(&map_other(cb));
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (*m, map_other(c))));
        MultiPoly { nvars: self.nvars, ctx: self.ctx.clone(), terms: out }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars, &self.ctx);
        }
        MultiPoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul(s))).collect(),
        }
    }

    /// Multiplication by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, &self.ctx);
        }
        MultiPoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars, &self.ctx);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ma.mul(mb);
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars: self.nvars, ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.nvars, &self.ctx);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Exact quotient `self / other`, `None` if `other` does not divide.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = other.terms[0].clone();
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let qm = m.div(&lm)?;
            let qc = c.mul(&lc_inv);
            rem = rem.sub(&other.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(MultiPoly { nvars: self.nvars, ctx: self.ctx.clone(), terms: quot })
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                for _ in 0..m.exp(i) {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replaces variable `i` by the polynomial `by_vals[i]` (same ambient
    /// as the result).
    pub fn compose(&self, by: &[MultiPoly<F>]) -> MultiPoly<F> {
        assert_eq!(by.len(), self.nvars);
        let target_vars = by.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = MultiPoly::zero(target_vars, &self.ctx);
        let mut powers: Vec<Vec<MultiPoly<F>>> = by.iter().map(|p| vec![MultiPoly::one(p.nvars, &self.ctx)]).collect();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target_vars, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&by[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            let m2 = m.div(&Monomial::var(i)).unwrap();
            (m2, c.mul(&F::from_i64(&self.ctx, e as i64)))
        });
        MultiPoly::from_terms(self.nvars, &self.ctx, terms)
    }

    /// Canonical associate: see [`Field::normalizer`].
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let cs: Vec<F> = self.terms.iter().map(|(_, c)| c.clone()).collect();
        self.scale(&F::normalizer(&cs))
    }

    /// Reinterprets the polynomial in a different ambient variable count.
    pub fn with_nvars(&self, nvars: usize) -> Self {
        debug_assert!(self.terms.iter().all(|(m, _)| (nvars..MAX_VARS).all(|i| m.exp(i) == 0)));
        MultiPoly { nvars, ctx: self.ctx.clone(), terms: self.terms.clone() }
    }

    /// Homogeneous component of degree `deg`.
    pub fn component(&self, deg: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).cloned().collect(),
        }
    }

    /// Dense coefficient vector over a monomial basis.
    pub fn to_vector(&self, basis: &MonomialIndex) -> Option<Vec<F>> {
        let mut v = vec![F::zero(&self.ctx); basis.len()];
        for (m, c) in &self.terms {
            v[basis.index(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_vector(nvars: usize, ctx: &F::Ctx, basis: &MonomialIndex, v: &[F]) -> Self {
        let terms = basis.monomials.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c.clone()));
        MultiPoly::from_terms(nvars, ctx, terms)
    }

    /// Maps coefficients into another field.
    pub fn map_coeffs<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> Option<G>) -> Option<MultiPoly<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, f(c)?));
        }
        Some(MultiPoly::from_terms(self.nvars, ctx, terms))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        crate::parse::format_poly(self, names)
    }
}

/// Element of the bigraded ring `k[X_1..X_n] ⊗ k[T_0..T_n]`, homogeneous of
/// bidegree `(x_degree, t_degree)`.
#[derive(Clone, PartialEq)]
pub struct BigradedPoly<F: Field> {
    pub x_vars: usize,
    pub t_vars: usize,
    pub x_degree: u32,
    pub t_degree: u32,
    ctx: F::Ctx,
    terms: BTreeMap<(Monomial, Monomial), F>,
}

impl<F: Field> fmt::Debug for BigradedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigradedPoly({}, {}) ", self.x_degree, self.t_degree)?;
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((x, t), c)| format!("{c}*X{:?}*T{:?}", x.exponents(self.x_vars), t.exponents(self.t_vars)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> BigradedPoly<F> {
    pub fn zero(x_vars: usize, t_vars: usize, x_degree: u32, t_degree: u32, ctx: &F::Ctx) -> Self {
        BigradedPoly { x_vars, t_vars, x_degree, t_degree, ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// Adds `c * x * t`; the term must have the declared bidegree.
    pub fn add_term(&mut self, x: Monomial, t: Monomial, c: F) -> Result<()> {
        if x.degree() != self.x_degree || t.degree() != self.t_degree {
            return Err(Error::Validation(format!(
                "term of bidegree ({}, {}) in a polynomial of bidegree ({}, {})",
                x.degree(),
                t.degree(),
                self.x_degree,
                self.t_degree
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let key = (x, t);
        let sum = match self.terms.get(&key) {
            Some(e) => e.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &F)> {
        self.terms.iter().rev().map(|((x, t), c)| (x, t, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.x_degree, self.t_degree), (other.x_degree, other.t_degree));
        let mut out = self.clone();
        for ((x, t), c) in &other.terms {
            out.add_term(*x, *t, c.clone()).unwrap();
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.x_vars, self.t_vars, self.x_degree, self.t_degree, &self.ctx);
        for ((x, t), c) in &self.terms {
            out.add_term(*x, *t, c.mul(s)).unwrap();
        }
        out
    }

    /// Multiplication by the monomial `x * t`.
    pub fn mul_monomial(&self, x: &Monomial, t: &Monomial) -> Self {
        let mut out =
            Self::zero(self.x_vars, self.t_vars, self.x_degree + x.degree(), self.t_degree + t.degree(), &self.ctx);
        for ((a, b), c) in &self.terms {
            out.terms.insert((a.mul(x), b.mul(t)), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(
            self.x_vars,
            self.t_vars,
            self.x_degree + other.x_degree,
            self.t_degree + other.t_degree,
            &self.ctx,
        );
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(a.mul(a2), b.mul(b2), c.mul(c2)).unwrap();
            }
        }
        out
    }

    /// The T-polynomial multiplying the X-monomial `x`.
    pub fn t_part(&self, x: &Monomial) -> MultiPoly<F> {
        let terms = self.terms.iter().filter(|((a, _), _)| a == x).map(|((_, t), c)| (*t, c.clone()));
        MultiPoly::from_terms(self.t_vars, &self.ctx, terms)
    }

    /// Coordinates in the basis `x_basis × t_basis` (x-major).
    pub fn to_vector(&self, x_basis: &MonomialIndex, t_basis: &MonomialIndex) -> Vec<F> {
        let nt = t_basis.len();
        let mut v = vec![F::zero(&self.ctx); x_basis.len() * nt];
        for ((x, t), c) in &self.terms {
            let i = x_basis.index(x).expect("x monomial in basis");
            let j = t_basis.index(t).expect("t monomial in basis");
            v[i * nt + j] = c.clone();
        }
        v
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_vector(
        x_vars: usize,
        t_vars: usize,
        x_basis: &MonomialIndex,
        t_basis: &MonomialIndex,
        x_degree: u32,
        t_degree: u32,
        ctx: &F::Ctx,
        v: &[F],
    ) -> Self {
        let nt = t_basis.len();
        let mut out = Self::zero(x_vars, t_vars, x_degree, t_degree, ctx);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((x_basis.monomials[k / nt], t_basis.monomials[k % nt]), c.clone());
            }
        }
        out
    }
}

/// Truncated quotient of two univariate integer polynomials (coefficient
/// lists, constant term first), through degree `upto`.
///
/// The denominator must have constant term ±1. When the quotient is a
/// polynomial, a nonzero remainder inside the window is an error.
pub fn poly_series_coeffs(num: &[i64], den: &[i64], upto: usize) -> Result<Vec<i64>> {
    let d0 = *den.first().ok_or_else(|| Error::Validation("empty denominator".into()))?;
    if d0 != 1 && d0 != -1 {
        return Err(Error::Validation("denominator constant term must be ±1".into()));
    }
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let window = upto.max(num.len()) + den.len();
    rem.resize(window + 1, 0);
    let mut q = vec![0i64; upto + 1];
    for i in 0..=upto {
        let c = rem[i] * d0 as i128;
        q[i] = c as i64;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                if i + j <= window {
                    rem[i + j] -= c * dj as i128;
                }
            }
        }
    }
    // the quotient is a polynomial iff the remainder vanishes; only the
    // part of the remainder visible beyond the window can be checked
    if rem[upto + 1..].iter().any(|&r| r != 0) {
        return Err(Error::Validation(format!("series quotient leaves a nonzero remainder beyond degree {upto}")));
    }
    while q.len() > 1 && *q.last().unwrap() == 0 {
        q.pop();
    }
    Ok(q)
}

/// Coefficients of `(1 - t^a)^e`.
pub fn one_minus_power(a: usize, e: u32) -> Vec<i64> {
    let mut out = vec![0i64; a * e as usize + 1];
    for k in 0..=e as i64 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out[a * k as usize] = sign * binomial(e as i64, k);
    }
    out
}
