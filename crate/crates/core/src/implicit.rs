//! Implicit equations from `M_mu`: determinant of a square matrix, gcd of
//! maximal minors otherwise, and exact verification against the
//! parametrization.
//!
//! Both the determinant and the gcd run through one engine. Minors are
//! treated as black boxes over GF(p). Restricted to a line `(0, c) + s(1, v)`
//! they become univariate polynomials in `s` whose monic gcd has
//! coefficients that are polynomials in `c`. Those are interpolated on a
//! random tensor grid and pulled back to the original coordinates. Over Q
//! the images for several primes are combined by CRT and rational
//! reconstruction until one more prime agrees.

use std::any::Any;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Rational};
use crate::koszul::ThresholdReport;
use crate::modular::{lift_keyed, lifting_primes};
use crate::parse::{default_names, format_poly};
use crate::poly::{Monomial, MonomialIndex, MultiPoly};
use crate::system::{Forms, ParamSystem};
use crate::syzygy::{build_matrix, MatrixRep};

pub const DEFAULT_SAMPLE_BUDGET: usize = 256;
pub const DEFAULT_COMBINATIONS: usize = 2;
const COMBINATION_WEIGHT: i64 = 1 << 20;
const ATTEMPTS: usize = 6;

#[derive(Clone, Copy, Debug)]
struct Zp {
    p: u64,
}

impl Zp {
    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        if self.p < 1 << 32 {
            a * b % self.p
        } else {
            (a as u128 * b as u128 % self.p as u128) as u64
        }
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

// Univariate polynomials over GF(p), constant term first, no trailing zeros.

fn utrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn umonic(zp: Zp, mut v: Vec<u64>) -> Vec<u64> {
    if let Some(&lc) = v.last() {
        let i = zp.inv(lc);
        for c in v.iter_mut() {
            *c = zp.mul(*c, i);
        }
    }
    v
}

fn urem(zp: Zp, mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    let il = zp.inv(b[db]);
    while a.len() > db {
        let k = a.len() - 1 - db;
        let q = zp.mul(*a.last().unwrap(), il);
        for (j, &bj) in b.iter().enumerate() {
            a[k + j] = zp.sub(a[k + j], zp.mul(q, bj));
        }
        a.pop();
        utrim(&mut a);
    }
    a
}

fn ugcd(zp: Zp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = urem(zp, a, &b);
        a = b;
        b = r;
    }
    umonic(zp, a)
}

fn ueval(zp: Zp, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| zp.add(zp.mul(acc, x), c))
}

/// Interpolation nodes with the Newton denominators inverted once.
struct Nodes {
    xs: Vec<u64>,
    /// `invd[k][j] = 1 / (xs[k] - xs[k - j])`
    invd: Vec<Vec<u64>>,
}

impl Nodes {
    fn new(zp: Zp, xs: Vec<u64>) -> Self {
        let invd = (0..xs.len())
            .map(|k| (0..=k).map(|j| if j == 0 { 0 } else { zp.inv(zp.sub(xs[k], xs[k - j])) }).collect())
            .collect();
        Nodes { xs, invd }
    }

    /// The nodes `0, 1, ..., k`.
    fn range(zp: Zp, k: usize) -> Self {
        Nodes::new(zp, (0..=k as u64).collect())
    }

    /// Newton coefficients of the interpolant through the first `ys.len()`
    /// nodes.
    fn divided(&self, zp: Zp, ys: &[u64]) -> Vec<u64> {
        let n = ys.len();
        let mut c = ys.to_vec();
        for j in 1..n {
            for k in (j..n).rev() {
                c[k] = zp.mul(zp.sub(c[k], c[k - 1]), self.invd[k][j]);
            }
        }
        c
    }

    /// Monomial coefficients of `sum c[k] (x - xs[0]) ... (x - xs[k-1])`.
    fn to_monomial(&self, zp: Zp, c: &[u64]) -> Vec<u64> {
        let n = c.len();
        let mut out = vec![0u64; n];
        for k in (0..n).rev() {
            // out = out * (x - xs[k]) + c[k]
            let xk = self.xs[k];
            for i in (0..n).rev() {
                let below = if i > 0 { out[i - 1] } else { 0 };
                out[i] = zp.sub(below, zp.mul(out[i], xk));
            }
            out[0] = zp.add(out[0], c[k]);
        }
        out
    }

    /// The polynomial of degree below `ys.len()` through the first
    /// `ys.len()` nodes.
    fn interpolate(&self, zp: Zp, ys: &[u64]) -> Vec<u64> {
        let mut out = self.to_monomial(zp, &self.divided(zp, ys));
        utrim(&mut out);
        out
    }
}

/// Multi-indices with `axes` entries summing to at most `e`.
fn lower_set(axes: usize, e: usize) -> Vec<Vec<usize>> {
    if axes == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..=e {
        for mut rest in lower_set(axes - 1, e - i) {
            rest.insert(0, i);
            out.push(rest);
        }
    }
    out
}

/// Runs `op` on the values along every axis-parallel line of a lower set.
fn along_lines(
    pts: &[Vec<usize>],
    pos: &HashMap<Vec<usize>, usize>,
    vals: &mut [u64],
    e: usize,
    mut op: impl FnMut(usize, &[u64]) -> Vec<u64>,
) {
    let axes = pts.first().map_or(0, Vec::len);
    for a in 0..axes {
        for start in pts.iter().filter(|p| p[a] == 0) {
            let len = e - start.iter().sum::<usize>() + 1;
            let idx: Vec<usize> = (0..len)
                .map(|j| {
                    let mut q = start.clone();
                    q[a] = j;
                    pos[&q]
                })
                .collect();
            let ys: Vec<u64> = idx.iter().map(|&i| vals[i]).collect();
            for (&i, y) in idx.iter().zip(op(a, &ys)) {
                vals[i] = y;
            }
        }
    }
}

fn det_mod(zp: Zp, mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = zp.sub(0, det);
        }
        det = zp.mul(det, a[col][col]);
        let inv = zp.inv(a[col][col]);
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let f = zp.mul(a[r][col], inv);
            let (top, bottom) = a.split_at_mut(r);
            let prow = &top[col];
            for (x, &y) in bottom[0][col..].iter_mut().zip(&prow[col..]) {
                *x = zp.sub(*x, zp.mul(f, y));
            }
        }
    }
    det
}

/// Homogeneous polynomial over GF(p) as exponent arrays.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<(Monomial, u64)>,
    deg: u32,
}

impl ModPoly {
    fn from_poly<F: Field>(p: &MultiPoly<F>, prime: u64) -> Option<ModPoly> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let v = c.to_prime(prime)?.value();
            if v != 0 {
                terms.push((*m, v));
            }
        }
        Some(ModPoly { terms, deg: p.degree().unwrap_or(0) })
    }

    fn eval(&self, zp: Zp, pw: &[Vec<u64>]) -> u64 {
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, row) in pw.iter().enumerate() {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = zp.mul(t, row[e]);
                }
            }
            acc = zp.add(acc, t);
        }
        acc
    }

    /// Restriction to `base + s * dir`.
    fn on_line(&self, zp: Zp, base: &[u64], dir: &[u64]) -> Vec<u64> {
        let k = self.deg as usize;
        let ys: Vec<u64> =
            (0..=k as u64).map(|s| self.eval(zp, &powers(zp, &line_point(zp, base, dir, s), k))).collect();
        Nodes::range(zp, k).interpolate(zp, &ys)
    }
}

fn powers(zp: Zp, point: &[u64], maxdeg: usize) -> Vec<Vec<u64>> {
    point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(maxdeg + 1);
            let mut acc = 1;
            for _ in 0..=maxdeg {
                row.push(acc);
                acc = zp.mul(acc, x);
            }
            row
        })
        .collect()
}

fn line_point(zp: Zp, base: &[u64], dir: &[u64], s: u64) -> Vec<u64> {
    base.iter().zip(dir).map(|(&b, &d)| zp.add(b, zp.mul(s, d))).collect()
}

/// Polynomials in `T` available only through their restrictions to lines.
trait BlackBox {
    fn nvars(&self) -> usize;
    fn on_line(&self, zp: Zp, base: &[u64], dir: &[u64]) -> Vec<Vec<u64>>;
}

struct PolyBoxes {
    nvars: usize,
    polys: Vec<ModPoly>,
}

impl BlackBox for PolyBoxes {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn on_line(&self, zp: Zp, base: &[u64], dir: &[u64]) -> Vec<Vec<u64>> {
        self.polys.iter().map(|p| p.on_line(zp, base, dir)).collect()
    }
}

/// A maximal minor of `M * R` for a constant integer matrix `R`. Each entry
/// of `columns` is one column of `M * R` as `(column of M, weight)` pairs,
/// all of the same T-degree. A plain minor has one pair of weight 1 per
/// column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorSpec {
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl MinorSpec {
    pub fn plain(subset: &[usize]) -> Self {
        MinorSpec { columns: subset.iter().map(|&j| vec![(j, 1)]).collect() }
    }

    pub fn is_plain(&self) -> bool {
        self.columns.iter().all(|c| c.len() == 1 && c[0].1 == 1)
    }
}

/// Maximal minors of a polynomial matrix.
struct MinorBoxes {
    nvars: usize,
    rows: usize,
    /// `cols[j][i]` is the entry in row `i`, column `j`.
    cols: Vec<Vec<ModPoly>>,
    col_deg: Vec<u32>,
    minors: Vec<MinorSpec>,
}

impl MinorBoxes {
    fn from_matrix<F: Field>(m: &MatrixRep<F>, prime: u64, minors: Vec<MinorSpec>) -> Option<Self> {
        let mut cols = Vec::with_capacity(m.columns.len());
        for c in &m.columns {
            let mut col = Vec::with_capacity(c.entries.len());
            for e in &c.entries {
                let mut mp = ModPoly::from_poly(e, prime)?;
                mp.deg = c.tdegree;
                col.push(mp);
            }
            cols.push(col);
        }
        Some(MinorBoxes {
            nvars: m.n + 1,
            rows: m.rows.len(),
            cols,
            col_deg: m.columns.iter().map(|c| c.tdegree).collect(),
            minors,
        })
    }

    /// Entries restricted to the line, for the columns in `used`.
    fn entry_lines(&self, zp: Zp, base: &[u64], dir: &[u64], used: &[bool]) -> Vec<Vec<Vec<u64>>> {
        let maxdeg = self.col_deg.iter().copied().max().unwrap_or(0) as usize;
        let pts: Vec<Vec<Vec<u64>>> =
            (0..=maxdeg as u64).map(|s| powers(zp, &line_point(zp, base, dir, s), maxdeg)).collect();
        let inv = Nodes::range(zp, maxdeg);
        self.cols
            .iter()
            .enumerate()
            .map(|(j, col)| {
                if !used[j] {
                    return Vec::new();
                }
                let k = self.col_deg[j] as usize;
                col.iter()
                    .map(|e| {
                        let ys: Vec<u64> = (0..=k).map(|s| e.eval(zp, &pts[s])).collect();
                        inv.interpolate(zp, &ys)
                    })
                    .collect()
            })
            .collect()
    }

    fn minor_on_line(&self, zp: Zp, lines: &[Vec<Vec<u64>>], minor: &MinorSpec, inv: &Nodes) -> Vec<u64> {
        let deg: usize = minor.columns.iter().map(|c| self.col_deg[c[0].0] as usize).sum();
        let combined: Vec<Vec<Vec<u64>>> = minor
            .columns
            .iter()
            .map(|c| match c.as_slice() {
                [(j, 1)] => lines[*j].clone(),
                _ => (0..self.rows)
                    .map(|i| {
                        let mut acc: Vec<u64> = Vec::new();
                        for &(j, w) in c {
                            let w = w.rem_euclid(zp.p as i64) as u64;
                            let u = &lines[j][i];
                            if acc.len() < u.len() {
                                acc.resize(u.len(), 0);
                            }
                            for (x, &y) in acc.iter_mut().zip(u) {
                                *x = zp.add(*x, zp.mul(w, y));
                            }
                        }
                        acc
                    })
                    .collect(),
            })
            .collect();
        let ys: Vec<u64> = (0..=deg as u64)
            .map(|s| {
                let a: Vec<Vec<u64>> =
                    (0..self.rows).map(|i| combined.iter().map(|c| ueval(zp, &c[i], s)).collect()).collect();
                det_mod(zp, a)
            })
            .collect();
        inv.interpolate(zp, &ys)
    }

    fn max_minor_degree(&self) -> usize {
        self.minors.iter().map(|m| m.columns.iter().map(|c| self.col_deg[c[0].0] as usize).sum()).max().unwrap_or(0)
    }
}

impl BlackBox for MinorBoxes {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn on_line(&self, zp: Zp, base: &[u64], dir: &[u64]) -> Vec<Vec<u64>> {
        let mut used = vec![false; self.cols.len()];
        for m in &self.minors {
            for c in &m.columns {
                for &(j, _) in c {
                    used[j] = true;
                }
            }
        }
        let lines = self.entry_lines(zp, base, dir, &used);
        let inv = Nodes::range(zp, self.max_minor_degree());
        self.minors.iter().map(|m| self.minor_on_line(zp, &lines, m, &inv)).collect()
    }
}

enum ModOutcome {
    Found(Vec<(Monomial, u64)>),
    AllZero,
    Unlucky,
}

fn line_gcd(zp: Zp, bb: &dyn BlackBox, base: &[u64], dir: &[u64]) -> Option<Vec<u64>> {
    let mut g: Option<Vec<u64>> = None;
    for u in bb.on_line(zp, base, dir) {
        if u.is_empty() {
            continue;
        }
        g = Some(match g {
            None => umonic(zp, u),
            Some(g) => ugcd(zp, &g, &u),
        });
    }
    g
}

fn random_nonzero(zp: Zp, rng: &mut ChaCha8Rng) -> u64 {
    rng.gen_range(1..zp.p)
}

/// Monic (in grlex) gcd of the black boxes over GF(p).
fn modular_gcd(zp: Zp, bb: &dyn BlackBox, rng: &mut ChaCha8Rng) -> ModOutcome {
    let m = bb.nvars();
    let v: Vec<u64> = (1..m).map(|_| random_nonzero(zp, rng)).collect();
    let mut dir = vec![1u64];
    dir.extend(&v);
    let base_of = |c: &[u64]| {
        let mut b = vec![0u64];
        b.extend_from_slice(c);
        b
    };
    let c0: Vec<u64> = (1..m).map(|_| random_nonzero(zp, rng)).collect();
    let Some(g0) = line_gcd(zp, bb, &base_of(&c0), &dir) else {
        return ModOutcome::AllZero;
    };
    let e = g0.len() - 1;
    if e == 0 {
        return ModOutcome::Found(vec![(Monomial::ONE, 1)]);
    }
    if (e as u64) + 2 >= zp.p {
        return ModOutcome::Unlucky;
    }
    let axes = m - 2;
    let side = e + 1;
    let nodes: Vec<Vec<u64>> = (0..axes)
        .map(|_| {
            let mut ns: Vec<u64> = Vec::with_capacity(side);
            while ns.len() < side {
                let x = random_nonzero(zp, rng);
                if !ns.contains(&x) {
                    ns.push(x);
                }
            }
            ns
        })
        .collect();
    // The coefficient of s^(e-k) has degree at most k in c, so a lower set
    // of the tensor grid of nodes determines it.
    let pts = lower_set(axes, e);
    let pos: HashMap<Vec<usize>, usize> = pts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut coefs = vec![vec![0u64; pts.len()]; e + 1];
    for (idx, pt) in pts.iter().enumerate() {
        let mut c: Vec<u64> = pt.iter().enumerate().map(|(a, &i)| nodes[a][i]).collect();
        c.push(1);
        match line_gcd(zp, bb, &base_of(&c), &dir) {
            Some(g) if g.len() == e + 1 => {
                for k in 1..=e {
                    coefs[k][idx] = g[e - k];
                }
            }
            _ => return ModOutcome::Unlucky,
        }
    }
    let grids: Vec<Nodes> = nodes.iter().map(|ns| Nodes::new(zp, ns.clone())).collect();
    let mut shifted: HashMap<Monomial, u64> = HashMap::new();
    shifted.insert(Monomial::var(0).pow(e as u32), 1);
    for (k, vals) in coefs.iter_mut().enumerate().skip(1) {
        along_lines(&pts, &pos, vals, e, |a, ys| grids[a].divided(zp, ys));
        along_lines(&pts, &pos, vals, e, |a, ys| grids[a].to_monomial(zp, ys));
        for (pt, &val) in pts.iter().zip(vals.iter()) {
            if val == 0 {
                continue;
            }
            let used: usize = pt.iter().sum();
            if used > k {
                return ModOutcome::Unlucky;
            }
            let mut exps = vec![0u32; m];
            exps[0] = (e - k) as u32;
            for (a, &ea) in pt.iter().enumerate() {
                exps[a + 1] = ea as u32;
            }
            exps[m - 1] += (k - used) as u32;
            shifted.insert(Monomial::new(&exps).unwrap(), val);
        }
    }
    // T'_i = T_i - v_i T_0
    let binom = pascal(zp, e);
    let mut cur = shifted;
    for i in 1..m {
        let neg_v = zp.sub(0, v[i - 1]);
        let mut next: HashMap<Monomial, u64> = HashMap::new();
        for (mono, c) in cur {
            let b = mono.exp(i) as usize;
            let rest = mono.without_var(i);
            let mut nv_pow = 1;
            for j in (0..=b).rev() {
                // T_i^j (-v T_0)^(b-j)
                let coeff = zp.mul(zp.mul(c, binom[b][j]), nv_pow);
                let mono = rest.mul(&Monomial::var(i).pow(j as u32)).mul(&Monomial::var(0).pow((b - j) as u32));
                let slot = next.entry(mono).or_insert(0);
                *slot = zp.add(*slot, coeff);
                nv_pow = zp.mul(nv_pow, neg_v);
            }
        }
        next.retain(|_, c| *c != 0);
        cur = next;
    }
    let mut terms: Vec<(Monomial, u64)> = cur.into_iter().collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    let il = zp.inv(terms[0].1);
    for t in terms.iter_mut() {
        t.1 = zp.mul(t.1, il);
    }
    // fresh line: the result must equal the gcd there
    let c1: Vec<u64> = (1..m).map(|_| random_nonzero(zp, rng)).collect();
    let check = ModPoly { terms: terms.clone(), deg: e as u32 };
    let on = umonic(zp, check.on_line(zp, &base_of(&c1), &dir));
    match line_gcd(zp, bb, &base_of(&c1), &dir) {
        Some(g) if g == on => ModOutcome::Found(terms),
        _ => ModOutcome::Unlucky,
    }
}

fn pascal(zp: Zp, e: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; e + 1]; e + 1];
    for b in 0..=e {
        t[b][0] = 1;
        for j in 1..=b {
            t[b][j] = zp.add(t[b - 1][j - 1], if j < b { t[b - 1][j] } else { 0 });
        }
    }
    t
}

fn seeded(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ tag)
}

fn gcd_with_retries(zp: Zp, bb: &dyn BlackBox) -> Result<Option<Vec<(Monomial, u64)>>> {
    let mut rng = seeded(zp.p);
    for _ in 0..ATTEMPTS {
        match modular_gcd(zp, bb, &mut rng) {
            ModOutcome::Found(t) => return Ok(Some(t)),
            ModOutcome::AllZero => return Err(Error::Hypothesis("all sampled minors vanish".into())),
            ModOutcome::Unlucky => continue,
        }
    }
    Ok(None)
}

/// Lifts the modular gcd to Q. `boxes(p)` returns `None` for primes where
/// the input does not reduce. Images are keyed by leading monomial; an
/// unlucky prime gives a gcd of larger degree and a different key.
fn rational_gcd(nvars: usize, boxes: &dyn Fn(u64) -> Option<Box<dyn BlackBox>>) -> Result<MultiPoly<Rational>> {
    let (lm, coeffs) = lift_keyed("rational reconstruction of the gcd", |p| {
        let Some(bb) = boxes(p) else { return Ok(None) };
        let Some(terms) = gcd_with_retries(Zp { p }, bb.as_ref())? else { return Ok(None) };
        let lm = terms[0].0;
        let index = MonomialIndex::new(nvars, lm.degree() as i64);
        let mut vec = vec![0u64; index.len()];
        for (m, c) in &terms {
            vec[index.index(m).unwrap()] = *c;
        }
        Ok(Some((lm, vec)))
    })?;
    let index = MonomialIndex::new(nvars, lm.degree() as i64);
    let terms = index.monomials.iter().zip(coeffs).filter(|(_, q)| !Zero::is_zero(q)).map(|(m, q)| (*m, q));
    Ok(MultiPoly::from_terms(nvars, &(), terms).normalized())
}

/// Runs the engine for the field of `ctx`, returning the canonical
/// associate.
fn field_gcd<F: Field>(
    nvars: usize,
    ctx: &F::Ctx,
    boxes: &dyn Fn(u64) -> Option<Box<dyn BlackBox>>,
) -> Result<MultiPoly<F>> {
    match F::descriptor(ctx) {
        FieldDescriptor::Rationals => {
            let g = rational_gcd(nvars, boxes)?;
            let terms = g.terms().iter().map(|(m, q)| (*m, F::from_rational(ctx, q).unwrap()));
            Ok(MultiPoly::from_terms(nvars, ctx, terms))
        }
        FieldDescriptor::Prime(p) => {
            let bb = boxes(p).ok_or_else(|| Error::Internal("input does not live in its own field".into()))?;
            let terms = gcd_with_retries(Zp { p }, bb.as_ref())?.ok_or_else(|| Error::Stabilization {
                what: format!("modular gcd over GF({p}); the field may be too small"),
                cap: ATTEMPTS,
            })?;
            let terms = terms.into_iter().map(|(m, c)| (m, F::from_i64(ctx, c as i64)));
            Ok(MultiPoly::from_terms(nvars, ctx, terms).normalized())
        }
    }
}

/// Gcd of homogeneous polynomials in the same variables, canonical
/// associate. Zero inputs are ignored.
pub fn poly_gcd<F: Field>(polys: &[MultiPoly<F>]) -> Result<MultiPoly<F>> {
    let nonzero: Vec<&MultiPoly<F>> = polys.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(Error::Validation("gcd of zero polynomials".into()));
    };
    let nvars = first.nvars();
    let ctx = first.ctx().clone();
    if nonzero.iter().any(|p| !p.is_homogeneous()) {
        return Err(Error::Validation("gcd inputs must be homogeneous".into()));
    }
    if nvars < 2 {
        return Err(Error::Validation("gcd needs at least two variables".into()));
    }
    if nonzero.iter().any(|p| p.is_constant()) {
        return Ok(MultiPoly::one(nvars, &ctx));
    }
    let boxes = |p: u64| -> Option<Box<dyn BlackBox>> {
        let polys = nonzero.iter().map(|q| ModPoly::from_poly(q, p)).collect::<Option<Vec<_>>>()?;
        if polys.iter().any(|q| q.terms.is_empty()) {
            return None;
        }
        Some(Box::new(PolyBoxes { nvars, polys }))
    };
    field_gcd(nvars, &ctx, &boxes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdOptions {
    /// Column subsets examined, in colex order (at least 3).
    pub sample_budget: usize,
    /// Seeded integer combinations of columns examined per degree profile
    /// after the colex prefix, when it does not cover every subset.
    pub combinations: usize,
    /// Optional early stop once this many nonzero minors in a row leave the
    /// gcd unchanged.
    pub patience: Option<usize>,
}

impl Default for GcdOptions {
    fn default() -> Self {
        GcdOptions { sample_budget: DEFAULT_SAMPLE_BUDGET, combinations: DEFAULT_COMBINATIONS, patience: None }
    }
}

/// Next `r`-subset of `0..c` in colex order.
fn next_colex(s: &mut [usize], c: usize) -> bool {
    let r = s.len();
    for i in 0..r {
        let limit = if i + 1 < r { s[i + 1] } else { c };
        if s[i] + 1 < limit {
            s[i] += 1;
            for (j, x) in s[..i].iter_mut().enumerate() {
                *x = j;
            }
            return true;
        }
    }
    false
}

/// Ways to take `r` columns from groups of the given sizes.
fn profiles(sizes: &[usize], r: usize) -> Vec<Vec<usize>> {
    let Some((&first, rest)) = sizes.split_first() else {
        return if r == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    for k in 0..=first.min(r) {
        for mut tail in profiles(rest, r - k) {
            tail.insert(0, k);
            out.push(tail);
        }
    }
    out
}

/// Minors of `M * R` with `R` block diagonal over the T-degree groups of
/// columns. Each is a random combination of all plain minors sharing its
/// degree profile, so a few of them reach the gcd of all of those.
fn combined_minors(col_deg: &[u32], r: usize, per_profile: usize, rng: &mut ChaCha8Rng) -> Vec<MinorSpec> {
    let mut degs: Vec<u32> = col_deg.to_vec();
    degs.sort_unstable();
    degs.dedup();
    let groups: Vec<Vec<usize>> =
        degs.iter().map(|&d| (0..col_deg.len()).filter(|&j| col_deg[j] == d).collect()).collect();
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    for prof in profiles(&sizes, r) {
        let single = prof.iter().zip(&sizes).all(|(&k, &c)| k == 0 || k == c);
        for _ in 0..if single { 1 } else { per_profile } {
            let mut columns = Vec::with_capacity(r);
            for (g, &k) in groups.iter().zip(&prof) {
                if k == g.len() {
                    columns.extend(g.iter().map(|&j| vec![(j, 1)]));
                    continue;
                }
                for _ in 0..k {
                    columns.push(g.iter().map(|&j| (j, rng.gen_range(1..=COMBINATION_WEIGHT))).collect());
                }
            }
            out.push(MinorSpec { columns });
        }
    }
    out
}

/// The minors to examine: a colex prefix, then block combinations.
fn candidate_minors(col_deg: &[u32], r: usize, opts: &GcdOptions, rng: &mut ChaCha8Rng) -> Vec<MinorSpec> {
    let c = col_deg.len();
    let budget = opts.sample_budget.max(3);
    let mut out = Vec::new();
    let mut s: Vec<usize> = (0..r).collect();
    loop {
        out.push(MinorSpec::plain(&s));
        if out.len() >= budget || !next_colex(&mut s, c) {
            break;
        }
    }
    if out.len() >= budget && crate::poly::binomial(c as i64, r as i64) > budget as i64 {
        out.extend(combined_minors(col_deg, r, opts.combinations, rng));
    }
    out
}

/// Minors that lower the running gcd on a random line.
fn select_minors<F: Field>(m: &MatrixRep<F>, opts: &GcdOptions) -> Result<Vec<MinorSpec>> {
    let (r, c) = m.shape();
    let p = match F::descriptor(&m.ctx) {
        FieldDescriptor::Prime(p) => p,
        FieldDescriptor::Rationals => lifting_primes().next().unwrap(),
    };
    let zp = Zp { p };
    let mb = MinorBoxes::from_matrix(m, p, Vec::new())
        .ok_or_else(|| Error::Internal("matrix does not reduce modulo the sampling prime".into()))?;
    let mut rng = seeded(p ^ 0x51);
    let nv = m.n + 1;
    let mut base = vec![0u64];
    base.extend((1..nv).map(|_| random_nonzero(zp, &mut rng)));
    let mut dir = vec![1u64];
    dir.extend((1..nv).map(|_| random_nonzero(zp, &mut rng)));
    let lines = mb.entry_lines(zp, &base, &dir, &vec![true; c]);
    let mut combo_rng = seeded(0xc0b1);
    let candidates = candidate_minors(&mb.col_deg, r, opts, &mut combo_rng);
    let mut degs = mb.col_deg.clone();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let inv = Nodes::range(zp, degs.iter().take(r).map(|&x| x as usize).sum());
    let mut chosen = Vec::new();
    let mut g: Option<Vec<u64>> = None;
    let (mut examined, mut nonzero, mut stale) = (0, 0, 0);
    for minor in candidates {
        examined += 1;
        let u = mb.minor_on_line(zp, &lines, &minor, &inv);
        if !u.is_empty() {
            nonzero += 1;
            let next = match &g {
                None => umonic(zp, u),
                Some(g) => ugcd(zp, g, &u),
            };
            if g.as_ref().is_none_or(|g| next.len() < g.len()) {
                chosen.push(minor);
                stale = 0;
            } else {
                stale += 1;
            }
            g = Some(next);
        }
        let constant = g.as_ref().is_some_and(|g| g.len() == 1);
        if constant || opts.patience.is_some_and(|pat| nonzero >= 3 && stale >= pat) {
            break;
        }
    }
    if chosen.is_empty() {
        return Err(Error::Hypothesis(format!(
            "all {examined} sampled maximal minors vanish; the matrix is rank deficient"
        )));
    }
    Ok(chosen)
}

#[derive(Clone, Debug)]
pub struct MinorGcd<F: Field> {
    pub equation: MultiPoly<F>,
    pub minors_used: Vec<MinorSpec>,
}

/// Gcd of maximal minors: a colex prefix of `sample_budget` column subsets,
/// then block combinations of columns when the prefix is not exhaustive.
pub fn gcd_minors<F: Field>(m: &MatrixRep<F>, sample_budget: usize) -> Result<MultiPoly<F>> {
    Ok(gcd_minors_with(m, &GcdOptions { sample_budget, ..GcdOptions::default() })?.equation)
}

pub fn gcd_minors_with<F: Field>(m: &MatrixRep<F>, opts: &GcdOptions) -> Result<MinorGcd<F>> {
    let (r, c) = m.shape();
    if r == 0 || r > c {
        return Err(Error::Hypothesis(format!("a {r}x{c} matrix has no nonzero maximal minors")));
    }
    let minors = select_minors(m, opts)?;
    let equation = minors_gcd(m, &minors)?;
    Ok(MinorGcd { equation, minors_used: minors })
}

fn minors_gcd<F: Field>(m: &MatrixRep<F>, minors: &[MinorSpec]) -> Result<MultiPoly<F>> {
    let boxes =
        |p: u64| -> Option<Box<dyn BlackBox>> { Some(Box::new(MinorBoxes::from_matrix(m, p, minors.to_vec())?)) };
    field_gcd(m.n + 1, &m.ctx, &boxes)
}

/// Determinant of a square matrix, canonical associate.
pub fn det_square<F: Field>(m: &MatrixRep<F>) -> Result<MultiPoly<F>> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::Validation(format!("determinant of a non-square {r}x{c} matrix")));
    }
    let all: Vec<usize> = (0..c).collect();
    minors_gcd(m, &[MinorSpec::plain(&all)]).map_err(|e| match e {
        Error::Hypothesis(_) => Error::Hypothesis("the matrix is singular: its determinant vanishes".into()),
        e => e,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicitVerdict {
    pub degree: u32,
    pub vanishes: bool,
    /// Degree of `H(f)` when it does not vanish.
    pub residual_degree: Option<u32>,
    pub primitive: bool,
    /// `gcd(H, dH/dT_i)` when it is not constant.
    pub repeated_factor: Option<String>,
    pub repeated_factor_vanishes: Option<bool>,
}

impl ImplicitVerdict {
    pub fn passed(&self) -> bool {
        self.vanishes
    }
}

/// Integer points with coordinate sum `total`; a homogeneous form of that
/// degree vanishing on all of them is zero.
fn simplex_points(n: usize, total: u32) -> Vec<Vec<i64>> {
    crate::poly::monomial_basis(n, total).iter().map(|m| (0..n).map(|i| m.exp(i) as i64).collect()).collect()
}

fn lattice_vanishing(zp: Zp, h: &ModPoly, forms: &[ModPoly], pts: &[Vec<i64>]) -> bool {
    let d = forms.iter().map(|f| f.deg as usize).max().unwrap_or(0);
    let e = h.deg as usize;
    pts.iter().all(|a| {
        let x: Vec<u64> = a.iter().map(|&v| v as u64 % zp.p).collect();
        let px = powers(zp, &x, d);
        let fx: Vec<u64> = forms.iter().map(|f| f.eval(zp, &px)).collect();
        h.eval(zp, &powers(zp, &fx, e)) == 0
    })
}

fn integer_terms<F: Field>(p: &MultiPoly<F>, scale: &BigInt) -> Vec<(Monomial, BigInt)> {
    p.terms()
        .iter()
        .map(|(m, c)| {
            let q = (c as &dyn Any).downcast_ref::<Rational>().expect("rational coefficients");
            let v = q * Rational::from_integer(scale.clone());
            debug_assert!(v.is_integer());
            (*m, v.to_integer())
        })
        .collect()
}

fn reduce_terms(terms: &[(Monomial, BigInt)], deg: u32, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let terms = terms.iter().map(|(m, c)| (*m, c.mod_floor(&pb).to_u64().unwrap())).filter(|t| t.1 != 0).collect();
    ModPoly { terms, deg }
}

fn l1(terms: &[(Monomial, BigInt)]) -> BigInt {
    terms.iter().map(|(_, c)| c.abs()).sum()
}

/// Over Q the value of `H(f)` at a lattice point, with `H` and the forms
/// scaled to integers, is bounded; it is zero once it vanishes modulo primes
/// whose product exceeds twice the bound.
fn rational_lattice_vanishing<F: Field>(h: &MultiPoly<F>, fs: &Forms<F>, pts: &[Vec<i64>], total: u32) -> bool {
    let denom = |p: &MultiPoly<F>| -> BigInt {
        p.terms().iter().fold(BigInt::one(), |acc, (_, c)| {
            acc.lcm((c as &dyn Any).downcast_ref::<Rational>().expect("rational coefficients").denom())
        })
    };
    let hs = integer_terms(h, &denom(h));
    let common = fs.forms.iter().fold(BigInt::one(), |acc, f| acc.lcm(&denom(f)));
    let gs: Vec<Vec<(Monomial, BigInt)>> = fs.forms.iter().map(|f| integer_terms(f, &common)).collect();
    let e = h.degree().unwrap_or(0);
    let gmax = gs.iter().map(|g| l1(g)).max().unwrap_or_default() * BigInt::from(total.max(1)).pow(fs.d);
    let bound = l1(&hs) * gmax.pow(e) * 2;
    let mut modulus = BigInt::one();
    for p in lifting_primes() {
        let zp = Zp { p };
        let hm = reduce_terms(&hs, e, p);
        let fm: Vec<ModPoly> = gs.iter().map(|g| reduce_terms(g, fs.d, p)).collect();
        if !lattice_vanishing(zp, &hm, &fm, pts) {
            return false;
        }
        modulus *= p;
        if modulus > bound {
            return true;
        }
    }
    unreachable!("the prime supply exceeds any bound reached here")
}

/// Whether `H(f_0, ..., f_n) = 0`. A homogeneous `H` is tested on the
/// lattice points `a` with `|a| = deg(H) * d`, which determine forms of that
/// degree; in small characteristic the composition is expanded instead.
pub fn vanishes_on<F: Field>(h: &MultiPoly<F>, fs: &Forms<F>) -> bool {
    let total = h.degree().unwrap_or(0) * fs.d;
    let prime = match F::descriptor(&fs.ctx) {
        FieldDescriptor::Prime(p) => Some(p),
        FieldDescriptor::Rationals => None,
    };
    if prime.is_some_and(|p| p <= total as u64) || !h.is_homogeneous() {
        return h.compose(&fs.forms).is_zero();
    }
    let pts = simplex_points(fs.n, total);
    match prime {
        Some(p) => {
            let hm = ModPoly::from_poly(h, p).unwrap();
            let fm: Vec<ModPoly> = fs.forms.iter().map(|f| ModPoly::from_poly(f, p).unwrap()).collect();
            lattice_vanishing(Zp { p }, &hm, &fm, &pts)
        }
        None => rational_lattice_vanishing(h, fs, &pts, total),
    }
}

pub fn verify_implicit<F: Field>(h: &MultiPoly<F>, sys: &ParamSystem<F>) -> Result<ImplicitVerdict> {
    let fs = &sys.exact;
    if h.is_zero() {
        return Err(Error::Validation("the zero polynomial is not an implicit equation".into()));
    }
    if h.nvars() != fs.n + 1 {
        return Err(Error::Validation(format!("expected a polynomial in {} T-variables", fs.n + 1)));
    }
    let vanishes = vanishes_on(h, fs);
    let residual_degree = if vanishes { None } else { h.compose(&fs.forms).degree() };
    let coeffs: Vec<F> = h.terms().iter().map(|(_, c)| c.clone()).collect();
    let s = F::normalizer(&coeffs);
    let primitive = s.is_one() || s.neg().is_one();
    let (mut repeated_factor, mut repeated_factor_vanishes) = (None, None);
    if h.is_homogeneous() && h.degree() > Some(1) {
        if let Some(dh) = (0..=fs.n).map(|i| h.derivative(i)).find(|d| !d.is_zero()) {
            let g = poly_gcd(&[h.clone(), dh])?;
            if !g.is_constant() {
                repeated_factor = Some(format_poly(&g, &default_names("T", 0, fs.n + 1)));
                repeated_factor_vanishes = Some(vanishes_on(&g, fs));
            }
        }
    }
    Ok(ImplicitVerdict {
        degree: h.degree().unwrap_or(0),
        vanishes,
        residual_degree,
        primitive,
        repeated_factor,
        repeated_factor_vanishes,
    })
}

#[derive(Clone, Debug)]
pub struct Extraction<F: Field> {
    pub mu: u32,
    pub shape: (usize, usize),
    pub method: &'static str,
    pub minors_used: usize,
    pub equation: MultiPoly<F>,
    pub verdict: ImplicitVerdict,
}

impl<F: Field> Extraction<F> {
    pub fn to_json(&self, n: usize) -> Value {
        json!({
            "implicit": format_poly(&self.equation, &default_names("T", 0, n + 1)),
            "degree": self.verdict.degree,
            "verified": self.verdict.passed(),
            "mu": self.mu,
            "shape": [self.shape.0, self.shape.1],
            "method": self.method,
            "minors_used": self.minors_used,
            "primitive": self.verdict.primitive,
            "residual_degree": self.verdict.residual_degree,
            "repeated_factor": self.verdict.repeated_factor,
            "repeated_factor_vanishes": self.verdict.repeated_factor_vanishes,
        })
    }
}

/// Builds `M_mu`, extracts the equation and verifies it.
pub fn implicitize<F: Field>(
    sys: &ParamSystem<F>,
    report: &ThresholdReport,
    mu: u32,
    opts: &GcdOptions,
) -> Result<Extraction<F>> {
    let m = build_matrix(sys, report, mu, None)?;
    let (equation, method, minors_used) = if m.is_square() {
        (det_square(&m)?, "determinant", 1)
    } else {
        let g = gcd_minors_with(&m, opts)?;
        (g.equation, "gcd_of_minors", g.minors_used.len())
    };
    let verdict = verify_implicit(&equation, sys)?;
    Ok(Extraction { mu, shape: m.shape(), method, minors_used, equation, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::koszul::threshold_report;
    use crate::parse::parse_poly;

    fn tn() -> Vec<String> {
        default_names("T", 0, 4)
    }

    fn tq(s: &str) -> MultiPoly<Rational> {
        parse_poly(s, &tn(), &()).unwrap()
    }

    fn example() -> ParamSystem<Rational> {
        ParamSystem::from_strings(
            default_names("X", 1, 3),
            &["X1*X3^2", "X2^2*(X1+X3)", "X1*X2*(X1+X3)", "X2*X3*(X1+X3)"],
            &(),
        )
        .unwrap()
    }

    #[test]
    fn univariate_helpers() {
        let zp = Zp { p: 101 };
        let xs = [1, 2, 3];
        let ys: Vec<u64> = xs.iter().map(|&x| (x * x + 3) % 101).collect();
        assert_eq!(Nodes::new(zp, xs.to_vec()).interpolate(zp, &ys), vec![3, 0, 1]);
        // (x+1)(x+2) and (x+1)(x+3)
        assert_eq!(ugcd(zp, &[2, 3, 1], &[3, 4, 1]), vec![1, 1]);
        assert_eq!(det_mod(zp, vec![vec![1, 2], vec![3, 4]]), 99);
    }

    #[test]
    fn colex_order() {
        let mut s = vec![0, 1];
        let mut all = vec![s.clone()];
        while next_colex(&mut s, 4) {
            all.push(s.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn gcd_of_products() {
        let g = tq("T0*T1 - 2*T2^2 + T3*T0");
        let a = tq("T0 + 3*T3");
        let b = tq("T1^2 - T2*T3");
        let got = poly_gcd(&[a.mul(&g), b.mul(&g)]).unwrap();
        assert_eq!(got, g.normalized());
        let one = poly_gcd(&[a.clone(), b.clone()]).unwrap();
        assert!(one.is_constant());
    }

    #[test]
    fn gcd_over_prime_field() {
        let names = tn();
        let g: MultiPoly<Fp> = parse_poly("T0*T1 + 5*T2^2", &names, &101).unwrap();
        let a: MultiPoly<Fp> = parse_poly("T3 - T1", &names, &101).unwrap();
        let b: MultiPoly<Fp> = parse_poly("T0^2 + T2*T3", &names, &101).unwrap();
        let got = poly_gcd(&[a.mul(&g), b.mul(&g)]).unwrap();
        assert_eq!(got, g.normalized());
    }

    #[test]
    fn example_equation() {
        let s = example();
        let r = threshold_report(&s).unwrap();
        let expected = tq("T0*T1*T2 + T0*T1*T3 - T2*T3^2").normalized();
        let m0 = build_matrix(&s, &r, 0, None).unwrap();
        assert_eq!(det_square(&m0).unwrap(), expected);
        let m1 = build_matrix(&s, &r, 1, None).unwrap();
        assert_eq!(gcd_minors(&m1, 16).unwrap(), expected);
        let m2 = build_matrix(&s, &r, 2, Some(1)).unwrap();
        assert_eq!(gcd_minors(&m2, DEFAULT_SAMPLE_BUDGET).unwrap(), expected);
        let v = verify_implicit(&expected, &s).unwrap();
        assert!(v.passed() && v.primitive && v.repeated_factor.is_none());
    }

    #[test]
    fn verdicts() {
        let s = example();
        let bad = verify_implicit(&tq("T0"), &s).unwrap();
        assert!(!bad.passed());
        assert_eq!(bad.residual_degree, Some(3));
        let h = tq("T0*T1*T2 + T0*T1*T3 - T2*T3^2");
        let sq = verify_implicit(&h.mul(&h), &s).unwrap();
        assert!(sq.passed());
        assert_eq!(sq.repeated_factor_vanishes, Some(true));
    }
}
