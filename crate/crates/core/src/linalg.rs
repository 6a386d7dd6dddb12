//! Dense exact linear algebra.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<F: Field> {
    rows: usize,
    cols: usize,
    ctx: F::Ctx,
    data: Vec<Vec<F>>,
}

#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: ExactMatrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize, ctx: &F::Ctx) -> Self {
        ExactMatrix { rows, cols, ctx: ctx.clone(), data: vec![vec![F::zero(ctx); cols]; rows] }
    }

    pub fn identity(n: usize, ctx: &F::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i][i] = F::one(ctx);
        }
        m
    }

    /// Builds from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize, ctx: &F::Ctx) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ExactMatrix { rows: rows.len(), cols, ctx: ctx.clone(), data: rows }
    }

    /// The matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<F>], rows: usize, ctx: &F::Ctx) -> Self {
        let mut m = Self::zeros(rows, columns.len(), ctx);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]], ctx: &F::Ctx) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let data = rows.iter().map(|r| r.iter().map(|&v| F::from_i64(ctx, v)).collect()).collect();
        Self::from_rows(data, cols, ctx)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn into_rows(self) -> Vec<Vec<F>> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, &self.ctx);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| {
                let mut acc = F::zero(&self.ctx);
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = out.data[i][j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form by Gauss-Jordan elimination. Over Q the
    /// pivot in each column is the candidate of least height.
    pub fn rref(&self) -> Rref<F> {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for (i, row) in a.iter().enumerate().skip(r) {
                if !row[c].is_zero() {
                    let h = row[c].height();
                    if best.is_none_or(|(_, bh)| h < bh) {
                        best = Some((i, h));
                        if h == 0 {
                            break;
                        }
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            a.swap(r, p);
            let inv = a[r][c].inv();
            if !inv.is_one() {
                for x in a[r][c..].iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&inv);
                    }
                }
            }
            let (before, rest) = a.split_at_mut(r);
            let (prow, after) = rest.split_first_mut().unwrap();
            for row in before.iter_mut().chain(after.iter_mut()) {
                if row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                    if !y.is_zero() {
                        x.sub_mul_assign(&f, y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { matrix: ExactMatrix { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: a }, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols, &self.ctx);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of the right null space, one vector per free column, each
    /// scaled so its first nonzero entry is one.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let rr = self.rref();
        kernel_from_rref(&rr)
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<F>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut r = r.clone();
                r.push(x.clone());
                r
            })
            .collect();
        let rr = ExactMatrix::from_rows(aug, self.cols + 1, &self.ctx).rref();
        if rr.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(&self.ctx); self.cols];
        for (i, &c) in rr.pivots.iter().enumerate() {
            x[c] = rr.matrix.data[i][self.cols].clone();
        }
        Some(x)
    }
}

fn kernel_from_rref<F: Field>(rr: &Rref<F>) -> Vec<Vec<F>> {
    let cols = rr.matrix.cols;
    let ctx = &rr.matrix.ctx;
    let mut is_pivot = vec![None; cols];
    for (i, &c) in rr.pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let mut out = Vec::new();
    for f in 0..cols {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![F::zero(ctx); cols];
        v[f] = F::one(ctx);
        for (i, &c) in rr.pivots.iter().enumerate() {
            if c < f {
                v[c] = rr.matrix.data[i][f].neg();
            }
        }
        normalize_first(&mut v);
        out.push(v);
    }
    out
}

/// Scales so the first nonzero entry is one.
pub fn normalize_first<F: Field>(v: &mut [F]) {
    if let Some(k) = v.iter().position(|x| !x.is_zero()) {
        if !v[k].is_one() {
            let inv = v[k].inv();
            for x in v[k..].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
    }
}

/// Incrementally built echelon basis of a subspace of `F^dim`.
///
/// Each stored vector is keyed by its last nonzero coordinate, where it
/// equals one. Keying by the last coordinate means that bases produced by
/// [`ExactMatrix::kernel_basis`] are already in echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    dim: usize,
    ctx: F::Ctx,
    pivots: Vec<Option<Vec<F>>>,
    rank: usize,
}

fn last_nonzero<F: Field>(v: &[F]) -> Option<usize> {
    v.iter().rposition(|x| !x.is_zero())
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize, ctx: &F::Ctx) -> Self {
        Echelon { dim, ctx: ctx.clone(), pivots: vec![None; dim], rank: 0 }
    }

    pub fn from_vectors(dim: usize, ctx: &F::Ctx, vs: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut e = Self::new(dim, ctx);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.dim
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(c, _)| c)
    }

    /// Adds `v`; returns its pivot column if it was independent.
    pub fn insert(&mut self, mut v: Vec<F>) -> Option<usize> {
        assert_eq!(v.len(), self.dim);
        loop {
            let c = last_nonzero(&v)?;
            match &self.pivots[c] {
                Some(p) => {
                    let f = v[c].clone();
                    for (x, y) in v[..=c].iter_mut().zip(&p[..=c]) {
                        if !y.is_zero() {
                            x.sub_mul_assign(&f, y);
                        }
                    }
                }
                None => {
                    let inv = v[c].inv();
                    if !inv.is_one() {
                        for x in v[..=c].iter_mut() {
                            if !x.is_zero() {
                                *x = x.mul(&inv);
                            }
                        }
                    }
                    self.pivots[c] = Some(v);
                    self.rank += 1;
                    return Some(c);
                }
            }
        }
    }

    /// Normal form: the unique representative of `v` modulo the span that
    /// vanishes at every pivot column. Linear in `v`.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for c in (0..self.dim).rev() {
            if v[c].is_zero() {
                continue;
            }
            if let Some(p) = &self.pivots[c] {
                let f = v[c].clone();
                for (x, y) in v[..=c].iter_mut().zip(&p[..=c]) {
                    if !y.is_zero() {
                        x.sub_mul_assign(&f, y);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Stored basis vectors in pivot order.
    pub fn basis(&self) -> Vec<Vec<F>> {
        self.pivots.iter().flatten().cloned().collect()
    }

    /// Coordinates of the normal form on the non-pivot columns.
    pub fn quotient_coords(&self, v: &[F]) -> Vec<F> {
        let nf = self.reduce(v);
        nf.into_iter().enumerate().filter(|(c, _)| self.pivots[*c].is_none()).map(|(_, x)| x).collect()
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }
}

/// Dimension of the span of `vs` in `F^dim`.
pub fn rank_of<F: Field>(dim: usize, ctx: &F::Ctx, vs: impl IntoIterator<Item = Vec<F>>) -> usize {
    Echelon::from_vectors(dim, ctx, vs).rank()
}

/// Representatives of a basis of `span(u) / span(w)`.
///
/// Each representative lies in `span(u)`, vanishes at the pivot columns of
/// an echelon basis of `span(w)`, and the list is in reduced echelon form.
pub fn quotient_reps<F: Field>(dim: usize, ctx: &F::Ctx, u: &[Vec<F>], w: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    let eu = Echelon::from_vectors(dim, ctx, u.iter().cloned());
    if let Some(k) = w.iter().position(|x| !eu.contains(x)) {
        return Err(Error::Validation(format!("quotient_reps: vector {k} of the subspace is not in the ambient span")));
    }
    let reps = quotient_reps_unchecked(dim, ctx, u, w);
    debug_assert_eq!(reps.len(), eu.rank() - rank_of(dim, ctx, w.iter().cloned()));
    Ok(reps)
}

/// [`quotient_reps`] for callers that already know `span(w)` lies in
/// `span(u)`. The output depends only on the two subspaces.
pub fn quotient_reps_unchecked<F: Field>(dim: usize, ctx: &F::Ctx, u: &[Vec<F>], w: &[Vec<F>]) -> Vec<Vec<F>> {
    let ew = Echelon::from_vectors(dim, ctx, w.iter().cloned());
    let reduced: Vec<Vec<F>> = u.iter().map(|x| ew.reduce(x)).filter(|x| x.iter().any(|c| !c.is_zero())).collect();
    if reduced.is_empty() {
        return Vec::new();
    }
    let rr = ExactMatrix::from_rows(reduced, dim, ctx).rref();
    let mut reps = rr.matrix.into_rows();
    reps.truncate(rr.rank);
    reps
}
