//! Syzygies, equations of the Rees algebra in fixed bidegree, the new
//! columns contributed by each T-degree, and the matrices `M_mu`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Fp};
use crate::koszul::{differential_rank, h0m_h1_dim, koszul_dims, ThresholdReport};
use crate::linalg::{quotient_reps_unchecked, Echelon, ExactMatrix};
use crate::modular::lift_keyed;
use crate::parse::{default_names, format_poly};
use crate::poly::{binomial, count_monomials, BigradedPoly, Monomial, MonomialIndex, MultiPoly};
use crate::system::{Forms, ParamSystem, COUNT_PRIMES};

/// Monomial basis of `S_{mu,ell}`, x-major.
pub struct BiBasis {
    pub n: usize,
    pub mu: u32,
    pub ell: u32,
    pub x: MonomialIndex,
    pub t: MonomialIndex,
}

impl BiBasis {
    pub fn new(n: usize, mu: u32, ell: u32) -> Self {
        BiBasis { n, mu, ell, x: MonomialIndex::new(n, mu as i64), t: MonomialIndex::new(n + 1, ell as i64) }
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, x: &Monomial, t: &Monomial) -> Option<usize> {
        Some(self.x.index(x)? * self.t.len() + self.t.index(t)?)
    }

    pub fn to_poly<F: Field>(&self, v: &[F], ctx: &F::Ctx) -> BigradedPoly<F> {
        BigradedPoly::from_vector(self.n, self.n + 1, &self.x, &self.t, self.mu, self.ell, ctx, v)
    }

    pub fn to_vector<F: Field>(&self, p: &BigradedPoly<F>) -> Vec<F> {
        p.to_vector(&self.x, &self.t)
    }

    /// For each basis element of `S_{mu,ell-1}`, its position after
    /// multiplying by `T_i`.
    fn shift_map(&self, i: usize) -> Vec<usize> {
        let lower = BiBasis::new(self.n, self.mu, self.ell - 1);
        let ti = Monomial::var(i);
        let mut out = Vec::with_capacity(lower.len());
        for x in &lower.x.monomials {
            for t in &lower.t.monomials {
                out.push(self.index(x, &t.mul(&ti)).unwrap());
            }
        }
        out
    }
}

/// `dim S_{mu,ell}`.
pub fn s_dim(n: usize, mu: i64, ell: i64) -> usize {
    (count_monomials(n, mu) * count_monomials(n + 1, ell)) as usize
}

/// Kernel of the substitution map on `S_{mu,ell}`, as vectors.
pub fn equation_vectors<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> Vec<Vec<G>> {
    let rows = count_monomials(fs.n, (mu + ell * fs.d) as i64) as usize;
    ExactMatrix::from_columns(&fs.substitution_columns(mu, ell), rows, &fs.ctx).kernel_basis()
}

/// `dim J_{mu,ell}`.
pub fn equation_dim<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> usize {
    let rows = count_monomials(fs.n, (mu + ell * fs.d) as i64) as usize;
    s_dim(fs.n, mu as i64, ell as i64) - crate::linalg::rank_of(rows, &fs.ctx, fs.substitution_columns(mu, ell))
}

/// Basis of `{P in S_{mu,ell} : P(X, f(X)) = 0}`.
pub fn algebra_equations<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> Vec<BigradedPoly<G>> {
    let b = BiBasis::new(fs.n, mu, ell);
    equation_vectors(fs, mu, ell).iter().map(|v| b.to_poly(v, &fs.ctx)).collect()
}

/// Spanning vectors of the part of `J_{mu,ell}` generated in T-degree
/// below `ell`, which is `sum_i T_i J_{mu,ell-1}`.
pub fn lower_order_vectors<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> Vec<Vec<G>> {
    assert!(ell >= 2);
    let b = BiBasis::new(fs.n, mu, ell);
    let lower = equation_vectors(fs, mu, ell - 1);
    let mut out = Vec::new();
    for i in 0..=fs.n {
        let map = b.shift_map(i);
        for v in &lower {
            let mut w = vec![G::zero(&fs.ctx); b.len()];
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    w[map[k]] = c.clone();
                }
            }
            out.push(w);
        }
    }
    out
}

pub fn lower_order_slice<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> Vec<BigradedPoly<G>> {
    let b = BiBasis::new(fs.n, mu, ell);
    lower_order_vectors(fs, mu, ell).iter().map(|v| b.to_poly(v, &fs.ctx)).collect()
}

/// `dim (J / J<ell-1>)_{mu,ell}`, stopping early once the lower part spans.
pub fn new_column_count<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> usize {
    let total = equation_dim(fs, mu, ell);
    if total == 0 {
        return 0;
    }
    let b = BiBasis::new(fs.n, mu, ell);
    let lower = equation_vectors(fs, mu, ell - 1);
    let mut e = Echelon::new(b.len(), &fs.ctx);
    for i in 0..=fs.n {
        let map = b.shift_map(i);
        for v in &lower {
            let mut w = vec![G::zero(&fs.ctx); b.len()];
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    w[map[k]] = c.clone();
                }
            }
            e.insert(w);
            if e.rank() == total {
                return 0;
            }
        }
    }
    total - e.rank()
}

/// Spanning vectors of the Koszul part `KS_{mu,ell}`: the multiples
/// `x^b T^g (f_i T_j - f_j T_i)`.
pub fn koszul_slice_vectors<G: Field>(fs: &Forms<G>, mu: u32, ell: u32) -> Vec<Vec<G>> {
    if mu < fs.d || ell == 0 {
        return Vec::new();
    }
    let b = BiBasis::new(fs.n, mu, ell);
    let xs = crate::poly::monomial_basis(fs.n, mu - fs.d);
    let ts = crate::poly::monomial_basis(fs.n + 1, ell - 1);
    let mut out = Vec::new();
    for i in 0..=fs.n {
        for j in i + 1..=fs.n {
            for x in &xs {
                for g in &ts {
                    let mut v = vec![G::zero(&fs.ctx); b.len()];
                    let tj = g.mul(&Monomial::var(j));
                    let ti = g.mul(&Monomial::var(i));
                    for (m, c) in fs.forms[i].terms() {
                        let k = b.index(&m.mul(x), &tj).unwrap();
                        v[k] = v[k].add(c);
                    }
                    for (m, c) in fs.forms[j].terms() {
                        let k = b.index(&m.mul(x), &ti).unwrap();
                        v[k] = v[k].sub(c);
                    }
                    out.push(v);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Syzygy<F: Field> {
    /// `(a_0, ..., a_n)` with `sum a_i f_i = 0`.
    pub coeffs: Vec<MultiPoly<F>>,
    pub koszul: bool,
}

#[derive(Clone, Debug)]
pub struct SyzygyBasis<F: Field> {
    pub mu: u32,
    pub vectors: Vec<Syzygy<F>>,
    pub koszul_dim: usize,
}

impl<F: Field> SyzygyBasis<F> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Each syzygy as the linear T-form `sum a_i T_i`.
    pub fn as_bigraded(&self, n: usize, ctx: &F::Ctx) -> Vec<BigradedPoly<F>> {
        self.vectors
            .iter()
            .map(|s| {
                let mut p = BigradedPoly::zero(n, n + 1, self.mu, 1, ctx);
                for (i, a) in s.coeffs.iter().enumerate() {
                    for (m, c) in a.terms() {
                        p.add_term(*m, Monomial::var(i), c.clone()).unwrap();
                    }
                }
                p
            })
            .collect()
    }
}

/// Image of `fs` in a large prime field, used to decide linear
/// independence before building exact objects.
pub fn probe_forms<F: Field>(fs: &Forms<F>) -> Result<Forms<Fp>> {
    match F::descriptor(&fs.ctx) {
        FieldDescriptor::Prime(p) => fs.to_prime(p),
        FieldDescriptor::Rationals => COUNT_PRIMES.iter().find_map(|&p| fs.to_prime(p)),
    }
    .ok_or_else(|| Error::Internal("no usable prime for the forms".into()))
}

/// Runs `job` over prime fields and returns the result over the field of
/// `fs`: directly for a prime field, by CRT and rational reconstruction for
/// Q. `job` must return a canonical answer (for instance a reduced echelon
/// basis). Each vector comes back scaled to its canonical associate.
pub fn explicit_vectors<F: Field>(
    fs: &Forms<F>,
    dim: usize,
    what: &str,
    job: impl Fn(&Forms<Fp>) -> Vec<Vec<Fp>>,
) -> Result<Vec<Vec<F>>> {
    let out: Vec<Vec<F>> = match F::descriptor(&fs.ctx) {
        FieldDescriptor::Prime(_) => job(&probe_forms(fs)?)
            .into_iter()
            .map(|v| v.into_iter().map(|x| F::from_i64(&fs.ctx, x.value() as i64)).collect())
            .collect(),
        FieldDescriptor::Rationals => {
            let (key, flat) = lift_keyed(what, |p| {
                let Some(fp) = fs.to_prime(p) else { return Ok(None) };
                let vs = job(&fp);
                let key: Vec<Option<usize>> = vs.iter().map(|v| v.iter().position(|x| !x.is_zero())).collect();
                Ok(Some((key, vs.iter().flatten().map(|x| x.value()).collect::<Vec<u64>>())))
            })?;
            if key.is_empty() {
                return Ok(Vec::new());
            }
            flat.chunks(dim).map(|c| c.iter().map(|q| F::from_rational(&fs.ctx, q).unwrap()).collect()).collect()
        }
    };
    Ok(out
        .into_iter()
        .map(|v| {
            let nz: Vec<F> = v.iter().filter(|x| !x.is_zero()).cloned().collect();
            let s = F::normalizer(&nz);
            v.iter().map(|x| x.mul(&s)).collect()
        })
        .collect())
}

fn check_equations<F: Field>(fs: &Forms<F>, b: &BiBasis, vs: &[Vec<F>], what: &str) -> Result<()> {
    for v in vs {
        if !fs.substitute(&b.to_poly(v, &fs.ctx))?.is_zero() {
            return Err(Error::Internal(format!("a reconstructed {what} does not vanish on the parametrization")));
        }
    }
    Ok(())
}

/// Syzygies of coefficient degree `mu`: an independent subset of the
/// Koszul generators followed by reduced echelon representatives of the
/// rest.
pub fn linear_syzygies<F: Field>(fs: &Forms<F>, mu: u32) -> Result<SyzygyBasis<F>> {
    let b = BiBasis::new(fs.n, mu, 1);
    let probe = probe_forms(fs)?;
    let mut e = Echelon::new(b.len(), &probe.ctx);
    let ks: Vec<Vec<F>> = koszul_slice_vectors(fs, mu, 1)
        .into_iter()
        .zip(koszul_slice_vectors(&probe, mu, 1))
        .filter_map(|(g, pg)| e.insert(pg).map(|_| g))
        .collect();
    let total = equation_dim(&probe, mu, 1);
    let extra = if total > ks.len() {
        let dim = b.len();
        let vs = explicit_vectors(fs, dim, "non-Koszul syzygies", |fp| {
            quotient_reps_unchecked(dim, &fp.ctx, &equation_vectors(fp, mu, 1), &koszul_slice_vectors(fp, mu, 1))
        })?;
        if vs.len() != total - ks.len() {
            return Err(Error::Internal("non-Koszul syzygy count changed under reconstruction".into()));
        }
        check_equations(fs, &b, &vs, "syzygy")?;
        vs
    } else {
        Vec::new()
    };
    let to_syz = |v: &Vec<F>, koszul: bool| {
        let p = b.to_poly(v, &fs.ctx);
        let coeffs = (0..=fs.n)
            .map(|i| {
                let terms = p.terms().filter(|(_, t, _)| **t == Monomial::var(i)).map(|(x, _, c)| (*x, c.clone()));
                MultiPoly::from_terms(fs.n, &fs.ctx, terms)
            })
            .collect();
        Syzygy { coeffs, koszul }
    };
    let mut vectors: Vec<Syzygy<F>> = ks.iter().map(|v| to_syz(v, true)).collect();
    vectors.extend(extra.iter().map(|v| to_syz(v, false)));
    Ok(SyzygyBasis { mu, koszul_dim: ks.len(), vectors })
}

/// Rank predicted for `(J / J<ell-1>)_{mu,ell}`:
/// `dim H^0_m(H_1)_{mu+ell*d}`, plus `dim (R/I^sat)_{(n+1-ell)d-n-mu}` when
/// `ell >= 3`.
pub fn predicted_new_columns<G: Field>(fs: &Forms<G>, report: &ThresholdReport, mu: u32, ell: u32) -> Result<usize> {
    let n = fs.n as i64;
    let d = fs.d as i64;
    let nu = mu as i64 + ell as i64 * d;
    let torsion = match report.h0m_H1.get(&nu) {
        Some(&v) => v,
        None => h0m_h1_dim(fs, nu, report.mprimary)?,
    };
    let extra = if ell >= 3 {
        let deg = (n + 1 - ell as i64) * d - n - mu as i64;
        if report.mprimary || deg < 0 {
            0
        } else if report.hilb_RmodIsat.contains_key(&deg)
            || deg > *report.hilb_RmodIsat.keys().next_back().unwrap_or(&-1)
        {
            report.sat_quotient_dim(deg)
        } else {
            crate::koszul::saturation_slice(fs, deg, false)?.dim_quotient
        }
    } else {
        0
    };
    Ok(torsion + extra)
}

#[derive(Clone, Debug)]
pub struct SliceQuotient<F: Field> {
    pub mu: u32,
    pub ell: u32,
    pub reps: Vec<BigradedPoly<F>>,
    pub count: usize,
    pub predicted_rank: usize,
    /// Whether `mu >= mu0`, where the prediction is a theorem.
    pub guaranteed: bool,
}

/// Basis representatives of `(J / J<ell-1>)_{mu,ell}`, with the predicted
/// rank. At `mu >= mu0` a mismatch is a hypothesis violation.
pub fn new_columns<F: Field>(
    sys: &ParamSystem<F>,
    report: &ThresholdReport,
    mu: u32,
    ell: u32,
) -> Result<SliceQuotient<F>> {
    if ell < 2 {
        return Err(Error::Validation("new columns start at T-degree 2".into()));
    }
    let count = new_column_count(&sys.count, mu, ell);
    let predicted_rank = predicted_new_columns(&sys.count, report, mu, ell)?;
    let guaranteed = mu as i64 >= report.mu0;
    if guaranteed && ell as usize <= sys.n() && count != predicted_rank {
        return Err(Error::Hypothesis(format!(
            "new columns at (mu, ell) = ({mu}, {ell}): found {count}, rank formula predicts {predicted_rank}"
        )));
    }
    let reps = if count == 0 {
        Vec::new()
    } else {
        let fs = &sys.exact;
        let b = BiBasis::new(fs.n, mu, ell);
        let dim = b.len();
        let vs = explicit_vectors(fs, dim, "new columns", |fp| {
            quotient_reps_unchecked(dim, &fp.ctx, &equation_vectors(fp, mu, ell), &lower_order_vectors(fp, mu, ell))
        })?;
        check_equations(fs, &b, &vs, "column")?;
        if vs.len() != count {
            return Err(Error::Internal(format!(
                "exact and modular new-column counts differ at ({mu}, {ell}): {} vs {count}",
                vs.len()
            )));
        }
        vs.iter().map(|v| b.to_poly(v, &fs.ctx)).collect()
    };
    Ok(SliceQuotient { mu, ell, reps, count, predicted_rank, guaranteed })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixColumn<F: Field> {
    pub tdegree: u32,
    /// One T-polynomial per row.
    pub entries: Vec<MultiPoly<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceInfo {
    pub ell: u32,
    pub columns: usize,
    pub predicted: usize,
    pub guaranteed: bool,
}

#[derive(Clone, Debug)]
pub struct MatrixRep<F: Field> {
    pub mu: u32,
    pub n: usize,
    pub rows: Vec<Monomial>,
    pub columns: Vec<MatrixColumn<F>>,
    pub slices: Vec<SliceInfo>,
    pub assumptions: Vec<String>,
    pub ctx: F::Ctx,
}

impl<F: Field> MatrixRep<F> {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.columns.len()
    }

    pub fn count_of_degree(&self, ell: u32) -> usize {
        self.columns.iter().filter(|c| c.tdegree == ell).count()
    }

    /// Column `j` as an element of `S_{mu,ell}`.
    pub fn column_poly(&self, j: usize) -> BigradedPoly<F> {
        let col = &self.columns[j];
        let mut p = BigradedPoly::zero(self.n, self.n + 1, self.mu, col.tdegree, &self.ctx);
        for (x, e) in self.rows.iter().zip(&col.entries) {
            for (t, c) in e.terms() {
                p.add_term(*x, *t, c.clone()).unwrap();
            }
        }
        p
    }

    /// Checks that every column is an equation of the parametrization.
    pub fn verify_columns(&self, fs: &Forms<F>) -> Result<()> {
        for j in 0..self.columns.len() {
            if !fs.substitute(&self.column_poly(j))?.is_zero() {
                return Err(Error::Internal(format!("column {j} is not an equation")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let tn = default_names("T", 0, self.n + 1);
        json!({
            "mu": self.mu,
            "shape": [self.rows.len(), self.columns.len()],
            "rows": self.rows.iter().map(|m| m.exponents(self.n)).collect::<Vec<_>>(),
            "columns": self.columns.iter().map(|c| json!({
                "tdegree": c.tdegree,
                "entries": c.entries.iter().map(|e| format_poly(e, &tn)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "slices": self.slices,
            "assumptions": self.assumptions,
        })
    }

    /// Aligned plain-text rendering, one line per row.
    pub fn to_text(&self, x_names: &[String]) -> String {
        let tn = default_names("T", 0, self.n + 1);
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, _)| self.columns.iter().map(|c| format_poly(&c.entries[i], &tn)).collect())
            .collect();
        let labels: Vec<String> = self.rows.iter().map(|m| m.fmt_with(x_names)).collect();
        let lw = labels.iter().map(|l| l.len()).max().unwrap_or(0);
        let widths: Vec<usize> =
            (0..self.columns.len()).map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(1)).collect();
        let mut out = String::new();
        let header: Vec<String> = self
            .columns
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{:>w$}", format!("[{}]", c.tdegree), w = w))
            .collect();
        out.push_str(&format!("{:lw$} | {}\n", "", header.join("  "), lw = lw));
        for (label, row) in labels.iter().zip(&cells) {
            let row: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            out.push_str(&format!("{label:lw$} | {}\n", row.join("  ")));
        }
        out
    }
}

pub const REES_ASSUMPTION: &str =
    "equations are taken in the Rees algebra; this matches the symmetric-algebra quotient when base points are locally complete intersections";

/// `M_mu`: linear syzygies followed by new columns of T-degree
/// `2..=ell_max` (default `n`).
pub fn build_matrix<F: Field>(
    sys: &ParamSystem<F>,
    report: &ThresholdReport,
    mu: u32,
    ell_max: Option<u32>,
) -> Result<MatrixRep<F>> {
    let n = sys.n();
    let ell_max = ell_max.unwrap_or(n as u32);
    let rows = crate::poly::monomial_basis(n, mu);
    let mut columns = Vec::new();
    let mut slices = Vec::new();
    let push = |p: &BigradedPoly<F>, columns: &mut Vec<MatrixColumn<F>>| {
        columns.push(MatrixColumn { tdegree: p.t_degree, entries: rows.iter().map(|x| p.t_part(x)).collect() });
    };
    let syz = linear_syzygies(&sys.exact, mu)?;
    for p in syz.as_bigraded(n, sys.ctx()) {
        push(&p, &mut columns);
    }
    slices.push(SliceInfo {
        ell: 1,
        columns: syz.len(),
        predicted: koszul_dims(&sys.count, 1, mu as i64 + sys.d() as i64).dim_z,
        guaranteed: true,
    });
    for ell in 2..=ell_max {
        let q = new_columns(sys, report, mu, ell)?;
        for p in &q.reps {
            push(p, &mut columns);
        }
        slices.push(SliceInfo { ell, columns: q.count, predicted: q.predicted_rank, guaranteed: q.guaranteed });
    }
    let assumptions = if report.mprimary { Vec::new() } else { vec![REES_ASSUMPTION.to_string()] };
    Ok(MatrixRep { mu, n, rows, columns, slices, assumptions, ctx: sys.ctx().clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionRanks {
    pub mu: u32,
    /// `b_i` from the closed form.
    pub b: BTreeMap<usize, i64>,
    /// `dim (B_i)_{mu+i*d}` by direct rank computation.
    pub b_direct: BTreeMap<usize, i64>,
    /// `beta_l = dim (H_0)_{(n+1-l)d-n-mu}`.
    pub beta: BTreeMap<u32, usize>,
    /// Non-Koszul linear syzygies for `l = 1`, new columns for `l >= 2`.
    pub beta_direct: BTreeMap<u32, usize>,
    pub column_count: usize,
}

/// Closed form `b_i = sum_k (-1)^(k+1) C(n+1, i+k) C(mu-kd+n-1, n-1)` over
/// `k >= 1`, `i+k <= n+1`, `kd <= mu`.
pub fn b_formula(n: usize, d: u32, mu: u32, i: usize) -> i64 {
    let (n, d, mu, i) = (n as i64, d as i64, mu as i64, i as i64);
    let mut acc = 0;
    let mut k = 1;
    while i + k <= n + 1 && k * d <= mu {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc += sign * binomial(n + 1, i + k) * binomial(mu - k * d + n - 1, n - 1);
        k += 1;
    }
    acc
}

pub fn resolution_ranks<F: Field>(sys: &ParamSystem<F>, report: &ThresholdReport, mu: u32) -> Result<ResolutionRanks> {
    if !report.mprimary {
        return Err(Error::Validation("resolution ranks need an m-primary ideal".into()));
    }
    if (mu as i64) < report.mu0 {
        return Err(Error::Validation(format!("mu = {mu} is below the threshold degree {}", report.mu0)));
    }
    let fs = &sys.count;
    let (n, d) = (fs.n, fs.d);
    let mut b = BTreeMap::new();
    let mut b_direct = BTreeMap::new();
    for i in 1..=n {
        b.insert(i, b_formula(n, d, mu, i));
        b_direct.insert(i, differential_rank(fs, i + 1, mu as i64 + (i as i64) * d as i64) as i64);
    }
    if let Some(i) = (1..=n).find(|i| b[i] != b_direct[i]) {
        return Err(Error::Hypothesis(format!(
            "b_{i}: closed form gives {}, direct computation gives {}",
            b[&i], b_direct[&i]
        )));
    }
    let mut beta = BTreeMap::new();
    let mut beta_direct = BTreeMap::new();
    for ell in 1..=n as u32 {
        let deg = (n as i64 + 1 - ell as i64) * d as i64 - n as i64 - mu as i64;
        beta.insert(ell, report.hilbert(deg));
        let direct =
            if ell == 1 { koszul_dims(fs, 1, mu as i64 + d as i64).dim_h } else { new_column_count(fs, mu, ell) };
        beta_direct.insert(ell, direct);
    }
    if let Some(l) = (1..=n as u32).find(|l| beta[l] != beta_direct[l]) {
        return Err(Error::Hypothesis(format!(
            "beta_{l}: Hilbert function gives {}, direct computation gives {}",
            beta[&l], beta_direct[&l]
        )));
    }
    let column_count = b[&1] as usize + beta.values().sum::<usize>();
    Ok(ResolutionRanks { mu, b, b_direct, beta, beta_direct, column_count })
}

/// `max{(n-l)(d-1) - (l-1), mu0}`: from this degree on, `M_mu` only needs
/// syzygies of T-degree at most `l`.
pub fn tuned_mu(n: usize, d: u32, mu0: i64, l: u32) -> Result<u32> {
    let cap = (n as u32 + 2) / 2;
    if l < 1 || l > cap {
        return Err(Error::Validation(format!("syzygy order must lie in 1..={cap}")));
    }
    let a = (n as i64 - l as i64) * (d as i64 - 1) - (l as i64 - 1);
    Ok(a.max(mu0).max(0) as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CgzReport {
    /// `dim (Z_1)_{2d-1}`.
    pub dim_z1: usize,
    pub condition_holds: bool,
    pub mu0: i64,
    pub shape: Option<(usize, usize)>,
    /// When the condition holds: `mu0 = d - 1` and `M_mu0` is square.
    pub consequences_hold: Option<bool>,
}

/// The rank condition `dim (Z_1)_{2d-1} = d` for surfaces and what it
/// implies for `M_mu0`.
pub fn cgz_condition<F: Field>(sys: &ParamSystem<F>, report: &ThresholdReport) -> Result<CgzReport> {
    if sys.n() != 3 {
        return Err(Error::Validation("the rank condition is stated for n = 3".into()));
    }
    let d = sys.d();
    let dim_z1 = koszul_dims(&sys.count, 1, 2 * d as i64 - 1).dim_z;
    let condition_holds = dim_z1 == d as usize;
    let (shape, consequences_hold) = if condition_holds && report.mprimary {
        let m = build_matrix(sys, report, report.mu0.max(0) as u32, None)?;
        (Some(m.shape()), Some(report.mu0 == d as i64 - 1 && m.is_square()))
    } else {
        (None, None)
    };
    Ok(CgzReport { dim_z1, condition_holds, mu0: report.mu0, shape, consequences_hold })
}
