//! Downgrading: replace one T-variable of each term by the matching form.
//! On new-column slices this lowers the T-degree by one and raises the
//! X-degree by `d`; in the m-primary case it is an isomorphism at threshold
//! degrees, and the inverse ("upgrade") is one linear solve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Fp};
use crate::koszul::ThresholdReport;
use crate::linalg::{quotient_reps, Echelon, ExactMatrix};
use crate::modular::lift_keyed;
use crate::poly::{BigradedPoly, Monomial};
use crate::system::{Forms, ParamSystem};
use crate::syzygy::{equation_vectors, koszul_slice_vectors, lower_order_vectors, probe_forms, BiBasis};

/// A representative modulo the Koszul slice of its bidegree.
#[derive(Clone, Debug)]
pub struct KoszulClass<F: Field> {
    pub rep: BigradedPoly<F>,
}

impl<F: Field> KoszulClass<F> {
    pub fn new(rep: BigradedPoly<F>) -> Self {
        KoszulClass { rep }
    }

    pub fn is_zero(&self, fs: &Forms<F>) -> bool {
        in_koszul_slice(fs, &self.rep)
    }

    pub fn same_class(&self, other: &Self, fs: &Forms<F>) -> bool {
        let diff = self.rep.add(&other.rep.scale(&F::from_i64(&fs.ctx, -1)));
        in_koszul_slice(fs, &diff)
    }
}

/// Runs `job` over prime fields and returns its answer over the field of
/// `fs`. `job` yields `None` to skip a prime, `Some(None)` when the system
/// it solves is inconsistent and `Some(Some(x))` for the canonical solution
/// (free variables zero). Over Q the answer is lifted and must be checked
/// by the caller.
fn lift_answer<F: Field>(
    fs: &Forms<F>,
    what: &str,
    job: impl Fn(&Forms<Fp>) -> Option<Option<Vec<Fp>>>,
) -> Result<Option<Vec<F>>> {
    let back = |v: Vec<Fp>| v.iter().map(|x| F::from_i64(&fs.ctx, x.value() as i64)).collect();
    match F::descriptor(&fs.ctx) {
        FieldDescriptor::Prime(_) => {
            let fp = probe_forms(fs)?;
            let ans = job(&fp).ok_or_else(|| Error::Internal(format!("{what}: input does not reduce")))?;
            Ok(ans.map(back))
        }
        FieldDescriptor::Rationals => {
            let ((solvable, _), v) = lift_keyed(what, |p| {
                let Some(fp) = fs.to_prime(p) else { return Ok(None) };
                Ok(job(&fp).map(|ans| match ans {
                    None => ((false, Vec::new()), Vec::new()),
                    Some(x) => {
                        ((true, x.iter().map(|c| !c.is_zero()).collect()), x.iter().map(|c| c.value()).collect())
                    }
                }))
            })?;
            Ok(solvable.then(|| v.iter().map(|q| F::from_rational(&fs.ctx, q).unwrap()).collect()))
        }
    }
}

fn reduce_vec<F: Field>(v: &[F], p: u64) -> Option<Vec<Fp>> {
    v.iter().map(|c| c.to_prime(p)).collect()
}

fn combination<F: Field>(dim: usize, ctx: &F::Ctx, coeffs: &[F], vs: &[Vec<F>]) -> Vec<F> {
    let mut out = vec![F::zero(ctx); dim];
    for (c, v) in coeffs.iter().zip(vs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.add(&c.mul(x));
            }
        }
    }
    out
}

/// Membership of `p` in `KS_{mu,ell}`. Over Q a membership certificate is
/// lifted from prime fields and checked exactly.
pub fn in_koszul_slice<F: Field>(fs: &Forms<F>, p: &BigradedPoly<F>) -> bool {
    if p.is_zero() {
        return true;
    }
    let b = BiBasis::new(fs.n, p.x_degree, p.t_degree);
    let target = b.to_vector(p);
    let ks = koszul_slice_vectors(fs, p.x_degree, p.t_degree);
    if ks.is_empty() {
        return false;
    }
    let cert = lift_answer(fs, "Koszul slice membership", |fp| {
        let rhs = reduce_vec(&target, fp.ctx)?;
        let a = ExactMatrix::from_columns(&koszul_slice_vectors(fp, p.x_degree, p.t_degree), b.len(), &fp.ctx);
        Some(a.solve(&rhs))
    });
    match cert {
        Ok(Some(y)) => combination(b.len(), &fs.ctx, &y, &ks) == target,
        _ => false,
    }
}

/// `x^b T_i T^g -> x^b f_i T^g` with `T_i` the lowest-index T-variable of
/// the term.
pub fn downgrade_once<F: Field>(p: &BigradedPoly<F>, fs: &Forms<F>) -> Result<BigradedPoly<F>> {
    if p.t_degree == 0 {
        return Err(Error::Validation("downgrading needs T-degree at least 1".into()));
    }
    let mut out = BigradedPoly::zero(fs.n, fs.n + 1, p.x_degree + fs.d, p.t_degree - 1, &fs.ctx);
    for (x, t, c) in p.terms() {
        let i = t.first_var().unwrap();
        let rest = t.div(&Monomial::var(i)).unwrap();
        for (m, a) in fs.forms[i].terms() {
            out.add_term(x.mul(m), rest, c.mul(a))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaVerdict {
    pub mu: u32,
    pub p: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

/// Target modulus of `lambda_p` at `(mu + d, p - 1)`: the Koszul slice plus
/// `T * J_{mu+d,p-2}`.
fn target_modulus<G: Field>(fs: &Forms<G>, mu: u32, p: u32) -> Vec<Vec<G>> {
    let (tm, tl) = (mu + fs.d, p - 1);
    let mut w = koszul_slice_vectors(fs, tm, tl);
    if tl >= 2 {
        w.extend(lower_order_vectors(fs, tm, tl));
    }
    w
}

/// Matrix of `lambda_p^mu : (J/J<p-1>)_{mu,p} -> (J/(KS + J<p-2>))_{mu+d,p-1}`
/// and its rank, computed over the field of `fs`.
pub fn lambda_forms<G: Field>(fs: &Forms<G>, mu: u32, p: u32) -> Result<LambdaVerdict> {
    if p < 2 {
        return Err(Error::Validation("lambda_p needs p >= 2".into()));
    }
    let src = BiBasis::new(fs.n, mu, p);
    let tgt = BiBasis::new(fs.n, mu + fs.d, p - 1);
    let source = quotient_reps(src.len(), &fs.ctx, &equation_vectors(fs, mu, p), &lower_order_vectors(fs, mu, p))?;
    let modulus = Echelon::from_vectors(tgt.len(), &fs.ctx, target_modulus(fs, mu, p));
    let target_total = equation_vectors(fs, mu + fs.d, p - 1).len();
    let target_dim = target_total - modulus.rank();
    let mut img = Echelon::new(tgt.len(), &fs.ctx);
    for v in &source {
        let q = downgrade_once(&src.to_poly(v, &fs.ctx), fs)?;
        img.insert(modulus.reduce(&tgt.to_vector(&q)));
    }
    let rank = img.rank();
    let injective = rank == source.len();
    let surjective = rank == target_dim;
    Ok(LambdaVerdict {
        mu,
        p,
        source_dim: source.len(),
        target_dim,
        rank,
        injective,
        surjective,
        bijective: injective && surjective,
    })
}

/// Rank data for `lambda_p^mu`, computed on the counting image of the
/// system. At `mu >= mu0` a non-bijective map is a hypothesis violation.
pub fn lambda_check<F: Field>(
    sys: &ParamSystem<F>,
    report: &ThresholdReport,
    mu: u32,
    p: u32,
) -> Result<LambdaVerdict> {
    if !report.mprimary {
        return Err(Error::Validation("downgrading maps are only checked for m-primary ideals".into()));
    }
    let v = lambda_forms(&sys.count, mu, p)?;
    if mu as i64 >= report.mu0 && !v.bijective {
        return Err(Error::Hypothesis(format!(
            "lambda_{p} at mu = {mu} has rank {} with source {} and target {}",
            v.rank, v.source_dim, v.target_dim
        )));
    }
    Ok(v)
}

/// A quadric `Q` in `J_{mu,2}` with `downgrade(Q) = sigma` modulo the
/// Koszul slice, where `sigma` is a non-Koszul syzygy of coefficient degree
/// `mu + d`.
pub fn upgrade<F: Field>(sys: &ParamSystem<F>, mu: u32, sigma: &BigradedPoly<F>) -> Result<BigradedPoly<F>> {
    upgrade_forms(&sys.exact, mu, sigma)
}

pub fn upgrade_forms<F: Field>(fs: &Forms<F>, mu: u32, sigma: &BigradedPoly<F>) -> Result<BigradedPoly<F>> {
    if sigma.x_degree != mu + fs.d || sigma.t_degree != 1 {
        return Err(Error::Validation(format!("sigma must have bidegree ({}, 1)", mu + fs.d)));
    }
    if !fs.substitute(sigma)?.is_zero() {
        return Err(Error::Validation("sigma is not a syzygy".into()));
    }
    if in_koszul_slice(fs, sigma) {
        return Err(Error::Validation("sigma lies in the Koszul slice".into()));
    }
    let src = BiBasis::new(fs.n, mu, 2);
    let tgt = BiBasis::new(fs.n, mu + fs.d, 1);
    let target = tgt.to_vector(sigma);
    // answer: the quadric in the source basis, then Koszul coefficients
    let ans = lift_answer(fs, "upgrade", |fp| {
        let rhs = reduce_vec(&target, fp.ctx)?;
        let basis = equation_vectors(fp, mu, 2);
        let mut cols = Vec::with_capacity(basis.len());
        for v in &basis {
            cols.push(tgt.to_vector(&downgrade_once(&src.to_poly(v, &fp.ctx), fp).ok()?));
        }
        cols.extend(koszul_slice_vectors(fp, mu + fs.d, 1));
        let x = ExactMatrix::from_columns(&cols, tgt.len(), &fp.ctx).solve(&rhs);
        Some(x.map(|x| {
            let mut out = combination(src.len(), &fp.ctx, &x[..basis.len()], &basis);
            out.extend_from_slice(&x[basis.len()..]);
            out
        }))
    })?
    .ok_or_else(|| Error::Hypothesis(format!("no quadric downgrades to the given syzygy at mu = {mu}")))?;
    let q = src.to_poly(&ans[..src.len()], &fs.ctx);
    let ks = koszul_slice_vectors(fs, mu + fs.d, 1);
    let rest = combination(tgt.len(), &fs.ctx, &ans[src.len()..], &ks);
    let down = tgt.to_vector(&downgrade_once(&q, fs)?);
    let lhs: Vec<F> = down.iter().zip(&rest).map(|(a, b)| a.add(b)).collect();
    if !fs.substitute(&q)?.is_zero() || lhs != target {
        return Err(Error::Internal("lifted upgrade fails its exact check".into()));
    }
    Ok(q)
}

/// Whether `p` and `q` agree modulo `J<1>_{mu,2} = T * J_{mu,1}`. Over Q the
/// witnesses `P_i` in `p - q = sum T_i P_i` are lifted and checked exactly.
pub fn same_mod_linear<F: Field>(fs: &Forms<F>, p: &BigradedPoly<F>, q: &BigradedPoly<F>) -> bool {
    let (mu, ell) = (p.x_degree, p.t_degree);
    if ell < 2 {
        return p.add(&q.scale(&F::from_i64(&fs.ctx, -1))).is_zero();
    }
    let b = BiBasis::new(fs.n, mu, ell);
    let lower_b = BiBasis::new(fs.n, mu, ell - 1);
    let diff = p.add(&q.scale(&F::from_i64(&fs.ctx, -1)));
    if diff.is_zero() {
        return true;
    }
    let target = b.to_vector(&diff);
    let cert = lift_answer(fs, "membership in the lower-order slice", |fp| {
        let rhs = reduce_vec(&target, fp.ctx)?;
        let lower = equation_vectors(fp, mu, ell - 1);
        let a = ExactMatrix::from_columns(&lower_order_vectors(fp, mu, ell), b.len(), &fp.ctx);
        Some(a.solve(&rhs).map(|y| {
            y.chunks(lower.len().max(1))
                .take(fs.n + 1)
                .flat_map(|c| combination(lower_b.len(), &fp.ctx, c, &lower))
                .collect()
        }))
    });
    let Ok(Some(ws)) = cert else { return false };
    if ws.len() != (fs.n + 1) * lower_b.len() {
        return false;
    }
    let mut sum = BigradedPoly::zero(fs.n, fs.n + 1, mu, ell, &fs.ctx);
    for (i, w) in ws.chunks(lower_b.len()).enumerate() {
        let pi = lower_b.to_poly(w, &fs.ctx);
        if !matches!(fs.substitute(&pi), Ok(s) if s.is_zero()) {
            return false;
        }
        sum = sum.add(&pi.mul_monomial(&Monomial::ONE, &Monomial::var(i)));
    }
    sum == diff
}
