//! Degree-wise Koszul homology of `f_0, ..., f_n` and the invariants built
//! from it: Hilbert functions, saturation, torsion of `H_1`, the threshold
//! degrees and the inequalities they satisfy.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::linalg::{Echelon, ExactMatrix};
use crate::poly::{binomial, count_monomials, monomial_basis, one_minus_power, poly_series_coeffs, MonomialIndex};
use crate::system::{Forms, ParamSystem};

/// Size subsets of `{0..m}` of size `i` as bitmasks, in lexicographic order.
pub fn subsets(m: usize, i: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(start: usize, m: usize, left: usize, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for k in start..m {
            if m - k < left {
                break;
            }
            rec(k + 1, m, left - 1, acc | (1 << k), out);
        }
    }
    rec(0, m, i, 0, &mut out);
    out
}

/// Basis of `K_i` in degree `nu`: wedge part (bitmask) times a monomial of
/// degree `nu - i*d`, wedge-major.
pub struct KoszulBasis {
    pub wedges: Vec<u32>,
    wedge_pos: HashMap<u32, usize>,
    pub monomials: MonomialIndex,
}

impl KoszulBasis {
    pub fn new(n: usize, d: u32, i: usize, nu: i64) -> Self {
        let wedges = if i <= n + 1 { subsets(n + 1, i) } else { Vec::new() };
        let wedge_pos = wedges.iter().enumerate().map(|(k, w)| (*w, k)).collect();
        let monomials = MonomialIndex::new(n, nu - i as i64 * d as i64);
        KoszulBasis { wedges, wedge_pos, monomials }
    }

    pub fn len(&self) -> usize {
        self.wedges.len() * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, wedge: u32, mono: &crate::poly::Monomial) -> usize {
        self.wedge_pos[&wedge] * self.monomials.len() + self.monomials.index(mono).unwrap()
    }
}

pub fn k_dim(n: usize, d: u32, i: usize, nu: i64) -> usize {
    (binomial(n as i64 + 1, i as i64) * count_monomials(n, nu - i as i64 * d as i64)) as usize
}

/// Images of the basis of `K_i` under `d_i : K_i -> K_{i-1}` in degree `nu`.
pub fn differential_columns<G: Field>(fs: &Forms<G>, i: usize, nu: i64) -> Vec<Vec<G>> {
    if i == 0 || i > fs.n + 1 {
        return Vec::new();
    }
    let src = KoszulBasis::new(fs.n, fs.d, i, nu);
    let dst = KoszulBasis::new(fs.n, fs.d, i - 1, nu);
    let mut cols = Vec::with_capacity(src.len());
    for &w in &src.wedges {
        for m in &src.monomials.monomials {
            let mut v = vec![G::zero(&fs.ctx); dst.len()];
            let mut sign_neg = false;
            for k in 0..=fs.n {
                if w & (1 << k) == 0 {
                    continue;
                }
                let rest = w & !(1 << k);
                for (fm, c) in fs.forms[k].terms() {
                    let idx = dst.index(rest, &fm.mul(m));
                    v[idx] = if sign_neg { v[idx].sub(c) } else { v[idx].add(c) };
                }
                sign_neg = !sign_neg;
            }
            cols.push(v);
        }
    }
    cols
}

/// Rank of `d_i` in degree `nu`.
pub fn differential_rank<G: Field>(fs: &Forms<G>, i: usize, nu: i64) -> usize {
    if i == 0 || i > fs.n + 1 || nu < i as i64 * fs.d as i64 {
        return 0;
    }
    let dim = k_dim(fs.n, fs.d, i - 1, nu);
    crate::linalg::rank_of(dim, &fs.ctx, differential_columns(fs, i, nu))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulSlice {
    pub i: usize,
    pub nu: i64,
    pub dim_k: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
}

pub fn koszul_dims<G: Field>(fs: &Forms<G>, i: usize, nu: i64) -> KoszulSlice {
    let dim_k = k_dim(fs.n, fs.d, i, nu);
    let dim_z = dim_k - differential_rank(fs, i, nu);
    let dim_b = differential_rank(fs, i + 1, nu);
    KoszulSlice { i, nu, dim_k, dim_z, dim_b, dim_h: dim_z - dim_b }
}

/// Ranks of every differential over a degree window, computed once.
pub struct KoszulTable {
    pub n: usize,
    pub d: u32,
    pub max_nu: i64,
    ranks: Vec<Vec<usize>>,
}

impl KoszulTable {
    pub fn compute<G: Field>(fs: &Forms<G>, max_nu: i64) -> Self {
        let ranks = (0..=fs.n + 2)
            .map(|i| (0..=max_nu).map(|nu| if i > fs.n + 1 { 0 } else { differential_rank(fs, i, nu) }).collect())
            .collect();
        KoszulTable { n: fs.n, d: fs.d, max_nu, ranks }
    }

    pub fn slice(&self, i: usize, nu: i64) -> KoszulSlice {
        assert!((0..=self.max_nu).contains(&nu) && i <= self.n + 1);
        let dim_k = k_dim(self.n, self.d, i, nu);
        let dim_z = dim_k - self.ranks[i][nu as usize];
        let dim_b = self.ranks[i + 1][nu as usize];
        KoszulSlice { i, nu, dim_k, dim_z, dim_b, dim_h: dim_z - dim_b }
    }
}

/// `dim (R/I)_nu`.
pub fn hilbert_r_mod_i<G: Field>(fs: &Forms<G>, nu: i64) -> usize {
    if nu < 0 {
        return 0;
    }
    count_monomials(fs.n, nu) as usize - differential_rank(fs, 1, nu)
}

/// Echelon basis of `I_D` inside `R_D`.
pub fn ideal_space<G: Field>(fs: &Forms<G>, deg: i64) -> Echelon<G> {
    let dim = count_monomials(fs.n, deg) as usize;
    Echelon::from_vectors(dim, &fs.ctx, differential_columns(fs, 1, deg))
}

/// Columns of the map `R_nu -> prod_{|a|=s} R_{nu+s} / I_{nu+s}`,
/// `g -> (x^a g mod I)`. Its kernel is `(I : m^s)_nu`.
fn colon_columns<G: Field>(fs: &Forms<G>, nu: i64, s: u32) -> Vec<Vec<G>> {
    let src = MonomialIndex::new(fs.n, nu);
    let big = ideal_space(fs, nu + s as i64);
    if big.is_full() {
        return vec![Vec::new(); src.len()];
    }
    let dst = MonomialIndex::new(fs.n, nu + s as i64);
    let nf: Vec<Vec<G>> = (0..dst.len())
        .map(|k| {
            let mut e = vec![G::zero(&fs.ctx); dst.len()];
            e[k] = G::one(&fs.ctx);
            big.quotient_coords(&e)
        })
        .collect();
    let alphas = monomial_basis(fs.n, s);
    src.monomials
        .iter()
        .map(|m| alphas.iter().flat_map(|a| nf[dst.index(&a.mul(m)).unwrap()].iter().cloned()).collect())
        .collect()
}

/// Largest `s` tried when waiting for a degree-wise colon or torsion
/// computation to stabilize.
pub fn stabilization_cap(n: usize, d: u32) -> u32 {
    n as u32 * (d - 1) + d + 2
}

#[derive(Clone, Debug)]
pub struct SaturationSlice<G: Field> {
    pub nu: i64,
    /// Basis of `(I^sat)_nu` in the monomial basis of `R_nu`, if requested.
    pub basis: Option<Vec<Vec<G>>>,
    pub dim_sat: usize,
    pub dim_quotient: usize,
    /// The `s` at which two consecutive colon dimensions agreed.
    pub stabilized_at: u32,
}

/// `(I^sat)_nu`, as the stable value of `(I : m^s)_nu` for `s = 1, 2, ...`.
pub fn saturation_slice<G: Field>(fs: &Forms<G>, nu: i64, with_basis: bool) -> Result<SaturationSlice<G>> {
    if nu < 0 {
        return Ok(SaturationSlice { nu, basis: Some(Vec::new()), dim_sat: 0, dim_quotient: 0, stabilized_at: 0 });
    }
    let total = count_monomials(fs.n, nu) as usize;
    let cap = stabilization_cap(fs.n, fs.d);
    let dim_at = |s: u32| {
        let cols = colon_columns(fs, nu, s);
        let len = cols.first().map(|c| c.len()).unwrap_or(0);
        total - crate::linalg::rank_of(len, &fs.ctx, cols)
    };
    let mut prev = dim_at(1);
    for s in 2..=cap {
        let cur = dim_at(s);
        if cur == prev {
            let basis = with_basis.then(|| {
                let cols = colon_columns(fs, nu, s);
                let len = cols.first().map(|c| c.len()).unwrap_or(0);
                ExactMatrix::from_columns(&cols, len, &fs.ctx).kernel_basis()
            });
            return Ok(SaturationSlice { nu, basis, dim_sat: cur, dim_quotient: total - cur, stabilized_at: s });
        }
        prev = cur;
    }
    Err(Error::Stabilization { what: format!("saturation in degree {nu}"), cap: cap as usize })
}

/// Basis of `(Z_1)_nu` as vectors in `K_1` coordinates.
pub fn cycles_basis<G: Field>(fs: &Forms<G>, i: usize, nu: i64) -> Vec<Vec<G>> {
    let dim = k_dim(fs.n, fs.d, i, nu);
    if dim == 0 {
        return Vec::new();
    }
    if i == 0 {
        return (0..dim)
            .map(|k| {
                let mut e = vec![G::zero(&fs.ctx); dim];
                e[k] = G::one(&fs.ctx);
                e
            })
            .collect();
    }
    let rows = k_dim(fs.n, fs.d, i - 1, nu);
    ExactMatrix::from_columns(&differential_columns(fs, i, nu), rows, &fs.ctx).kernel_basis()
}

/// Multiplies a `K_1` vector of degree `nu` by the monomial `a`.
fn shift_k1<G: Field>(fs: &Forms<G>, v: &[G], nu: i64, a: &crate::poly::Monomial, target: &KoszulBasis) -> Vec<G> {
    let src = KoszulBasis::new(fs.n, fs.d, 1, nu);
    let nm = src.monomials.len();
    let mut out = vec![G::zero(&fs.ctx); target.len()];
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = src.wedges[k / nm];
        let m = src.monomials.monomials[k % nm];
        out[target.index(w, &m.mul(a))] = c.clone();
    }
    out
}

/// `dim H^0_m(H_1)_nu` when `I` is not m-primary: the classes of `(Z_1)_nu`
/// killed by `m^s`, for `s` increased until two consecutive values agree.
pub fn h1_torsion_dim<G: Field>(fs: &Forms<G>, nu: i64) -> Result<usize> {
    let z = cycles_basis(fs, 1, nu);
    if z.is_empty() {
        return Ok(0);
    }
    let b_here = differential_rank(fs, 2, nu);
    let cap = stabilization_cap(fs.n, fs.d);
    let killed = |s: u32| {
        let target = KoszulBasis::new(fs.n, fs.d, 1, nu + s as i64);
        let b = Echelon::from_vectors(target.len(), &fs.ctx, differential_columns(fs, 2, nu + s as i64));
        let alphas = monomial_basis(fs.n, s);
        let cols: Vec<Vec<G>> = z
            .iter()
            .map(|v| alphas.iter().flat_map(|a| b.quotient_coords(&shift_k1(fs, v, nu, a, &target))).collect())
            .collect();
        let len = cols[0].len();
        z.len() - crate::linalg::rank_of(len, &fs.ctx, cols)
    };
    let mut prev = killed(1);
    for s in 2..=cap {
        let cur = killed(s);
        if cur == prev {
            return Ok(cur - b_here);
        }
        prev = cur;
    }
    Err(Error::Stabilization { what: format!("m-torsion of H_1 in degree {nu}"), cap: cap as usize })
}

/// `dim H^0_m(H_1)_nu`; equal to `dim (H_1)_nu` when `I` is m-primary.
pub fn h0m_h1_dim<G: Field>(fs: &Forms<G>, nu: i64, mprimary: bool) -> Result<usize> {
    if mprimary {
        Ok(koszul_dims(fs, 1, nu).dim_h)
    } else {
        h1_torsion_dim(fs, nu)
    }
}

/// Hilbert function `h(i) = max(0, a_i)` of the quotient by general forms,
/// where `sum a_i t^i = (1-t^d)^{n+1} / (1-t)^n`, and the end degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertModel {
    pub table: Vec<i64>,
    pub end: i64,
}

pub fn general_forms_hilbert_model(n: usize, d: u32) -> Result<HilbertModel> {
    if n < 2 || d < 1 {
        return Err(Error::Validation("need n >= 2 and d >= 1".into()));
    }
    let upto = (n + 1) * d as usize;
    let a = poly_series_coeffs(&one_minus_power(d as usize, n as u32 + 1), &one_minus_power(1, n as u32), upto)?;
    let last_pos = a.iter().rposition(|&x| x > 0).unwrap_or(0);
    let table: Vec<i64> = a[..=last_pos].iter().map(|&x| x.max(0)).collect();
    let end = ((n as i64 + 1) * (d as i64 - 1)).div_euclid(2);
    if last_pos as i64 != end || table.contains(&0) {
        return Err(Error::Internal(format!(
            "general Hilbert model for n={n}, d={d} ends at {last_pos}, expected {end}"
        )));
    }
    Ok(HilbertModel { table, end })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// A named inequality or identity `lhs relation rhs`. Missing sides mean
/// the quantity is infinite (the module is zero); such checks hold
/// vacuously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub relation: String,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub status: CheckStatus,
}

impl BoundCheck {
    fn le(name: &str, lhs: i64, rhs: i64) -> Self {
        Self::new(name, "<=", Some(lhs), Some(rhs), lhs <= rhs)
    }

    fn eq(name: &str, lhs: i64, rhs: i64) -> Self {
        Self::new(name, "==", Some(lhs), Some(rhs), lhs == rhs)
    }

    fn new(name: &str, relation: &str, lhs: Option<i64>, rhs: Option<i64>, ok: bool) -> Self {
        BoundCheck {
            name: name.into(),
            relation: relation.into(),
            lhs,
            rhs,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub field: String,
    pub n: usize,
    pub d: u32,
    /// Homology tables cover degrees `0..=degree_window`.
    pub degree_window: i64,
    pub hilb_RmodI: BTreeMap<i64, usize>,
    /// Only for `dim R/I = 1`.
    pub hilb_RmodIsat: BTreeMap<i64, usize>,
    /// `homology[i][nu] = dim (H_i)_nu`.
    pub homology: BTreeMap<usize, BTreeMap<i64, usize>>,
    pub h0m_H1: BTreeMap<i64, usize>,
    pub indeg_H1: Option<i64>,
    pub end_H1: Option<i64>,
    pub indeg_H2: Option<i64>,
    pub indeg_H0mH1: Option<i64>,
    pub indeg_Isat: i64,
    pub end_H0m_RmodI: Option<i64>,
    pub mu0: i64,
    pub nu0: i64,
    pub regularity: i64,
    pub dim_RmodI: u8,
    pub mprimary: bool,
    /// Stable value of the Hilbert function (number of base points with
    /// multiplicity); zero when m-primary.
    pub multiplicity: usize,
    pub bound_checks: Vec<BoundCheck>,
    pub warnings: Vec<String>,
}

impl ThresholdReport {
    pub fn all_checks_pass(&self) -> bool {
        self.bound_checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.bound_checks.iter().find(|c| c.name == name)
    }

    /// `dim (R/I^sat)_nu` from the stored table, extended by the stable
    /// value.
    pub fn sat_quotient_dim(&self, nu: i64) -> usize {
        if self.mprimary || nu < 0 {
            return 0;
        }
        match self.hilb_RmodIsat.range(..=nu).next_back() {
            Some((&k, &v)) if k == nu => v,
            _ => self.multiplicity,
        }
    }

    /// `dim (R/I)_nu` from the stored table (zero past the end when
    /// m-primary, the multiplicity otherwise).
    pub fn hilbert(&self, nu: i64) -> usize {
        if nu < 0 {
            return 0;
        }
        match self.hilb_RmodI.get(&nu) {
            Some(&v) => v,
            None => self.multiplicity,
        }
    }
}

/// Shape of `R/I` read off the Hilbert function.
struct HilbertShape {
    table: BTreeMap<i64, usize>,
    mprimary: bool,
    /// For dimension one: first degree from which the function is constant.
    stable_from: i64,
    multiplicity: usize,
}

fn hilbert_shape<G: Field>(fs: &Forms<G>, window: i64) -> Result<HilbertShape> {
    let n = fs.n as i64;
    let d = fs.d as i64;
    let mprimary_cap = (n + 1) * (d - 1) + 1;
    let mut table = BTreeMap::new();
    for nu in 0..=mprimary_cap {
        let h = hilbert_r_mod_i(fs, nu);
        table.insert(nu, h);
        if h == 0 {
            return Ok(HilbertShape { table, mprimary: true, stable_from: nu, multiplicity: 0 });
        }
    }
    // dimension one: eventually constant. Require a run of equal values
    // reaching past the homology window.
    let cap = mprimary_cap + window + (n + 1) * d + 3;
    let mut nu = mprimary_cap;
    let mut run_start = mprimary_cap;
    while nu < cap {
        nu += 1;
        let h = hilbert_r_mod_i(fs, nu);
        table.insert(nu, h);
        if h != table[&(nu - 1)] {
            run_start = nu;
        } else if nu - run_start >= 2 && nu > window {
            let e = table[&run_start];
            table.retain(|k, _| *k <= window.max(run_start));
            return Ok(HilbertShape { table, mprimary: false, stable_from: run_start, multiplicity: e });
        }
    }
    Err(Error::Hypothesis(
        "the Hilbert function of R/I does not stabilize: dim R/I >= 2 (the base locus is not finite)".into(),
    ))
}

/// The full invariant report, with all counts carried out on the counting
/// image of the system.
pub fn threshold_report<F: Field>(sys: &ParamSystem<F>) -> Result<ThresholdReport> {
    threshold_report_forms(&sys.count, sys.field)
}

pub fn threshold_report_forms<G: Field>(fs: &Forms<G>, field: FieldDescriptor) -> Result<ThresholdReport> {
    let n = fs.n as i64;
    let d = fs.d as i64;
    let window = (n + 1) * d - n + d;
    let shape = hilbert_shape(fs, window)?;
    let table = KoszulTable::compute(fs, window);
    let mprimary = shape.mprimary;
    let mut warnings = Vec::new();

    let mut homology: BTreeMap<usize, BTreeMap<i64, usize>> = BTreeMap::new();
    for i in 0..=fs.n + 1 {
        homology.insert(i, (0..=window).map(|nu| (nu, table.slice(i, nu).dim_h)).collect());
    }
    let indeg = |i: usize| homology[&i].iter().find(|(_, &v)| v > 0).map(|(&k, _)| k);
    let indeg_h1 = indeg(1);
    let indeg_h2 = indeg(2);
    let end_h1 = homology[&1].iter().rev().find(|(_, &v)| v > 0).map(|(&k, _)| k);

    let mut h0m = BTreeMap::new();
    for nu in 0..=window {
        let v = if mprimary { homology[&1][&nu] } else { h1_torsion_dim(fs, nu)? };
        h0m.insert(nu, v);
    }
    let indeg_h0m = h0m.iter().find(|(_, &v)| v > 0).map(|(&k, _)| k);

    let indeg_h1 = indeg_h1.ok_or_else(|| {
        Error::Hypothesis(format!("H_1 vanishes in degrees 0..={window}; the threshold degree is undefined"))
    })?;
    let m = match indeg_h0m {
        Some(t) => indeg_h1.min(t - d),
        None => indeg_h1,
    };
    let mu0 = (n - 1) * (d - 1) - m;

    let mut hilb_sat = BTreeMap::new();
    let (indeg_sat, end_h0m_r, regularity);
    if mprimary {
        indeg_sat = 0;
        let end_r = shape.table.iter().rev().find(|(_, &v)| v > 0).map(|(&k, _)| k).unwrap();
        end_h0m_r = Some(end_r);
        regularity = end_r;
    } else {
        let e = shape.multiplicity;
        let mut nu = 0;
        loop {
            let q = saturation_slice(fs, nu, false)?.dim_quotient;
            hilb_sat.insert(nu, q);
            if (q == e && nu >= shape.stable_from) || nu > shape.stable_from + window {
                break;
            }
            nu += 1;
        }
        indeg_sat = (0..=d)
            .find(|&nu| hilb_sat.get(&nu).copied().unwrap_or(0) < count_monomials(fs.n, nu) as usize)
            .unwrap_or(d);
        let last = *hilb_sat.keys().next_back().unwrap();
        let torsion_end = (0..=last).filter(|nu| shape_hilbert(&shape, fs, *nu) > hilb_sat[nu]).max();
        end_h0m_r = torsion_end;
        let h1m_end = (-1..=last).filter(|nu| *nu < 0 || hilb_sat[nu] < e).max().unwrap();
        regularity = torsion_end.map_or(h1m_end + 1, |t| t.max(h1m_end + 1));
        warnings.push(
            "assumed without verification: I_p needs at most dim R_p + 1 generators at every prime p containing I"
                .into(),
        );
    }
    let nu0 = (n - 1) * (d - 1) - indeg_sat;

    let mut checks = Vec::new();
    let top = (n - 1) * (d - 1);
    if mprimary {
        checks.push(BoundCheck::le("mu0_general_lower", top.div_euclid(2), mu0));
        checks.push(BoundCheck::le("mu0_general_upper", mu0, top));
        checks.push(BoundCheck::eq("mu0_equals_end_minus_degree", mu0, end_h0m_r.unwrap() - d + 1));
        checks.push(BoundCheck::eq("mu0_equals_indeg_h1_form", mu0, n * (d - 1) - indeg_h1 + 1));
    } else if n >= 3 && d >= 2 {
        checks.push(BoundCheck::le("regularity_minus_degree_le_mu0", regularity - d, mu0));
        checks.push(BoundCheck::le("mu0_le_nu0", mu0, nu0));
        checks.push(BoundCheck::le("nu0_upper", nu0, top));
        checks.push(BoundCheck::le("mu0_lower_dim_one", ((n - 2) * (d - 1) - 1).div_euclid(2), mu0));
    }
    checks.push(match indeg_h2 {
        Some(i2) => BoundCheck::le("h2_initial_degree", indeg_h1 + d, i2),
        None => BoundCheck::new("h2_initial_degree", "<=", Some(indeg_h1 + d), None, true),
    });
    let series = poly_series_coeffs(
        &one_minus_power(fs.d as usize, fs.n as u32 + 1),
        &one_minus_power(1, fs.n as u32),
        window as usize,
    )?;
    let mut euler_failures = 0;
    for nu in 0..=window {
        let (mut k, mut h) = (0i64, 0i64);
        for i in 0..=fs.n + 1 {
            let sl = table.slice(i, nu);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            k += sign * sl.dim_k as i64;
            h += sign * sl.dim_h as i64;
        }
        let expected = series.get(nu as usize).copied().unwrap_or(0);
        if k != h || k != expected {
            euler_failures += 1;
        }
    }
    checks.push(BoundCheck::eq("euler_characteristic_failures", euler_failures, 0));
    let higher: usize = (3..=fs.n + 1).flat_map(|i| homology[&i].values().copied()).sum();
    checks.push(BoundCheck::eq("higher_homology_vanishes", higher as i64, 0));

    Ok(ThresholdReport {
        field: field.to_string(),
        n: fs.n,
        d: fs.d,
        degree_window: window,
        hilb_RmodI: shape.table.clone(),
        hilb_RmodIsat: hilb_sat,
        homology,
        h0m_H1: h0m,
        indeg_H1: Some(indeg_h1),
        end_H1: end_h1,
        indeg_H2: indeg_h2,
        indeg_H0mH1: indeg_h0m,
        indeg_Isat: indeg_sat,
        end_H0m_RmodI: end_h0m_r,
        mu0,
        nu0,
        regularity,
        dim_RmodI: if mprimary { 0 } else { 1 },
        mprimary,
        multiplicity: shape.multiplicity,
        bound_checks: checks,
        warnings,
    })
}

fn shape_hilbert<G: Field>(shape: &HilbertShape, fs: &Forms<G>, nu: i64) -> usize {
    match shape.table.get(&nu) {
        Some(&v) => v,
        None if nu >= shape.stable_from => shape.multiplicity,
        None => hilbert_r_mod_i(fs, nu),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::parse::default_names;

    fn sys(names: usize, forms: &[&str]) -> ParamSystem<Rational> {
        ParamSystem::from_strings_allow_dependent(default_names("X", 1, names), forms, &()).unwrap()
    }

    fn line_system() -> ParamSystem<Rational> {
        sys(2, &["X1", "X2", "X1+X2"])
    }

    fn example() -> ParamSystem<Rational> {
        sys(3, &["X1*X3^2", "X2^2*(X1+X3)", "X1*X2*(X1+X3)", "X2*X3*(X1+X3)"])
    }

    #[test]
    fn subsets_in_lex_order() {
        assert_eq!(subsets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets(4, 0), vec![0]);
        assert_eq!(subsets(2, 3), Vec::<u32>::new());
    }

    #[test]
    fn line_system_h1() {
        let s = line_system();
        let sl = koszul_dims(&s.exact, 1, 1);
        assert_eq!(sl.dim_h, 1);
        assert_eq!(sl.dim_k, 3);
        assert_eq!(koszul_dims(&s.exact, 0, 3).dim_h, hilbert_r_mod_i(&s.exact, 3));
    }

    #[test]
    fn modular_counts_agree_with_exact() {
        let s = example();
        for nu in 0..=8 {
            for i in 0..=4 {
                assert_eq!(koszul_dims(&s.exact, i, nu), koszul_dims(&s.count, i, nu), "i={i} nu={nu}");
            }
        }
    }

    #[test]
    fn example_hilbert_and_saturation() {
        let s = example();
        assert_eq!(hilbert_r_mod_i(&s.count, 2), 6);
        assert_eq!(hilbert_r_mod_i(&s.count, 15), 6);
        assert_eq!(hilbert_r_mod_i(&s.count, 16), 6);
        assert_eq!(saturation_slice(&s.count, -1, false).unwrap().dim_quotient, 0);
        let sat1 = saturation_slice(&s.exact, 1, true).unwrap();
        assert_eq!(sat1.dim_sat, 0);
        let sat2 = saturation_slice(&s.exact, 2, true).unwrap();
        assert_eq!(sat2.dim_sat, 1);
        assert_eq!(sat2.basis.unwrap().len(), 1);
    }

    #[test]
    fn example_torsion_only_in_degree_seven() {
        let s = example();
        for nu in 0..=12 {
            let t = h1_torsion_dim(&s.count, nu).unwrap();
            assert_eq!(t, if nu == 7 { 1 } else { 0 }, "degree {nu}");
        }
    }

    #[test]
    fn example_report() {
        let r = threshold_report(&example()).unwrap();
        assert_eq!(r.mu0, 0);
        assert_eq!(r.nu0, 2);
        assert_eq!(r.indeg_H1, Some(4));
        assert_eq!(r.indeg_Isat, 2);
        assert_eq!(r.multiplicity, 6);
        assert!(!r.mprimary);
        assert!(r.all_checks_pass(), "{:?}", r.bound_checks);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn line_system_report() {
        let r = threshold_report(&line_system()).unwrap();
        assert!(r.mprimary);
        assert_eq!(r.mu0, 0);
        assert_eq!(r.end_H0m_RmodI, Some(0));
    }

    #[test]
    fn model_examples() {
        assert_eq!(general_forms_hilbert_model(3, 3).unwrap(), HilbertModel { table: vec![1, 3, 6, 6, 3], end: 4 });
        assert_eq!(general_forms_hilbert_model(3, 1).unwrap(), HilbertModel { table: vec![1], end: 0 });
        assert_eq!(general_forms_hilbert_model(3, 2).unwrap(), HilbertModel { table: vec![1, 3, 2], end: 2 });
        for n in 2..=5 {
            for d in 1..=5 {
                general_forms_hilbert_model(n, d).unwrap();
            }
        }
    }

    #[test]
    fn non_finite_base_locus_is_rejected() {
        // all forms share the factor X1
        let s = sys(3, &["X1^2", "X1*X2", "X1*X3", "X1*X2+X1*X3"]);
        assert!(matches!(threshold_report(&s), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn prime_field_system_counts_directly() {
        let s: ParamSystem<Fp> =
            ParamSystem::from_strings(default_names("X", 1, 2), &["X1^2", "X2^2", "X1*X2"], &101).unwrap();
        let r = threshold_report(&s).unwrap();
        assert!(r.mprimary);
        assert_eq!(r.field, "GF(101)");
    }
}
