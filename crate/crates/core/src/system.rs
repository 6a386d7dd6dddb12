//! Validated parametrizations and the substitution `T_i -> f_i`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Fp, Rational, MERSENNE_61};
use crate::linalg::rank_of;
use crate::parse::{default_names, format_poly, parse_poly};
use crate::poly::{monomial_basis, BigradedPoly, Monomial, MonomialIndex, MultiPoly, MAX_VARS};

/// `n + 1` forms of degree `d` in `n` variables over one field.
#[derive(Clone, Debug)]
pub struct Forms<F: Field> {
    pub n: usize,
    pub d: u32,
    pub forms: Vec<MultiPoly<F>>,
    pub ctx: F::Ctx,
}

impl<F: Field> Forms<F> {
    /// Reduction modulo `p`, `None` if a denominator vanishes or the
    /// reduced forms span less than the originals.
    pub fn to_prime(&self, p: u64) -> Option<Forms<Fp>> {
        let forms: Option<Vec<MultiPoly<Fp>>> =
            self.forms.iter().map(|f| f.map_coeffs(&p, |c| c.to_prime(p))).collect();
        let out = Forms { n: self.n, d: self.d, forms: forms?, ctx: p };
        (out.forms.iter().all(|f| !f.is_zero()) && out.coefficient_rank() == self.coefficient_rank()).then_some(out)
    }

    /// Dimension of the span of the forms in `R_d`.
    pub fn coefficient_rank(&self) -> usize {
        let basis = MonomialIndex::new(self.n, self.d as i64);
        let vs: Vec<Vec<F>> = self.forms.iter().map(|f| f.to_vector(&basis).expect("form of degree d")).collect();
        rank_of(basis.len(), &self.ctx, vs)
    }

    pub fn independent(&self) -> bool {
        self.coefficient_rank() == self.forms.len()
    }

    /// `prod_i f_i^{t_i}` for every T-monomial of degree `ell`, keyed by
    /// the monomial.
    pub fn t_powers(&self, ell: u32) -> HashMap<Monomial, MultiPoly<F>> {
        let mut layer: HashMap<Monomial, MultiPoly<F>> = HashMap::new();
        layer.insert(Monomial::ONE, MultiPoly::one(self.n, &self.ctx));
        for _ in 0..ell {
            let mut next = HashMap::new();
            for (t, p) in &layer {
                for (i, f) in self.forms.iter().enumerate() {
                    let t2 = t.mul(&Monomial::var(i));
                    next.entry(t2).or_insert_with(|| p.mul(f));
                }
            }
            layer = next;
        }
        layer
    }

    /// `P(X, f(X))` for a bihomogeneous `P`.
    pub fn substitute(&self, p: &BigradedPoly<F>) -> Result<MultiPoly<F>> {
        if p.x_vars != self.n || p.t_vars != self.n + 1 {
            return Err(Error::Validation(format!(
                "ambient mismatch: polynomial in {} X and {} T variables, system has n = {}",
                p.x_vars, p.t_vars, self.n
            )));
        }
        let powers = self.t_powers(p.t_degree);
        let mut out = MultiPoly::zero(self.n, &self.ctx);
        for (x, t, c) in p.terms() {
            out = out.add(&powers[t].mul_term(x, c));
        }
        Ok(out)
    }

    /// Matrix columns of the substitution map `S_{mu,ell} -> R_{mu+ell*d}`:
    /// one vector per basis element `x * t` (x-major).
    pub fn substitution_columns(&self, mu: u32, ell: u32) -> Vec<Vec<F>> {
        let target = MonomialIndex::new(self.n, (mu + ell * self.d) as i64);
        let xs = monomial_basis(self.n, mu);
        let ts = monomial_basis(self.n + 1, ell);
        let powers = self.t_powers(ell);
        let mut cols = Vec::with_capacity(xs.len() * ts.len());
        for x in &xs {
            for t in &ts {
                let mut v = vec![F::zero(&self.ctx); target.len()];
                for (m, c) in powers[t].terms() {
                    v[target.index(&m.mul(x)).unwrap()] = c.clone();
                }
                cols.push(v);
            }
        }
        cols
    }
}

/// A validated input: field, variable names and forms, plus the image
/// used for dimension counts.
#[derive(Clone, Debug)]
pub struct ParamSystem<F: Field> {
    pub field: FieldDescriptor,
    pub names: Vec<String>,
    pub exact: Forms<F>,
    /// Dimension counts run here. For rational input this is the image
    /// modulo a 61-bit prime; for prime-field input it equals `exact`.
    pub count: Forms<Fp>,
}

/// Primes tried, in order, for the counting image of rational input.
pub const COUNT_PRIMES: [u64; 3] = [MERSENNE_61, 2305843009213693921, 2305843009213693907];

impl<F: Field> ParamSystem<F> {
    pub fn new(names: Vec<String>, forms: Vec<MultiPoly<F>>, ctx: &F::Ctx) -> Result<Self> {
        Self::build(names, forms, ctx, true)
    }

    /// Like [`ParamSystem::new`] but accepts linearly dependent forms, which
    /// the degree-wise computations handle fine (small hand examples such
    /// as `(X1, X2, X1 + X2)` are of this kind).
    pub fn new_allow_dependent(names: Vec<String>, forms: Vec<MultiPoly<F>>, ctx: &F::Ctx) -> Result<Self> {
        Self::build(names, forms, ctx, false)
    }

    fn build(names: Vec<String>, forms: Vec<MultiPoly<F>>, ctx: &F::Ctx, require_independent: bool) -> Result<Self> {
        let n = names.len();
        if n < 2 {
            return Err(Error::Validation(format!("need at least 2 variables, got {n}")));
        }
        if n + 1 > MAX_VARS {
            return Err(Error::Validation(format!("at most {} variables are supported", MAX_VARS - 1)));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Validation(format!("duplicate variable name '{a}'")));
            }
        }
        if forms.len() != n + 1 {
            return Err(Error::Validation(format!("expected {} forms for {n} variables, got {}", n + 1, forms.len())));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.is_zero() {
                return Err(Error::Validation(format!("form f{i} is zero")));
            }
            if !f.is_homogeneous() {
                return Err(Error::Validation(format!("form f{i} is not homogeneous")));
            }
        }
        let d = forms[0].degree().unwrap();
        if let Some(i) = forms.iter().position(|f| f.degree() != Some(d)) {
            return Err(Error::Validation(format!(
                "form f{i} has degree {} but f0 has degree {d}",
                forms[i].degree().unwrap()
            )));
        }
        if d == 0 {
            return Err(Error::Validation("forms must have positive degree".into()));
        }
        let exact = Forms { n, d, forms, ctx: ctx.clone() };
        if require_independent && !exact.independent() {
            return Err(Error::Validation("the forms are linearly dependent".into()));
        }
        let field = F::descriptor(ctx);
        let count = match field {
            FieldDescriptor::Prime(p) => exact.to_prime(p),
            FieldDescriptor::Rationals => COUNT_PRIMES.iter().find_map(|&p| exact.to_prime(p)),
        }
        .ok_or_else(|| Error::Internal("no usable prime for dimension counts".into()))?;
        Ok(ParamSystem { field, names, exact, count })
    }

    pub fn from_strings(names: Vec<String>, forms: &[&str], ctx: &F::Ctx) -> Result<Self> {
        let polys = forms.iter().map(|s| parse_poly(s, &names, ctx)).collect::<Result<Vec<_>>>()?;
        Self::new(names, polys, ctx)
    }

    pub fn from_strings_allow_dependent(names: Vec<String>, forms: &[&str], ctx: &F::Ctx) -> Result<Self> {
        let polys = forms.iter().map(|s| parse_poly(s, &names, ctx)).collect::<Result<Vec<_>>>()?;
        Self::new_allow_dependent(names, polys, ctx)
    }

    pub fn n(&self) -> usize {
        self.exact.n
    }

    pub fn d(&self) -> u32 {
        self.exact.d
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.exact.ctx
    }

    pub fn forms(&self) -> &[MultiPoly<F>] {
        &self.exact.forms
    }

    /// `T0, ..., Tn`.
    pub fn t_names(&self) -> Vec<String> {
        default_names("T", 0, self.n() + 1)
    }

    pub fn substitute_t(&self, p: &BigradedPoly<F>) -> Result<MultiPoly<F>> {
        self.exact.substitute(p)
    }

    pub fn form_strings(&self) -> Vec<String> {
        self.forms().iter().map(|f| format_poly(f, &self.names)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { p: u64 },
}

/// JSON input: `{"field": "Q" | {"p": prime}, "variables": [...], "forms": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub forms: Vec<String>,
}

/// A system over whichever field the input names.
#[derive(Clone, Debug)]
pub enum AnySystem {
    Rational(ParamSystem<Rational>),
    Prime(ParamSystem<Fp>),
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("input JSON: {e}")))
    }

    pub fn descriptor(&self) -> Result<FieldDescriptor> {
        match &self.field {
            FieldSpec::Named(s) if s == "Q" || s == "QQ" => Ok(FieldDescriptor::Rationals),
            FieldSpec::Named(s) => {
                Err(Error::Validation(format!("unknown field '{s}', use \"Q\" or {{\"p\": prime}}")))
            }
            FieldSpec::Prime { p } => FieldDescriptor::prime(*p),
        }
    }

    pub fn build(&self) -> Result<AnySystem> {
        let forms: Vec<&str> = self.forms.iter().map(|s| s.as_str()).collect();
        match self.descriptor()? {
            FieldDescriptor::Rationals => {
                Ok(AnySystem::Rational(ParamSystem::from_strings(self.variables.clone(), &forms, &())?))
            }
            FieldDescriptor::Prime(p) => {
                Ok(AnySystem::Prime(ParamSystem::from_strings(self.variables.clone(), &forms, &p)?))
            }
        }
    }
}

impl AnySystem {
    pub fn from_json(text: &str) -> Result<Self> {
        InputFile::from_json(text)?.build()
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            AnySystem::Rational(s) => s.field,
            AnySystem::Prime(s) => s.field,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnySystem::Rational(s) => s.n(),
            AnySystem::Prime(s) => s.n(),
        }
    }

    pub fn d(&self) -> u32 {
        match self {
            AnySystem::Rational(s) => s.d(),
            AnySystem::Prime(s) => s.d(),
        }
    }

    pub fn count(&self) -> &Forms<Fp> {
        match self {
            AnySystem::Rational(s) => &s.count,
            AnySystem::Prime(s) => &s.count,
        }
    }
}
