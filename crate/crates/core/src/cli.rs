//! Command implementations shared by the binary and the C interface. Each
//! command returns a JSON payload and whether every check it ran passed.

use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::appendix::{annihilation_grid, kernel_grid, lefschetz_grid, sign_grid, MonomialCubeAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::implicit::{implicitize, GcdOptions};
use crate::koszul::{threshold_report, ThresholdReport};
use crate::system::{AnySystem, ParamSystem};
use crate::syzygy::{build_matrix, tuned_mu};

/// Largest matrix side allowed in the multiplication grid.
pub const LEFSCHETZ_MAX_DIM: usize = 500;
pub const SIGNS_MAX: u32 = 12;
pub const LEMME_MAX: u32 = 12;
/// Bound on `m * N` for the kernel grid.
pub const KERNEL_MAX_DIM: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuChoice {
    /// The threshold degree `mu0`, or 0 when it is negative.
    Auto,
    /// `max{(n-l)(d-1) - (l-1), mu0}` for syzygy order `l`.
    Tune(u32),
    Value(u32),
}

impl FromStr for MuChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(MuChoice::Auto);
        }
        s.parse::<u32>()
            .map(MuChoice::Value)
            .map_err(|_| Error::Validation(format!("--mu expects a non-negative integer or 'auto', got '{s}'")))
    }
}

pub fn resolve_mu(report: &ThresholdReport, choice: MuChoice) -> Result<u32> {
    match choice {
        MuChoice::Auto => Ok(report.mu0.max(0) as u32),
        MuChoice::Tune(l) => tuned_mu(report.n, report.d, report.mu0, l),
        MuChoice::Value(v) => Ok(v),
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub payload: Value,
    /// Plain-text rendering requested instead of JSON.
    pub text: Option<String>,
    pub ok: bool,
}

impl Outcome {
    fn json(payload: Value, ok: bool) -> Self {
        Outcome { payload, text: None, ok }
    }

    pub fn render(&self) -> String {
        match &self.text {
            Some(t) => t.clone(),
            None => serde_json::to_string_pretty(&self.payload).expect("JSON values serialize") + "\n",
        }
    }

    /// 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            2
        }
    }
}

macro_rules! on_system {
    ($sys:expr, $s:ident => $body:expr) => {
        match $sys {
            AnySystem::Rational($s) => $body,
            AnySystem::Prime($s) => $body,
        }
    };
}

pub fn analyze(sys: &AnySystem) -> Result<Outcome> {
    let report = on_system!(sys, s => threshold_report(s))?;
    let ok = report.all_checks_pass();
    Ok(Outcome::json(to_value(&report), ok))
}

fn matrix_for<F: Field>(s: &ParamSystem<F>, choice: MuChoice, lmax: Option<u32>, text: bool) -> Result<Outcome> {
    let report = threshold_report(s)?;
    let mu = resolve_mu(&report, choice)?;
    let m = build_matrix(s, &report, mu, lmax)?;
    let mut payload = m.to_json();
    payload["mu0"] = json!(report.mu0);
    Ok(Outcome { payload, text: text.then(|| m.to_text(&s.names)), ok: true })
}

pub fn matrix(sys: &AnySystem, choice: MuChoice, lmax: Option<u32>, text: bool) -> Result<Outcome> {
    on_system!(sys, s => matrix_for(s, choice, lmax, text))
}

fn implicit_for<F: Field>(s: &ParamSystem<F>, choice: MuChoice, opts: &GcdOptions) -> Result<Outcome> {
    let report = threshold_report(s)?;
    let mu = resolve_mu(&report, choice)?;
    let ex = implicitize(s, &report, mu, opts)?;
    let ok = ex.verdict.passed();
    Ok(Outcome::json(ex.to_json(s.n()), ok))
}

pub fn implicit(sys: &AnySystem, choice: MuChoice, opts: &GcdOptions) -> Result<Outcome> {
    on_system!(sys, s => implicit_for(s, choice, opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppendixTask {
    /// Every `n' <= n`, `m' <= m` and all degrees.
    Lefschetz {
        n: usize,
        m: u32,
    },
    Signs {
        n: usize,
        d: u32,
    },
    /// `P_j` annihilation for every `m' <= m`, `t' <= t`.
    Lemme {
        m: u32,
        t: u32,
    },
    Kernel {
        m: u32,
        t: u32,
        nilpotency: u32,
    },
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn table<T: Serialize>(task: &str, rows: Vec<T>, passed: impl Fn(&T) -> bool) -> Outcome {
    let mut failures = 0;
    let grid: Vec<Value> = rows
        .iter()
        .map(|r| {
            let ok = passed(r);
            failures += usize::from(!ok);
            let mut v = to_value(r);
            v["passed"] = json!(ok);
            v
        })
        .collect();
    Outcome::json(
        json!({ "task": task, "points": grid.len(), "failures": failures, "passed": failures == 0, "grid": grid }),
        failures == 0,
    )
}

fn cap(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}

pub fn appendix(task: AppendixTask) -> Result<Outcome> {
    match task {
        AppendixTask::Lefschetz { n, m } => {
            let alg = MonomialCubeAlgebra::new(n, m)?;
            cap(alg.max_dim() <= LEFSCHETZ_MAX_DIM, || {
                format!("degree pieces of dimension {} exceed the cap {LEFSCHETZ_MAX_DIM}", alg.max_dim())
            })?;
            Ok(table("lefschetz", lefschetz_grid(n, m)?, |v| v.passed()))
        }
        AppendixTask::Signs { n, d } => {
            cap(n as u32 <= SIGNS_MAX && d <= SIGNS_MAX, || format!("signs accepts n, d <= {SIGNS_MAX}"))?;
            cap(n >= 2 && d >= 2, || "signs needs n, d >= 2".into())?;
            Ok(table("signs", sign_grid(n, d)?, |v| v.passed()))
        }
        AppendixTask::Lemme { m, t } => {
            cap(m <= LEMME_MAX && t <= LEMME_MAX, || format!("lemme accepts m, t <= {LEMME_MAX}"))?;
            Ok(table("lemme", annihilation_grid(m, t)?, |v| v.vanishes))
        }
        AppendixTask::Kernel { m, t, nilpotency } => {
            cap(m * nilpotency <= KERNEL_MAX_DIM && t <= LEMME_MAX, || {
                format!("kernel accepts m * N <= {KERNEL_MAX_DIM} and t <= {LEMME_MAX}")
            })?;
            Ok(table("kernel", kernel_grid(m, t, nilpotency)?, |v| v.passed()))
        }
    }
}
