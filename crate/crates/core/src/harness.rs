//! Evaluates both sides of every registry record and reports the residuals.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::audit::{traced, Subsystem};
use crate::error::{Error, Result};
use crate::hyper::{companion_sum, pfq, ramanujan_sum, CompanionSpec, HypergeometricSpec, Side};
use crate::lattice::epstein_fast;
use crate::mpnum::{fmt_real, Complex, PrecisionContext, Real};
use crate::registry::{eval_expr, Correction, FormulaRecord, Kind, Part};
use crate::series::big_f_tau;

/// Environment variable that overrides the default number of digits.
pub const DIGITS_ENV: &str = "RFORGE_DIGITS";

/// Digits to use when the caller does not say: `RFORGE_DIGITS` or 60.
pub fn default_digits() -> u32 {
    std::env::var(DIGITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(PrecisionContext::DEFAULT_DIGITS)
}

/// Relative tolerance 10^{−(digits−20)}.
pub fn tolerance(ctx: &PrecisionContext) -> Real {
    ctx.pow10(-(ctx.digits() as i32 - 20))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail(_) => "fail",
            Status::Skipped(_) => "skipped",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyResult {
    pub id: String,
    pub kind: Kind,
    pub lhs: Option<Complex>,
    pub rhs: Option<Complex>,
    pub abs_err: Option<Real>,
    pub rel_err: Option<Real>,
    pub digits_used: u32,
    /// Wall time in seconds.
    pub elapsed: f64,
    pub status: Status,
    pub lhs_subsystems: Vec<Subsystem>,
    pub rhs_subsystems: Vec<Subsystem>,
}

fn part(z: Complex, p: Part) -> Complex {
    match p {
        Part::Full => z,
        Part::Real => {
            let prec = z.prec();
            Complex::with_val(prec, (z.real(), 0))
        }
    }
}

fn companion_spec(rec: &FormulaRecord, ctx: &PrecisionContext) -> Result<CompanionSpec> {
    let s = rec.s.clone().ok_or_else(|| Error::Registry(format!("record {} has no s", rec.id)))?;
    let (a, b, z) = rec.abz(ctx)?;
    CompanionSpec::new(s, a, b, z)
}

fn scaled(rec: &FormulaRecord, v: Complex, ctx: &PrecisionContext) -> Result<Complex> {
    match &rec.lhs_scale {
        Some(e) => Ok(v * eval_expr(e, ctx)?),
        None => Ok(v),
    }
}

fn lattice_side(rec: &FormulaRecord, ctx: &PrecisionContext) -> Result<Complex> {
    let mut sum = ctx.czero();
    for t in &rec.forms {
        sum += eval_expr(&t.coeff, ctx)? * epstein_fast(&t.form, ctx)?;
    }
    Ok(sum)
}

/// The side computed from (a, b, z), F(q) or lattice sums.
fn left(rec: &FormulaRecord, ctx: &PrecisionContext) -> Result<Complex> {
    let v = match rec.kind {
        Kind::Companion => companion_sum(&companion_spec(rec, ctx)?, ctx)?,
        Kind::Ramanujan => ramanujan_sum(&companion_spec(rec, ctx)?, ctx)?,
        Kind::FValue => {
            let tau = rec.tau.as_ref().expect("validated F-value record has tau");
            big_f_tau(&tau.eval(ctx)?, ctx)?
        }
        Kind::SFormula | Kind::LReduction => lattice_side(rec, ctx)?,
    };
    scaled(rec, v, ctx)
}

/// Σ coeff·atom, plus the hypergeometric correction of an S-formula.
fn right(rec: &FormulaRecord, ctx: &PrecisionContext) -> Result<Complex> {
    let mut sum = ctx.czero();
    for t in &rec.rhs {
        sum += eval_expr(&t.coeff, ctx)? * eval_expr(&t.atom.expr(), ctx)?;
    }
    match &rec.correction {
        None => {}
        Some(Correction::Companion { coeff, part: p }) => {
            let v = companion_sum(&companion_spec(rec, ctx)?, ctx)?;
            sum += eval_expr(coeff, ctx)? * part(v, *p);
        }
        Some(Correction::Pfq { coeff, upper, lower, arg, part: p }) => {
            let eval_all = |v: &[_]| v.iter().map(|e| eval_expr(e, ctx)).collect::<Result<Vec<_>>>();
            let spec = HypergeometricSpec::new(eval_all(upper)?, eval_all(lower)?)?;
            let v = pfq(&spec, &eval_expr(arg, ctx)?, Side::Below, ctx)?;
            sum += eval_expr(coeff, ctx)? * part(v, *p);
        }
    }
    Ok(sum)
}

/// Evaluate both sides of `rec` and compare them at tolerance 10^{−(digits−20)}.
pub fn verify(rec: &FormulaRecord, ctx: &PrecisionContext) -> VerifyResult {
    let start = Instant::now();
    let (lhs, lhs_subsystems) = traced(|| left(rec, ctx));
    let (rhs, rhs_subsystems) = traced(|| right(rec, ctx));
    let mut out = VerifyResult {
        id: rec.id.clone(),
        kind: rec.kind,
        lhs: None,
        rhs: None,
        abs_err: None,
        rel_err: None,
        digits_used: ctx.digits(),
        elapsed: 0.0,
        status: Status::Pass,
        lhs_subsystems,
        rhs_subsystems,
    };
    let failure = |e: Error| match e {
        Error::Precision(m) => Status::Skipped(m),
        other => Status::Fail(other.to_string()),
    };
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            let abs = Real::with_val(ctx.bits(), Complex::with_val(ctx.bits(), &l - &r).abs_ref());
            let scale = Real::with_val(ctx.bits(), r.abs_ref());
            let rel = if scale.is_zero() { abs.clone() } else { Real::with_val(ctx.bits(), &abs / &scale) };
            let shared: Vec<_> = out.lhs_subsystems.iter().filter(|s| out.rhs_subsystems.contains(s)).collect();
            out.status = if !shared.is_empty() {
                Status::Fail(format!("both sides used {shared:?}"))
            } else if rel <= tolerance(ctx) {
                Status::Pass
            } else {
                Status::Fail(format!("relative error {} above tolerance", fmt_real(&rel, 6)))
            };
            out.lhs = Some(ctx.round_complex(&l));
            out.rhs = Some(ctx.round_complex(&r));
            out.abs_err = Some(abs);
            out.rel_err = Some(rel);
        }
        (Err(e), _) => out.status = failure(e),
        (_, Err(e)) => out.status = failure(e),
    }
    out.elapsed = start.elapsed().as_secs_f64();
    out
}

/// Which records a run covers.
#[derive(Debug, Clone, Default)]
pub struct Filter {
    pub id: Option<glob::Pattern>,
    pub kind: Option<Kind>,
}

impl Filter {
    pub fn id_glob(pattern: &str) -> Result<Self> {
        let p = glob::Pattern::new(pattern).map_err(|e| Error::Registry(format!("bad id pattern: {e}")))?;
        Ok(Self { id: Some(p), kind: None })
    }

    pub fn matches(&self, rec: &FormulaRecord) -> bool {
        self.id.as_ref().map_or(true, |p| p.matches(&rec.id)) && self.kind.map_or(true, |k| k == rec.kind)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(results: &[VerifyResult]) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail(_) => s.failed += 1,
                Status::Skipped(_) => s.skipped += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Verify every matching record; results are sorted by id whether or not the
/// work fans out over threads.
pub fn run_all(records: &[FormulaRecord], filter: &Filter, ctx: &PrecisionContext, parallel: bool) -> Vec<VerifyResult> {
    let chosen: Vec<&FormulaRecord> = records.iter().filter(|r| filter.matches(r)).collect();
    let mut results: Vec<VerifyResult> = if parallel {
        chosen.par_iter().map(|r| verify(r, ctx)).collect()
    } else {
        chosen.iter().map(|r| verify(r, ctx)).collect()
    };
    results.sort_by(|a, b| a.id.cmp(&b.id));
    results
}

#[derive(Serialize)]
struct JsonComplex {
    re: String,
    im: String,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    id: &'a str,
    kind: &'a str,
    lhs: Option<JsonComplex>,
    rhs: Option<JsonComplex>,
    abs_err: Option<String>,
    rel_err: Option<String>,
    digits_used: u32,
    elapsed: f64,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

/// JSON array of results with numbers as decimal strings at full precision.
pub fn json_report(results: &[VerifyResult]) -> String {
    let rows: Vec<JsonResult> = results
        .iter()
        .map(|r| {
            let digits = r.digits_used as usize;
            let cx = |z: &Complex| JsonComplex { re: fmt_real(z.real(), digits), im: fmt_real(z.imag(), digits) };
            JsonResult {
                id: &r.id,
                kind: r.kind.name(),
                lhs: r.lhs.as_ref().map(cx),
                rhs: r.rhs.as_ref().map(cx),
                abs_err: r.abs_err.as_ref().map(|e| fmt_real(e, 6)),
                rel_err: r.rel_err.as_ref().map(|e| fmt_real(e, 6)),
                digits_used: r.digits_used,
                elapsed: r.elapsed,
                status: r.status.label(),
                reason: match &r.status {
                    Status::Pass => None,
                    Status::Fail(m) | Status::Skipped(m) => Some(m),
                },
            }
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("report serializes")
}
