//! The constant-expression language and the database of verifiable identities.
//!
//! Records are stored as JSON with every number written as an expression, so
//! the same file can be evaluated at any precision.

mod expr;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use expr::{eval_expr, parse_expr, ConstExpr};

use crate::error::{Error, Result};
use crate::lattice::QuadraticForm;
use crate::mpnum::{Complex, PrecisionContext, Rational};
use crate::series::Tau;

const BUILTIN: &str = include_str!("../../data/registry.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Companion,
    Ramanujan,
    #[serde(rename = "F-value")]
    FValue,
    #[serde(rename = "S-formula")]
    SFormula,
    #[serde(rename = "L-reduction")]
    LReduction,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Companion => "companion",
            Kind::Ramanujan => "ramanujan",
            Kind::FValue => "F-value",
            Kind::SFormula => "S-formula",
            Kind::LReduction => "L-reduction",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Kind::Companion, Kind::Ramanujan, Kind::FValue, Kind::SFormula, Kind::LReduction]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Registry(format!("unknown record kind `{s}`")))
    }
}

/// The constants a right-hand side may multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    /// L_k(2)
    L(i64),
    Pi2,
    IPi2,
    One,
}

impl Atom {
    /// The atom as an expression, so it is evaluated by the same code as coefficients.
    pub fn expr(self) -> ConstExpr {
        let text = match self {
            Atom::L(k) => format!("L({k}, 2)"),
            Atom::Pi2 => "pi^2".into(),
            Atom::IPi2 => "i*pi^2".into(),
            Atom::One => "1".into(),
        };
        parse_expr(&text).expect("atom text is well formed")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::L(k) => write!(f, "L({k},2)"),
            Atom::Pi2 => f.write_str("pi^2"),
            Atom::IPi2 => f.write_str("i*pi^2"),
            Atom::One => f.write_str("1"),
        }
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "pi^2" => return Ok(Atom::Pi2),
            "i*pi^2" => return Ok(Atom::IPi2),
            "1" => return Ok(Atom::One),
            _ => {}
        }
        t.strip_prefix("L(")
            .and_then(|r| r.strip_suffix(",2)"))
            .and_then(|k| k.parse::<i64>().ok())
            .filter(|&k| k != 0)
            .map(Atom::L)
            .ok_or_else(|| Error::Registry(format!("atom `{s}` is not one of L(k,2), pi^2, i*pi^2, 1")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: ConstExpr,
    pub atom: Atom,
}

/// The point τ = x + iy carried by a record; y is either √(y_sq) or an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum TauY {
    Sqrt(Rational),
    Expr(ConstExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauSpec {
    pub x: Rational,
    pub y: TauY,
}

impl TauSpec {
    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Tau> {
        match &self.y {
            TauY::Sqrt(y_sq) => Tau::from_sqrt(self.x.clone(), y_sq.clone(), ctx),
            TauY::Expr(e) => {
                let y = eval_expr(e, ctx)?;
                if !y.imag().is_zero() {
                    return Err(Error::Registry("Im tau must be real".into()));
                }
                Tau::new(self.x.clone(), y.real().clone())
            }
        }
    }
}

/// A real or complex part selector for a hypergeometric correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Full,
    Real,
}

/// The hypergeometric term subtracted from the L-values in an S-formula.
#[derive(Debug, Clone, PartialEq)]
pub enum Correction {
    /// coeff · companion_sum(s, a, b, z) of the record.
    Companion { coeff: ConstExpr, part: Part },
    /// coeff · pFq(upper; lower; arg), approached from below on the cut.
    Pfq { coeff: ConstExpr, upper: Vec<ConstExpr>, lower: Vec<ConstExpr>, arg: ConstExpr, part: Part },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormTerm {
    pub coeff: ConstExpr,
    pub form: QuadraticForm,
}

/// One identity: a left side computed from (s, a, b, z), F(q) or lattice sums,
/// and a right side Σ coeff·atom.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaRecord {
    pub id: String,
    pub kind: Kind,
    pub s: Option<Rational>,
    pub tau: Option<TauSpec>,
    pub a: Option<ConstExpr>,
    pub b: Option<ConstExpr>,
    pub z: Option<ConstExpr>,
    /// Multiplies the computed left side before comparison.
    pub lhs_scale: Option<ConstExpr>,
    /// Lattice sums Σ coeff·S(form;2) for S-formula and L-reduction records.
    pub forms: Vec<FormTerm>,
    pub correction: Option<Correction>,
    pub rhs: Vec<Term>,
    pub source: String,
}

impl FormulaRecord {
    /// Every expression in the record, for round-trip checks.
    pub fn expressions(&self) -> Vec<&ConstExpr> {
        let mut out: Vec<&ConstExpr> = [&self.a, &self.b, &self.z, &self.lhs_scale].into_iter().flatten().collect();
        if let Some(TauSpec { y: TauY::Expr(e), .. }) = &self.tau {
            out.push(e);
        }
        out.extend(self.forms.iter().map(|f| &f.coeff));
        match &self.correction {
            Some(Correction::Companion { coeff, .. }) => out.push(coeff),
            Some(Correction::Pfq { coeff, upper, lower, arg, .. }) => {
                out.push(coeff);
                out.extend(upper.iter().chain(lower).chain([arg]));
            }
            None => {}
        }
        out.extend(self.rhs.iter().map(|t| &t.coeff));
        out
    }

    /// (a, b, z) evaluated at the context precision.
    pub fn abz(&self, ctx: &PrecisionContext) -> Result<(Complex, Complex, Complex)> {
        let get = |e: &Option<ConstExpr>, name: &str| -> Result<Complex> {
            let e = e.as_ref().ok_or_else(|| Error::Registry(format!("record {} has no {name}", self.id)))?;
            eval_expr(e, ctx)
        };
        Ok((get(&self.a, "a")?, get(&self.b, "b")?, get(&self.z, "z")?))
    }

    fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Registry(format!("{} record {} needs {what}", self.kind, self.id)))
            }
        };
        match self.kind {
            Kind::Companion | Kind::Ramanujan => {
                need(self.s.is_some(), "s")?;
                need(self.a.is_some() && self.b.is_some() && self.z.is_some(), "a, b and z")
            }
            Kind::FValue => need(self.tau.is_some(), "tau"),
            Kind::SFormula => {
                need(!self.forms.is_empty(), "lattice forms")?;
                need(self.correction.is_some(), "a correction term")?;
                if matches!(self.correction, Some(Correction::Companion { .. })) {
                    need(self.s.is_some() && self.a.is_some() && self.b.is_some() && self.z.is_some(), "s, a, b, z")?;
                }
                Ok(())
            }
            Kind::LReduction => need(!self.forms.is_empty(), "lattice forms"),
        }
    }
}

// JSON layout. Every number is a string holding an expression.

#[derive(Debug, Clone, Deserialize)]
struct RawTau {
    x: String,
    #[serde(default)]
    y: Option<String>,
    #[serde(default)]
    y_sq: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawTerm {
    coeff: String,
    atom: String,
}

#[derive(Debug, Clone, Deserialize)]
struct RawForm {
    coeff: String,
    form: [String; 3],
}

#[derive(Debug, Clone, Deserialize)]
struct RawCorrection {
    coeff: String,
    #[serde(default)]
    upper: Option<Vec<String>>,
    #[serde(default)]
    lower: Option<Vec<String>>,
    #[serde(default)]
    arg: Option<String>,
    #[serde(default)]
    part: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawRecord {
    id: String,
    kind: Kind,
    #[serde(default)]
    s: Option<String>,
    #[serde(default)]
    tau: Option<RawTau>,
    #[serde(default)]
    a: Option<String>,
    #[serde(default)]
    b: Option<String>,
    #[serde(default)]
    z: Option<String>,
    #[serde(default)]
    lhs_scale: Option<String>,
    #[serde(default)]
    forms: Vec<RawForm>,
    #[serde(default)]
    correction: Option<RawCorrection>,
    rhs: Vec<RawTerm>,
    source: String,
}

fn rational(text: &str, id: &str) -> Result<Rational> {
    parse_expr(text)?
        .as_rational()
        .ok_or_else(|| Error::Registry(format!("record {id}: `{text}` is not an exact rational")))
}

fn part(p: Option<&str>, id: &str) -> Result<Part> {
    match p {
        None | Some("full") => Ok(Part::Full),
        Some("re") => Ok(Part::Real),
        Some(other) => Err(Error::Registry(format!("record {id}: unknown part `{other}`"))),
    }
}

fn exprs(v: &[String]) -> Result<Vec<ConstExpr>> {
    v.iter().map(|s| parse_expr(s)).collect()
}

fn opt_expr(v: &Option<String>) -> Result<Option<ConstExpr>> {
    v.as_deref().map(parse_expr).transpose()
}

impl TryFrom<RawRecord> for FormulaRecord {
    type Error = Error;

    fn try_from(r: RawRecord) -> Result<Self> {
        let id = r.id;
        let tag = |e: Error| Error::Registry(format!("record {id}: {e}"));
        let tau = match r.tau {
            None => None,
            Some(t) => {
                let x = rational(&t.x, &id)?;
                let y = match (t.y_sq, t.y) {
                    (Some(ys), None) => TauY::Sqrt(rational(&ys, &id)?),
                    (None, Some(y)) => TauY::Expr(parse_expr(&y).map_err(tag)?),
                    _ => return Err(Error::Registry(format!("record {id}: tau needs exactly one of y, y_sq"))),
                };
                Some(TauSpec { x, y })
            }
        };
        let forms = r
            .forms
            .iter()
            .map(|f| {
                let [a, b, c] = &f.form;
                let form = QuadraticForm::new(rational(a, &id)?, rational(b, &id)?, rational(c, &id)?)?;
                Ok(FormTerm { coeff: parse_expr(&f.coeff).map_err(tag)?, form })
            })
            .collect::<Result<Vec<_>>>()?;
        let correction = match r.correction {
            None => None,
            Some(c) => {
                let coeff = parse_expr(&c.coeff).map_err(tag)?;
                let part = part(c.part.as_deref(), &id)?;
                match (c.upper, c.lower, c.arg) {
                    (None, None, None) => Some(Correction::Companion { coeff, part }),
                    (Some(u), Some(l), Some(arg)) => Some(Correction::Pfq {
                        coeff,
                        upper: exprs(&u).map_err(tag)?,
                        lower: exprs(&l).map_err(tag)?,
                        arg: parse_expr(&arg).map_err(tag)?,
                        part,
                    }),
                    _ => return Err(Error::Registry(format!("record {id}: pFq correction needs upper, lower and arg"))),
                }
            }
        };
        let rhs = r
            .rhs
            .iter()
            .map(|t| Ok(Term { coeff: parse_expr(&t.coeff).map_err(tag)?, atom: t.atom.parse()? }))
            .collect::<Result<Vec<_>>>()?;
        let rec = FormulaRecord {
            s: r.s.as_deref().map(|s| rational(s, &id)).transpose()?,
            tau,
            a: opt_expr(&r.a).map_err(tag)?,
            b: opt_expr(&r.b).map_err(tag)?,
            z: opt_expr(&r.z).map_err(tag)?,
            lhs_scale: opt_expr(&r.lhs_scale).map_err(tag)?,
            forms,
            correction,
            rhs,
            source: r.source,
            kind: r.kind,
            id,
        };
        rec.validate()?;
        Ok(rec)
    }
}

/// Parse a registry document: a JSON array of records with unique ids.
pub fn load_registry(json: &str) -> Result<Vec<FormulaRecord>> {
    let raw: Vec<RawRecord> = serde_json::from_str(json).map_err(|e| Error::Registry(e.to_string()))?;
    let records = raw.into_iter().map(FormulaRecord::try_from).collect::<Result<Vec<_>>>()?;
    let mut ids: Vec<&str> = records.iter().map(|r| r.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Registry(format!("duplicate record id {}", w[0])));
    }
    Ok(records)
}

/// The records shipped with the library.
pub fn builtin_registry() -> Vec<FormulaRecord> {
    load_registry(BUILTIN).expect("built-in registry is well formed")
}
