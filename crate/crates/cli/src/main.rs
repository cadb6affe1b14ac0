use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rforge::harness::{default_digits, json_report, run_all, Filter, Status, Summary};
use rforge::hyper::{pfq, HypergeometricSpec, Side};
use rforge::lattice::{epstein_brute, epstein_fast, QuadraticForm};
use rforge::mpnum::{fmt_complex, fmt_real, Rational};
use rforge::numtheory::{dirichlet_l, CharacterIndex};
use rforge::registry::{builtin_registry, eval_expr, load_registry, parse_expr, FormulaRecord, Kind};
use rforge::relations::minpoly;
use rforge::series::{big_f_tau, Tau};
use rforge::{Complex, PrecisionContext, Real};

#[derive(Parser)]
#[command(name = "rforge", version, about = "Verify companion-series, lattice-sum and L-value identities")]
struct Cli {
    /// Significant digits (default: RFORGE_DIGITS or 60).
    #[arg(long, global = true)]
    digits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Below,
    Above,
}

#[derive(Subcommand)]
enum Command {
    /// Check both sides of registry records.
    Verify {
        /// Glob over record ids, e.g. "tbl3-*".
        #[arg(long)]
        id: Option<String>,
        /// companion, ramanujan, F-value, S-formula or L-reduction.
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long)]
        parallel: bool,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Extra records, checked alongside the built-in ones.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Epstein sum S(A,B,C;t).
    Svalue {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Exponent; anything other than 2 needs --brute.
        #[arg(long, default_value = "2")]
        t: String,
        /// Also sum directly over max(|n|,|m|) <= R.
        #[arg(long)]
        brute: Option<u32>,
    },
    /// F(q) at τ = x + iy.
    Fq {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        y_expr: String,
    },
    /// Dirichlet L-value L_k(t).
    Lvalue {
        #[arg(allow_hyphen_values = true)]
        k: i64,
        t: String,
    },
    /// Generalized hypergeometric pFq, continued past |w| = 1 when needed.
    Hyper {
        /// Comma-separated upper parameters, e.g. "1,1,-1/2".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        upper: String,
        /// Comma-separated lower parameters.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        lower: String,
        #[arg(long, allow_hyphen_values = true)]
        arg: String,
        #[arg(long, value_enum, default_value = "below")]
        side: SideArg,
    },
    /// Integer minimal polynomial of an algebraic constant.
    Minpoly {
        #[arg(long)]
        value: String,
        #[arg(long, default_value_t = 4)]
        maxdeg: usize,
    },
    /// List the built-in records.
    List,
}

/// A decimal literal or an expression.
fn eval(text: &str, ctx: &PrecisionContext) -> Result<Complex> {
    if let Ok(v) = Real::parse(text) {
        return Ok(ctx.complex(v));
    }
    let e = parse_expr(text).with_context(|| format!("in `{text}`"))?;
    Ok(eval_expr(&e, ctx)?)
}

fn rational(text: &str) -> Result<Rational> {
    match parse_expr(text)?.as_rational() {
        Some(r) => Ok(r),
        None => bail!("`{text}` is not a rational number"),
    }
}

/// Split on commas that are not inside parentheses.
fn split_list(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn real(text: &str, ctx: &PrecisionContext) -> Result<Real> {
    let z = eval(text, ctx)?;
    if !z.imag().is_zero() {
        bail!("`{text}` is not real");
    }
    Ok(z.real().clone())
}

fn records(extra: Option<&PathBuf>) -> Result<Vec<FormulaRecord>> {
    let mut all = builtin_registry();
    if let Some(path) = extra {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let more = load_registry(&text).with_context(|| format!("loading {}", path.display()))?;
        for r in &more {
            if all.iter().any(|b| b.id == r.id) {
                bail!("record id {} in {} clashes with a built-in record", r.id, path.display());
            }
        }
        all.extend(more);
    }
    Ok(all)
}

fn verify(
    ctx: &PrecisionContext,
    id: Option<String>,
    kind: Option<Kind>,
    parallel: bool,
    json: Option<PathBuf>,
    registry: Option<PathBuf>,
) -> Result<bool> {
    let recs = records(registry.as_ref())?;
    let mut filter = match id {
        Some(g) => Filter::id_glob(&g)?,
        None => Filter::default(),
    };
    filter.kind = kind;
    let results = run_all(&recs, &filter, ctx, parallel);
    for r in &results {
        let err = r.rel_err.as_ref().map_or("-".to_string(), |e| fmt_real(e, 3));
        let note = match &r.status {
            Status::Pass => String::new(),
            Status::Fail(m) | Status::Skipped(m) => format!("  {m}"),
        };
        println!("{:<12} {:<12} {:<7} rel_err {:<10} {:>7.3}s{note}", r.id, r.kind, r.status.label(), err, r.elapsed);
    }
    let s = Summary::of(&results);
    println!("{} passed, {} failed, {} skipped at {} digits", s.passed, s.failed, s.skipped, ctx.digits());
    if let Some(path) = json {
        std::fs::write(&path, json_report(&results)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(s.all_passed())
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = PrecisionContext::new(cli.digits.unwrap_or_else(default_digits))?;
    let shown = ctx.digits() as usize;
    match cli.command {
        Command::Verify { id, kind, parallel, json, registry } => return verify(&ctx, id, kind, parallel, json, registry),
        Command::Svalue { a, b, c, t, brute } => {
            let form = QuadraticForm::new(rational(&a)?, rational(&b)?, rational(&c)?)?;
            let t = real(&t, &ctx)?;
            if t == 2 {
                println!("{}", fmt_real(&epstein_fast(&form, &ctx)?, shown));
            } else if brute.is_none() {
                bail!("only t = 2 has a fast path; pass --brute R for other exponents");
            }
            if let Some(radius) = brute {
                let s = epstein_brute(&form, &t, radius, &ctx)?;
                println!("brute {} (tail <= {:.3e})", fmt_real(&s.value, 17), s.tail_bound);
            }
        }
        Command::Fq { x, y_expr } => {
            let tau = Tau::new(rational(&x)?, real(&y_expr, &ctx)?)?;
            println!("{}", fmt_complex(&big_f_tau(&tau, &ctx)?, shown));
        }
        Command::Lvalue { k, t } => {
            println!("{}", fmt_real(&dirichlet_l(CharacterIndex::new(k)?, &real(&t, &ctx)?, &ctx)?, shown));
        }
        Command::Hyper { upper, lower, arg, side } => {
            let all = |v: &str| split_list(v).into_iter().map(|e| eval(e, &ctx)).collect::<Result<Vec<_>>>();
            let spec = HypergeometricSpec::new(all(&upper)?, all(&lower)?)?;
            let side = match side {
                SideArg::Below => Side::Below,
                SideArg::Above => Side::Above,
            };
            println!("{}", fmt_complex(&pfq(&spec, &eval(&arg, &ctx)?, side, &ctx)?, shown));
        }
        Command::Minpoly { value, maxdeg } => {
            let p = minpoly(&eval(&value, &ctx)?, maxdeg, &ctx)?;
            println!("{}", p.render("x"));
        }
        Command::List => {
            for r in builtin_registry() {
                println!("{:<12} {:<12} {}", r.id, r.kind, r.source);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
