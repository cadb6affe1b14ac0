//! End-to-end acceptance run. Prints one line per criterion and exits non-zero
//! if any of them fails.

mod common;

use std::time::Instant;

use common::{z_quarter, z_third};
use rforge::harness::{run_all, verify, Filter, VerifyResult};
use rforge::hyper::{
    pfq_continue_with, ramanujan_sum, y0, yx_completed, yx_taylor, CompanionSpec, ContinuationOptions,
    HypergeometricSpec, LemmaFit, Side,
};
use rforge::lattice::{epstein_brute, epstein_fast, reduce_form, QuadraticForm};
use rforge::modular::abz_half;
use rforge::mpnum::{cabs, const_pi, Rational};
use rforge::numtheory::{dirichlet_l, CharacterIndex};
use rforge::registry::{builtin_registry, FormulaRecord};
use rforge::relations::minpoly;
use rforge::series::{phi, Tau};
use rforge::{Complex, PrecisionContext, Real};

const DIGITS: u32 = 60;

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn diff(a: &Complex, b: &Complex) -> f64 {
    cabs(&Complex::with_val(a.prec().0, a - b)).to_f64()
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    diff(a, b) / cabs(b).to_f64()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Verify every record matching `glob` and require rel_err ≤ tol within `limit` seconds.
fn records_within(records: &[FormulaRecord], glob: &str, expect: usize, tol: f64, limit: f64) -> Outcome {
    let c = ctx(DIGITS);
    let start = Instant::now();
    let res = run_all(records, &Filter::id_glob(glob).unwrap(), &c, true);
    let secs = start.elapsed().as_secs_f64();
    judge(&res, expect, tol, secs, limit)
}

fn judge(res: &[VerifyResult], expect: usize, tol: f64, secs: f64, limit: f64) -> Outcome {
    let mut worst = 0f64;
    let mut bad = Vec::new();
    for r in res {
        match r.rel_err.as_ref().map(|e| e.to_f64()) {
            Some(e) if r.status.is_pass() && e <= tol => worst = worst.max(e),
            _ => bad.push(format!("{} ({})", r.id, r.status.label())),
        }
    }
    let ok = res.len() == expect && bad.is_empty() && secs < limit;
    let mut detail = format!("{}/{expect} records, worst rel_err {worst:.2e}, {secs:.1}s", res.len() - bad.len());
    if !bad.is_empty() {
        detail += &format!("; failing: {}", bad.join(", "));
    }
    outcome(ok, detail)
}

fn catalan(records: &[FormulaRecord]) -> Outcome {
    records_within(records, "catalan", 1, 1e-40, 30.0)
}

fn s_formulas(records: &[FormulaRecord]) -> Outcome {
    let c = ctx(DIGITS);
    let mut parts = Vec::new();
    let mut ok = true;
    for (id, tol) in [("S36", 1e-40), ("S20", 1e-40), ("S52", 1e-40), ("S36-div", 1e-30)] {
        let rec = records.iter().find(|r| r.id == id).unwrap();
        let r = verify(rec, &c);
        let e = r.rel_err.as_ref().map_or(f64::INFINITY, |e| e.to_f64());
        ok &= r.status.is_pass() && e <= tol;
        parts.push(format!("{id} {e:.1e}"));
    }
    outcome(ok, parts.join(", "))
}

fn brute_vs_fast() -> Outcome {
    let c = ctx(30);
    let two = c.real(2);
    let forms = [(1, 0, 8), (3, 2, 3), (1, 1, 4), (2, 1, 2), (1, 0, 36), (4, 0, 9), (1, 0, 20), (4, 0, 5), (1, 0, 52), (4, 0, 13)];
    let start = Instant::now();
    let mut worst = 0f64;
    for (a, b, cc) in forms {
        let f = QuadraticForm::integer(a, b, cc).unwrap();
        let brute = epstein_brute(&f, &two, 3000, &c).unwrap().value.to_f64();
        let fast = epstein_fast(&f, &c).unwrap().to_f64();
        worst = worst.max((brute - fast).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-5 && secs < 120.0, format!("10 forms, max |brute − fast| {worst:.2e}, {secs:.1}s"))
}

/// S-sums against their L-value reductions at general t, with the brute oracle at t = 3.
fn l_reductions(records: &[FormulaRecord]) -> Outcome {
    let fast = records_within(records, "lred-*", 8, 1e-40, 60.0);

    let c = ctx(30);
    let t = c.real(3);
    let l = |k: i64| dirichlet_l(CharacterIndex::new(k).unwrap(), &t, &c).unwrap().to_f64();
    let p2 = |e: f64| 2f64.powf(e);
    let tf = 3.0;
    let m = 1.0 - p2(-tf) + p2(1.0 - 2.0 * tf);
    let p = 1.0 + p2(-tf) + p2(1.0 - 2.0 * tf);
    let thirds = 1.0 + 3f64.powf(1.0 - 2.0 * tf);
    let cases: [(&[(i64, i64, i64)], f64); 6] = [
        (&[(1, 0, 36), (4, 0, 9)], m * thirds * l(1) * l(-4) + p * l(12) * l(-3)),
        (&[(1, 0, 9)], thirds * l(1) * l(-4) + l(12) * l(-3)),
        (&[(4, 0, 5), (1, 0, 20)], m * l(1) * l(-20) + p * l(5) * l(-4)),
        (&[(1, 0, 5)], l(1) * l(-20) + l(5) * l(-4)),
        (&[(1, 0, 52), (4, 0, 13)], m * l(1) * l(-52) + p * l(13) * l(-4)),
        (&[(1, 0, 13)], l(1) * l(-52) + l(13) * l(-4)),
    ];
    let mut ok = fast.ok;
    let mut worst = 0f64;
    for (forms, expect) in cases {
        let (mut sum, mut tail) = (0.0, 0.0);
        for &(a, b, cc) in forms {
            let s = epstein_brute(&QuadraticForm::integer(a, b, cc).unwrap(), &t, 1500, &c).unwrap();
            sum += s.value.to_f64();
            tail += s.tail_bound;
        }
        let gap = (sum - expect).abs();
        // brute sums run in double precision
        ok &= gap <= tail + 1e-13 * expect;
        worst = worst.max(gap / expect);
    }
    outcome(ok, format!("t=2: {}; t=3: 6 identities, worst rel gap {worst:.1e}", fast.detail))
}

fn lemma_and_periodicity() -> Outcome {
    let c = ctx(40);
    let xs = [(0.13, 0.07), (0.71, -0.22), (-0.38, 0.4), (1.61, -0.05)];
    let mut worst = 0f64;
    for (s, z) in [(q(1, 2), c.complex((0.3, 0.4))), (q(1, 3), c.complex((0.2, -0.3)))] {
        let base = y0(&s, &z, &c).unwrap();
        let coeffs = yx_taylor(&s, &z, 2, &c).unwrap();
        let fit = LemmaFit::from_phi(&s, &z, &coeffs[0], &coeffs[1], &c).unwrap();
        for &x in &xs {
            let x = c.complex(x);
            let y = yx_completed(&s, &x, &z, &c).unwrap();
            worst = worst.max(diff(&y, &fit.eval(&s, &x, &base, &c)));
            let shifted = yx_completed(&s, &Complex::with_val(c.bits(), &x + 1u32), &z, &c).unwrap();
            worst = worst.max(diff(&y, &shifted));
        }
    }
    outcome(worst < 1e-25, format!("2 points x 4 shifts, max error {worst:.1e}"))
}

fn taylor_matches_phi() -> Outcome {
    let c = ctx(40);
    let taus = [
        Tau::new(q(0, 1), c.real(1.1)).unwrap(),
        Tau::new(q(1, 10), c.real(0.9)).unwrap(),
        Tau::new(q(-3, 20), c.real(1.3)).unwrap(),
    ];
    let mut worst = 0f64;
    for tau in &taus {
        for s in [q(1, 2), q(1, 3), q(1, 4)] {
            let z = if s == q(1, 2) {
                abz_half(tau, &c).unwrap().2
            } else if s == q(1, 3) {
                z_third(tau, &c)
            } else {
                z_quarter(tau, &c)
            };
            let coeffs = yx_taylor(&s, &z, 3, &c).unwrap();
            for i in 1..=3u32 {
                worst = worst.max(diff(&coeffs[i as usize - 1], &phi(i, &s, tau, &c).unwrap()));
            }
        }
    }
    outcome(worst < 1e-25, format!("3 tau x 3 s x 3 coefficients, max error {worst:.1e}"))
}

fn pslq_polynomials() -> Outcome {
    let c = ctx(DIGITS);
    let tau = Tau::from_sqrt(q(9, 16), q(15, 256), &c).unwrap();
    let (a, b, z) = abz_half(&tau, &c).unwrap();
    let got = [
        minpoly(&a, 4, &c).unwrap().render("a"),
        minpoly(&b, 4, &c).unwrap().render("b"),
        minpoly(&z, 4, &c).unwrap().render("z"),
    ];
    let want = ["a^2 - 11i*a + 1", "64*b^2 - 1680i*b + 495", "z^2 - 3008*z + 4096"];
    outcome(got == want, got.join("; "))
}

fn one_over_pi() -> Outcome {
    let c = ctx(DIGITS);
    let r3 = c.real(3).sqrt();
    let a = c.complex(Real::with_val(c.bits(), 4u32) / (r3.clone() * 3u32));
    let b = c.complex(Real::with_val(c.bits(), 5u32) / r3);
    let v = ramanujan_sum(&CompanionSpec::new(q(1, 3), a, b, c.complex(-4)).unwrap(), &c).unwrap();
    let inv_pi = c.complex(const_pi(&c).recip());
    let e = rel(&v, &inv_pi);
    let shown = v.real().to_string_radix(10, Some(20));
    outcome(e < 1e-30 && shown.starts_with("3.183098861837906"), format!("{shown}..., rel_err {e:.1e}"))
}

fn properties(records: &[FormulaRecord]) -> Outcome {
    // precision refinement
    let coarse = run_all(records, &Filter::default(), &ctx(DIGITS), true);
    let fine = run_all(records, &Filter::default(), &ctx(DIGITS + 30), true);
    // an exact-zero residual at 60 digits counts as the working-precision floor
    let floor = 10f64.powi(-(ctx(DIGITS).working_digits() as i32));
    let mut refine_ok = coarse.len() == fine.len();
    let mut least = f64::INFINITY;
    for (a, b) in coarse.iter().zip(&fine) {
        let (Some(ea), Some(eb)) = (&a.rel_err, &b.rel_err) else {
            refine_ok = false;
            continue;
        };
        let shrink = ea.to_f64().max(floor) / eb.to_f64().max(f64::MIN_POSITIVE);
        least = least.min(shrink);
        refine_ok &= b.status.is_pass() && shrink >= 1e20;
    }

    // step halving on the two farthest continuations
    let c = ctx(DIGITS);
    let mut halving = 0f64;
    for id in ["tbl3-row12", "tbl4-row11"] {
        let rec = records.iter().find(|r| r.id == id).unwrap();
        let s = c.complex(rec.s.as_ref().unwrap());
        let (a, b, z) = rec.abz(&c).unwrap();
        let r = Complex::with_val(c.bits(), &a / &b);
        let one = c.complex(1);
        let upper = vec![one.clone(), one.clone(), one.clone(), one.clone(), Complex::with_val(c.bits(), 2 - &r)];
        let lower = vec![
            c.complex(1.5),
            Complex::with_val(c.bits(), &s + 1u32),
            Complex::with_val(c.bits(), 2 - &s),
            Complex::with_val(c.bits(), 1 - &r),
        ];
        let spec = HypergeometricSpec::new(upper, lower).unwrap();
        let w = Complex::with_val(c.bits(), z.recip_ref());
        let run = |ratio: f64| {
            let opts = ContinuationOptions { step_ratio: ratio, ..Default::default() };
            pfq_continue_with(&spec, &w, None, Side::Below, opts, &c).unwrap()
        };
        halving = halving.max(rel(&run(0.25), &run(0.5)));
    }

    // SL₂ reduction invariance
    let mut invariance = 0f64;
    for (a, b, cc) in [(3, 4, 4), (7, 13, 11), (13, 30, 18), (5, -9, 6), (2, 7, 9), (1, 2, 2), (4, 0, 1), (9, 24, 17)] {
        let f = QuadraticForm::integer(a, b, cc).unwrap();
        let sf = c.complex(epstein_fast(&f, &c).unwrap());
        let sr = c.complex(epstein_fast(&reduce_form(&f).unwrap(), &c).unwrap());
        invariance = invariance.max(rel(&sf, &sr));
    }
    let inv_tol = 10f64.powi(-(DIGITS as i32) + 5);
    let ok = refine_ok && halving < 1e-40 && invariance < inv_tol;
    outcome(
        ok,
        format!(
            "refinement min shrink {least:.1e} over {} records; step halving {halving:.1e}; reduction {invariance:.1e}",
            fine.len()
        ),
    )
}

fn main() {
    let records = builtin_registry();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("catalan companion", Box::new(|| catalan(&records))),
        ("rational theorem formulas", Box::new(|| records_within(&records, "thm4-*", 9, 1e-40, 300.0))),
        ("F(q) values", Box::new(|| records_within(&records, "F-*", 22, 1e-40, 120.0))),
        ("divergent 5F4 rows", Box::new(|| {
            let start = Instant::now();
            let c = ctx(DIGITS);
            let mut res = run_all(&records, &Filter::id_glob("tbl3-*").unwrap(), &c, true);
            res.extend(run_all(&records, &Filter::id_glob("tbl4-*").unwrap(), &c, true));
            judge(&res, 25, 1e-30, start.elapsed().as_secs_f64(), 600.0)
        })),
        ("irrational rows and golden ratio", Box::new(|| {
            let start = Instant::now();
            let c = ctx(DIGITS);
            let mut res = run_all(&records, &Filter::id_glob("tbl5-*").unwrap(), &c, true);
            res.extend(run_all(&records, &Filter::id_glob("golden").unwrap(), &c, true));
            judge(&res, 11, 1e-40, start.elapsed().as_secs_f64(), f64::INFINITY)
        })),
        ("S-formulas", Box::new(|| s_formulas(&records))),
        ("brute vs fast lattice sums", Box::new(brute_vs_fast)),
        ("L-reductions", Box::new(|| l_reductions(&records))),
        ("trigonometric lemma and periodicity", Box::new(lemma_and_periodicity)),
        ("Taylor coefficients vs phi", Box::new(taylor_matches_phi)),
        ("PSLQ polynomials", Box::new(pslq_polynomials)),
        ("1/pi sanity", Box::new(one_over_pi)),
        ("property suite", Box::new(|| properties(&records))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.ok);
        println!("[{}] {:>2}. {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
