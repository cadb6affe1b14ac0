//! Integer relation detection (PSLQ) and minimal polynomials of algebraic constants.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::mpnum::{Complex, Integer, PrecisionContext, Real};

/// Integer coefficients c with Σ cᵢxᵢ ≈ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub coefficients: Vec<Integer>,
    pub residual: Real,
}

impl Relation {
    pub fn coefficients_i64(&self) -> Option<Vec<i64>> {
        self.coefficients.iter().map(|c| c.to_i64()).collect()
    }
}

const GAMMA_SQ: (u32, u32) = (4, 3);

/// Default bound on relation coefficients: 10^(digits/3).
pub fn default_coefficient_bound(ctx: &PrecisionContext) -> Real {
    ctx.pow10((ctx.digits() / 3) as i32)
}

/// PSLQ with the default coefficient bound.
pub fn pslq(xs: &[Real], maxsteps: usize, ctx: &PrecisionContext) -> Result<Option<Relation>> {
    pslq_bounded(xs, maxsteps, &default_coefficient_bound(ctx), ctx)
}

fn nint(x: &Real) -> Integer {
    x.clone().round().to_integer().unwrap_or_default()
}

/// Ferguson–Bailey PSLQ. Returns `None` once no relation with coefficients below
/// `bound` can exist, or after `maxsteps` iterations.
pub fn pslq_bounded(xs: &[Real], maxsteps: usize, bound: &Real, ctx: &PrecisionContext) -> Result<Option<Relation>> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidParameter("pslq needs at least two values".into()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("pslq input is not finite".into()));
    }
    let bits = ctx.bits();
    let xs: Vec<Real> = xs.iter().map(|x| Real::with_val(bits, x)).collect();
    let threshold = ctx.pow10(-((ctx.working_digits() * 4 / 5) as i32));
    let tiny = ctx.eps();
    let scale = xs.iter().map(|x| x.clone().abs()).fold(ctx.zero(), |a, b| a.max(&b));
    if scale.is_zero() {
        return Err(Error::Domain("pslq input is all zeros".into()));
    }

    // A zero entry is a relation by itself.
    for (i, x) in xs.iter().enumerate() {
        if Real::with_val(bits, x / &scale).abs() < threshold {
            let mut c = vec![Integer::new(); n];
            c[i] = Integer::from(1);
            return Ok(Some(Relation { coefficients: c, residual: x.clone().abs() }));
        }
    }

    let gamma = Real::with_val(bits, GAMMA_SQ.0) / GAMMA_SQ.1;
    let gamma = gamma.sqrt();

    // s_k = sqrt(Σ_{j≥k} x_j²), normalized so that s_0 = 1.
    let mut s = vec![ctx.zero(); n];
    let mut acc = ctx.zero();
    for k in (0..n).rev() {
        acc += Real::with_val(bits, xs[k].square_ref());
        s[k] = Real::with_val(bits, acc.sqrt_ref());
    }
    let t = s[0].clone();
    let mut y: Vec<Real> = xs.iter().map(|x| Real::with_val(bits, x / &t)).collect();
    for v in s.iter_mut() {
        *v /= &t;
    }

    let mut h = vec![vec![ctx.zero(); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            h[i][j] = if i == j {
                Real::with_val(bits, &s[j + 1] / &s[j])
            } else {
                let d = Real::with_val(bits, &s[j] * &s[j + 1]);
                -Real::with_val(bits, &y[i] * &y[j]) / d
            };
        }
    }
    let mut a: Vec<Vec<Integer>> = (0..n).map(|i| (0..n).map(|j| Integer::from((i == j) as u8)).collect()).collect();
    let mut b = a.clone();

    let reduce = |i: usize, j: usize, h: &mut Vec<Vec<Real>>, y: &mut Vec<Real>, a: &mut Vec<Vec<Integer>>, b: &mut Vec<Vec<Integer>>| {
        if h[j][j].is_zero() {
            return;
        }
        let q = nint(&Real::with_val(bits, &h[i][j] / &h[j][j]));
        if q == 0 {
            return;
        }
        let qr = Real::with_val(bits, &q);
        let yi = Real::with_val(bits, &y[i] * &qr);
        y[j] += yi;
        for k in 0..=j {
            let d = Real::with_val(bits, &h[j][k] * &qr);
            h[i][k] -= d;
        }
        for k in 0..n {
            let d = Integer::from(&a[j][k] * &q);
            a[i][k] -= d;
            let d = Integer::from(&b[k][i] * &q);
            b[k][j] += d;
        }
    };

    for i in 1..n {
        for j in (0..i).rev() {
            reduce(i, j, &mut h, &mut y, &mut a, &mut b);
        }
    }

    for _ in 0..maxsteps {
        // pick m maximizing γ^{i+1} |H_ii|
        let mut m = 0;
        let mut best = ctx.zero();
        let mut gpow = gamma.clone();
        for i in 0..n - 1 {
            let v = Real::with_val(bits, &gpow * h[i][i].clone().abs());
            if v > best {
                best = v;
                m = i;
            }
            gpow *= &gamma;
        }
        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = Real::with_val(bits, h[m][m].hypot_ref(&h[m][m + 1]));
            if t0.is_zero() {
                return Err(Error::Precision("PSLQ breakdown: zero pivot".into()));
            }
            let t1 = Real::with_val(bits, &h[m][m] / &t0);
            let t2 = Real::with_val(bits, &h[m][m + 1] / &t0);
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = Real::with_val(bits, &t1 * &t3) + Real::with_val(bits, &t2 * &t4);
                row[m + 1] = Real::with_val(bits, &t1 * &t4) - Real::with_val(bits, &t2 * &t3);
            }
        }
        for i in m + 1..n {
            for j in (0..i.min(m + 2)).rev() {
                reduce(i, j, &mut h, &mut y, &mut a, &mut b);
            }
        }

        // a column of B is a relation when the matching y entry vanishes
        for (i, yi) in y.iter().enumerate() {
            if yi.clone().abs() < threshold {
                let coeffs: Vec<Integer> = b.iter().map(|row| row[i].clone()).collect();
                let max = coeffs.iter().map(|c| c.clone().abs()).max().unwrap_or_default();
                if Real::with_val(bits, &max) > *bound || max == 0 {
                    continue;
                }
                return Ok(Some(finish(coeffs, &xs, bits)));
            }
        }

        // every relation has norm ≥ 1/max|H_jj|
        let hmax = h.iter().enumerate().take(n - 1).map(|(j, row)| row[j].clone().abs()).fold(ctx.zero(), |a, b| a.max(&b));
        if hmax < tiny {
            return Err(Error::Precision("PSLQ exhausted the working precision".into()));
        }
        if Real::with_val(bits, hmax.recip_ref()) > *bound {
            return Ok(None);
        }
    }
    Ok(None)
}

fn finish(mut coeffs: Vec<Integer>, xs: &[Real], bits: u32) -> Relation {
    if let Some(last) = coeffs.iter().rev().find(|c| **c != 0) {
        if *last < 0 {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    let mut r = Real::new(bits);
    for (c, x) in coeffs.iter().zip(xs) {
        r += Real::with_val(bits, x * c);
    }
    Relation { coefficients: coeffs, residual: r.abs() }
}

/// An integer polynomial Σ cₖ tᵏ satisfied by α (real case) or by α/i.
#[derive(Debug, Clone, PartialEq)]
pub struct MinPoly {
    /// Coefficients in ascending degree, content 1, leading coefficient positive.
    pub coefficients: Vec<Integer>,
    /// True when the polynomial is in t = α/i rather than α.
    pub imaginary: bool,
}

impl MinPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Gaussian-integer coefficients (re, im) of the polynomial in α itself,
    /// scaled so the leading coefficient is a positive integer.
    pub fn in_alpha(&self) -> Vec<(Integer, Integer)> {
        let d = self.degree();
        // cₖ (α/i)ᵏ = cₖ (−i)ᵏ αᵏ; multiply through by iᵈ so the leading term is cₐ αᵈ.
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if !self.imaginary {
                    return (c.clone(), Integer::new());
                }
                let c = c.clone();
                match (d - k) % 4 {
                    0 => (c, Integer::new()),
                    1 => (Integer::new(), c),
                    2 => (-c, Integer::new()),
                    _ => (Integer::new(), -c),
                }
            })
            .collect()
    }

    /// Render as a polynomial in `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, (re, im)) in self.in_alpha().iter().enumerate().rev() {
            let (sign, mag, unit) = if *im == 0 {
                if *re == 0 {
                    continue;
                }
                (*re < 0, re.clone().abs(), "")
            } else {
                (*im < 0, im.clone().abs(), "i")
            };
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mag == 1 && k > 0 {
                out.push_str(unit);
                if !unit.is_empty() {
                    out.push('*');
                }
            } else {
                out.push_str(&mag.to_string());
                out.push_str(unit);
                if k > 0 {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

/// Lowest-degree integer polynomial (degree ≤ `maxdeg`) vanishing at α to 10^(−digits/2).
pub fn minpoly(alpha: &Complex, maxdeg: usize, ctx: &PrecisionContext) -> Result<MinPoly> {
    if maxdeg == 0 || maxdeg > 8 {
        return Err(Error::InvalidParameter(format!("minpoly degree must be in 1..=8, got {maxdeg}")));
    }
    let bits = ctx.bits();
    let re = Real::with_val(bits, alpha.real());
    let im = Real::with_val(bits, alpha.imag());
    let mag = Real::with_val(bits, re.hypot_ref(&im));
    let negligible = Real::with_val(bits, &mag * ctx.pow10(-((ctx.digits() / 2) as i32)));
    let (t, imaginary) = if im.clone().abs() <= negligible {
        (re, false)
    } else if re.clone().abs() <= negligible {
        (im, true)
    } else {
        return Err(Error::Unsupported("minpoly handles real or purely imaginary values only".into()));
    };
    let accept = ctx.pow10(-((ctx.digits() / 2) as i32));
    for deg in 1..=maxdeg {
        let powers: Vec<Real> = (0..=deg as u32).map(|k| Real::with_val(bits, (&t).pow(k))).collect();
        let Some(rel) = pslq(&powers, 2000 * deg, ctx)? else { continue };
        let mut coeffs = rel.coefficients;
        if coeffs[deg] == 0 {
            continue;
        }
        let content = coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c));
        for c in coeffs.iter_mut() {
            *c /= &content;
        }
        if coeffs[deg] < 0 {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut value = Real::new(bits);
        for c in coeffs.iter().rev() {
            value *= &t;
            value += c;
        }
        let scale = powers.iter().zip(&coeffs).map(|(p, c)| Real::with_val(bits, p * c).abs()).fold(ctx.zero(), |a, b| a.max(&b));
        if value.abs() <= Real::with_val(bits, &accept * scale.max(&ctx.real(1))) {
            return Ok(MinPoly { coefficients: coeffs, imaginary });
        }
    }
    Err(Error::NotFound(format!("no integer polynomial of degree <= {maxdeg}")))
}
