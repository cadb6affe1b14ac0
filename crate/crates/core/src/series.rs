//! Polylogarithms, the trilogarithmic accelerator F(q) and the φ-series.

use rug::ops::Pow;

use crate::audit::{touch, Subsystem};
use crate::error::{domain, Error, Result};
use crate::mpnum::{cabs_f64, const_pi, const_zeta3, cpowi, Complex, PrecisionContext, Rational, Real};
use crate::numtheory::{bernoulli_exact, sigma3};

/// A point τ = x + iy of the upper half-plane with exact real part.
///
/// The nome is q = e^{2πiτ} and `log q` is *defined* as 2πiτ, which can differ
/// from the principal logarithm of q by a multiple of 2πi.
#[derive(Debug, Clone, PartialEq)]
pub struct Tau {
    x: Rational,
    y: Real,
    y_sq: Option<Rational>,
}

impl Tau {
    pub fn new(x: Rational, y: Real) -> Result<Self> {
        if y <= 0 || !y.is_finite() {
            return domain("Tau requires y > 0");
        }
        Ok(Self { x, y, y_sq: None })
    }

    /// τ = x + i√(y_sq) with y computed at the context precision.
    pub fn from_sqrt(x: Rational, y_sq: Rational, ctx: &PrecisionContext) -> Result<Self> {
        if y_sq <= 0 {
            return domain("Tau requires y > 0");
        }
        let y = ctx.rational(&y_sq).sqrt();
        Ok(Self { x, y, y_sq: Some(y_sq) })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Real {
        &self.y
    }

    /// y² when it is known exactly.
    pub fn y_sq(&self) -> Option<&Rational> {
        self.y_sq.as_ref()
    }

    pub fn tau(&self, ctx: &PrecisionContext) -> Complex {
        Complex::with_val(ctx.bits(), (ctx.rational(&self.x), &self.y))
    }

    /// 2πiτ.
    pub fn log_q(&self, ctx: &PrecisionContext) -> Complex {
        let two_pi = const_pi(ctx) * 2u32;
        let re = -Real::with_val(ctx.bits(), &two_pi * &self.y);
        let im = two_pi * ctx.rational(&self.x);
        Complex::with_val(ctx.bits(), (re, im))
    }

    /// log|q| = −2πy.
    pub fn log_abs_q(&self, ctx: &PrecisionContext) -> Real {
        let two_pi = const_pi(ctx) * 2u32;
        -(two_pi * &self.y)
    }

    pub fn q(&self, ctx: &PrecisionContext) -> Complex {
        self.log_q(ctx).exp()
    }

    pub fn abs_q_f64(&self) -> f64 {
        (-2.0 * std::f64::consts::PI * self.y.to_f64()).exp()
    }
}

/// e^{−π/3}, the largest nome modulus F(q) and the φ-series accept.
pub fn series_radius() -> f64 {
    (-std::f64::consts::PI / 3.0).exp()
}

fn radius_ok(abs_q: f64) -> bool {
    abs_q <= series_radius() * (1.0 + 1e-12)
}

/// Li_order(w) for order 2 or 3 and |w| ≤ 0.99.
pub fn polylog(order: u32, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if order != 2 && order != 3 {
        return Err(Error::Unsupported(format!("polylog order {order}; only 2 and 3 are implemented")));
    }
    let r = cabs_f64(w);
    if r > 0.99 {
        return domain(format!("polylog requires |w| <= 0.99, got {r}"));
    }
    touch(Subsystem::Series);
    if r <= 0.5 {
        Ok(polylog_direct(order, w, ctx))
    } else {
        polylog_log_series(order, w, ctx)
    }
}

fn polylog_direct(order: u32, w: &Complex, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let mut sum = Complex::new(bits);
    if w.is_zero() {
        return sum;
    }
    let mut power = Complex::with_val(bits, w);
    let eps = ctx.eps().to_f64().max(f64::MIN_POSITIVE);
    let mut n: u32 = 1;
    loop {
        let denom = Real::with_val(bits, n).pow(order);
        let term = Complex::with_val(bits, &power / &denom);
        sum += &term;
        // |w|^n / n^order bounds the remaining tail up to a factor 1/(1-|w|) ≤ 2.
        if cabs_f64(&term) < eps * 0.5 * cabs_f64(&sum).max(1e-300) || power.is_zero() {
            break;
        }
        power *= w;
        n += 1;
    }
    sum
}

/// ζ(−m) for m ≥ 0.
fn zeta_nonpositive(m: u32, ctx: &PrecisionContext) -> Result<Real> {
    if m == 0 {
        return Ok(ctx.real(-0.5));
    }
    if m % 2 == 0 {
        return Ok(ctx.zero());
    }
    let b = bernoulli_exact(m + 1)?;
    Ok(-ctx.rational(&b) / (m + 1))
}

/// Li_s(e^μ) = μ^{s−1}/(s−1)!·(H_{s−1} − log(−μ)) + Σ_{k≠s−1} ζ(s−k) μ^k/k!, valid for |μ| < 2π.
fn polylog_log_series(order: u32, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let pi = const_pi(ctx);
    let mu = Complex::with_val(bits, w.ln_ref());
    let log_neg_mu = Complex::with_val(bits, -&mu).ln();
    let zeta2 = Real::with_val(bits, &pi * &pi) / 6u32;
    let zeta3 = const_zeta3(ctx);
    let eps = ctx.eps().to_f64().max(f64::MIN_POSITIVE);

    let mut sum = Complex::new(bits);
    // mu_pow = μ^k / k!
    let mut mu_pow = Complex::with_val(bits, 1);
    let mut k: u32 = 0;
    let mut small_run = 0;
    loop {
        let coeff: Option<Real> = if k + 1 == order {
            // harmonic number H_{s−1}
            let h = if order == 2 { ctx.real(1) } else { ctx.real(1.5) };
            let c = Complex::with_val(bits, h - &log_neg_mu);
            sum += Complex::with_val(bits, &mu_pow * &c);
            None
        } else if k < order {
            Some(match order - k {
                2 => zeta2.clone(),
                3 => zeta3.clone(),
                _ => unreachable!("orders 2 and 3 only"),
            })
        } else {
            Some(zeta_nonpositive(k - order, ctx)?)
        };
        if let Some(c) = coeff {
            if !c.is_zero() {
                let term = Complex::with_val(bits, &mu_pow * &c);
                let small = cabs_f64(&term) < eps * cabs_f64(&sum).max(1e-300);
                sum += term;
                small_run = if small { small_run + 1 } else { 0 };
            }
        }
        if small_run >= 3 {
            break;
        }
        k += 1;
        if k > 20 * ctx.working_digits() {
            return Err(Error::Divergence("polylog log-series".into()));
        }
        mu_pow *= &mu;
        mu_pow /= k;
    }
    Ok(sum)
}

/// F(q) = −log³|q|/(3π) + (120/π)ζ(3) + (240/π) Σ_j [Li₃(qʲ) − log|qʲ|·Li₂(qʲ)].
pub fn big_f(q: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let r = cabs_f64(q);
    if q.is_zero() || !radius_ok(r) {
        return domain(format!("F(q) requires 0 < |q| <= e^(-pi/3), got |q| = {r}"));
    }
    let bits = ctx.bits();
    let log_abs = Real::with_val(bits, q.abs_ref()).ln();
    big_f_inner(q, &log_abs, ctx)
}

/// F(e^{2πiτ}) using the exact log|q| = −2πy.
pub fn big_f_tau(tau: &Tau, ctx: &PrecisionContext) -> Result<Complex> {
    if !radius_ok(tau.abs_q_f64()) {
        return domain(format!("F(q) requires |q| <= e^(-pi/3), got |q| = {}", tau.abs_q_f64()));
    }
    big_f_inner(&tau.q(ctx), &tau.log_abs_q(ctx), ctx)
}

fn big_f_inner(q: &Complex, log_abs: &Real, ctx: &PrecisionContext) -> Result<Complex> {
    touch(Subsystem::Series);
    let bits = ctx.bits();
    let pi = const_pi(ctx);
    let abs_q = log_abs.to_f64().exp();
    let l = log_abs.to_f64().abs();
    let cutoff = 10f64.powi(-(ctx.working_digits() as i32) - 5);

    let mut sum = Complex::new(bits);
    let mut qj = Complex::with_val(bits, q);
    let mut j: u32 = 1;
    loop {
        let log_abs_j = Real::with_val(bits, log_abs * j);
        let li3 = polylog(3, &qj, ctx)?;
        let li2 = polylog(2, &qj, ctx)?;
        sum += li3 - li2 * &log_abs_j;
        let jf = f64::from(j);
        if abs_q.powf(jf) * (1.0 + jf * l) < cutoff {
            break;
        }
        qj *= q;
        j += 1;
    }
    let cube = Real::with_val(bits, log_abs.pow(3u32));
    let head = -cube / (Real::with_val(bits, &pi * 3u32)) + const_zeta3(ctx) * 120u32 / &pi;
    let mut out = sum * 240u32 / &pi;
    out += head;
    Ok(out)
}

/// Σ_{n≥1} σ₃(n) qᵐⁿ / n³.
fn sigma3_series(q: &Complex, m: u32, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let qm = cpowi(q, m);
    let eps = ctx.eps().to_f64() * 1e-5;
    let mut sum = Complex::new(bits);
    let mut power = qm.clone();
    let mut n: u64 = 1;
    loop {
        let c = Real::with_val(bits, sigma3(n)) / Real::with_val(bits, n).pow(3u32);
        let term = Complex::with_val(bits, &power * &c);
        sum += &term;
        if cabs_f64(&power) * 1.21 < eps || power.is_zero() {
            break;
        }
        power *= &qm;
        n += 1;
    }
    sum
}

/// The s values for which closed forms of φ₁, φ₂, φ₃ are known.
fn phi_constants(s: &Rational) -> Result<(Rational, u32, u32, u32, u32)> {
    // (φ₂ constant / π², ζ(3) weight, weight of Σqⁿ, weight of Σq^{mn}, m)
    if *s == Rational::from((1, 2)) {
        Ok((Rational::from((1, 2)), 6, 16, 4, 4))
    } else if *s == Rational::from((1, 3)) {
        Ok((Rational::from((2, 3)), 10, 30, 10, 3))
    } else if *s == Rational::from((1, 4)) {
        Ok((Rational::from(1), 20, 80, 40, 2))
    } else if *s == Rational::from((1, 6)) {
        Err(Error::Unsupported(
            "phi is not available for s = 1/6: no closed form for the third extended \
             coefficient is known (the q-expansion of (q d/dq)^3 phi_3 involves a square root \
             of an Eisenstein series)"
                .into(),
        ))
    } else {
        Err(Error::Unsupported(format!("phi is only available for s in {{1/2, 1/3, 1/4}}, got {s}")))
    }
}

/// Taylor coefficient φᵢ(q) of y_x(z)/y₀(z) in x, with log q := 2πiτ.
pub fn phi(i: u32, s: &Rational, tau: &Tau, ctx: &PrecisionContext) -> Result<Complex> {
    let (c2, z3w, w1, wm, m) = phi_constants(s)?;
    if !(1..=3).contains(&i) {
        return Err(Error::Unsupported(format!("phi index {i}; only 1, 2, 3 exist")));
    }
    if !radius_ok(tau.abs_q_f64()) {
        return domain(format!("phi requires |q| <= e^(-pi/3), got {}", tau.abs_q_f64()));
    }
    touch(Subsystem::Series);
    let bits = ctx.bits();
    let pi = const_pi(ctx);
    let pi2 = Real::with_val(bits, &pi * &pi);
    let lq = tau.log_q(ctx);
    match i {
        1 => Ok(lq),
        2 => {
            let half_sq = Complex::with_val(bits, lq.square_ref()) / 2u32;
            Ok(half_sq + pi2 * ctx.rational(&c2))
        }
        _ => {
            let q = lq.clone().exp();
            let cube = cpowi(&lq, 3) / 6u32;
            let lin = Complex::with_val(bits, &lq * (pi2 * ctx.rational(&c2)));
            let z3 = const_zeta3(ctx) * z3w;
            let s1 = sigma3_series(&q, 1, ctx) * w1;
            let sm = sigma3_series(&q, m, ctx) * wm;
            Ok(cube + lin - z3 - s1 + sm)
        }
    }
}
