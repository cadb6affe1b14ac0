//! Generalized hypergeometric functions: direct series, continuation along the
//! holonomic ODE, the completed function Y_x and the Ramanujan/companion sums.

pub mod gamma;
mod ode;

use crate::audit::{touch, Subsystem};
use crate::error::{domain, Error, Result};
use crate::mpnum::{cabs_f64, const_pi, Complex, PrecisionContext, Rational, Real};

pub use gamma::{gamma, pochhammer};
pub use ode::{ContinuationOptions, ContinuationPath};

/// Largest |w| summed directly when p = q + 1.
pub const SERIES_RADIUS: f64 = 0.75;

/// Cut-off for the direct Ramanujan and companion sums.
const DIRECT_RADIUS: f64 = 0.5;

/// Side from which a target on the cut [1, ∞) is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// Im w → 0⁻, the convention used throughout.
    #[default]
    Below,
    Above,
}

/// Upper and lower parameters of a pFq.
#[derive(Debug, Clone)]
pub struct HypergeometricSpec {
    upper: Vec<Complex>,
    lower: Vec<Complex>,
}

fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

impl HypergeometricSpec {
    pub fn new(upper: Vec<Complex>, lower: Vec<Complex>) -> Result<Self> {
        if upper.len() > lower.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "{}F{} is not supported: need p <= q + 1",
                upper.len(),
                lower.len()
            )));
        }
        if let Some(b) = lower.iter().find(|b| is_nonpositive_integer(b)) {
            return Err(Error::InvalidParameter(format!(
                "lower parameter {} is a non-positive integer",
                b.real().to_f64()
            )));
        }
        Ok(Self { upper, lower })
    }

    pub fn from_rationals(upper: &[Rational], lower: &[Rational], ctx: &PrecisionContext) -> Result<Self> {
        let conv = |v: &[Rational]| v.iter().map(|r| ctx.complex(r)).collect();
        Self::new(conv(upper), conv(lower))
    }

    pub fn upper(&self) -> &[Complex] {
        &self.upper
    }

    pub fn lower(&self) -> &[Complex] {
        &self.lower
    }

    fn is_entire(&self) -> bool {
        self.upper.len() <= self.lower.len()
    }
}

/// Terms c_n wⁿ of the defining series, summed at least `min_terms` deep and
/// until they are negligible even after weighting by n^(q+1).
pub(crate) fn series_terms(
    spec: &HypergeometricSpec,
    w: &Complex,
    ctx: &PrecisionContext,
    min_terms: usize,
) -> Result<Vec<Complex>> {
    let bits = ctx.bits();
    let eps = ctx.eps().to_f64() * 1e-5;
    let weight = spec.lower.len() as i32 + 1;
    let max_terms = 200 * ctx.working_digits() as usize + 2000;
    let mut terms = vec![ctx.complex(1)];
    let mut term = ctx.complex(1);
    let mut scale = 1.0f64;
    let mut quiet = 0;
    for n in 0u32.. {
        let nn = n as usize;
        if nn > max_terms {
            return Err(Error::Divergence(format!("hypergeometric series did not converge in {max_terms} terms")));
        }
        for a in &spec.upper {
            term *= Complex::with_val(bits, a + n);
        }
        for b in &spec.lower {
            term /= Complex::with_val(bits, b + n);
        }
        term *= w;
        term /= n + 1;
        if term.is_zero() {
            break;
        }
        let mag = cabs_f64(&term);
        if !mag.is_finite() {
            return Err(Error::Divergence("hypergeometric series overflowed".into()));
        }
        scale = scale.max(mag);
        terms.push(term.clone());
        if mag * f64::from(n + 2).powi(weight) < eps * scale {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 && nn + 1 >= min_terms {
            break;
        }
    }
    Ok(terms)
}

fn sum_terms(terms: &[Complex], bits: u32) -> Complex {
    let mut s = Complex::new(bits);
    for t in terms.iter().rev() {
        s += t;
    }
    s
}

/// Σ ∏(upper)ₙ/∏(lower)ₙ · wⁿ/n! summed directly.
pub fn pfq_series(spec: &HypergeometricSpec, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let r = cabs_f64(w);
    if !spec.is_entire() && r > SERIES_RADIUS {
        return Err(Error::Divergence(format!(
            "direct series needs |w| <= {SERIES_RADIUS} when p = q + 1, got {r}"
        )));
    }
    touch(Subsystem::Hyper);
    Ok(sum_terms(&series_terms(spec, w, ctx, 0)?, ctx.bits()))
}

/// Analytic continuation of the series to `w`, along `path` or the default route.
pub fn pfq_continue(
    spec: &HypergeometricSpec,
    w: &Complex,
    path: Option<&ContinuationPath>,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let side = path.map(|p| p.side).unwrap_or_default();
    pfq_continue_with(spec, w, path, side, ContinuationOptions::default(), ctx)
}

/// [`pfq_continue`] with explicit side and step options.
pub fn pfq_continue_with(
    spec: &HypergeometricSpec,
    w: &Complex,
    path: Option<&ContinuationPath>,
    side: Side,
    opts: ContinuationOptions,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    touch(Subsystem::Hyper);
    ode::continue_to(spec, w, path, side, opts, ctx)
}

/// Series when it converges comfortably, continuation otherwise.
pub fn pfq(spec: &HypergeometricSpec, w: &Complex, side: Side, ctx: &PrecisionContext) -> Result<Complex> {
    if spec.is_entire() || cabs_f64(w) <= SERIES_RADIUS {
        pfq_series(spec, w, ctx)
    } else {
        pfq_continue_with(spec, w, None, side, ContinuationOptions::default(), ctx)
    }
}

fn check_s(s: &Rational) -> Result<()> {
    if *s <= 0 || *s >= 1 {
        return domain(format!("s must lie in (0, 1), got {s}"));
    }
    Ok(())
}

fn half(ctx: &PrecisionContext) -> Complex {
    ctx.complex(0.5)
}

/// y₀(z) = ₃F₂(s, 1/2, 1−s; 1, 1; z).
pub fn y0(s: &Rational, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_s(s)?;
    let s_c = ctx.complex(s);
    let spec = HypergeometricSpec::new(
        vec![s_c.clone(), half(ctx), Complex::with_val(ctx.bits(), 1 - &s_c)],
        vec![ctx.complex(1), ctx.complex(1)],
    )?;
    pfq(&spec, z, Side::Below, ctx)
}

/// (1/2)ₓ(1−s)ₓ(s)ₓ/(1)ₓ³.
fn upper_prefactor(s: &Complex, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let one = ctx.complex(1);
    let p = pochhammer(&half(ctx), x, ctx)?
        * pochhammer(&Complex::with_val(bits, 1 - s), x, ctx)?
        * pochhammer(s, x, ctx)?;
    let d = pochhammer(&one, x, ctx)?;
    Ok(p / Complex::with_val(bits, d.square_ref()) / d)
}

/// (−1/2)ₓ(s−1)ₓ(−s)ₓ/(1)ₓ³.
fn lower_prefactor(s: &Complex, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let one = ctx.complex(1);
    let p = pochhammer(&ctx.complex(-0.5), x, ctx)?
        * pochhammer(&Complex::with_val(bits, s - 1u32), x, ctx)?
        * pochhammer(&Complex::with_val(bits, -s), x, ctx)?;
    let d = pochhammer(&one, x, ctx)?;
    Ok(p / Complex::with_val(bits, d.square_ref()) / d)
}

/// z^e on the principal branch.
fn cpow(z: &Complex, e: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if z.is_zero() {
        return domain("z^x needs z != 0");
    }
    Ok((Complex::with_val(ctx.bits(), z.ln_ref()) * e).exp())
}

/// The positive half y_x(z) of the completed series.
pub fn yx(s: &Rational, x: &Complex, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_s(s)?;
    if x.is_zero() {
        return y0(s, z, ctx);
    }
    let bits = ctx.bits();
    let s_c = ctx.complex(s);
    let xp1 = Complex::with_val(bits, x + 1u32);
    let spec = HypergeometricSpec::new(
        vec![
            ctx.complex(1),
            Complex::with_val(bits, x + 0.5f64),
            Complex::with_val(bits, x + 1u32) - &s_c,
            Complex::with_val(bits, x + &s_c),
        ],
        vec![xp1.clone(), xp1.clone(), xp1],
    )?;
    let f = pfq(&spec, z, Side::Below, ctx)?;
    Ok(cpow(z, x, ctx)? * upper_prefactor(&s_c, x, ctx)? * f)
}

/// The completed function Y_x(z) for z off the real axis.
pub fn yx_completed(s: &Rational, x: &Complex, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_s(s)?;
    if z.imag().is_zero() {
        return domain("Y_x is defined for z off the real axis");
    }
    let positive = yx(s, x, z, ctx)?;
    if x.is_zero() {
        return Ok(positive);
    }
    let bits = ctx.bits();
    let s_c = ctx.complex(s);
    let one_minus_x = Complex::with_val(bits, 1 - x);
    let spec = HypergeometricSpec::new(
        vec![ctx.complex(1), one_minus_x.clone(), one_minus_x.clone(), one_minus_x],
        vec![
            Complex::with_val(bits, 1.5f64 - x),
            Complex::with_val(bits, 2u32 - &s_c) - x,
            Complex::with_val(bits, 1u32 + &s_c) - x,
        ],
    )?;
    let inv = Complex::with_val(bits, z.recip_ref());
    let f = pfq(&spec, &inv, Side::Below, ctx)?;
    let s1s = ctx.rational(&Rational::from(s * (1 - s.clone())));
    let x3 = Complex::with_val(bits, x.square_ref()) * x;
    let coef = x3 * 2u32 / s1s;
    let zx1 = cpow(z, &Complex::with_val(bits, x - 1u32), ctx)?;
    let negative = coef * zx1 * lower_prefactor(&s_c, x, ctx)? * f;
    Ok(positive - negative)
}

/// Taylor coefficients φ₁..φₙ of y_x(z)/y₀(z) in x, from a Cauchy integral
/// over a circle well inside the nearest Pochhammer pole.
pub fn yx_taylor(s: &Rational, z: &Complex, n: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    check_s(s)?;
    let bits = ctx.bits();
    let sf = s.to_f64();
    let radius = sf.min(1.0 - sf).min(0.5) / 4.0;
    // Aliasing error decays like (r/R')^K with R' a little inside the pole distance.
    let samples = (f64::from(ctx.working_digits() + 5) / 0.5).ceil() as usize + n;
    let base = y0(s, z, ctx)?;
    let pi = const_pi(ctx);
    let r = ctx.real(radius);
    let mut coeffs = vec![ctx.czero(); n + 1];
    for j in 0..samples {
        let angle = Real::with_val(bits, &pi * 2u32) * j as u32 / samples as u32;
        let unit = Complex::with_val(bits, (angle.clone().cos(), angle.sin()));
        let x = Complex::with_val(bits, &unit * &r);
        let ratio = yx(s, &x, z, ctx)? / &base;
        // conj(unit)^k
        let conj = Complex::with_val(bits, unit.conj_ref());
        let mut rot = ctx.complex(1);
        for c in coeffs.iter_mut() {
            *c += Complex::with_val(bits, &ratio * &rot);
            rot *= &conj;
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut rk = ctx.real(1);
    for c in coeffs.into_iter().skip(1) {
        rk *= &r;
        out.push(c / samples as u32 / &rk);
    }
    Ok(out)
}

/// The constants u, v of the trigonometric form of Y_x.
///
/// As printed the form carries e^{iπx} and −iv sin 2πx, which is right for
/// Im z > 0. Below the real axis Y_x(z) = conj(Y_{x̄}(z̄)) flips both signs, so
/// the half-plane is stored with the fit.
#[derive(Debug, Clone)]
pub struct LemmaFit {
    pub u: Complex,
    pub v: Complex,
    upper: bool,
}

fn csc2(s: &Rational, ctx: &PrecisionContext) -> Real {
    let sin = Real::with_val(ctx.bits(), const_pi(ctx) * ctx.rational(s)).sin();
    Real::with_val(ctx.bits(), sin.square_ref()).recip()
}

impl LemmaFit {
    /// Solve φ₁ = ±iπ(1−2v), φ₂ = π²(−2−2u+2v+csc²πs), the sign being that of Im z.
    pub fn from_phi(s: &Rational, z: &Complex, phi1: &Complex, phi2: &Complex, ctx: &PrecisionContext) -> Result<Self> {
        if z.imag().is_zero() {
            return domain("the trigonometric form of Y_x needs z off the real axis");
        }
        let upper = z.imag().is_sign_positive();
        let bits = ctx.bits();
        let pi = const_pi(ctx);
        let i_pi = Complex::with_val(bits, (0, &pi)) * if upper { 1 } else { -1 };
        let v = (1 - Complex::with_val(bits, phi1 / &i_pi)) / 2u32;
        let pi2 = Real::with_val(bits, pi.square_ref());
        let u = (Complex::with_val(bits, &v * 2u32) + csc2(s, ctx) - 2u32 - Complex::with_val(bits, phi2 / &pi2)) / 2u32;
        Ok(Self { u, v, upper })
    }

    /// y₀ e^{±iπx} sin²πs / (cos πx (cos²πx − cos²πs)) · (−u + (u+1)cos 2πx ∓ iv sin 2πx).
    pub fn eval(&self, s: &Rational, x: &Complex, y0: &Complex, ctx: &PrecisionContext) -> Complex {
        let bits = ctx.bits();
        let pi = const_pi(ctx);
        let i = Complex::with_val(bits, (0, if self.upper { 1 } else { -1 }));
        let pix = Complex::with_val(bits, x * &pi);
        let ps = Real::with_val(bits, &pi * ctx.rational(s));
        let sin2s = Real::with_val(bits, ps.clone().sin().square_ref());
        let cos2s = Real::with_val(bits, ps.cos().square_ref());
        let cosx = Complex::with_val(bits, pix.cos_ref());
        let cos2x = Complex::with_val(bits, cosx.square_ref());
        let denom = Complex::with_val(bits, &cosx * (cos2x - &cos2s));
        let e = Complex::with_val(bits, &pix * &i).exp();
        let two_pix = Complex::with_val(bits, &pix * 2u32);
        let trig = Complex::with_val(bits, -&self.u)
            + Complex::with_val(bits, &self.u + 1u32) * Complex::with_val(bits, two_pix.cos_ref())
            - Complex::with_val(bits, &self.v * &i) * two_pix.sin();
        y0.clone() * e * sin2s / denom * trig
    }
}

/// Parameters of a Ramanujan-type series and its companion.
#[derive(Debug, Clone)]
pub struct CompanionSpec {
    pub s: Rational,
    pub a: Complex,
    pub b: Complex,
    pub z: Complex,
}

impl CompanionSpec {
    pub fn new(s: Rational, a: Complex, b: Complex, z: Complex) -> Result<Self> {
        check_s(&s)?;
        Ok(Self { s, a, b, z })
    }

    fn check_z(&self) -> Result<()> {
        if self.z.is_zero() || self.z == 1 {
            return domain("z must avoid the singular points 0 and 1");
        }
        Ok(())
    }
}

/// Σ_{n≥1} (1)ₙ³/((s)ₙ(1/2)ₙ(1−s)ₙ) · (a−bn)/n³ · z⁻ⁿ, continued through ₅F₄ when it diverges.
pub fn companion_sum(cs: &CompanionSpec, ctx: &PrecisionContext) -> Result<Complex> {
    cs.check_z()?;
    touch(Subsystem::Hyper);
    let bits = ctx.bits();
    let s = ctx.complex(&cs.s);
    let inv = Complex::with_val(bits, cs.z.recip_ref());
    if cabs_f64(&inv) <= DIRECT_RADIUS {
        return Ok(direct_companion(cs, &s, &inv, ctx));
    }
    let s1s = Complex::with_val(bits, &s * Complex::with_val(bits, 1 - &s));
    let base = Complex::with_val(bits, &inv * 2u32) / s1s;
    let mut lower = vec![
        ctx.complex(1.5),
        Complex::with_val(bits, 1u32 + &s),
        Complex::with_val(bits, 2u32 - &s),
    ];
    let mut upper = vec![ctx.complex(1); 4];
    let pref = if cs.b.is_zero() {
        base * &cs.a
    } else {
        let ratio = Complex::with_val(bits, &cs.a / &cs.b);
        upper.push(Complex::with_val(bits, 2u32 - &ratio));
        lower.push(Complex::with_val(bits, 1u32 - &ratio));
        base * Complex::with_val(bits, &cs.a - &cs.b)
    };
    let spec = HypergeometricSpec::new(upper, lower)?;
    Ok(pref * pfq(&spec, &inv, Side::Below, ctx)?)
}

fn direct_companion(cs: &CompanionSpec, s: &Complex, inv: &Complex, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let eps = ctx.eps().to_f64() * 1e-3;
    let one_minus_s = Complex::with_val(bits, 1 - s);
    let mut c = ctx.complex(1); // (1)ₙ³/((s)ₙ(1/2)ₙ(1−s)ₙ) z⁻ⁿ
    let mut sum = ctx.czero();
    let mut quiet = 0;
    for n in 1u32.. {
        let m = n - 1;
        let n3 = Real::with_val(bits, u64::from(n).pow(3));
        let d = Complex::with_val(bits, s + m) * Complex::with_val(bits, &one_minus_s + m) * (f64::from(m) + 0.5);
        c *= n3.clone();
        c /= d;
        c *= inv;
        let weight = Complex::with_val(bits, &cs.a - Complex::with_val(bits, &cs.b * n));
        let term = Complex::with_val(bits, &c * weight) / n3;
        sum += &term;
        if cabs_f64(&term) <= eps * cabs_f64(&sum).max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Σ_{n≥0} (s)ₙ(1/2)ₙ(1−s)ₙ/(1)ₙ³ · (a+bn) zⁿ, continued through ₄F₃ when |z| is large.
pub fn ramanujan_sum(cs: &CompanionSpec, ctx: &PrecisionContext) -> Result<Complex> {
    touch(Subsystem::Hyper);
    let bits = ctx.bits();
    let s = ctx.complex(&cs.s);
    if cabs_f64(&cs.z) <= DIRECT_RADIUS {
        return Ok(direct_ramanujan(cs, &s, ctx));
    }
    cs.check_z()?;
    let one_minus_s = Complex::with_val(bits, 1 - &s);
    if cs.b.is_zero() {
        return Ok(y0(&cs.s, &cs.z, ctx)? * &cs.a);
    }
    if cs.a.is_zero() {
        // b z y₀'(z) = b z · s(1−s)/2 · ₃F₂(1+s, 3/2, 2−s; 2, 2; z)
        let spec = HypergeometricSpec::new(
            vec![Complex::with_val(bits, 1u32 + &s), ctx.complex(1.5), Complex::with_val(bits, 1u32 + &one_minus_s)],
            vec![ctx.complex(2), ctx.complex(2)],
        )?;
        let pref = Complex::with_val(bits, &s * &one_minus_s) / 2u32 * &cs.z * &cs.b;
        return Ok(pref * pfq(&spec, &cs.z, Side::Below, ctx)?);
    }
    let ratio = Complex::with_val(bits, &cs.a / &cs.b);
    let spec = HypergeometricSpec::new(
        vec![s, half(ctx), one_minus_s, Complex::with_val(bits, 1u32 + &ratio)],
        vec![ctx.complex(1), ctx.complex(1), ratio],
    )?;
    Ok(pfq(&spec, &cs.z, Side::Below, ctx)? * &cs.a)
}

fn direct_ramanujan(cs: &CompanionSpec, s: &Complex, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let eps = ctx.eps().to_f64() * 1e-3;
    let one_minus_s = Complex::with_val(bits, 1 - s);
    let mut c = ctx.complex(1);
    let mut sum = cs.a.clone();
    if cs.z.is_zero() {
        return sum;
    }
    let mut quiet = 0;
    for n in 1u32.. {
        let m = n - 1;
        let num = Complex::with_val(bits, s + m) * Complex::with_val(bits, &one_minus_s + m) * (f64::from(m) + 0.5);
        c *= num;
        c /= Real::with_val(bits, u64::from(n).pow(3));
        c *= &cs.z;
        let weight = Complex::with_val(bits, &cs.b * n) + &cs.a;
        let term = Complex::with_val(bits, &c * weight);
        sum += &term;
        if cabs_f64(&term) <= eps * cabs_f64(&sum).max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::cabs;
    use crate::numtheory::l_value;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn diff(a: &Complex, b: &Complex) -> f64 {
        cabs(&Complex::with_val(a.prec().0, a - b)).to_f64()
    }

    fn q(n: i32, d: i32) -> Rational {
        Rational::from((n, d))
    }

    fn spec(upper: &[Rational], lower: &[Rational], c: &PrecisionContext) -> HypergeometricSpec {
        HypergeometricSpec::from_rationals(upper, lower, c).unwrap()
    }

    #[test]
    fn elementary_series() {
        let c = ctx(40);
        let geo = spec(&[q(1, 1)], &[], &c);
        assert!(diff(&pfq_series(&geo, &c.complex(0.5), &c).unwrap(), &c.complex(2)) < 1e-50);
        let log = spec(&[q(1, 1), q(1, 1)], &[q(2, 1)], &c);
        let expect = c.real(2).ln() * 2u32;
        assert!(diff(&pfq_series(&log, &c.complex(0.5), &c).unwrap(), &c.complex(&expect)) < 1e-50);
        let y = spec(&[q(1, 3), q(1, 2), q(2, 3)], &[q(1, 1), q(1, 1)], &c);
        assert_eq!(pfq_series(&y, &c.czero(), &c).unwrap(), c.complex(1));
        assert!(matches!(pfq_series(&y, &c.complex(0.9), &c), Err(Error::Divergence(_))));
    }

    #[test]
    fn spec_validation() {
        let c = ctx(30);
        assert!(HypergeometricSpec::from_rationals(&[q(1, 1)], &[q(-2, 1)], &c).is_err());
        assert!(HypergeometricSpec::from_rationals(&[q(1, 1), q(1, 1), q(1, 1)], &[q(1, 1)], &c).is_err());
    }

    #[test]
    fn continuation_matches_closed_forms() {
        let c = ctx(40);
        let log = spec(&[q(1, 1), q(1, 1)], &[q(2, 1)], &c);
        // ₂F₁(1,1;2;w) = −log(1−w)/w
        for &(re, im) in &[(0.5, 0.0), (-3.0, 0.5), (2.0, 1.0), (-0.9, -2.5)] {
            let w = c.complex((re, im));
            let got = pfq_continue(&log, &w, None, &c).unwrap();
            let expect = -Complex::with_val(c.bits(), 1 - &w).ln() / &w;
            assert!(diff(&got, &expect) < 1e-48, "w={re}+{im}i");
        }
        // Below the cut at w = 3: −(log 2 + iπ)/3 ... with 1−w = −2 + i0⁺, log = ln2 + iπ.
        let w = c.complex(3);
        let got = pfq_continue(&log, &w, None, &c).unwrap();
        let pi = const_pi(&c);
        let expect = -Complex::with_val(c.bits(), (c.real(2).ln(), pi)) / 3u32;
        assert!(diff(&got, &expect) < 1e-48);
        let above = pfq_continue_with(&log, &w, None, Side::Above, ContinuationOptions::default(), &c).unwrap();
        assert!(diff(&above, &Complex::with_val(c.bits(), expect.conj_ref())) < 1e-48);
    }

    #[test]
    fn clearance_is_enforced() {
        let c = ctx(30);
        let log = spec(&[q(1, 1), q(1, 1)], &[q(2, 1)], &c);
        let path = ContinuationPath { waypoints: vec![c.complex((1.02, 0.0))], side: Side::Below };
        assert!(matches!(pfq_continue(&log, &c.complex(3), Some(&path), &c), Err(Error::Continuation(_))));
        assert!(pfq_continue(&log, &c.complex(1), None, &c).is_err());
    }

    #[test]
    fn divergent_five_f_four() {
        let c = ctx(40);
        let f = spec(
            &[q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(79, 42)],
            &[q(3, 2), q(3, 2), q(3, 2), q(37, 42)],
            &c,
        );
        let got = pfq_continue(&f, &c.complex(64), None, &c).unwrap();
        let pi = const_pi(&c);
        let re = -l_value(-4, 2, &c).unwrap() * 2u32 / 37u32;
        let im = -Real::with_val(c.bits(), pi.square_ref()) / 296u32;
        assert!(diff(&got, &c.complex((re, im))) < 1e-45);
    }

    #[test]
    fn ramanujan_one_over_pi() {
        let c = ctx(40);
        let inv_pi = c.complex(const_pi(&c).recip());
        let cs = CompanionSpec::new(q(1, 2), c.complex(0.5), c.complex(2), c.complex(-1)).unwrap();
        assert!(diff(&ramanujan_sum(&cs, &c).unwrap(), &inv_pi) < 1e-45);
        let r3 = c.real(3).sqrt();
        let a = c.complex(Real::with_val(c.bits(), 4u32 / (r3.clone() * 3u32)));
        let b = c.complex(Real::with_val(c.bits(), 5u32 / r3));
        let cs = CompanionSpec::new(q(1, 3), a.clone(), b, c.complex(-4)).unwrap();
        assert!(diff(&ramanujan_sum(&cs, &c).unwrap(), &inv_pi) < 1e-45);
        let cs = CompanionSpec::new(q(1, 3), a.clone(), c.complex(1), c.czero()).unwrap();
        assert_eq!(ramanujan_sum(&cs, &c).unwrap(), a);
    }

    #[test]
    fn companion_catalan() {
        let c = ctx(40);
        let g = l_value(-4, 2, &c).unwrap();
        let cs = CompanionSpec::new(q(1, 2), c.complex(0.5), c.complex(2), c.complex(-1)).unwrap();
        assert!(diff(&companion_sum(&cs, &c).unwrap(), &c.complex(&g * Real::with_val(c.bits(), 8))) < 1e-45);
        let cs = CompanionSpec::new(q(1, 2), c.complex(1), c.complex(3), c.complex(-8)).unwrap();
        assert!(diff(&companion_sum(&cs, &c).unwrap(), &c.complex(g * 2u32)) < 1e-45);
    }

    #[test]
    fn companion_quarter_case() {
        let c = ctx(40);
        let cs = CompanionSpec::new(
            q(1, 4),
            c.complex((0, &q(-4, 9))),
            c.complex((0, &q(-35, 18))),
            c.complex(&q(256, 81)),
        )
        .unwrap();
        let got = companion_sum(&cs, &c).unwrap() * Complex::with_val(c.bits(), (0, -18));
        // −18i(a − bn) = 35n − 8
        let pi = const_pi(&c);
        let expect = c.complex(Real::with_val(c.bits(), pi.square_ref()) * 12u32);
        assert!(diff(&got, &expect) < 1e-45);
    }

    #[test]
    fn y0_and_yx_basics() {
        let c = ctx(40);
        assert_eq!(y0(&q(1, 2), &c.czero(), &c).unwrap(), c.complex(1));
        let z = c.complex((0.2, 0.1));
        let y = y0(&q(1, 3), &z, &c).unwrap();
        assert_eq!(yx(&q(1, 3), &c.czero(), &z, &c).unwrap(), y);
        assert!(yx_completed(&q(1, 3), &c.complex(0.3), &c.complex(0.4), &c).is_err());
    }
}
