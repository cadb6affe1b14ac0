//! Arbitrary-precision real and complex arithmetic.
//!
//! [`Real`] and [`Complex`] are MPFR/MPC values; every operation is correctly
//! rounded at the precision of its destination. A [`PrecisionContext`] fixes the
//! number of decimal digits a caller wants plus a number of guard digits that
//! all internal work carries on top.

use rug::float::Constant;
use rug::ops::Pow;

use crate::error::{domain, Error, Result};

pub use rug::{Complex, Float as Real, Integer, Rational};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision shared by every computation.
///
/// The context is a plain value: it is cheap to copy and can be shared freely
/// between threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_GUARD: u32 = 15;
    pub const DEFAULT_DIGITS: u32 = 60;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision(format!(
                "{digits} digits requested, at least {} required",
                Self::MIN_DIGITS
            )));
        }
        Ok(Self { digits, guard })
    }

    /// Decimal digits the caller asked for.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Digits carried internally (`digits + guard`).
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision of every intermediate value.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits()) * LOG2_10).ceil() as u32 + 8
    }

    /// Binary precision matching the requested digits only.
    pub fn output_bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + 4
    }

    /// Same guard, `extra` more requested digits.
    pub fn refined(&self, extra: u32) -> Self {
        Self { digits: self.digits + extra, guard: self.guard }
    }

    pub fn real<T>(&self, v: T) -> Real
    where
        Real: rug::Assign<T>,
    {
        Real::with_val(self.bits(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.bits(), v)
    }

    pub fn zero(&self) -> Real {
        Real::new(self.bits())
    }

    pub fn czero(&self) -> Complex {
        Complex::new(self.bits())
    }

    /// Exact rational converted at working precision.
    pub fn rational(&self, r: &Rational) -> Real {
        Real::with_val(self.bits(), r)
    }

    /// `10^-working_digits`: the size of a negligible relative contribution.
    pub fn eps(&self) -> Real {
        self.pow10(-(self.working_digits() as i32))
    }

    /// `10^-digits`: the accuracy promised to callers.
    pub fn target_eps(&self) -> Real {
        self.pow10(-(self.digits as i32))
    }

    pub fn pow10(&self, e: i32) -> Real {
        Real::with_val(self.bits(), 10).pow(e)
    }

    /// Round a working value back to the requested precision.
    pub fn round(&self, x: &Real) -> Real {
        Real::with_val(self.output_bits(), x)
    }

    pub fn round_complex(&self, z: &Complex) -> Complex {
        Complex::with_val(self.output_bits(), z)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: Self::DEFAULT_DIGITS, guard: Self::DEFAULT_GUARD }
    }
}

/// π at working precision.
pub fn const_pi(ctx: &PrecisionContext) -> Real {
    Real::with_val(ctx.bits(), Constant::Pi)
}

/// ζ(3) from the central binomial series
/// ζ(3) = 5/2 Σ (-1)^{n+1} / (n³ C(2n,n)), whose terms shrink by 1/4 per step.
pub fn const_zeta3(ctx: &PrecisionContext) -> Real {
    let bits = ctx.bits();
    let eps = ctx.eps();
    let mut sum = Real::new(bits);
    // inv_binom = 1 / C(2n, n)
    let mut inv_binom = Real::with_val(bits, 1);
    let mut n: u64 = 1;
    loop {
        // C(2n,n) = C(2n-2,n-1) * (2n)(2n-1) / n²
        inv_binom *= n * n;
        inv_binom /= (2 * n) * (2 * n - 1);
        let n3 = Integer::from(n).pow(3u32);
        let term = Real::with_val(bits, &inv_binom / &n3);
        if n % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < eps {
            break;
        }
        n += 1;
    }
    sum * 5u32 / 2u32
}

/// Elementary functions evaluated on the principal branch.
#[derive(Debug, Clone)]
pub enum ElemFn {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tan,
    /// `w^p := exp(p log w)`
    Pow(Complex),
}

pub fn elem(f: &ElemFn, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let w = Complex::with_val(ctx.bits(), w);
    let out = match f {
        ElemFn::Exp => w.exp(),
        ElemFn::Log => {
            if w.is_zero() {
                return domain("log(0)");
            }
            w.ln()
        }
        ElemFn::Sqrt => w.sqrt(),
        ElemFn::Sin => w.sin(),
        ElemFn::Cos => w.cos(),
        ElemFn::Tan => w.tan(),
        ElemFn::Pow(p) => {
            if w.is_zero() {
                if p.real().is_sign_positive() && !p.real().is_zero() {
                    return Ok(ctx.czero());
                }
                return domain("0 raised to a non-positive power");
            }
            let p = Complex::with_val(ctx.bits(), p);
            (w.ln() * p).exp()
        }
    };
    Ok(out)
}

/// zⁿ for a small non-negative integer n.
pub fn cpowi(z: &Complex, n: u32) -> Complex {
    z.clone().pow(n)
}

/// |z| as a real.
pub fn cabs(z: &Complex) -> Real {
    Real::with_val(z.prec().0, z.abs_ref())
}

/// |z| as f64, for step-size and convergence decisions only.
pub fn cabs_f64(z: &Complex) -> f64 {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    re.hypot(im)
}

/// log₂|z| without leaving the MPFR exponent range; −∞ for zero.
pub fn log2_abs(z: &Complex) -> f64 {
    let part = |x: &Real| -> Option<(f64, i32)> { (!x.is_zero()).then(|| x.to_f64_exp()) };
    match (part(z.real()), part(z.imag())) {
        (None, None) => f64::NEG_INFINITY,
        (Some((m, e)), None) | (None, Some((m, e))) => m.abs().log2() + f64::from(e),
        (Some((m1, e1)), Some((m2, e2))) => {
            // scale the smaller part onto the larger exponent
            let (big, small, shift) = if e1 >= e2 { (m1, m2, e1 - e2) } else { (m2, m1, e2 - e1) };
            let small = if shift > 60 { 0.0 } else { small / 2f64.powi(shift) };
            big.hypot(small).log2() + f64::from(e1.max(e2))
        }
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn fmt_real(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

pub fn fmt_complex(z: &Complex, digits: usize) -> String {
    let re = fmt_real(z.real(), digits);
    if z.imag().is_zero() {
        return re;
    }
    let im = z.imag();
    let sign = if im.is_sign_negative() { "-" } else { "+" };
    let im_abs = Real::with_val(im.prec(), im.abs_ref());
    format!("{re} {sign} {}i", fmt_real(&im_abs, digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    // Machin: π = 16 atan(1/5) - 4 atan(1/239), each atan by its Taylor series.
    fn machin_pi(ctx: &PrecisionContext) -> Real {
        fn atan_inv(n: u32, ctx: &PrecisionContext) -> Real {
            let eps = ctx.eps();
            let x = ctx.real(1) / n;
            let x2 = Real::with_val(ctx.bits(), &x * &x);
            let mut power = x.clone();
            let mut sum = ctx.zero();
            let mut k = 0u32;
            loop {
                let term = Real::with_val(ctx.bits(), &power / (2 * k + 1));
                if k % 2 == 0 {
                    sum += &term;
                } else {
                    sum -= &term;
                }
                if term < eps {
                    break;
                }
                power *= &x2;
                k += 1;
            }
            sum
        }
        atan_inv(5, ctx) * 16u32 - atan_inv(239, ctx) * 4u32
    }

    // Ramanujan–Sato style check: π via the Gauss–Legendre AGM iteration.
    fn agm_pi(ctx: &PrecisionContext) -> Real {
        let mut a = ctx.real(1);
        let mut b = ctx.real(0.5).sqrt();
        let mut t = ctx.real(0.25);
        let mut p = ctx.real(1);
        for _ in 0..12 {
            let an = Real::with_val(ctx.bits(), &a + &b) / 2u32;
            b = Real::with_val(ctx.bits(), &a * &b).sqrt();
            let d = Real::with_val(ctx.bits(), &a - &an);
            t -= Real::with_val(ctx.bits(), &d * &d) * &p;
            a = an;
            p *= 2u32;
        }
        let s = Real::with_val(ctx.bits(), &a + &b);
        Real::with_val(ctx.bits(), &s * &s) / (t * 4u32)
    }

    #[test]
    fn pi_matches_two_independent_series() {
        let c = ctx(30);
        let pi = const_pi(&c);
        let tol = c.target_eps();
        assert!(Real::with_val(c.bits(), &pi - machin_pi(&c)).abs() < tol);
        assert!(Real::with_val(c.bits(), &pi - agm_pi(&c)).abs() < tol);
        assert!(fmt_real(&pi, 30).starts_with("3.1415926535897932384626433832"));
    }

    #[test]
    fn pi_precision_monotone() {
        let lo = const_pi(&ctx(30));
        let hi = const_pi(&ctx(60));
        let d = Real::with_val(200, &hi - &lo).abs();
        assert!(d < Real::with_val(200, 10).pow(-30));
    }

    #[test]
    fn zeta3_against_mpfr_and_bracket() {
        let c = ctx(40);
        let z3 = const_zeta3(&c);
        let reference = Real::with_val(c.bits(), Real::zeta_u(3));
        assert!(Real::with_val(c.bits(), &z3 - &reference).abs() < c.target_eps());
        assert!(z3 > 1.2 && z3 < 1.21);
        assert!(fmt_real(&z3, 30).starts_with("1.20205690315959428539973816151"));
    }

    #[test]
    fn principal_branches() {
        let c = ctx(40);
        let log_m1 = elem(&ElemFn::Log, &c.complex(-1), &c).unwrap();
        assert!(log_m1.real().is_zero());
        assert!(Real::with_val(c.bits(), log_m1.imag() - const_pi(&c)).abs() < c.target_eps());
        let r = elem(&ElemFn::Sqrt, &c.complex(-4), &c).unwrap();
        assert!(r.real().clone().abs() < c.target_eps());
        assert!(Real::with_val(c.bits(), r.imag() - 2u32).abs() < c.target_eps());
        assert!(matches!(elem(&ElemFn::Log, &c.czero(), &c), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let c = ctx(50);
        let w = c.complex((0.3, 0.4));
        let back = elem(&ElemFn::Exp, &elem(&ElemFn::Log, &w, &c).unwrap(), &c).unwrap();
        let d = Complex::with_val(c.bits(), &back - &w);
        assert!(cabs(&d) < c.target_eps());
    }

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(10).is_err());
        assert!(PrecisionContext::new(30).is_ok());
    }
}
