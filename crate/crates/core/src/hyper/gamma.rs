//! Complex Gamma function and Pochhammer symbols of complex order.

use crate::error::{Error, Result};
use crate::mpnum::{cabs_f64, const_pi, Complex, PrecisionContext, Real};
use crate::numtheory::bernoulli;

fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

/// log Γ(z) by the Stirling series, for Re z large enough that the series
/// reaches working precision before it starts to diverge.
fn ln_gamma_stirling(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let pi = const_pi(ctx);
    let ln_z = Complex::with_val(bits, z.ln_ref());
    let half_ln_2pi = (pi * 2u32).ln() / 2u32;
    let mut sum = Complex::with_val(bits, z - 0.5f64) * &ln_z - z + half_ln_2pi;
    let inv = Complex::with_val(bits, z.recip_ref());
    let inv2 = Complex::with_val(bits, inv.square_ref());
    let mut power = inv; // z^{1-2k}
    let eps = ctx.eps().to_f64();
    let scale = cabs_f64(&sum).max(1.0);
    for k in 1..=(4 * ctx.working_digits()) {
        let b = bernoulli(2 * k, ctx)?;
        let denom = u64::from(2 * k) * u64::from(2 * k - 1);
        let term = Complex::with_val(bits, &power * &b) / Real::with_val(bits, denom);
        let small = cabs_f64(&term) < eps * scale;
        sum += term;
        if small {
            return Ok(sum);
        }
        power *= &inv2;
    }
    Err(Error::Divergence("Stirling series for log-gamma".into()))
}

/// Γ(z) for complex z away from the poles.
pub fn gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Domain(format!("gamma pole at {}", z.real().to_f64())));
    }
    let bits = ctx.bits();
    if *z.real() < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let pi = const_pi(ctx);
        let one_minus = Complex::with_val(bits, 1 - z);
        let g = gamma(&one_minus, ctx)?;
        let s = Complex::with_val(bits, z * &pi).sin();
        return Ok(Complex::with_val(bits, pi) / (s * g));
    }
    // Shift upward until the Stirling series is accurate: Γ(z) = Γ(z+m)/(z(z+1)…(z+m−1)).
    let threshold = (0.4 * f64::from(ctx.working_digits())).ceil() + 10.0;
    let mut shifted = Complex::with_val(bits, z);
    let mut product = Complex::with_val(bits, 1);
    while cabs_f64(&shifted) < threshold || shifted.real().to_f64() < threshold * 0.5 {
        product *= &shifted;
        shifted += 1u32;
    }
    let lg = ln_gamma_stirling(&shifted, ctx)?;
    Ok(lg.exp() / product)
}

/// (c)_x = Γ(c+x)/Γ(c), with the convention (c)_0 = 1.
pub fn pochhammer(c: &Complex, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if x.is_zero() {
        return Ok(ctx.complex(1));
    }
    let sum = Complex::with_val(ctx.bits(), c + x);
    if is_nonpositive_integer(&sum) {
        return Err(Error::Domain("Pochhammer symbol hits a gamma pole".into()));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain("Pochhammer base is a gamma pole".into()));
    }
    Ok(gamma(&sum, ctx)? / gamma(c, ctx)?)
}
