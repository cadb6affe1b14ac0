//! Jacobi theta functions and the s = 1/2 parameterization of (a, b, z) by the nome.

use crate::audit::{touch, Subsystem};
use crate::error::{domain, Result};
use crate::mpnum::{cabs_f64, const_pi, cpowi, Complex, PrecisionContext};
use crate::series::Tau;

/// θ₂, θ₃, θ₄ at a common nome.
#[derive(Debug, Clone)]
pub struct ThetaValue {
    pub q: Complex,
    pub t2: Complex,
    pub t3: Complex,
    pub t4: Complex,
}

impl ThetaValue {
    /// λ(q) = θ₂⁴/θ₃⁴.
    pub fn lambda(&self) -> Complex {
        let bits = self.t3.prec().0;
        let t2_4 = Complex::with_val(bits, cpowi(&self.t2, 4));
        t2_4 / Complex::with_val(bits, cpowi(&self.t3, 4))
    }
}

const THETA_RADIUS: f64 = 0.9;

/// Largest |q| accepted by [`abz_half`].
pub const ABZ_RADIUS: f64 = 0.5;

/// Σ_{n≥1} q^{n²} weighted by `weight(n)`, stopped once |q|^{n²} is negligible.
fn theta_sum(q: &Complex, ctx: &PrecisionContext, weight: impl Fn(u64) -> u64) -> Complex {
    let bits = ctx.bits();
    let cutoff = (-(f64::from(ctx.working_digits()) + 5.0) * std::f64::consts::LN_10).exp();
    let r = cabs_f64(q);
    let mut sum = Complex::new(bits);
    // q^{n²} = q^{(n-1)²} · q^{2n-1}
    let mut odd = Complex::with_val(bits, q); // q^{2n-1}
    let q2 = Complex::with_val(bits, q.square_ref());
    let mut power = Complex::with_val(bits, q); // q^{n²}
    let mut n: u64 = 1;
    loop {
        sum += Complex::with_val(bits, &power * weight(n));
        let nf = n as f64;
        if r.powf(nf * nf) * (weight(n).max(1) as f64) < cutoff || power.is_zero() {
            break;
        }
        odd *= &q2;
        power *= &odd;
        n += 1;
    }
    sum
}

fn theta3_of(q: &Complex, ctx: &PrecisionContext) -> Complex {
    theta_sum(q, ctx, |_| 1) * 2u32 + 1u32
}

/// Σ_{n≥0} q^{n(n+1)}.
fn theta2_core(q: &Complex, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let cutoff = (-(f64::from(ctx.working_digits()) + 5.0) * std::f64::consts::LN_10).exp();
    let r = cabs_f64(q);
    let mut sum = Complex::with_val(bits, 1);
    let q2 = Complex::with_val(bits, q.square_ref());
    let mut step = Complex::with_val(bits, q.square_ref()); // q^{2n}
    let mut power = Complex::with_val(bits, 1); // q^{n(n+1)}
    let mut n: u64 = 1;
    loop {
        power *= &step;
        sum += &power;
        let nf = n as f64;
        if r.powf(nf * (nf + 1.0)) < cutoff || power.is_zero() {
            break;
        }
        step *= &q2;
        n += 1;
    }
    sum
}

fn theta_with_quarter(q: &Complex, quarter: Complex, ctx: &PrecisionContext) -> Result<ThetaValue> {
    let r = cabs_f64(q);
    if r > THETA_RADIUS {
        return domain(format!("theta requires |q| <= {THETA_RADIUS}, got {r}"));
    }
    touch(Subsystem::Modular);
    let t3 = theta3_of(q, ctx);
    let neg = Complex::with_val(ctx.bits(), -q);
    let t4 = theta3_of(&neg, ctx);
    let t2 = theta2_core(q, ctx) * quarter * 2u32;
    Ok(ThetaValue { q: q.clone(), t2, t3, t4 })
}

/// Theta functions at q, with q^{1/4} on the principal branch.
pub fn theta(q: &Complex, ctx: &PrecisionContext) -> Result<ThetaValue> {
    let quarter = if q.is_zero() {
        ctx.czero()
    } else {
        (Complex::with_val(ctx.bits(), q.ln_ref()) / 4u32).exp()
    };
    theta_with_quarter(q, quarter, ctx)
}

/// Theta functions at q = e^{2πiτ}, with q^{1/4} = e^{πiτ/2}.
pub fn theta_tau(tau: &Tau, ctx: &PrecisionContext) -> Result<ThetaValue> {
    let lq = tau.log_q(ctx);
    let quarter = (Complex::with_val(ctx.bits(), &lq / 4u32)).exp();
    theta_with_quarter(&lq.exp(), quarter, ctx)
}

/// (a, b, z) of the s = 1/2 Ramanujan-type series attached to τ.
pub fn abz_half(tau: &Tau, ctx: &PrecisionContext) -> Result<(Complex, Complex, Complex)> {
    let r = tau.abs_q_f64();
    if r > ABZ_RADIUS {
        return domain(format!("abz_half requires |q| <= {ABZ_RADIUS}, got {r}"));
    }
    touch(Subsystem::Modular);
    let bits = ctx.bits();
    let pi = const_pi(ctx);
    let q = tau.q(ctx);
    let log_abs = tau.log_abs_q(ctx);

    let t3 = theta3_of(&q, ctx);
    let neg = Complex::with_val(bits, -&q);
    let t4 = theta3_of(&neg, ctx);
    let t3_4 = Complex::with_val(bits, cpowi(&t3, 4));
    let t4_4 = Complex::with_val(bits, cpowi(&t4, 4));
    let ratio = Complex::with_val(bits, &t4_4 / &t3_4);

    let one_minus = Complex::with_val(bits, 1 - &ratio);
    let z = Complex::with_val(bits, &ratio * &one_minus) * 4u32;

    let n2_sum = theta_sum(&q, ctx, |n| n * n);
    let inner = Complex::with_val(bits, &n2_sum * &log_abs) * 8u32 / &t3 + 1u32;
    let a = inner / (t3_4 * &pi);

    let b = (1 - ratio * 2u32) * (log_abs / &pi);
    Ok((a, b, z))
}
