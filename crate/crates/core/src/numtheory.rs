//! Integer kernels and Dirichlet L-values.

use std::sync::OnceLock;

use rug::ops::Pow;

use crate::audit::{touch, Subsystem};
use crate::error::{domain, Error, Result};
use crate::mpnum::{Integer, PrecisionContext, Rational, Real};

/// Kronecker symbol (k/n), defined for every pair of integers.
pub fn kronecker(k: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(k == 1 || k == -1);
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if k < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if k % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(k.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(k.rem_euclid(n), n)
}

/// Jacobi symbol (a/n) for odd n > 0 and 0 ≤ a < n.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Σ_{d|n} d³.
pub fn sigma3(n: u64) -> u64 {
    assert!(n >= 1, "sigma3 requires n >= 1");
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += d.pow(3);
            let e = n / d;
            if e != d {
                total += e.pow(3);
            }
        }
        d += 1;
    }
    total
}

const BERNOULLI_TABLE_LEN: usize = 256;

/// B_0, B_2, ..., B_{2(len-1)} from the tangent numbers.
fn bernoulli_even_table(len: usize) -> Vec<Rational> {
    // T_k for k = 1..len-1, Brent–Harvey in-place recurrence.
    let n = len.saturating_sub(1);
    let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
    if n >= 1 {
        t[1] = Integer::from(1);
    }
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let v = Integer::from(&t[j - 1] * (j - k) as u64) + Integer::from(&t[j] * (j - k + 2) as u64);
            t[j] = v;
        }
    }
    let mut out = Vec::with_capacity(len);
    out.push(Rational::from(1));
    for (k, tk) in t.iter().enumerate().skip(1) {
        // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * four_k;
        let mut num = Integer::from(tk * (2 * k as u64));
        if k % 2 == 0 {
            num = -num;
        }
        out.push(Rational::from((num, den)));
    }
    out
}

fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_even_table(BERNOULLI_TABLE_LEN))
}

/// Exact B_m for even m (B_0 = 1, B_2 = 1/6).
pub fn bernoulli_exact(m: u32) -> Result<Rational> {
    if m % 2 == 1 {
        return Err(Error::Unsupported(format!("bernoulli({m}): only even indices are tabulated")));
    }
    let idx = (m / 2) as usize;
    let table = bernoulli_table();
    if idx < table.len() {
        Ok(table[idx].clone())
    } else {
        Ok(bernoulli_even_table(idx + 1).pop().expect("non-empty table"))
    }
}

/// B_m rendered at working precision.
pub fn bernoulli(m: u32, ctx: &PrecisionContext) -> Result<Real> {
    Ok(ctx.rational(&bernoulli_exact(m)?))
}

fn as_small_int(t: &Real) -> Option<i32> {
    if t.is_integer() && *t < 10_000 {
        t.to_i32_saturating()
    } else {
        None
    }
}

/// x^{-t}, using integer powers when t is integral.
fn pow_neg(x: &Real, t: &Real, t_int: Option<i32>) -> Real {
    match t_int {
        Some(n) => Real::with_val(x.prec(), x.pow(-n)),
        None => {
            let neg = Real::with_val(t.prec(), -t);
            Real::with_val(x.prec(), x.pow(&neg))
        }
    }
}

/// Hurwitz zeta ζ(t, a) by Euler–Maclaurin summation.
pub fn hurwitz_zeta(t: &Real, a: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *t <= 1 {
        return domain(format!("hurwitz_zeta requires t > 1, got {}", t.to_f64()));
    }
    if *a <= 0 || *a > 1 {
        return domain(format!("hurwitz_zeta requires 0 < a <= 1, got {}", a.to_f64()));
    }
    touch(Subsystem::LValues);
    let bits = ctx.bits();
    let cutoff = ctx.working_digits();
    let t = Real::with_val(bits, t);
    let t_int = as_small_int(&t);

    let mut sum = Real::new(bits);
    let mut base = Real::with_val(bits, a);
    for _ in 0..cutoff {
        sum += pow_neg(&base, &t, t_int);
        base += 1u32;
    }
    // base = N + a
    let base_pow = pow_neg(&base, &t, t_int); // (N+a)^{-t}
    let tm1 = Real::with_val(bits, &t - 1u32);
    sum += Real::with_val(bits, &base_pow * &base) / &tm1;
    sum += Real::with_val(bits, &base_pow / 2u32);

    // Σ_k B_{2k}/(2k)! · t(t+1)…(t+2k-2) · (N+a)^{-t-2k+1}
    let inv_base2 = Real::with_val(bits, base.clone().square().recip());
    let mut factor = Real::with_val(bits, &base_pow / &base); // (N+a)^{-t-1}
    factor *= &t;
    factor /= 2u32;
    let eps = Real::with_val(bits, &sum * ctx.eps()).abs();
    for k in 1..=cutoff {
        // factor = (t)_{2k-1} (N+a)^{-t-2k+1} / (2k)!
        let b = bernoulli(2 * k, ctx)?;
        let term = Real::with_val(bits, &b * &factor);
        sum += &term;
        if term.abs() < eps && k > 2 {
            break;
        }
        let k2 = 2 * k as u64;
        // advance to k+1: multiply by (t+2k-1)(t+2k) / ((2k+1)(2k+2)) and (N+a)^{-2}
        factor *= Real::with_val(bits, &t + (k2 - 1)) * Real::with_val(bits, &t + k2);
        factor /= (k2 + 1) * (k2 + 2);
        factor *= &inv_base2;
    }
    Ok(sum)
}

/// A nonzero integer k labelling the character χ_k(n) = (k/n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacterIndex(i64);

impl CharacterIndex {
    pub fn new(k: i64) -> Result<Self> {
        if k == 0 {
            return domain("character index must be nonzero");
        }
        Ok(Self(k))
    }

    pub fn k(&self) -> i64 {
        self.0
    }

    pub fn chi(&self, n: i64) -> i32 {
        kronecker(self.0, n)
    }

    /// Whether n ↦ (k/n) is periodic on positive n, which holds iff k ≡ 0, 1 (mod 4).
    pub fn is_discriminant(&self) -> bool {
        matches!(self.0.rem_euclid(4), 0 | 1)
    }

    /// Modulus of the Hurwitz decomposition: |k| when the character is periodic,
    /// else 4|k|, a period of (k/m) on odd m.
    pub fn period(&self) -> u64 {
        if self.is_discriminant() {
            self.0.unsigned_abs()
        } else {
            4 * self.0.unsigned_abs()
        }
    }
}

/// L_k(t) = Σ χ_k(n) n^{-t} through the Hurwitz decomposition over one period.
///
/// For k ≡ 2, 3 (mod 4) the symbol is periodic only on odd n; the even part is
/// then restored from the Euler factor at 2.
pub fn dirichlet_l(k: CharacterIndex, t: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *t <= 1 {
        return domain(format!("dirichlet_L requires t > 1, got {}", t.to_f64()));
    }
    let bits = ctx.bits();
    let period = k.period();
    let one = Real::with_val(bits, 1);
    if period == 1 {
        return hurwitz_zeta(t, &one, ctx);
    }
    let odd_only = !k.is_discriminant();
    let mut sum = Real::new(bits);
    for r in 1..=period {
        if odd_only && r % 2 == 0 {
            continue;
        }
        let c = k.chi(r as i64);
        if c == 0 {
            continue;
        }
        let a = Real::with_val(bits, r) / period;
        let h = hurwitz_zeta(t, &a, ctx)?;
        if c > 0 {
            sum += h;
        } else {
            sum -= h;
        }
    }
    let t = Real::with_val(bits, t);
    let t_int = as_small_int(&t);
    let mut out = sum * pow_neg(&Real::with_val(bits, period), &t, t_int);
    if odd_only {
        let chi2 = k.chi(2);
        if chi2 != 0 {
            // 1 / (1 − χ(2) 2^{-t})
            let p = pow_neg(&Real::with_val(bits, 2), &t, t_int) * chi2;
            out /= 1 - p;
        }
    }
    Ok(out)
}

/// Convenience wrapper: L_k(t) for an integer t.
pub fn l_value(k: i64, t: u32, ctx: &PrecisionContext) -> Result<Real> {
    dirichlet_l(CharacterIndex::new(k)?, &ctx.real(t), ctx)
}
