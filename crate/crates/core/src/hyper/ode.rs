//! Analytic continuation of p+1Fp by Taylor stepping along its holonomic ODE.
//!
//! The function f(w) = p+1Fp(a; b; w) is annihilated by
//! θ∏(θ+b_j−1) − w∏(θ+a_i) with θ = w d/dw. Rewriting θ^m through Stirling
//! numbers gives Σ_j w^j (A_j − w B_j) D^j, whose leading coefficient
//! w^N(1−w) vanishes only at the singular points 0 and 1.

use crate::error::{Error, Result};
use crate::mpnum::{cabs_f64, log2_abs, Complex, PrecisionContext, Real};

use super::{series_terms, HypergeometricSpec, Side};

/// Options for a continuation run.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationOptions {
    /// Each Taylor step covers at most this fraction of the distance to {0, 1}.
    pub step_ratio: f64,
    /// Modulus of the point where the series seeds the ODE.
    pub seed_radius: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self { step_ratio: 0.5, seed_radius: 0.3 }
    }
}

/// Waypoints between the seed and the target, plus the side from which a target
/// on the cut [1, ∞) is approached.
#[derive(Debug, Clone)]
pub struct ContinuationPath {
    pub waypoints: Vec<Complex>,
    pub side: Side,
}

const CLEARANCE: f64 = 0.05;
const DETOUR_TRIGGER: f64 = 0.2;
const DETOUR_DEPTH: f64 = 0.75;

/// Polynomial coefficients p_j(w) = A_j w^j − B_j w^{j+1} of the ODE, j = 0..=N.
struct Operator {
    a: Vec<Complex>,
    b: Vec<Complex>,
}

/// Coefficients of ∏(θ + r_i) in powers of θ.
fn poly_from_roots(roots: &[Complex], bits: u32) -> Vec<Complex> {
    let mut coeffs = vec![Complex::with_val(bits, 1)];
    for r in roots {
        let mut next = vec![Complex::new(bits); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] += Complex::with_val(bits, c * r);
        }
        coeffs = next;
    }
    coeffs
}

/// Stirling numbers of the second kind S(m, j) for m, j ≤ n.
fn stirling2(n: usize) -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1;
    for m in 1..=n {
        for j in 1..=m {
            s[m][j] = j as u64 * s[m - 1][j] + s[m - 1][j - 1];
        }
    }
    s
}

impl Operator {
    fn new(spec: &HypergeometricSpec, bits: u32) -> Self {
        // θ ∏(θ + b_j − 1)
        let mut p_roots = vec![Complex::new(bits)];
        p_roots.extend(spec.lower().iter().map(|b| Complex::with_val(bits, b - 1u32)));
        let p_poly = poly_from_roots(&p_roots, bits);
        let q_poly = poly_from_roots(spec.upper(), bits);
        let order = p_poly.len() - 1;
        let st = stirling2(order);
        let convert = |poly: &[Complex]| -> Vec<Complex> {
            (0..=order)
                .map(|j| {
                    let mut acc = Complex::new(bits);
                    for (m, c) in poly.iter().enumerate() {
                        if st[m][j] != 0 {
                            acc += Complex::with_val(bits, c * Real::with_val(bits, st[m][j]));
                        }
                    }
                    acc
                })
                .collect()
        };
        Self { a: convert(&p_poly), b: convert(&q_poly) }
    }

    fn order(&self) -> usize {
        self.a.len() - 1
    }

    /// π_{j,l}: coefficient of h^l in p_j(c + h).
    fn shifted(&self, c: &Complex, bits: u32) -> Vec<Vec<Complex>> {
        let n = self.order();
        // powers of c up to n+1
        let mut cp = vec![Complex::with_val(bits, 1)];
        for k in 1..=n + 1 {
            let next = Complex::with_val(bits, &cp[k - 1] * c);
            cp.push(next);
        }
        let binom = |n: usize, k: usize| -> u64 {
            let mut r = 1u64;
            for i in 0..k {
                r = r * (n - i) as u64 / (i + 1) as u64;
            }
            r
        };
        (0..=n)
            .map(|j| {
                (0..=j + 1)
                    .map(|l| {
                        let mut v = Complex::new(bits);
                        if l <= j {
                            v += Complex::with_val(bits, &self.a[j] * &cp[j - l]) * Real::with_val(bits, binom(j, l));
                        }
                        v -= Complex::with_val(bits, &self.b[j] * &cp[j + 1 - l]) * Real::with_val(bits, binom(j + 1, l));
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

fn falling(m: usize, j: usize) -> u64 {
    (0..j).map(|i| (m - i) as u64).product()
}

fn binom(n: usize, k: usize) -> Real {
    let c = rug::Integer::from(rug::Integer::binomial_u(n as u32, k as u32));
    Real::with_val(c.significant_bits().max(1), c)
}

/// Normalized derivatives g_k = f^{(k)}(w0)/k!, k < order, from the defining series.
fn seed(spec: &HypergeometricSpec, w0: &Complex, order: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let bits = ctx.bits();
    let coeffs = series_terms(spec, w0, ctx, 2 * ctx.working_digits() as usize)?;
    // coeffs[n] = c_n w0^n; g_k = Σ_n c_n C(n,k) w0^{n−k} = Σ_n coeffs[n] C(n,k) / w0^k
    let inv = Complex::with_val(bits, w0.recip_ref());
    let mut out = Vec::with_capacity(order);
    let mut inv_pow = Complex::with_val(bits, 1);
    for k in 0..order {
        let mut g = Complex::new(bits);
        for (n, t) in coeffs.iter().enumerate().skip(k) {
            g += Complex::with_val(bits, t * binom(n, k));
        }
        out.push(g * &inv_pow);
        inv_pow *= &inv;
    }
    Ok(out)
}

/// Advance normalized derivatives from `c` to `c + h`.
fn taylor_step(op: &Operator, c: &Complex, h: &Complex, g: &[Complex], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let bits = ctx.bits();
    let order = op.order();
    let pi = op.shifted(c, bits);
    let lead = &pi[order][0];
    if lead.is_zero() {
        return Err(Error::Continuation("step centred on a singular point".into()));
    }
    // Sizes are compared as log₂ magnitudes: far from the origin the
    // coefficients drop below the f64 range long before they are negligible.
    let log_h = log2_abs(h);
    let log_eps = -(f64::from(ctx.working_digits()) + 3.0) * std::f64::consts::LOG2_10;
    let max_terms = 40 * ctx.working_digits() as usize;

    let mut t: Vec<Complex> = g.to_vec();
    let mut scale = t.iter().enumerate().map(|(n, v)| log2_abs(v) + n as f64 * log_h).fold(f64::NEG_INFINITY, f64::max);
    let mut quiet = 0;
    let mut n = 0usize;
    loop {
        // coefficient of h^n in Σ_j p_j(c+h) f^{(j)}(c+h) determines t_{n+order}
        let mut acc = Complex::new(bits);
        for (j, row) in pi.iter().enumerate() {
            for (l, coeff) in row.iter().enumerate() {
                if l > n || (j == order && l == 0) || coeff.is_zero() {
                    continue;
                }
                let idx = n - l + j;
                let ff = falling(idx, j);
                acc += Complex::with_val(bits, coeff * &t[idx]) * Real::with_val(bits, ff);
            }
        }
        let denom = Complex::with_val(bits, lead * Real::with_val(bits, falling(n + order, order)));
        let next = -(acc / denom);
        let size = log2_abs(&next) + (n + order) as f64 * log_h;
        t.push(next);
        scale = scale.max(size);
        if size <= log_eps + scale {
            quiet += 1;
        } else {
            quiet = 0;
        }
        n += 1;
        if quiet >= 2 * order + 4 {
            break;
        }
        if t.len() > max_terms {
            return Err(Error::Continuation(format!("Taylor series did not settle after {max_terms} terms")));
        }
    }
    // g_k(c+h) = Σ_n t_n C(n,k) h^{n−k}, by Horner in h.
    let mut out = Vec::with_capacity(order);
    for k in 0..order {
        let mut acc = Complex::new(bits);
        for nn in (k..t.len()).rev() {
            acc *= h;
            acc += Complex::with_val(bits, &t[nn] * binom(nn, k));
        }
        out.push(acc);
    }
    Ok(out)
}

fn dist_to_singular(w: &Complex) -> f64 {
    let re = w.real().to_f64();
    let im = w.imag().to_f64();
    re.hypot(im).min((re - 1.0).hypot(im))
}

fn segment_distance_to_one(from: &Complex, to: &Complex) -> f64 {
    let (x0, y0) = (from.real().to_f64(), from.imag().to_f64());
    let (x1, y1) = (to.real().to_f64(), to.imag().to_f64());
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((1.0 - x0) * dx + (0.0 - y0) * dy) / len2).clamp(0.0, 1.0) };
    let (px, py) = (x0 + t * dx, y0 + t * dy);
    (px - 1.0).hypot(py)
}

/// Waypoints for the default route from the seed to `w`.
fn plan(seed: &Complex, w: &Complex, side: Side, ctx: &PrecisionContext) -> Vec<Complex> {
    let mut points = Vec::new();
    if segment_distance_to_one(seed, w) < DETOUR_TRIGGER {
        // Off the cut, pass 1 on the side of w so the result is the principal branch.
        let below = if w.imag().is_zero() { side == Side::Below } else { w.imag().is_sign_negative() };
        let im = if below { -DETOUR_DEPTH } else { DETOUR_DEPTH };
        points.push(ctx.complex((1.0, im)));
    }
    points.push(w.clone());
    points
}

/// Continue the series of `spec` (p = q+1) to `w` along `path` (or the default route).
pub fn continue_to(
    spec: &HypergeometricSpec,
    w: &Complex,
    path: Option<&ContinuationPath>,
    side: Side,
    opts: ContinuationOptions,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    if spec.upper().len() != spec.lower().len() + 1 {
        return Err(Error::InvalidParameter("continuation needs p = q + 1".into()));
    }
    if w.is_zero() || dist_to_singular(w) == 0.0 {
        return Err(Error::Continuation("target is a singular point of the ODE".into()));
    }
    let bits = ctx.bits();
    let first = match path {
        Some(p) if !p.waypoints.is_empty() => p.waypoints[0].clone(),
        _ => w.clone(),
    };
    let rmag = cabs_f64(&first);
    if path.is_none() && cabs_f64(w) <= opts.seed_radius {
        let terms = series_terms(spec, w, ctx, 2 * ctx.working_digits() as usize)?;
        let mut s = Complex::new(bits);
        for t in terms.iter().rev() {
            s += t;
        }
        return Ok(s);
    }
    let w0 = Complex::with_val(bits, &first / rmag) * opts.seed_radius;
    let route = match path {
        Some(p) => {
            for wp in &p.waypoints {
                if dist_to_singular(wp) < CLEARANCE {
                    return Err(Error::Continuation(format!(
                        "waypoint {}+{}i is within {CLEARANCE} of a singular point",
                        wp.real().to_f64(),
                        wp.imag().to_f64()
                    )));
                }
            }
            let mut r = p.waypoints.clone();
            r.push(w.clone());
            r
        }
        None => plan(&w0, w, side, ctx),
    };

    let op = Operator::new(spec, bits);
    let order = op.order();
    let mut g = seed(spec, &w0, order, ctx)?;
    let mut c = w0;
    for target in &route {
        loop {
            let remaining = Complex::with_val(bits, target - &c);
            let rem = cabs_f64(&remaining);
            if rem == 0.0 {
                break;
            }
            let d = dist_to_singular(&c);
            let max_step = opts.step_ratio * d;
            if max_step < 1e-12 {
                return Err(Error::Continuation("step size underflow near a singular point".into()));
            }
            let h = if rem <= max_step {
                remaining
            } else {
                Complex::with_val(bits, &remaining / rem) * max_step
            };
            g = taylor_step(&op, &c, &h, &g, ctx)?;
            if rem <= max_step {
                c = target.clone();
                break;
            }
            c += &h;
        }
    }
    Ok(g.swap_remove(0))
}
