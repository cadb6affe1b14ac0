//! Test-only oracles shared by several integration tests.

use rforge::mpnum::cpowi;
use rforge::series::Tau;
use rforge::{Complex, PrecisionContext};

/// z(q) for s = 1/3 from the cubic theta functions a(q), c(q).
pub fn z_third(tau: &Tau, c: &PrecisionContext) -> Complex {
    let bits = c.bits();
    let lq = tau.log_q(c);
    let qv = lq.clone().exp();
    let mut a = c.czero();
    let mut cc = c.czero();
    let n = 25i64;
    for m in -n..=n {
        for k in -n..=n {
            let e1 = m * m + m * k + k * k;
            let e2 = e1 + m + k;
            a += cpowi(&qv, e1 as u32);
            cc += cpowi(&qv, e2 as u32);
        }
    }
    let third = (Complex::with_val(bits, &lq / 3u32)).exp();
    let cc = cc * third;
    let x = cpowi(&cc, 3) / cpowi(&a, 3);
    Complex::with_val(bits, 1 - &x) * x * 4u32
}

/// z(q) for s = 1/4 from t = q∏(1+qⁿ)²⁴.
pub fn z_quarter(tau: &Tau, c: &PrecisionContext) -> Complex {
    let bits = c.bits();
    let qv = tau.q(c);
    let mut prod = c.complex(1);
    let mut p = qv.clone();
    for _ in 0..400 {
        prod *= Complex::with_val(bits, &p + 1u32);
        p *= &qv;
    }
    let t = cpowi(&prod, 24) * &qv;
    let d = cpowi(&(Complex::with_val(bits, &t * 64u32) + 1u32), 2);
    t * 256u32 / d
}
