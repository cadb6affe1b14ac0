//! Per-thread record of which numerical subsystems a computation touched.
//!
//! The harness uses this to check that the two sides of an identity are
//! evaluated by disjoint machinery.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subsystem {
    /// Dirichlet L-values and Hurwitz zeta.
    LValues,
    /// Polylogarithms, F(q) and the φ series.
    Series,
    /// Theta functions and the s=1/2 parameterization.
    Modular,
    /// Epstein zeta sums.
    Lattice,
    /// Hypergeometric series and continuation.
    Hyper,
}

impl Subsystem {
    const ALL: [Subsystem; 5] = [
        Subsystem::LValues,
        Subsystem::Series,
        Subsystem::Modular,
        Subsystem::Lattice,
        Subsystem::Hyper,
    ];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

thread_local! {
    static TOUCHED: Cell<u8> = const { Cell::new(0) };
}

pub(crate) fn touch(s: Subsystem) {
    TOUCHED.with(|t| t.set(t.get() | s.bit()));
}

/// Run `f` and return its result with the set of subsystems it entered.
///
/// Nested calls compose: the outer scope also sees everything the inner saw.
pub fn traced<T>(f: impl FnOnce() -> T) -> (T, Vec<Subsystem>) {
    let saved = TOUCHED.with(|t| t.replace(0));
    let out = f();
    let mask = TOUCHED.with(|t| {
        let m = t.get();
        t.set(m | saved);
        m
    });
    let used = Subsystem::ALL.into_iter().filter(|s| mask & s.bit() != 0).collect();
    (out, used)
}
