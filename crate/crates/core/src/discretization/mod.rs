//! Dyadic discretization of `W(t) = ∫_0^t w` and the discrete constants
//! `A1..A4`, `B1..B4` evaluated along it.

mod constants;
mod sequence;

pub use constants::{
    discrete_characterize, discrete_constant, DiscreteEvaluator, DiscreteIndex, DiscreteReport, DiscreteValue,
};
pub use sequence::{discretizing_sequence, DiscretizingSequence};

use crate::error::{Error, Result};
use crate::ext::pow_conv;
use crate::oracle::StepFunction;
use crate::scalar::Scalar;
use crate::weights::Weight;

/// Default lower end of the index window (`W` down to `2^{-40}`).
pub const DEFAULT_K_MIN: i32 = -40;
/// Default cap on the index window when `W(∞) = ∞`.
pub const DEFAULT_K_CAP: i32 = 40;

/// `(∫ W^α w h) / (Σ_k 2^{k(α+1)} h(x_k))` for a non-increasing step `h`.
///
/// The numerator is exact: on a cell where `h = c`, `∫ W^α w = ΔW^{α+1}/(α+1)`.
/// `0/0` is reported as `1`.
pub fn verify_int_sup_lemma<T: Scalar>(
    w: &Weight<T>,
    alpha: T,
    h: &StepFunction<T>,
    seq: &DiscretizingSequence<T>,
) -> Result<T> {
    let starts_at_origin = h.breakpoints()[0] == T::zero();
    if !h.is_non_increasing() || !(starts_at_origin || h.is_zero()) {
        return Err(Error::NotMonotone);
    }
    let a1 = alpha + T::one();
    let lhs: T = h
        .cells()
        .map(|(a, b, c)| {
            if c == T::zero() {
                T::zero()
            } else {
                c * (pow_conv(w.primitive(b), a1) - pow_conv(w.primitive(a), a1)) / a1
            }
        })
        .sum();
    let rhs: T = seq
        .rows()
        .filter(|(_, x, _)| x.is_finite())
        .map(|(k, x, _)| {
            let hx = h.eval(x);
            if hx == T::zero() {
                T::zero()
            } else {
                T::lit(2.0).powf(T::lit(k as f64) * a1) * hx
            }
        })
        .sum();
    Ok(match (lhs == T::zero(), rhs == T::zero()) {
        (true, true) => T::one(),
        (_, true) => T::infinity(),
        _ => lhs / rhs,
    })
}
