use crate::characterization::Exponents;
use crate::error::{Error, Result};
use crate::ext::{mul_conv, pow_conv};
use crate::quadrature::{integrate_log, IntegrationOptions};
use crate::scalar::Scalar;
use crate::weights::{merged_breaks, Weight};

use super::StepFunction;

/// Both sides of the main inequality for a step function `f`:
/// `(∫ (∫_0^t f^r v)^{q/r} u)^{1/q}` and `(∫ (∫_t^∞ f)^p w)^{1/p}`.
pub fn main_sides<T: Scalar>(
    f: &StepFunction<T>,
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
) -> (T, T) {
    main_sides_weighted(f, None, e, u, v, w)
}

/// [`main_sides`] for `f · m` with `f` a step function and `m` a weight.
pub fn main_sides_weighted<T: Scalar>(
    f: &StepFunction<T>,
    m: Option<&Weight<T>>,
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
) -> (T, T) {
    let opts = IntegrationOptions::default();
    let (r, p, q) = (e.r, e.p, e.q);
    let qr = q / r;
    // ∫ (c m)^r v = c^r ∫ m^r v on a cell where f = c.
    let mv = m.map(|m| m.powf(r).mul(v));
    let inner_v = mv.as_ref().unwrap_or(v);
    let mass = |a: T, b: T| match m {
        Some(m) => m.integral(a, b),
        None => b - a,
    };

    let splits = merged_breaks(&[u, inner_v]);
    let mut lhs = T::zero();
    let mut acc = T::zero();
    for (a, b, c) in f.cells() {
        let cr = c.powf(r);
        let piece = if cr == T::zero() {
            mul_conv(pow_conv(acc, qr), u.integral(a, b))
        } else {
            let g = |t: T| mul_conv(pow_conv(acc + cr * inner_v.integral(a, t), qr), u.eval(t));
            integrate_log(&g, a, b, &splits, opts).value
        };
        lhs = lhs + piece;
        acc = acc + cr * inner_v.integral(a, b);
    }
    let last = f.breakpoints()[f.len()];
    lhs = lhs + mul_conv(pow_conv(acc, qr), u.tail(last));

    let wsplits = match m {
        Some(m) => merged_breaks(&[w, m]),
        None => w.breakpoints().to_vec(),
    };
    let mut rhs = T::zero();
    let mut tail = T::zero();
    for (a, b, c) in f.cells().collect::<Vec<_>>().into_iter().rev() {
        let piece = if c == T::zero() {
            mul_conv(pow_conv(tail, p), w.integral(a, b))
        } else {
            let g = |t: T| mul_conv(pow_conv(tail + c * mass(t, b), p), w.eval(t));
            integrate_log(&g, a, b, &wsplits, opts).value
        };
        rhs = rhs + piece;
        tail = tail + c * mass(a, b);
    }
    rhs = rhs + mul_conv(pow_conv(tail, p), w.primitive(f.breakpoints()[0]));

    (pow_conv(lhs, T::one() / q), pow_conv(rhs, T::one() / p))
}

/// LHS/RHS of the main inequality for `f`; a lower bound on the best constant.
pub fn main_ratio<T: Scalar>(
    f: &StepFunction<T>,
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
) -> Result<T> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let (lhs, rhs) = main_sides(f, e, u, v, w);
    if rhs == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(if rhs.is_infinite() { T::zero() } else { lhs / rhs })
}
