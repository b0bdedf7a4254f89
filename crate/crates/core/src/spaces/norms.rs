use crate::ext::{mul_conv, pow_conv, ExtReal};
use crate::oracle::StepFunction;
use crate::quadrature::{integrate_log, IntegrationOptions};
use crate::scalar::Scalar;
use crate::weights::{merged_breaks, Weight};

use super::rearrange;

/// Which function-space norm to evaluate.
#[derive(Clone, Copy, Debug)]
pub enum Norm<'a, T> {
    /// `(∫ f*^p w)^{1/p}`.
    Lambda { p: T, w: &'a Weight<T> },
    /// `(∫ (f** − f*)^q u)^{1/q}`.
    S { q: T, u: &'a Weight<T> },
    /// `(∫ (∫_0^t f^p v^p)^{q/p} u^q)^{1/q}`.
    Ces { p: T, q: T, u: &'a Weight<T>, v: &'a Weight<T> },
    /// `(∫ (∫_t^∞ f^p v^p)^{q/p} u^q)^{1/q}`.
    Cop { p: T, q: T, u: &'a Weight<T>, v: &'a Weight<T> },
}

/// Evaluates `which` at `f`. The rearrangement-invariant norms rearrange
/// `f` first, so passing `f` or `f*` gives the same value.
pub fn norm<T: Scalar>(f: &StepFunction<T>, which: Norm<'_, T>) -> ExtReal<T> {
    let value = match which {
        Norm::Lambda { p, w } => {
            let star = rearrange(f);
            let s: T = star.star().cells().map(|(a, b, c)| mul_conv(c.powf(p), w.integral(a, b))).sum();
            pow_conv(s, T::one() / p)
        }
        Norm::S { q, u } => {
            let star = rearrange(f);
            let k = star.oscillation_coefficients();
            let tu = u.mul(&Weight::power(T::one(), -q).expect("monomial"));
            let b = star.star().breakpoints();
            let mut s = T::zero();
            for (i, &ki) in k.iter().enumerate() {
                if ki == T::zero() {
                    continue;
                }
                let hi = if i + 1 < b.len() { b[i + 1] } else { T::infinity() };
                s = s + mul_conv(ki.powf(q), tu.integral(b[i], hi));
            }
            pow_conv(s, T::one() / q)
        }
        Norm::Ces { p, q, u, v } => cesaro(f, p, q, u, v, false),
        Norm::Cop { p, q, u, v } => cesaro(f, p, q, u, v, true),
    };
    ExtReal::new(value)
}

fn cesaro<T: Scalar>(f: &StepFunction<T>, p: T, q: T, u: &Weight<T>, v: &Weight<T>, copson: bool) -> T {
    let opts = IntegrationOptions::default();
    let vp = v.powf(p);
    let uq = u.powf(q);
    let qp = q / p;
    let splits = merged_breaks(&[&uq, &vp]);
    let cells: Vec<(T, T, T)> = f.cells().map(|(a, b, c)| (a, b, c.powf(p))).collect();
    let b = f.breakpoints();
    let mut s = T::zero();
    if copson {
        let mut acc = T::zero();
        for &(a, b, c) in cells.iter().rev() {
            let g = |t: T| mul_conv(pow_conv(acc + c * vp.integral(t, b), qp), uq.eval(t));
            s = s + if c == T::zero() { mul_conv(pow_conv(acc, qp), uq.integral(a, b)) } else { integrate_log(&g, a, b, &splits, opts).value };
            acc = acc + c * vp.integral(a, b);
        }
        s = s + mul_conv(pow_conv(acc, qp), uq.primitive(b[0]));
    } else {
        let mut acc = T::zero();
        for &(a, b, c) in &cells {
            let g = |t: T| mul_conv(pow_conv(acc + c * vp.integral(a, t), qp), uq.eval(t));
            s = s + if c == T::zero() { mul_conv(pow_conv(acc, qp), uq.integral(a, b)) } else { integrate_log(&g, a, b, &splits, opts).value };
            acc = acc + c * vp.integral(a, b);
        }
        s = s + mul_conv(pow_conv(acc, qp), uq.tail(b[b.len() - 1]));
    }
    pow_conv(s, T::one() / q)
}
