use crate::characterization::Exponents;
use crate::discretization::DiscretizingSequence;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::quadrature::{sup_log, LogGrid};
use crate::scalar::Scalar;
use crate::weights::{merged_breaks, Weight};

use super::StepFunction;

/// Sub-cells per dyadic cell when an `r < 1` profile is discretized.
const SUBCELLS: usize = 8;
/// Relative width of the box used for `r = 1`.
const BOX_WIDTH: f64 = 1e-3;

/// `f = Σ_m 2^{-m/p} a_m h_m` where `h_m` lives on `[x_{m-1}, x_m]`, has unit
/// integral and nearly attains `V_r(x_{m-1}, x_m)`: the profile
/// `v^{1/(1-r)}` for `r < 1`, a thin box where `v` peaks for `r = 1`.
///
/// `a` lists `(m, a_m)`; indices whose cell is not finite are skipped.
pub fn paper_test_functions<T: Scalar>(
    e: &Exponents<T>,
    v: &Weight<T>,
    seq: &DiscretizingSequence<T>,
    a: &[(i32, T)],
) -> Result<StepFunction<T>> {
    let mut pieces: Vec<(T, T, T)> = Vec::new();
    for &(m, am) in a {
        if am == T::zero() || m - 1 < seq.k_min() || m > seq.k_top() {
            continue;
        }
        let (lo, hi) = (seq.x(m - 1), seq.x(m));
        if !hi.is_finite() {
            continue;
        }
        let scale = am * T::lit(2.0).powf(-T::lit(m as f64) / e.p);
        pieces.extend(profile(e.r, v, lo, hi).into_iter().map(|(a, b, c)| (a, b, c * scale)));
    }
    if pieces.is_empty() {
        return Err(Error::ZeroFunction);
    }
    pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut breaks = vec![pieces[0].0];
    let mut values = Vec::new();
    for (a, b, c) in pieces {
        let last = *breaks.last().unwrap();
        if a > last {
            breaks.push(a);
            values.push(T::zero());
        }
        breaks.push(b);
        values.push(c);
    }
    StepFunction::new(breaks, values)
}

/// Cells `(a, b, value)` of a unit-mass near-extremal profile on `[lo, hi]`.
fn profile<T: Scalar>(r: T, v: &Weight<T>, lo: T, hi: T) -> Vec<(T, T, T)> {
    if r < T::one() {
        let powered = v.powf(T::one() / (T::one() - r));
        let mass = powered.integral(lo, hi);
        let ratio = (hi / lo).ln() / T::lit(SUBCELLS as f64);
        (0..SUBCELLS)
            .map(|i| {
                let a = lo * (ratio * T::lit(i as f64)).exp();
                let b = if i + 1 == SUBCELLS { hi } else { lo * (ratio * T::lit((i + 1) as f64)).exp() };
                (a, b, powered.integral(a, b) / mass / (b - a))
            })
            .collect()
    } else {
        let eps = (hi - lo) * T::lit(BOX_WIDTH);
        let s = sup_log(&|t: T| v.eval(t), lo, hi, v.breakpoints(), &LogGrid { min: lo, max: hi, per_decade: 64 });
        let start = (s.arg - eps * T::lit(0.5)).max(lo).min(hi - eps);
        vec![(start, start + eps, T::one() / eps)]
    }
}

/// Exact best constant for `r = p = q = 1`: `ess sup_s v(s) U(s) / W(s)`.
pub fn fubini_exact_constant<T: Scalar>(
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
) -> Result<ExtReal<T>> {
    if e.r != T::one() || e.p != T::one() || e.q != T::one() {
        return Err(Error::WrongCase("the closed form needs r = p = q = 1".into()));
    }
    let splits = merged_breaks(&[u, v, w]);
    let f = |s: T| {
        let ws = w.primitive(s);
        if ws == T::zero() {
            return T::infinity();
        }
        v.eval(s) * u.tail(s) / ws
    };
    Ok(ExtReal::new(sup_log(&f, T::zero(), T::infinity(), &splits, &LogGrid::default()).value))
}
