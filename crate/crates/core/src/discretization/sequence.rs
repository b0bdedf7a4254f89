use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weights::{Weight, WeightKind};

/// Points `x_k` with `W(x_k) = 2^k` for `k = k_min, ..., k_top`.
///
/// When `∫_0^∞ w < ∞` the index `M = ⌊log₂ W(∞)⌋` is finite and `x_M = +∞`.
/// Otherwise the sequence is cut at a cap and `truncated` is set.
#[derive(Clone, Debug, Serialize)]
pub struct DiscretizingSequence<T> {
    k_min: i32,
    m: Option<i32>,
    points: Vec<T>,
    w_values: Vec<T>,
    truncated: bool,
}

/// Slack in `log₂` units when deciding `2^M ≤ W(∞)`. Tables carry the
/// interpolation error of their samples, so they get a wider margin.
const MASS_SLACK: f64 = 1e-9;
const TABLE_MASS_SLACK: f64 = 1e-3;

impl<T: Scalar> DiscretizingSequence<T> {
    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    /// Last recorded index.
    pub fn k_top(&self) -> i32 {
        self.k_min + self.points.len() as i32 - 1
    }

    /// `M`, or `None` when the sequence runs to `+∞`.
    pub fn m(&self) -> Option<i32> {
        self.m
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn w_values(&self) -> &[T] {
        &self.w_values
    }

    /// True when the index window stops short of `M`.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// `x_k` for `k_min ≤ k ≤ k_top`.
    pub fn x(&self, k: i32) -> T {
        self.points[(k - self.k_min) as usize]
    }

    /// `(k, x_k, W(x_k))` rows.
    pub fn rows(&self) -> impl Iterator<Item = (i32, T, T)> + '_ {
        self.points.iter().zip(&self.w_values).enumerate().map(move |(i, (&x, &wv))| (self.k_min + i as i32, x, wv))
    }
}

/// Builds the dyadic discretizing sequence of `W(t) = ∫_0^t w` on the index
/// window `k_min ..= min(M, k_max_cap)`.
pub fn discretizing_sequence<T: Scalar>(w: &Weight<T>, k_min: i32, k_max_cap: i32) -> Result<DiscretizingSequence<T>> {
    if k_max_cap <= k_min {
        return Err(Error::InvalidSequence(format!("empty index window {k_min}..={k_max_cap}")));
    }
    let total = w.total();
    if total == T::zero() {
        return Err(Error::DegenerateWeight("W vanishes identically".into()));
    }
    let probe = T::min_positive_value().sqrt();
    if w.primitive(probe).is_infinite() {
        return Err(Error::DegenerateWeight("W is infinite on (0, ∞)".into()));
    }
    let m = if total.is_finite() {
        let slack = if matches!(w.kind(), WeightKind::Table { .. }) { TABLE_MASS_SLACK } else { MASS_SLACK };
        let m = (total.log2() + T::lit(slack)).floor().to_i32().unwrap_or(i32::MAX);
        if m < k_min {
            return Err(Error::DegenerateWeight(format!("W(∞) = {total} lies below 2^{k_min}")));
        }
        Some(m)
    } else {
        None
    };
    let (k_top, truncated) = match m {
        Some(m) if m <= k_max_cap => (m, false),
        _ => (k_max_cap, true),
    };
    let two = T::lit(2.0);
    let mut points = Vec::new();
    let mut w_values = Vec::new();
    let mut prev = T::zero();
    for k in k_min..=k_top {
        if Some(k) == m {
            points.push(T::infinity());
            w_values.push(total);
            break;
        }
        let target = two.powi(k);
        let x = solve_mass(w, target, prev);
        points.push(x);
        w_values.push(w.primitive(x));
        prev = x;
    }
    Ok(DiscretizingSequence { k_min, m, points, w_values, truncated })
}

/// `x` with `W(x) = target`: closed-form inversion, falling back to
/// bisection in `ln t` to `1e-12` relative when the inversion misses.
fn solve_mass<T: Scalar>(w: &Weight<T>, target: T, seed: T) -> T {
    let x = w.invert_primitive(target);
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if x.is_finite() && x > seed && ((w.primitive(x) - target) / target).abs() <= tol {
        return x;
    }
    let mut lo = if seed > T::zero() { seed } else { T::one() };
    while w.primitive(lo) > target {
        lo = lo * T::lit(0.5);
    }
    let mut hi = lo * T::lit(2.0);
    while w.primitive(hi) < target {
        hi = hi * T::lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if w.primitive(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - T::one() <= tol {
            break;
        }
    }
    hi
}
