//! Monotone tables of inner quantities on a shared logarithmic grid.
//!
//! Nested constants need `∫_0^x g` or `sup_{s<x} h(s)` at every outer
//! quadrature node. Both are tabulated once at the grid nodes and completed
//! between nodes by a single local rule.

use crate::ext::pow_conv;
use crate::quadrature::{adaptive, gauss_legendre, golden_max, integrate_log, sup_log, Estimate, IntegrationOptions, LogGrid};
use crate::scalar::Scalar;

/// Range tabulated at full density.
pub(crate) fn core_range<T: Scalar>() -> (T, T) {
    (T::lit(1e-16).max(T::min_positive_value().sqrt()), T::lit(1e16).min(T::max_value().sqrt()))
}

/// Grid nodes covering the range where outer quadratures spend their effort:
/// six per decade on the core range, two per decade out to the truncation
/// points of the improper quadrature so no lookup falls off the table.
pub(crate) fn table_nodes<T: Scalar>(splits: &[T]) -> Vec<T> {
    let (lo, hi) = core_range::<T>();
    let mut nodes = LogGrid { min: lo, max: hi, per_decade: 6 }.nodes(splits);
    let span = T::max_log_span();
    let (far_lo, far_hi) = ((-span).exp(), span.exp());
    if far_lo < lo {
        let below = LogGrid { min: far_lo, max: lo, per_decade: 2 }.nodes(splits);
        nodes.extend(below);
    }
    if far_hi > hi {
        let above = LogGrid { min: hi, max: far_hi, per_decade: 2 }.nodes(splits);
        nodes.extend(above);
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();
    nodes
}

fn locate<T: Scalar>(nodes: &[T], x: T) -> Option<usize> {
    if x < nodes[0] || x >= nodes[nodes.len() - 1] {
        return None;
    }
    Some(nodes.partition_point(|&t| t <= x) - 1)
}

/// `x ↦ ∫_0^x g` for a nonnegative integrand `g`.
pub(crate) struct Cumulative<'a, T> {
    g: Box<dyn Fn(T) -> T + 'a>,
    nodes: Vec<T>,
    prefix: Vec<T>,
    splits: Vec<T>,
    rule: (Vec<T>, Vec<T>),
}

impl<'a, T: Scalar> Cumulative<'a, T> {
    pub fn new(g: impl Fn(T) -> T + 'a, nodes: &[T], splits: &[T]) -> Self {
        let opts = IntegrationOptions::<T>::default();
        let g: Box<dyn Fn(T) -> T + 'a> = Box::new(g);
        let head = integrate_log(&*g, T::zero(), nodes[0], splits, opts);
        // The far nodes sit at the truncation points of the improper rule,
        // which cannot see divergence there; test it on the core range.
        let (core_lo, _) = core_range::<T>();
        let diverges = nodes[0] < core_lo && !integrate_log(&*g, T::zero(), core_lo, splits, opts).is_finite();
        let mut prefix = Vec::with_capacity(nodes.len());
        let mut acc = if diverges { T::infinity() } else { head.value };
        prefix.push(acc);
        let h = |s: T| {
            let t = s.exp();
            let v = g(t);
            if v == T::zero() {
                T::zero()
            } else {
                v * t
            }
        };
        for w in nodes.windows(2) {
            let cell = if acc.is_finite() {
                adaptive(&h, &[w[0].ln(), w[1].ln()], opts.rel_tol, 64)
            } else {
                Estimate::infinite()
            };
            acc = acc + cell.value;
            prefix.push(acc);
        }
        Cumulative { g, nodes: nodes.to_vec(), prefix, splits: splits.to_vec(), rule: gauss_legendre(10) }
    }

    pub fn eval(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        match locate(&self.nodes, x) {
            Some(i) => {
                let base = self.prefix[i];
                let t0 = self.nodes[i];
                if x == t0 || !base.is_finite() {
                    return base;
                }
                // Partial cell: one Gauss-Legendre panel in ln t.
                let (a, b) = (t0.ln(), x.ln());
                let half = T::lit(0.5) * (b - a);
                let mid = T::lit(0.5) * (a + b);
                let (xs, ws) = &self.rule;
                let mut acc = T::zero();
                for (&xi, &wi) in xs.iter().zip(ws) {
                    let t = (mid + half * xi).exp();
                    let v = (self.g)(t);
                    if v != T::zero() {
                        acc = acc + wi * v * t;
                    }
                }
                base + acc * half
            }
            None if x < self.nodes[0] => {
                integrate_log(&*self.g, T::zero(), x, &self.splits, IntegrationOptions::default()).value
            }
            None => {
                let last = self.nodes.len() - 1;
                let base = self.prefix[last];
                if x.is_infinite() {
                    return self.total();
                }
                base + integrate_log(&*self.g, self.nodes[last], x, &self.splits, IntegrationOptions::default()).value
            }
        }
    }

    /// `∫_0^∞ g`.
    pub fn total(&self) -> T {
        let (_, core_hi) = core_range::<T>();
        let start = core_hi.min(self.nodes[self.nodes.len() - 1]);
        let base = self.eval(start);
        if !base.is_finite() {
            return base;
        }
        base + integrate_log(&*self.g, start, T::infinity(), &self.splits, IntegrationOptions::default()).value
    }

}

/// `t ↦ sup_{s ∈ (0,t)} h(s)` for a nonnegative `h`.
pub(crate) struct RunningSup<'a, T> {
    h: Box<dyn Fn(T) -> T + 'a>,
    nodes: Vec<T>,
    prefix: Vec<T>,
    splits: Vec<T>,
}

const CELL_ITERS: usize = 60;

impl<'a, T: Scalar> RunningSup<'a, T> {
    pub fn new(h: impl Fn(T) -> T + 'a, nodes: &[T], splits: &[T]) -> Self {
        let h: Box<dyn Fn(T) -> T + 'a> = Box::new(h);
        let grid = LogGrid::default();
        let head = sup_log(&*h, T::zero(), nodes[0], splits, &grid).value;
        let (core_lo, _) = core_range::<T>();
        let unbounded = nodes[0] < core_lo && sup_log(&*h, T::zero(), core_lo, splits, &grid).value.is_infinite();
        let mut prefix = Vec::with_capacity(nodes.len());
        let mut acc = if unbounded { T::infinity() } else { head.max(h(nodes[0])) };
        prefix.push(acc);
        for w in nodes.windows(2) {
            if acc.is_finite() {
                acc = acc.max(cell_sup(&*h, w[0], w[1]));
            }
            prefix.push(acc);
        }
        RunningSup { h, nodes: nodes.to_vec(), prefix, splits: splits.to_vec() }
    }

    pub fn eval(&self, t: T) -> T {
        if !(t > T::zero()) {
            return T::zero();
        }
        let grid = LogGrid::default();
        match locate(&self.nodes, t) {
            Some(i) => {
                let base = self.prefix[i];
                if t == self.nodes[i] || !base.is_finite() {
                    return base;
                }
                base.max(cell_sup(&*self.h, self.nodes[i], t))
            }
            None if t < self.nodes[0] => sup_log(&*self.h, T::zero(), t, &self.splits, &grid).value,
            None => {
                let last = self.nodes.len() - 1;
                let base = self.prefix[last];
                if !base.is_finite() {
                    return base;
                }
                base.max(sup_log(&*self.h, self.nodes[last], t, &self.splits, &grid).value)
            }
        }
    }
}

/// Maximum of `h` over a short interval `[a, b]`, endpoints included.
fn cell_sup<T: Scalar, H: Fn(T) -> T + ?Sized>(h: &H, a: T, b: T) -> T {
    let ha = h(a);
    let hb = h(b);
    let g = |s: T| h(s.exp());
    let (_, inner) = golden_max(&g, a.ln(), b.ln(), CELL_ITERS);
    let m = ha.max(hb).max(inner);
    if m.is_nan() {
        T::zero()
    } else {
        m
    }
}

/// `x^e` propagated error for `x ± dx`.
pub(crate) fn pow_with_error<T: Scalar>(e: Estimate<T>, k: T) -> Estimate<T> {
    let value = pow_conv(e.value, k);
    let error = if e.value > T::zero() && e.value.is_finite() && value.is_finite() {
        (value * k * e.error / e.value).abs()
    } else {
        T::zero()
    };
    Estimate { value, error }
}
