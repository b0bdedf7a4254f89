//! Adaptive Gauss–Kronrod integration, improper integrals over `(0, ∞)` in the
//! logarithmic variable `t = e^s`, and maximization over logarithmic grids.
//!
//! Every routine treats a non-finite integrand value as divergence and
//! reports `+∞` rather than failing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Scalar;

// 21-point Kronrod extension of the 10-point Gauss rule (abscissae in
// decreasing order, the last one is the centre).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525197016,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const LN_10: f64 = std::f64::consts::LN_10;

/// Value of a numerical integral or supremum with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

impl<T: Scalar> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Estimate { value, error: T::zero() }
    }

    pub fn infinite() -> Self {
        Estimate { value: T::infinity(), error: T::zero() }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// One application of the 21-point Kronrod rule on `[a, b]`.
/// Returns `(integral, error estimate)`.
pub fn gk21<T: Scalar, F: Fn(T) -> T + ?Sized>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let centre = half * (a + b);
    let h = half * (b - a);
    let fc = f(centre);
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = T::zero();
    for j in 0..10 {
        let dx = h * T::lit(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        let s = f1 + f2;
        res_k = res_k + T::lit(WGK[j]) * s;
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * s;
        }
    }
    let value = res_k * h;
    let err = ((res_k - res_g) * h).abs();
    if !value.is_finite() {
        return (T::infinity(), T::zero());
    }
    (value, err)
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Panel<T> {}
impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Global adaptive integration of `f` over the consecutive panels delimited
/// by `breaks` (sorted, at least two points).
///
/// Bisects the panel with the largest error until the summed error drops
/// below `rel_tol` times the summed value or `max_panels` is reached.
pub fn adaptive<T: Scalar, F: Fn(T) -> T + ?Sized>(
    f: &F,
    breaks: &[T],
    rel_tol: T,
    max_panels: usize,
) -> Estimate<T> {
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = T::zero();
    for w in breaks.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let (v, e) = gk21(f, w[0], w[1]);
        if !v.is_finite() {
            return Estimate::infinite();
        }
        total = total + v;
        total_err = total_err + e;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
    }
    let tiny = T::min_positive_value();
    while heap.len() < max_panels {
        if total_err <= rel_tol * total.abs() || total_err <= tiny {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel cannot be split further in this precision.
            heap.push(Panel { error: T::zero(), ..worst });
            total_err = total_err - worst.error;
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        if !v1.is_finite() || !v2.is_finite() {
            return Estimate::infinite();
        }
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let (mut value, mut error) = (T::zero(), T::zero());
    for p in heap.iter() {
        value = value + p.value;
        error = error + p.error;
    }
    Estimate { value, error }
}

/// Tuning for the improper integration routine.
#[derive(Clone, Copy, Debug)]
pub struct IntegrationOptions<T> {
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Scalar> Default for IntegrationOptions<T> {
    fn default() -> Self {
        IntegrationOptions { rel_tol: T::quad_tol(), max_panels: 400 }
    }
}

fn ln_refs<T: Scalar>(a: T, b: T, splits: &[T]) -> (Vec<T>, T, T) {
    let mut inner: Vec<T> = splits
        .iter()
        .copied()
        .filter(|&s| s > a && s < b && s.is_finite())
        .map(|s| s.ln())
        .collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
    inner.dedup();
    let mut refs = inner.clone();
    if a > T::zero() {
        refs.push(a.ln());
    }
    if b.is_finite() {
        refs.push(b.ln());
    }
    if a < T::one() && b > T::one() {
        refs.push(T::zero());
    }
    let lo = refs.iter().copied().fold(T::infinity(), T::min);
    let hi = refs.iter().copied().fold(T::neg_infinity(), T::max);
    (inner, lo, hi)
}

/// `∫_a^b f(t) dt` for `0 ≤ a < b ≤ ∞`, evaluated in the variable `s = ln t`.
///
/// Finite parts are integrated adaptively with `splits` (points where `f`
/// may be non-smooth) as forced panel boundaries. Unbounded ends are covered
/// by successive windows of four decades until the tail contribution falls
/// below the tolerance; a geometric extrapolation closes slowly decaying
/// tails and non-decaying window contributions are reported as divergence.
pub fn integrate_log<T: Scalar, F: Fn(T) -> T + ?Sized>(
    f: &F,
    a: T,
    b: T,
    splits: &[T],
    opts: IntegrationOptions<T>,
) -> Estimate<T> {
    if !(b > a) {
        return Estimate::exact(T::zero());
    }
    let g = |s: T| {
        let t = s.exp();
        let v = f(t);
        if v == T::zero() {
            T::zero()
        } else {
            v * t
        }
    };
    let (inner, lo_ref, hi_ref) = ln_refs(a, b, splits);
    let margin = T::lit(4.0 * LN_10);
    let span = T::max_log_span();
    let s_lo = if a > T::zero() { a.ln() } else { (lo_ref - margin).max(-span) };
    let s_hi = if b.is_finite() { b.ln() } else { (hi_ref + margin).min(span) };
    let mut breaks = vec![s_lo];
    breaks.extend(inner.iter().copied().filter(|&s| s > s_lo && s < s_hi));
    breaks.push(s_hi);
    let core = adaptive(&g, &breaks, opts.rel_tol, opts.max_panels);
    if !core.is_finite() {
        return Estimate::infinite();
    }
    let mut value = core.value;
    let mut error = core.error;
    if a == T::zero() {
        match tail(&g, s_lo, -T::one(), value, opts) {
            Some(t) => {
                value = value + t.value;
                error = error + t.error;
            }
            None => return Estimate::infinite(),
        }
    }
    if b.is_infinite() {
        match tail(&g, s_hi, T::one(), value, opts) {
            Some(t) => {
                value = value + t.value;
                error = error + t.error;
            }
            None => return Estimate::infinite(),
        }
    }
    Estimate { value, error }
}

/// Integrates `g` from `start` towards `dir·∞` window by window. `None` on divergence.
fn tail<T: Scalar, G: Fn(T) -> T>(
    g: &G,
    start: T,
    dir: T,
    core: T,
    opts: IntegrationOptions<T>,
) -> Option<Estimate<T>> {
    let width = T::lit(4.0 * LN_10);
    let span = T::max_log_span();
    let mut total = T::zero();
    let mut error = T::zero();
    let mut prev: Option<T> = None;
    let mut prev_ratio: Option<T> = None;
    let mut stalls = 0usize;
    let mut pos = start;
    loop {
        let next = pos + dir * width;
        if next.abs() > span {
            // Out of representable range: close the tail geometrically if it decays.
            return match prev_ratio {
                Some(rho) if rho < T::lit(0.99) => {
                    let last = prev.unwrap_or(T::zero());
                    let rest = last * rho / (T::one() - rho);
                    Some(Estimate { value: total + rest, error: error + rest })
                }
                Some(_) => None,
                None => Some(Estimate { value: total, error }),
            };
        }
        let (lo, hi) = if dir > T::zero() { (pos, next) } else { (next, pos) };
        let piece = adaptive(g, &[lo, hi], opts.rel_tol, opts.max_panels / 4 + 8);
        if !piece.is_finite() {
            return None;
        }
        total = total + piece.value;
        error = error + piece.error;
        let scale = (core + total).abs();
        if piece.value == T::zero() || piece.value.abs() <= opts.rel_tol * scale {
            return Some(Estimate { value: total, error });
        }
        if let Some(p) = prev {
            let rho = piece.value / p;
            if rho >= T::lit(0.99) {
                stalls += 1;
                if stalls >= 3 {
                    return None;
                }
            } else {
                stalls = 0;
                if let Some(pr) = prev_ratio {
                    let stable = (rho - pr).abs() <= T::lit(0.1) * pr.abs().max(rho.abs());
                    let rest = piece.value * rho / (T::one() - rho);
                    if stable && rho > T::zero() && rest <= opts.rel_tol * scale {
                        return Some(Estimate { value: total + rest, error: error + rest });
                    }
                }
            }
            prev_ratio = Some(rho);
        }
        prev = Some(piece.value);
        pos = next;
    }
}

/// Settings of the logarithmic grid used for suprema over `(0, ∞)`.
#[derive(Clone, Copy, Debug)]
pub struct LogGrid<T> {
    pub min: T,
    pub max: T,
    pub per_decade: usize,
}

impl<T: Scalar> Default for LogGrid<T> {
    fn default() -> Self {
        LogGrid { min: T::lit(1e-8), max: T::lit(1e8), per_decade: 8 }
    }
}

impl<T: Scalar> LogGrid<T> {
    /// Grid nodes in `t`, including `extra` points inside `[min, max]`.
    pub fn nodes(&self, extra: &[T]) -> Vec<T> {
        let lo = self.min.ln();
        let hi = self.max.ln();
        let step = T::lit(LN_10) / T::lit(self.per_decade as f64);
        let n = ((hi - lo) / step).ceil().to_usize().unwrap_or(1).max(1);
        let mut out: Vec<T> = (0..=n)
            .map(|i| (lo + (hi - lo) * T::lit(i as f64) / T::lit(n as f64)).exp())
            .collect();
        out.extend(extra.iter().copied().filter(|&x| x > self.min && x < self.max));
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out.dedup();
        out
    }
}

/// Result of maximizing a nonnegative function over an interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupEstimate<T> {
    pub value: T,
    pub arg: T,
    pub error: T,
}

impl<T: Scalar> SupEstimate<T> {
    fn infinite(arg: T) -> Self {
        SupEstimate { value: T::infinity(), arg, error: T::zero() }
    }
}

/// Golden-section maximization of `g` on `[lo, hi]`.
pub fn golden_max<T: Scalar, G: Fn(T) -> T + ?Sized>(g: &G, lo: T, hi: T, iters: usize) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = clean(g(c));
    let mut fd = clean(g(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = clean(g(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = clean(g(d));
        }
        if (b - a).abs() <= T::epsilon() * T::lit(4.0) * (a.abs() + b.abs() + T::one()) {
            break;
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[inline]
fn clean<T: Scalar>(v: T) -> T {
    if v.is_nan() {
        T::neg_infinity()
    } else {
        v
    }
}

/// `sup_{t ∈ (a,b)} f(t)` for nonnegative `f`, `0 ≤ a < b ≤ ∞`.
///
/// Scans a logarithmic grid, refines around the best node by golden-section
/// search in `ln t`, probes one-sided limits at `splits`, and extends the
/// search past the grid towards an open end at `0` or `∞` four decades at a
/// time. Unbounded growth across three consecutive extensions is reported as
/// `+∞`.
pub fn sup_log<T: Scalar, F: Fn(T) -> T + ?Sized>(
    f: &F,
    a: T,
    b: T,
    splits: &[T],
    grid: &LogGrid<T>,
) -> SupEstimate<T> {
    let g = |s: T| clean(f(s.exp()));
    let side = T::lit(1e-9);
    let (inner, _, _) = ln_refs(a, b, splits);
    let step = T::lit(LN_10) / T::lit(grid.per_decade as f64);
    let s_lo = if a > T::zero() { a.ln() } else { grid.min.ln().min(b.ln() - T::lit(4.0 * LN_10)) };
    let s_hi = if b.is_finite() { b.ln() } else { grid.max.ln().max(a.ln() + T::lit(4.0 * LN_10)) };
    // Open ends are probed just inside the interval.
    let eps_s = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    let lo_probe = if a > T::zero() { s_lo + eps_s * (T::one() + s_lo.abs()) } else { s_lo };
    let hi_probe = if b.is_finite() { s_hi - eps_s * (T::one() + s_hi.abs()) } else { s_hi };
    let n = ((s_hi - s_lo) / step).ceil().to_usize().unwrap_or(1).max(2);
    let mut pts: Vec<T> = (0..=n).map(|i| s_lo + (s_hi - s_lo) * T::lit(i as f64) / T::lit(n as f64)).collect();
    pts[0] = lo_probe;
    pts[n] = hi_probe;
    for &s in &inner {
        pts.push(s - side * (T::one() + s.abs()));
        pts.push(s + side * (T::one() + s.abs()));
    }
    pts.retain(|&s| s >= lo_probe && s <= hi_probe);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let vals: Vec<T> = pts.iter().map(|&s| g(s)).collect();
    let (mut best_i, mut best) = (0usize, T::neg_infinity());
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best.is_infinite() && best > T::zero() {
        return SupEstimate::infinite(pts[best_i].exp());
    }
    let mut arg = pts[best_i];
    // Golden refinement inside the bracketing grid cell pair.
    let lo_b = if best_i > 0 { pts[best_i - 1] } else { pts[0] };
    let hi_b = if best_i + 1 < pts.len() { pts[best_i + 1] } else { pts[pts.len() - 1] };
    let mut error = T::zero();
    if hi_b > lo_b {
        let (s_star, v_star) = golden_max(&g, lo_b, hi_b, 200);
        if v_star > best {
            error = v_star - best;
            best = v_star;
            arg = s_star;
        }
    }
    if a == T::zero() {
        match extend_sup(&g, s_lo, -step, grid.per_decade, best) {
            Extension::Diverged(s) => return SupEstimate::infinite(s.exp()),
            Extension::Improved(v, s, e) => {
                if v > best {
                    best = v;
                    arg = s;
                }
                error = error + e;
            }
        }
    }
    if b.is_infinite() {
        match extend_sup(&g, s_hi, step, grid.per_decade, best) {
            Extension::Diverged(s) => return SupEstimate::infinite(s.exp()),
            Extension::Improved(v, s, e) => {
                if v > best {
                    best = v;
                    arg = s;
                }
                error = error + e;
            }
        }
    }
    SupEstimate { value: best.max(T::zero()), arg: arg.exp(), error }
}

enum Extension<T> {
    Diverged(T),
    /// (best value, its ln-argument, error estimate)
    Improved(T, T, T),
}

fn extend_sup<T: Scalar, G: Fn(T) -> T>(g: &G, start: T, step: T, per_decade: usize, core_best: T) -> Extension<T> {
    let span = T::max_log_span();
    let per_window = 4 * per_decade;
    let mut best = core_best;
    let mut best_s = start;
    let mut prev_inc: Option<T> = None;
    let mut growth = 0usize;
    let mut flat = 0usize;
    let mut pos = start;
    loop {
        let mut wmax = T::neg_infinity();
        let mut wmax_s = pos;
        let mut out_of_range = false;
        for i in 1..=per_window {
            let s = pos + step * T::lit(i as f64);
            if s.abs() > span {
                out_of_range = true;
                break;
            }
            let v = g(s);
            if v > wmax {
                wmax = v;
                wmax_s = s;
            }
        }
        if wmax.is_infinite() && wmax > T::zero() {
            return Extension::Diverged(wmax_s);
        }
        let inc = wmax - best;
        if inc > T::zero() {
            flat = 0;
            if let Some(p) = prev_inc {
                if inc >= T::lit(0.99) * p {
                    growth += 1;
                    if growth >= 3 {
                        return Extension::Diverged(wmax_s);
                    }
                } else {
                    growth = 0;
                }
            }
            best = wmax;
            best_s = wmax_s;
            if inc <= T::lit(1e-13).max(T::epsilon() * T::lit(8.0)) * best.abs() {
                return Extension::Improved(best, best_s, inc);
            }
            prev_inc = Some(inc);
        } else {
            flat += 1;
            prev_inc = None;
            growth = 0;
            if flat >= 2 {
                return Extension::Improved(best, best_s, T::zero());
            }
        }
        if out_of_range {
            // Close the remaining increase geometrically.
            let rest = match prev_inc {
                Some(p) if inc > T::zero() && inc < p => inc * (inc / p) / (T::one() - inc / p),
                Some(_) if inc > T::zero() => return Extension::Diverged(best_s),
                _ => T::zero(),
            };
            return Extension::Improved(best + rest, best_s, rest);
        }
        pos = pos + step * T::lit(per_window as f64);
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut xs = vec![0.0f64; n];
    let mut ws = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs.into_iter().map(T::lit).collect(), ws.into_iter().map(T::lit).collect())
}
