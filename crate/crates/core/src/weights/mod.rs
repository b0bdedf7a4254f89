//! Weights on `(0, ∞)`: power laws, piecewise power laws and tabulated
//! densities, with closed-form primitives, tails and essential suprema.
//!
//! Every variant is stored as a list of power-law segments. A table with
//! log-log linear interpolation is exactly such a list (one segment per grid
//! cell, the boundary cells extended to `0` and `∞`), so all three variants
//! share the same exact integration code.

mod functionals;
mod parse;

pub use functionals::{local_hardy_constant, local_hardy_with, v_r, VrFunctional};
pub(crate) use functionals::{local_hardy_integral, local_hardy_sup, merged_breaks};
pub use parse::{parse_weight, read_table_csv};

use std::fmt;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::scalar::Scalar;

/// Open interval `(a, b)` with `0 ≤ a < b ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a >= T::zero()) || !a.is_finite() || !(b > a) || b.is_nan() {
            return Err(Error::InvalidWeight(format!("invalid interval ({a}, {b})")));
        }
        Ok(Interval { a, b })
    }

    /// `(0, ∞)`.
    pub fn positive_axis() -> Self {
        Interval { a: T::zero(), b: T::infinity() }
    }

    pub fn contains(&self, other: &Interval<T>) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// `t ↦ value · (t / anchor)^alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLaw<T> {
    pub anchor: T,
    pub value: T,
    pub alpha: T,
}

impl<T: Scalar> PowerLaw<T> {
    /// `c · t^alpha`.
    pub fn monomial(c: T, alpha: T) -> Self {
        PowerLaw { anchor: T::one(), value: c, alpha }
    }

    #[inline]
    pub fn eval(&self, t: T) -> T {
        if self.alpha == T::zero() {
            self.value
        } else {
            self.value * (t / self.anchor).powf(self.alpha)
        }
    }

    /// Limit of the power law at `t` (which may be `0` or `∞`).
    fn limit(&self, t: T) -> T {
        if self.alpha == T::zero() {
            self.value
        } else if t == T::zero() {
            if self.alpha > T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else if t.is_infinite() {
            if self.alpha > T::zero() {
                T::infinity()
            } else {
                T::zero()
            }
        } else {
            self.eval(t)
        }
    }

    /// Coefficient `c` of the equivalent monomial `c · t^alpha`.
    pub fn coefficient(&self) -> T {
        self.value * self.anchor.powf(-self.alpha)
    }

    /// `∫_a^b value (t/anchor)^alpha dt` for `0 ≤ a < b ≤ ∞`.
    pub fn integral(&self, a: T, b: T) -> T {
        if !(b > a) {
            return T::zero();
        }
        let t0 = self.anchor;
        let scale = self.value * t0;
        let beta = self.alpha + T::one();
        if self.alpha == -T::one() {
            if a == T::zero() || b.is_infinite() {
                return T::infinity();
            }
            return scale * (b / a).ln();
        }
        if a == T::zero() {
            if beta <= T::zero() || b.is_infinite() {
                return T::infinity();
            }
            return scale * (b / t0).powf(beta) / beta;
        }
        if b.is_infinite() {
            if beta >= T::zero() {
                return T::infinity();
            }
            return scale * (a / t0).powf(beta) / (-beta);
        }
        // expm1 form keeps precision when alpha is close to -1.
        let xa = (a / t0).powf(beta);
        scale * xa * (beta * (b / a).ln()).exp_m1() / beta
    }

    /// Inverse of `x ↦ ∫_a^x` on this segment: the `x` with integral `mass`.
    fn invert_integral(&self, a: T, mass: T) -> T {
        let t0 = self.anchor;
        let scale = self.value * t0;
        let beta = self.alpha + T::one();
        if self.alpha == -T::one() {
            return a * (mass / scale).exp();
        }
        if a == T::zero() {
            return t0 * (mass * beta / scale).powf(T::one() / beta);
        }
        // (b/t0)^beta = (a/t0)^beta + beta * mass / scale
        let xa = (a / t0).powf(beta);
        let y = xa + beta * mass / scale;
        if y <= T::zero() {
            return T::infinity();
        }
        let ratio = (T::one() + beta * mass / (scale * xa)).ln() / beta;
        let b = a * ratio.exp();
        if b.is_finite() {
            b
        } else {
            t0 * y.powf(T::one() / beta)
        }
    }
}

/// Which constructor a weight came from.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind<T> {
    Power,
    PiecewisePower,
    /// Tabulated samples; the grid is kept for extrapolation reporting.
    Table { grid: Vec<T>, values: Vec<T> },
}

/// A positive weight on `(0, ∞)` made of power-law segments.
///
/// Segment `i` covers `(breaks[i-1], breaks[i])` with the conventions
/// `breaks[-1] = 0` and `breaks[n-1] = ∞`; point values at breakpoints are
/// taken from the right.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    kind: WeightKind<T>,
    breaks: Vec<T>,
    segments: Vec<PowerLaw<T>>,
}

fn check_positive<T: Scalar>(x: T, what: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{what} must be positive and finite, got {x}")))
    }
}

fn check_increasing<T: Scalar>(xs: &[T], what: &str) -> Result<()> {
    for &x in xs {
        check_positive(x, what)?;
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidWeight(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

impl<T: Scalar> Weight<T> {
    /// `c · t^alpha`.
    pub fn power(c: T, alpha: T) -> Result<Self> {
        check_positive(c, "power coefficient")?;
        if !alpha.is_finite() {
            return Err(Error::InvalidWeight(format!("exponent must be finite, got {alpha}")));
        }
        Ok(Weight { kind: WeightKind::Power, breaks: Vec::new(), segments: vec![PowerLaw::monomial(c, alpha)] })
    }

    /// The constant weight `c`.
    pub fn constant(c: T) -> Result<Self> {
        Self::power(c, T::zero())
    }

    /// Monomials `c_i t^{a_i}` glued at the increasing `breakpoints`.
    pub fn piecewise(breakpoints: Vec<T>, segments: Vec<(T, T)>) -> Result<Self> {
        check_increasing(&breakpoints, "breakpoints")?;
        if segments.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidWeight(format!(
                "{} breakpoints need {} segments, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                segments.len()
            )));
        }
        let mut segs = Vec::with_capacity(segments.len());
        for (c, a) in segments {
            check_positive(c, "power coefficient")?;
            if !a.is_finite() {
                return Err(Error::InvalidWeight("exponent must be finite".into()));
            }
            segs.push(PowerLaw::monomial(c, a));
        }
        let kind = if breakpoints.is_empty() { WeightKind::Power } else { WeightKind::PiecewisePower };
        Ok(Weight { kind, breaks: breakpoints, segments: segs })
    }

    /// Samples interpolated log-log linearly, extrapolated by the power law
    /// through the two boundary samples at each end.
    pub fn table(grid: Vec<T>, values: Vec<T>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::InvalidWeight("a table needs at least two (t, value) rows".into()));
        }
        check_increasing(&grid, "table grid")?;
        for &v in &values {
            check_positive(v, "table value")?;
        }
        let n = grid.len();
        let segments = (0..n - 1)
            .map(|i| {
                let alpha = (values[i + 1] / values[i]).ln() / (grid[i + 1] / grid[i]).ln();
                PowerLaw { anchor: grid[i], value: values[i], alpha }
            })
            .collect();
        let breaks = grid[1..n - 1].to_vec();
        Ok(Weight { kind: WeightKind::Table { grid, values }, breaks, segments })
    }

    pub fn kind(&self) -> &WeightKind<T> {
        &self.kind
    }

    pub fn segments(&self) -> &[PowerLaw<T>] {
        &self.segments
    }

    /// Interior breakpoints where the weight may be non-smooth.
    pub fn breakpoints(&self) -> &[T] {
        &self.breaks
    }

    /// Whether `iv` reaches outside the sampled range of a tabulated weight.
    pub fn extrapolates(&self, iv: &Interval<T>) -> bool {
        match &self.kind {
            WeightKind::Table { grid, .. } => iv.a < grid[0] || iv.b > grid[grid.len() - 1],
            _ => false,
        }
    }

    fn segment_index(&self, t: T) -> usize {
        self.breaks.partition_point(|&b| b <= t)
    }

    fn seg_bounds(&self, i: usize) -> (T, T) {
        let lo = if i == 0 { T::zero() } else { self.breaks[i - 1] };
        let hi = if i == self.breaks.len() { T::infinity() } else { self.breaks[i] };
        (lo, hi)
    }

    /// Point value `w(t)` for `t > 0`.
    #[inline]
    pub fn eval(&self, t: T) -> T {
        self.segments[self.segment_index(t)].eval(t)
    }

    /// `∫_a^b w` as an extended real, exact up to rounding.
    pub fn integrate(&self, iv: &Interval<T>) -> ExtReal<T> {
        ExtReal::new(self.integral(iv.a, iv.b))
    }

    /// Raw `∫_a^b w` (may be `+∞`); zero when `b ≤ a`.
    pub fn integral(&self, a: T, b: T) -> T {
        if !(b > a) {
            return T::zero();
        }
        let first = self.segment_index(a);
        let mut total = T::zero();
        for i in first..self.segments.len() {
            let (lo, hi) = self.seg_bounds(i);
            if lo >= b {
                break;
            }
            total = total + self.segments[i].integral(lo.max(a), hi.min(b));
            if total.is_infinite() {
                return total;
            }
        }
        total
    }

    /// `W(t) = ∫_0^t w`.
    #[inline]
    pub fn primitive(&self, t: T) -> T {
        self.integral(T::zero(), t)
    }

    /// `∫_t^∞ w`.
    #[inline]
    pub fn tail(&self, t: T) -> T {
        self.integral(t, T::infinity())
    }

    /// Total mass `∫_0^∞ w`.
    pub fn total(&self) -> T {
        self.integral(T::zero(), T::infinity())
    }

    /// The `x` with `∫_0^x w = mass`, `+∞` when the total mass is not larger.
    pub fn invert_primitive(&self, mass: T) -> T {
        let mut acc = T::zero();
        for i in 0..self.segments.len() {
            let (lo, hi) = self.seg_bounds(i);
            let piece = self.segments[i].integral(lo, hi);
            if acc + piece >= mass {
                return self.segments[i].invert_integral(lo, mass - acc).min(hi).max(lo);
            }
            acc = acc + piece;
        }
        T::infinity()
    }

    /// Essential supremum of `w` on `iv` (limits at the ends included).
    pub fn ess_sup(&self, iv: &Interval<T>) -> T {
        let first = self.segment_index(iv.a);
        let mut best = T::zero();
        for i in first..self.segments.len() {
            let (lo, hi) = self.seg_bounds(i);
            if lo >= iv.b {
                break;
            }
            let (l, h) = (lo.max(iv.a), hi.min(iv.b));
            let seg = &self.segments[i];
            let v = if seg.alpha > T::zero() {
                seg.limit(h)
            } else if seg.alpha < T::zero() {
                seg.limit(l)
            } else {
                seg.value
            };
            best = best.max(v);
        }
        best
    }

    fn map_segments(&self, kind: WeightKind<T>, f: impl Fn(&PowerLaw<T>) -> PowerLaw<T>) -> Self {
        Weight { kind, breaks: self.breaks.clone(), segments: self.segments.iter().map(f).collect() }
    }

    /// `λ · w`.
    pub fn scale(&self, lambda: T) -> Self {
        let kind = match &self.kind {
            WeightKind::Table { grid, values } => {
                WeightKind::Table { grid: grid.clone(), values: values.iter().map(|&v| v * lambda).collect() }
            }
            k => k.clone(),
        };
        self.map_segments(kind, |s| PowerLaw { value: s.value * lambda, ..*s })
    }

    /// `w^k`, closed form on every segment.
    pub fn powf(&self, k: T) -> Self {
        let kind = match &self.kind {
            WeightKind::Table { grid, values } => {
                WeightKind::Table { grid: grid.clone(), values: values.iter().map(|&v| v.powf(k)).collect() }
            }
            other => other.clone(),
        };
        self.map_segments(kind, |s| PowerLaw { anchor: s.anchor, value: s.value.powf(k), alpha: s.alpha * k })
    }

    /// Pointwise product `w · other`.
    pub fn mul(&self, other: &Weight<T>) -> Self {
        let mut breaks: Vec<T> = self.breaks.iter().chain(other.breaks.iter()).copied().collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let mut segments = Vec::with_capacity(breaks.len() + 1);
        for i in 0..=breaks.len() {
            // Representative point strictly inside merged cell i.
            let t = match (i, breaks.len()) {
                (_, 0) => T::one(),
                (0, _) => breaks[0] * T::lit(0.5),
                (i, n) if i == n => breaks[n - 1] * T::lit(2.0),
                (i, _) => (breaks[i - 1] * breaks[i]).sqrt(),
            };
            let s1 = self.segments[self.segment_index(t)];
            let s2 = other.segments[other.segment_index(t)];
            // v1 (t/t1)^a1 · v2 (t/t2)^a2 = v1 v2 (t1/t2)^a2 (t/t1)^(a1+a2)
            let value = s1.value * s2.value * (s1.anchor / s2.anchor).powf(s2.alpha);
            segments.push(PowerLaw { anchor: s1.anchor, value, alpha: s1.alpha + s2.alpha });
        }
        let kind = match (&self.kind, &other.kind) {
            (WeightKind::Table { grid, .. }, _) | (_, WeightKind::Table { grid, .. }) => {
                let mut g: Vec<T> = grid.iter().chain(breaks.iter()).copied().collect();
                g.sort_by(|a, b| a.partial_cmp(b).unwrap());
                g.dedup();
                let values = g.iter().map(|&t| self.eval(t) * other.eval(t)).collect();
                WeightKind::Table { grid: g, values }
            }
            _ if breaks.is_empty() => WeightKind::Power,
            _ => WeightKind::PiecewisePower,
        };
        Weight { kind, breaks, segments }
    }

    /// `t ↦ w(1/t) · t^shift`.
    pub fn invert_variable(&self, shift: T) -> Self {
        let breaks: Vec<T> = self.breaks.iter().rev().map(|&b| T::one() / b).collect();
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| PowerLaw {
                anchor: T::one() / s.anchor,
                value: s.value * s.anchor.powf(-shift),
                alpha: shift - s.alpha,
            })
            .collect();
        let kind = match &self.kind {
            WeightKind::Table { grid, values } => {
                let g: Vec<T> = grid.iter().rev().map(|&t| T::one() / t).collect();
                let v = grid.iter().rev().zip(values.iter().rev()).map(|(&t, &v)| v * t.powf(-shift)).collect();
                WeightKind::Table { grid: g, values: v }
            }
            k => k.clone(),
        };
        Weight { kind, breaks, segments }
    }
}

fn fmt_num<T: Scalar>(x: T) -> String {
    format!("{}", x.as_f64())
}

/// Writes the weight in the command-line grammar (`pow(..)` / `piece(..)`);
/// tables are written as piecewise power laws.
impl<T: Scalar> fmt::Display for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |s: &PowerLaw<T>| format!("pow({},{})", fmt_num(s.coefficient()), fmt_num(s.alpha));
        if self.breaks.is_empty() {
            return write!(f, "{}", mono(&self.segments[0]));
        }
        let b: Vec<String> = self.breaks.iter().map(|&x| fmt_num(x)).collect();
        let s: Vec<String> = self.segments.iter().map(mono).collect();
        write!(f, "piece({}; {})", b.join(","), s.join(", "))
    }
}
