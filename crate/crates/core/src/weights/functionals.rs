use crate::ext::{pow_conv, prod_pow, ExtReal};
use crate::quadrature::{integrate_log, sup_log, Estimate, IntegrationOptions, LogGrid};
use crate::scalar::Scalar;

use super::{Interval, Weight};

/// `V_r(a, b)` for a fixed weight `v` and exponent `r ∈ (0, 1]`.
///
/// For `r < 1` this is `(∫_a^b v^{1/(1-r)})^{(1-r)/r}`; for `r = 1` the
/// essential supremum of `v` on `(a, b)`. The power `v^{1/(1-r)}` is formed
/// once so repeated evaluation stays closed-form.
#[derive(Clone, Debug)]
pub struct VrFunctional<T> {
    r: T,
    v: Weight<T>,
    powered: Option<Weight<T>>,
}

impl<T: Scalar> VrFunctional<T> {
    pub fn new(v: &Weight<T>, r: T) -> Self {
        assert!(r > T::zero() && r <= T::one(), "r must lie in (0, 1], got {r}");
        let powered = if r < T::one() { Some(v.powf(T::one() / (T::one() - r))) } else { None };
        VrFunctional { r, v: v.clone(), powered }
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn weight(&self) -> &Weight<T> {
        &self.v
    }

    /// `V_r(a, b)`; zero for an empty interval.
    #[inline]
    pub fn eval(&self, a: T, b: T) -> T {
        if !(b > a) {
            return T::zero();
        }
        match &self.powered {
            Some(p) => pow_conv(p.integral(a, b), (T::one() - self.r) / self.r),
            None => self.v.ess_sup(&Interval { a, b }),
        }
    }

    /// `V_r(0, t)`.
    #[inline]
    pub fn from_zero(&self, t: T) -> T {
        self.eval(T::zero(), t)
    }
}

/// `V_r(iv)` for the weight `v`.
pub fn v_r<T: Scalar>(v: &Weight<T>, r: T, iv: &Interval<T>) -> ExtReal<T> {
    ExtReal::new(VrFunctional::new(v, r).eval(iv.a, iv.b))
}

pub(crate) fn merged_breaks<T: Scalar>(ws: &[&Weight<T>]) -> Vec<T> {
    let mut out: Vec<T> = ws.iter().flat_map(|w| w.breakpoints().iter().copied()).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// Equivalent expression for the local Hardy constant `B(a, b)`:
///
/// * `q ≥ 1`: `sup_{t∈(a,b)} (∫_t^b u)^{1/q} V_r(a,t)`,
/// * `q < 1`: `(∫_a^b (∫_t^b u)^{q/(1-q)} u(t) V_r(a,t)^{q/(1-q)} dt)^{(1-q)/q}`.
pub fn local_hardy_constant<T: Scalar>(
    u: &Weight<T>,
    v: &Weight<T>,
    r: T,
    q: T,
    iv: &Interval<T>,
    grid: &LogGrid<T>,
) -> Estimate<T> {
    local_hardy_with(u, &VrFunctional::new(v, r), q, iv, grid)
}

/// [`local_hardy_constant`] with a prepared `V_r` functional.
pub fn local_hardy_with<T: Scalar>(
    u: &Weight<T>,
    vr: &VrFunctional<T>,
    q: T,
    iv: &Interval<T>,
    grid: &LogGrid<T>,
) -> Estimate<T> {
    if q >= T::one() {
        local_hardy_sup(u, vr, q, iv.a, iv.b, grid)
    } else {
        local_hardy_integral(u, vr, q, iv.a, iv.b)
    }
}

/// `sup_{t∈(a,b)} (∫_t^b u)^{1/q} V_r(a,t)` for any `q > 0`.
pub(crate) fn local_hardy_sup<T: Scalar>(
    u: &Weight<T>,
    vr: &VrFunctional<T>,
    q: T,
    a: T,
    b: T,
    grid: &LogGrid<T>,
) -> Estimate<T> {
    let splits = merged_breaks(&[u, vr.weight()]);
    let inv_q = T::one() / q;
    let f = |t: T| prod_pow(&[(u.integral(t, b), inv_q), (vr.eval(a, t), T::one())]);
    let s = sup_log(&f, a, b, &splits, grid);
    Estimate { value: s.value, error: s.error }
}

/// `(∫_a^b (∫_t^b u)^{q/(1-q)} u(t) V_r(a,t)^{q/(1-q)} dt)^{(1-q)/q}`, `q < 1`.
pub(crate) fn local_hardy_integral<T: Scalar>(u: &Weight<T>, vr: &VrFunctional<T>, q: T, a: T, b: T) -> Estimate<T> {
    let splits = merged_breaks(&[u, vr.weight()]);
    let gamma = q / (T::one() - q);
    let f = |t: T| prod_pow(&[(u.integral(t, b), gamma), (u.eval(t), T::one()), (vr.eval(a, t), gamma)]);
    let e = integrate_log(&f, a, b, &splits, IntegrationOptions::default());
    let outer = (T::one() - q) / q;
    let value = pow_conv(e.value, outer);
    let error = if e.value > T::zero() && e.value.is_finite() {
        value * outer * e.error / e.value
    } else {
        T::zero()
    };
    Estimate { value, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval<f64> {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn vr_examples() {
        let one = Weight::constant(1.0).unwrap();
        assert!((v_r(&one, 0.5, &iv(0.0, 4.0)).value() - 4.0).abs() < 1e-14);
        let lin = Weight::power(1.0, 1.0).unwrap();
        assert_eq!(v_r(&lin, 1.0, &iv(0.0, 2.5)).value(), 2.5);
        let c = Weight::constant(3.0).unwrap();
        assert_eq!(v_r(&c, 1.0, &iv(0.7, 9.0)).value(), 3.0);
    }

    #[test]
    fn local_hardy_calculus_oracles() {
        let grid = LogGrid::default();
        let one = Weight::constant(1.0).unwrap();
        let lin = Weight::power(1.0, 1.0).unwrap();
        // max_t (1-t)^{1/2} t on (0,1) is attained at t = 2/3.
        let b = local_hardy_constant(&one, &lin, 1.0, 2.0, &iv(0.0, 1.0), &grid);
        assert!((b.value - 2.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        let b = local_hardy_constant(&one, &one, 1.0, 2.0, &iv(0.0, 1.0), &grid);
        assert!((b.value - 1.0).abs() < 1e-9);
        let b = local_hardy_constant(&one, &lin, 1.0, 1.0, &iv(0.0, 1.0), &grid);
        assert!((b.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn local_hardy_integral_form() {
        // u = v = 1, r = 1, q = 1/2 on (0,1): (∫ (1-t) dt)^1 = 1/2.
        let grid = LogGrid::default();
        let one = Weight::constant(1.0).unwrap();
        let b = local_hardy_constant(&one, &one, 1.0, 0.5, &iv(0.0, 1.0), &grid);
        assert!((b.value - 0.5).abs() < 1e-10, "{:?}", b);
    }
}
