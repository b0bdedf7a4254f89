use std::cell::OnceCell;

use crate::error::{Error, Result};
use crate::ext::{mul_conv, pow_conv, prod_pow, ExtReal};
use crate::quadrature::{golden_max, integrate_log, sup_log, Estimate, IntegrationOptions, LogGrid};
use crate::scalar::Scalar;
use crate::weights::{merged_breaks, VrFunctional, Weight};

use super::tables::{core_range, pow_with_error, table_nodes, Cumulative, RunningSup};
use super::{ConstantIndex, ConstantValue, Exponents};

/// Evaluates the characterizing constants for fixed exponents and weights,
/// sharing the inner tables between constants.
pub struct Evaluator<'a, T: Scalar> {
    e: Exponents<T>,
    u: &'a Weight<T>,
    w: &'a Weight<T>,
    vr: VrFunctional<T>,
    splits: Vec<T>,
    nodes: Vec<T>,
    grid: LogGrid<T>,
    phi: OnceCell<Cumulative<'a, T>>,
    psi: OnceCell<Cumulative<'a, T>>,
}

impl<'a, T: Scalar> Evaluator<'a, T> {
    pub fn new(e: Exponents<T>, u: &'a Weight<T>, v: &'a Weight<T>, w: &'a Weight<T>) -> Self {
        let splits = merged_breaks(&[u, v, w]);
        let nodes = table_nodes(&splits);
        Evaluator {
            e,
            u,
            w,
            vr: VrFunctional::new(v, e.r),
            splits,
            nodes,
            grid: LogGrid::default(),
            phi: OnceCell::new(),
            psi: OnceCell::new(),
        }
    }

    pub fn with_grid(mut self, grid: LogGrid<T>) -> Self {
        self.grid = grid;
        self
    }

    pub fn exponents(&self) -> &Exponents<T> {
        &self.e
    }

    pub fn constant(&self, index: ConstantIndex) -> Result<ConstantValue<T>> {
        self.check(index)?;
        use ConstantIndex::*;
        let est = match index {
            C1 => self.c1(),
            C2 => self.c2(),
            C3 => self.c3(),
            C4 => self.c4(),
            C5 => self.c5(false),
            C6 => self.c6(),
            C7 => self.c7(),
            CalC5 => self.c5(true),
            CalC6 => self.cal_c6(),
        };
        Ok(ConstantValue { value: ExtReal::new(est.value.max(T::zero())), error_bound: est.error })
    }

    fn check(&self, index: ConstantIndex) -> Result<()> {
        use ConstantIndex::*;
        let Exponents { r, p, q } = self.e;
        let need_q1 = matches!(index, C2 | C5 | CalC5);
        let need_qp = matches!(index, C4 | C5 | C6 | C7 | CalC5 | CalC6);
        let need_rp = matches!(index, C3 | C6 | CalC6);
        let fail = |reason: &str| Err(Error::FormulaUndefined { index: index.name().to_string(), reason: reason.to_string() });
        if need_q1 && !(q < T::one()) {
            return fail("requires q < 1");
        }
        if need_qp && !(q < p) {
            return fail("requires q < p");
        }
        if need_rp && !(r < p) {
            return fail("requires r < p");
        }
        Ok(())
    }

    fn big_w(&self, x: T) -> T {
        self.w.primitive(x)
    }

    fn big_u(&self, t: T) -> T {
        self.u.tail(t)
    }

    fn big_v(&self, t: T) -> T {
        self.vr.from_zero(t)
    }

    fn sup(&self, f: &dyn Fn(T) -> T) -> Estimate<T> {
        let s = sup_log(f, T::zero(), T::infinity(), &self.splits, &self.grid);
        Estimate { value: s.value, error: s.error }
    }

    fn integral(&self, f: &dyn Fn(T) -> T) -> Estimate<T> {
        integrate_log(f, T::zero(), T::infinity(), &self.splits, IntegrationOptions::default())
    }

    /// Outer integral whose integrand carries an inner supremum or integral.
    fn nested_integral(&self, f: &dyn Fn(T) -> T) -> Estimate<T> {
        let opts = IntegrationOptions { rel_tol: T::lit(1e-9).max(T::quad_tol()), ..IntegrationOptions::default() };
        integrate_log(f, T::zero(), T::infinity(), &self.splits, opts)
    }

    /// `Φ(x) = ∫_0^x U^{q/(1-q)} u V^{q/(1-q)}`.
    fn phi(&self) -> &Cumulative<'a, T> {
        self.phi.get_or_init(|| {
            let gamma = self.e.q / (T::one() - self.e.q);
            let (u, vr) = (self.u, self.vr.clone());
            let g = move |t: T| prod_pow(&[(u.tail(t), gamma), (u.eval(t), T::one()), (vr.from_zero(t), gamma)]);
            Cumulative::new(g, &self.nodes, &self.splits)
        })
    }

    /// `Ψ(x) = ∫_0^x W^{-p/(p-r)} w V^{pr/(p-r)}`.
    fn psi(&self) -> &Cumulative<'a, T> {
        self.psi.get_or_init(|| {
            let Exponents { r, p, .. } = self.e;
            let a_exp = -p / (p - r);
            let v_exp = p * r / (p - r);
            let (w, vr) = (self.w, self.vr.clone());
            let g = move |t: T| prod_pow(&[(w.primitive(t), a_exp), (w.eval(t), T::one()), (vr.from_zero(t), v_exp)]);
            Cumulative::new(g, &self.nodes, &self.splits)
        })
    }

    fn c1(&self) -> Estimate<T> {
        let Exponents { p, q, .. } = self.e;
        let f = |x: T| prod_pow(&[(self.big_w(x), -T::one() / p), (self.big_u(x), T::one() / q), (self.big_v(x), T::one())]);
        self.sup(&f)
    }

    fn c2(&self) -> Estimate<T> {
        let Exponents { p, q, .. } = self.e;
        let phi = self.phi();
        let k = (T::one() - q) / q;
        let f = |x: T| prod_pow(&[(self.big_w(x), -T::one() / p), (phi.eval(x), k)]);
        self.sup(&f)
    }

    fn c3(&self) -> Estimate<T> {
        let Exponents { r, p, q } = self.e;
        let psi = self.psi();
        let k = (p - r) / (p * r);
        let f = |x: T| prod_pow(&[(self.big_u(x), T::one() / q), (psi.eval(x), k)]);
        self.sup(&f)
    }

    fn c4(&self) -> Estimate<T> {
        let Exponents { p, q, .. } = self.e;
        let (w, vr) = (self.w, self.vr.clone());
        let a_exp = -q / (p - q);
        let v_exp = p * q / (p - q);
        let h = move |s: T| prod_pow(&[(w.primitive(s), a_exp), (vr.from_zero(s), v_exp)]);
        let run = RunningSup::new(h, &self.nodes, &self.splits);
        let beta = q / (p - q);
        let f = |t: T| prod_pow(&[(self.big_u(t), beta), (self.u.eval(t), T::one()), (run.eval(t), T::one())]);
        pow_with_error(self.nested_integral(&f), (p - q) / (p * q))
    }

    /// `Θ(x) = ∫_0^x (∫_t^x u)^{q/(1-q)} u(t) V(t)^{q/(1-q)} dt`.
    fn theta(&self, x: T) -> T {
        let gamma = self.e.q / (T::one() - self.e.q);
        let g = |t: T| prod_pow(&[(self.u.integral(t, x), gamma), (self.u.eval(t), T::one()), (self.big_v(t), gamma)]);
        integrate_log(&g, T::zero(), x, &self.splits, IntegrationOptions::default()).value
    }

    /// `W(∞)^{-1/p} · S` for the boundary terms of `C5`, `C7` and `calC5`.
    fn boundary_term(&self, s: T) -> T {
        mul_conv(pow_conv(self.w.total(), -T::one() / self.e.p), s)
    }

    fn c5(&self, calligraphic: bool) -> Estimate<T> {
        let Exponents { p, q, .. } = self.e;
        let phi = self.phi();
        let a_exp = -p / (p - q);
        let k = p * (T::one() - q) / (p - q);
        let f = |x: T| {
            let inner = if calligraphic { phi.eval(x) } else { self.theta(x) };
            prod_pow(&[(self.big_w(x), a_exp), (self.w.eval(x), T::one()), (inner, k)])
        };
        let outer = if calligraphic { self.integral(&f) } else { self.nested_integral(&f) };
        let first = pow_with_error(outer, (p - q) / (p * q));
        let second = self.boundary_term(pow_conv(phi.total(), (T::one() - q) / q));
        Estimate { value: first.value + second, error: first.error }
    }

    fn c6(&self) -> Estimate<T> {
        let Exponents { r, p, q } = self.e;
        let beta = q / (p - q);
        let b1 = beta + T::one();
        let kappa = q * (p - r) / (r * (p - q));
        let psi = self.psi();
        // The inner supremum is located on a fine grid of cached values and
        // refined by golden section.
        let (lo, hi) = core_range::<T>();
        let ys = LogGrid { min: lo, max: hi, per_decade: 24 }.nodes(&self.splits);
        let ya: Vec<T> = ys.iter().map(|&y| prod_pow(&[(self.big_w(y), T::one()), (psi.eval(y), kappa)])).collect();
        let yb: Vec<T> = ys.iter().map(|&y| pow_conv(self.big_u(y), b1)).collect();
        let inner = |x: T| -> T {
            let ux = pow_conv(self.big_u(x), b1);
            if ux.is_infinite() {
                return T::infinity();
            }
            let f = |y: T| {
                let d = (pow_conv(self.big_u(y), b1) - ux).max(T::zero()) / b1;
                prod_pow(&[(self.big_w(y), T::one()), (d, T::one()), (psi.eval(y), kappa)])
            };
            let below = ys.partition_point(|&y| y < x);
            if below == 0 {
                return sup_log(&f, T::zero(), x, &self.splits, &self.grid).value;
            }
            let (mut best_i, mut best) = (0usize, T::zero());
            for i in 0..below {
                let val = mul_conv(ya[i], (yb[i] - ux).max(T::zero()) / b1);
                if val > best {
                    best = val;
                    best_i = i;
                }
            }
            if best_i == 0 && best > T::zero() {
                best = best.max(sup_log(&f, T::zero(), ys[0], &self.splits, &self.grid).value);
            }
            let lo = if best_i > 0 { ys[best_i - 1] } else { ys[0] };
            let hi = if best_i + 1 < below { ys[best_i + 1] } else { x };
            if best > T::zero() && hi > lo {
                let g = |s: T| f(s.exp());
                best = best.max(golden_max(&g, lo.ln(), hi.ln(), 40).1);
            }
            best
        };
        let f = |x: T| {
            prod_pow(&[(self.big_w(x), -T::lit(2.0)), (self.w.eval(x), T::one()), (inner(x), T::one())])
        };
        pow_with_error(self.nested_integral(&f), (p - q) / (p * q))
    }

    fn c7(&self) -> Estimate<T> {
        let Exponents { p, q, .. } = self.e;
        let (u, vr) = (self.u, self.vr.clone());
        let u_exp = p / (p - q);
        let v_exp = p * q / (p - q);
        let h = move |t: T| prod_pow(&[(u.tail(t), u_exp), (vr.from_zero(t), v_exp)]);
        let run = RunningSup::new(h, &self.nodes, &self.splits);
        let a_exp = -p / (p - q);
        let f = |x: T| prod_pow(&[(self.big_w(x), a_exp), (self.w.eval(x), T::one()), (run.eval(x), T::one())]);
        let first = pow_with_error(self.nested_integral(&f), (p - q) / (p * q));
        let tail_sup = self.sup(&|t: T| prod_pow(&[(self.big_u(t), T::one() / q), (self.big_v(t), T::one())]));
        let second = self.boundary_term(tail_sup.value);
        Estimate { value: first.value + second, error: first.error + self.boundary_term(tail_sup.error) }
    }

    fn cal_c6(&self) -> Estimate<T> {
        let Exponents { r, p, q } = self.e;
        let beta = q / (p - q);
        let kappa = q * (p - r) / (r * (p - q));
        let psi = self.psi();
        let f = |t: T| prod_pow(&[(self.big_u(t), beta), (self.u.eval(t), T::one()), (psi.eval(t), kappa)]);
        pow_with_error(self.integral(&f), (p - q) / (p * q))
    }
}
