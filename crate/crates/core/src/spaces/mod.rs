//! Function-space layer: rearrangements, Lorentz, oscillation, Cesàro and
//! Copson norms of step functions, and the substitutions that reduce the
//! four-weight and embedding problems to the main inequality.

mod norms;
mod rearrange;

pub use norms::{norm, Norm};
pub use rearrange::{level_measure, rearrange, RearrangedFunction};

use crate::characterization::Exponents;
use crate::error::{Error, Result};
use crate::oracle::StepFunction;
use crate::scalar::Scalar;
use crate::weights::Weight;

/// `‖f‖_{Ces_{p2,q2}(u2,v2)} ≤ c ‖f‖_{Cop_{p1,q1}(u1,v1)}`.
#[derive(Clone, Debug)]
pub struct FourWeightConfig<T> {
    pub p1: T,
    pub q1: T,
    pub p2: T,
    pub q2: T,
    pub u1: Weight<T>,
    pub v1: Weight<T>,
    pub u2: Weight<T>,
    pub v2: Weight<T>,
}

/// The equivalent three-weight problem. Its best constant `C` and the
/// best four-weight constant `c` satisfy `c^power = C`.
#[derive(Clone, Debug)]
pub struct ReducedConfig<T> {
    pub exponents: Exponents<T>,
    pub u: Weight<T>,
    pub v: Weight<T>,
    pub w: Weight<T>,
    pub power: T,
}

impl<T: Scalar> ReducedConfig<T> {
    /// `c = C^{1/p1}`.
    pub fn four_weight_constant(&self, c: T) -> T {
        c.powf(T::one() / self.power)
    }
}

pub fn reduce_four_weight<T: Scalar>(cfg: &FourWeightConfig<T>) -> Result<ReducedConfig<T>> {
    for (name, x) in [("p1", cfg.p1), ("q1", cfg.q1), ("p2", cfg.p2), ("q2", cfg.q2)] {
        if !x.is_finite() || !(x > T::zero()) {
            return Err(Error::InvalidExponents(format!("{name} = {x} must be a finite positive number")));
        }
    }
    let exponents = Exponents::new(cfg.p2 / cfg.p1, cfg.q1 / cfg.p1, cfg.q2 / cfg.p1)?;
    Ok(ReducedConfig {
        exponents,
        u: cfg.u2.powf(cfg.q2),
        v: cfg.v1.powf(-cfg.p2).mul(&cfg.v2.powf(cfg.p2)),
        w: cfg.u1.powf(cfg.q1),
        power: cfg.p1,
    })
}

/// Both sides of the four-weight inequality at `f`, evaluated directly
/// as `(‖f‖_Ces, ‖f‖_Cop)`.
pub fn four_weight_sides<T: Scalar>(cfg: &FourWeightConfig<T>, f: &StepFunction<T>) -> (T, T) {
    let ces = norm(f, Norm::Ces { p: cfg.p2, q: cfg.q2, u: &cfg.u2, v: &cfg.v2 });
    let cop = norm(f, Norm::Cop { p: cfg.p1, q: cfg.q1, u: &cfg.u1, v: &cfg.v1 });
    (ces.value(), cop.value())
}

/// `t ↦ w(1/t) t^shift`; closed form for power laws, tables re-gridded.
pub fn invert_variable<T: Scalar>(weight: &Weight<T>, shift: T) -> Weight<T> {
    weight.invert_variable(shift)
}

/// `(‖f‖_{S^q(u)}, ‖f‖_{Λ^p(w)})` for `f` in class 𝔸.
pub fn embedding_witness_check<T: Scalar>(
    p: T,
    q: T,
    u: &Weight<T>,
    w: &Weight<T>,
    f: &StepFunction<T>,
) -> Result<(T, T)> {
    let star = rearrange(f);
    if !star.in_class_a() {
        return Err(Error::NotInA);
    }
    let lhs = norm(star.star(), Norm::S { q, u }).value();
    let rhs = norm(star.star(), Norm::Lambda { p, w }).value();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p1: f64, q1: f64, p2: f64, q2: f64) -> FourWeightConfig<f64> {
        let one = Weight::constant(1.0).unwrap();
        FourWeightConfig { p1, q1, p2, q2, u1: one.clone(), v1: one.clone(), u2: one.clone(), v2: one }
    }

    #[test]
    fn identity_substitution() {
        let r = reduce_four_weight(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!((r.exponents.r, r.exponents.p, r.exponents.q), (1.0, 1.0, 1.0));
        for t in [0.1, 1.0, 7.0] {
            assert_eq!((r.u.eval(t), r.v.eval(t), r.w.eval(t)), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn half_inner_exponent() {
        let mut c = cfg(2.0, 3.0, 1.0, 5.0);
        c.v1 = Weight::power(1.0, 2.0).unwrap();
        c.v2 = Weight::power(3.0, 0.5).unwrap();
        let r = reduce_four_weight(&c).unwrap();
        assert_eq!(r.exponents.r, 0.5);
        assert_eq!((r.exponents.p, r.exponents.q), (1.5, 2.5));
        for t in [0.3f64, 2.0] {
            let exact = 3.0 * t.powf(0.5) / t.powf(2.0);
            assert!((r.v.eval(t) - exact).abs() < 1e-14 * exact);
        }
        assert_eq!(r.four_weight_constant(9.0), 3.0);
    }

    #[test]
    fn larger_inner_exponent_is_trivial() {
        assert!(matches!(reduce_four_weight(&cfg(1.0, 1.0, 2.0, 1.0)), Err(Error::Triviality { .. })));
    }

    #[test]
    fn inversion_of_monomial() {
        let w = Weight::power(2.0, 1.5).unwrap();
        let inv = invert_variable(&w, 0.5);
        for t in [0.2f64, 1.0, 3.0] {
            assert!((inv.eval(t) - 2.0 * t.powf(-1.0)).abs() < 1e-14);
        }
        let one = Weight::constant(1.0).unwrap();
        assert_eq!(invert_variable(&one, 0.0).eval(4.0), 1.0);
    }

    #[test]
    fn zero_function_has_zero_norms() {
        let f = StepFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap();
        let one = Weight::constant(1.0).unwrap();
        assert_eq!(embedding_witness_check(1.0, 0.5, &one, &one, &f).unwrap(), (0.0, 0.0));
    }
}
