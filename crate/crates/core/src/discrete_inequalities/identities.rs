use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{MonotoneClass, MonotoneKind};

/// The sum/sup identities and equivalences for finite sequences `N..M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceIdentity {
    /// `Σ a_k^α (Σ_{i≤k} b_i)^α ≈ Σ a_k^α b_k^α`, `a` strongly decreasing.
    DecSumSum,
    /// `Σ a_k sup_{i≤k} b_i ≈ Σ a_k b_k`, `a` strongly decreasing.
    DecSumSup,
    /// `sup a_k (Σ_{i≤k} b_i)^α ≈ sup a_k b_k^α`, `a` strongly decreasing.
    DecSupSum,
    /// `sup a_k sup_{i≤k} b_i = sup a_k b_k`, `a` non-increasing.
    DecSupSup,
    /// `Σ a_k^α (Σ_{i≥k} b_i)^α ≈ Σ a_k^α b_k^α`, `a` strongly increasing.
    IncSumSum,
    /// `sup a_k (Σ_{i≥k} b_i)^α ≈ sup a_k b_k^α`, `a` strongly increasing.
    IncSupSum,
    /// `Σ a_k (Σ_{j≥k} a_j)^{α-1} ≈ (Σ a_k)^α`.
    PowerRule,
    /// `Σ a_k b_k = Σ_{k>N} (b_k - b_{k-1}) Σ_{i≥k} a_i + (Σ a) b_N`.
    Abel,
    /// `Σ a_k (Σ_{i≥k} a_i)^α b_k ≈ Σ_{k>N} (b_k - b_{k-1}) (Σ_{i≥k} a_i)^{α+1} + (Σ a)^{α+1} b_N`,
    /// `b` non-decreasing.
    DifferenceU,
}

impl SequenceIdentity {
    pub const ALL: [SequenceIdentity; 9] = [
        SequenceIdentity::DecSumSum,
        SequenceIdentity::DecSumSup,
        SequenceIdentity::DecSupSum,
        SequenceIdentity::DecSupSup,
        SequenceIdentity::IncSumSum,
        SequenceIdentity::IncSupSum,
        SequenceIdentity::PowerRule,
        SequenceIdentity::Abel,
        SequenceIdentity::DifferenceU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceIdentity::DecSumSum => "dec.sum-sum",
            SequenceIdentity::DecSumSup => "dec.sum-sup",
            SequenceIdentity::DecSupSum => "dec.sup-sum",
            SequenceIdentity::DecSupSup => "dec.sup-sup",
            SequenceIdentity::IncSumSum => "inc.sum-sum",
            SequenceIdentity::IncSupSum => "inc.sup-sum",
            SequenceIdentity::PowerRule => "power-rule",
            SequenceIdentity::Abel => "abel",
            SequenceIdentity::DifferenceU => "difference-u",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == s)
    }

    /// True for the statements that hold with equality.
    pub fn is_exact(self) -> bool {
        matches!(self, SequenceIdentity::Abel | SequenceIdentity::DecSupSup)
    }
}

impl fmt::Display for SequenceIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inputs of an identity. `alpha` is the exponent `α`, `β` or `s`; `b` is
/// unused by the power rule.
#[derive(Clone, Debug)]
pub struct IdentityInputs<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub alpha: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityRatio<T> {
    pub lhs: T,
    pub rhs: T,
    pub ratio: T,
}

fn tails<T: Scalar>(a: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len()];
    let mut acc = T::zero();
    for k in (0..a.len()).rev() {
        acc = acc + a[k];
        out[k] = acc;
    }
    out
}

fn heads<T: Scalar>(b: &[T]) -> Vec<T> {
    let mut acc = T::zero();
    b.iter()
        .map(|&x| {
            acc = acc + x;
            acc
        })
        .collect()
}

fn sup<T: Scalar>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::zero(), T::max)
}

/// Both sides of an identity and their ratio (`0/0 = 1`).
pub fn sequence_identity_ratio<T: Scalar>(identity: SequenceIdentity, inp: &IdentityInputs<T>) -> Result<IdentityRatio<T>> {
    use SequenceIdentity::*;
    let (a, b, al) = (&inp.a, &inp.b, inp.alpha);
    let n = a.len();
    let fail = |clause: &str| Err(Error::HypothesisViolated(format!("{identity}: {clause}")));
    if n == 0 {
        return fail("empty sequence");
    }
    if identity != PowerRule && b.len() != n {
        return fail("a and b must have equal lengths");
    }
    if a.iter().chain(b.iter()).any(|x| !(x.is_finite() && *x >= T::zero())) {
        return fail("entries must be finite and nonnegative");
    }
    if !(al > T::zero() && al.is_finite()) && !matches!(identity, Abel | DecSupSup | DecSumSup) {
        return fail("the exponent must be positive");
    }
    let class = MonotoneClass::of(a);
    match identity {
        DecSumSum | DecSumSup | DecSupSum if n > 1 && class.kind != MonotoneKind::StronglyDecreasing => {
            return fail("a must be strongly decreasing");
        }
        IncSumSum | IncSupSum if n > 1 && class.kind != MonotoneKind::StronglyIncreasing => {
            return fail("a must be strongly increasing");
        }
        DecSupSup if a.windows(2).any(|w| w[1] > w[0]) => return fail("a must be non-increasing"),
        DifferenceU if b.windows(2).any(|w| w[1] < w[0]) => return fail("b must be non-decreasing"),
        PowerRule if al < T::one() && a.iter().all(|&x| x == T::zero()) => {
            return fail("tails must be positive when the exponent is below 1");
        }
        _ => {}
    }
    if matches!(identity, DecSumSum | DecSumSup | DecSupSum | IncSumSum | IncSupSum) && a.iter().any(|&x| x == T::zero()) {
        return fail("a must be positive");
    }

    let (lhs, rhs) = match identity {
        DecSumSum => {
            let h = heads(b);
            ((0..n).map(|k| (a[k] * h[k]).powf(al)).sum(), (0..n).map(|k| (a[k] * b[k]).powf(al)).sum())
        }
        DecSumSup => {
            let mut run = T::zero();
            let l = (0..n)
                .map(|k| {
                    run = run.max(b[k]);
                    a[k] * run
                })
                .sum();
            (l, (0..n).map(|k| a[k] * b[k]).sum())
        }
        DecSupSum => {
            let h = heads(b);
            (sup((0..n).map(|k| a[k] * h[k].powf(al))), sup((0..n).map(|k| a[k] * b[k].powf(al))))
        }
        DecSupSup => {
            let mut run = T::zero();
            let l = sup((0..n).map(|k| {
                run = run.max(b[k]);
                a[k] * run
            }));
            (l, sup((0..n).map(|k| a[k] * b[k])))
        }
        IncSumSum => {
            let t = tails(b);
            ((0..n).map(|k| (a[k] * t[k]).powf(al)).sum(), (0..n).map(|k| (a[k] * b[k]).powf(al)).sum())
        }
        IncSupSum => {
            let t = tails(b);
            (sup((0..n).map(|k| a[k] * t[k].powf(al))), sup((0..n).map(|k| a[k] * b[k].powf(al))))
        }
        PowerRule => {
            let t = tails(a);
            let l = (0..n).filter(|&k| a[k] > T::zero()).map(|k| a[k] * t[k].powf(al - T::one())).sum();
            (l, t[0].powf(al))
        }
        Abel => {
            let t = tails(a);
            let l = (0..n).map(|k| a[k] * b[k]).sum();
            let r = (1..n).map(|k| (b[k] - b[k - 1]) * t[k]).sum::<T>() + t[0] * b[0];
            (l, r)
        }
        DifferenceU => {
            let t = tails(a);
            let l = (0..n).map(|k| a[k] * t[k].powf(al) * b[k]).sum();
            let e = al + T::one();
            let r = (1..n).map(|k| (b[k] - b[k - 1]) * t[k].powf(e)).sum::<T>() + t[0].powf(e) * b[0];
            (l, r)
        }
    };
    let ratio = match (lhs == T::zero(), rhs == T::zero()) {
        (true, true) => T::one(),
        (_, true) => T::infinity(),
        _ => lhs / rhs,
    };
    Ok(IdentityRatio { lhs, rhs, ratio })
}
