//! Discrete criteria for finite sequences: the Landau resonance constants
//! `L1`, `L2`, the discrete Hardy constants `H1..H4`, and the sum/sup
//! calculus used to pass between them.

mod brute;
mod identities;

pub use brute::{brute_force_sequence_constant, BruteForce, GridSpec, SequenceInequality, MAX_BRUTE_FORCE_LEN};
pub use identities::{sequence_identity_ratio, IdentityInputs, IdentityRatio, SequenceIdentity};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::scalar::Scalar;

/// Strong monotonicity of a positive sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MonotoneKind {
    StronglyDecreasing,
    StronglyIncreasing,
    None,
}

/// `kind` together with `sup a_{k+1}/a_k` (decreasing) or
/// `inf a_{k+1}/a_k` (increasing and otherwise).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonotoneClass<T> {
    pub kind: MonotoneKind,
    pub ratio: T,
}

impl<T: Scalar> MonotoneClass<T> {
    /// Classifies a sequence of positive numbers. Sequences with fewer than
    /// two terms are classified as `None`.
    pub fn of(a: &[T]) -> Self {
        if a.len() < 2 || a.iter().any(|&x| !(x > T::zero())) {
            return MonotoneClass { kind: MonotoneKind::None, ratio: T::nan() };
        }
        let ratios = a.windows(2).map(|w| w[1] / w[0]);
        let sup = ratios.clone().fold(T::neg_infinity(), T::max);
        let inf = ratios.fold(T::infinity(), T::min);
        if sup < T::one() {
            MonotoneClass { kind: MonotoneKind::StronglyDecreasing, ratio: sup }
        } else if inf > T::one() {
            MonotoneClass { kind: MonotoneKind::StronglyIncreasing, ratio: inf }
        } else {
            MonotoneClass { kind: MonotoneKind::None, ratio: inf }
        }
    }
}

fn check_pair<T: Scalar>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidSequence(format!("lengths {} and {} must agree and be positive", a.len(), b.len())));
    }
    if a.iter().chain(b).any(|x| !(x.is_finite() && *x >= T::zero())) {
        return Err(Error::InvalidSequence("entries must be finite and nonnegative".into()));
    }
    Ok(())
}

fn check_exponents<T: Scalar>(p: T, q: T) -> Result<()> {
    if !(p > T::zero() && q > T::zero() && p.is_finite() && q.is_finite()) {
        return Err(Error::InvalidExponents(format!("p = {p}, q = {q}")));
    }
    Ok(())
}

/// `L1 = sup v_k / w_k` for `p ≤ q`, `L2 = (Σ (v_k/w_k)^{pq/(p-q)})^{(p-q)/(pq)}`
/// for `p > q`: the criterion for `‖a v‖_q ≤ C ‖a w‖_p`.
pub fn landau_constant<T: Scalar>(p: T, q: T, v: &[T], w: &[T]) -> Result<ExtReal<T>> {
    check_exponents(p, q)?;
    check_pair(v, w)?;
    if w.iter().any(|&x| x == T::zero()) {
        return Err(Error::InvalidSequence("w must be strictly positive".into()));
    }
    let ratios = v.iter().zip(w).map(|(&v, &w)| v / w);
    Ok(ExtReal::new(if p <= q {
        ratios.fold(T::zero(), T::max)
    } else {
        let s = p * q / (p - q);
        ratios.map(|x| x.powf(s)).sum::<T>().powf(T::one() / s)
    }))
}

/// Exponent regions of the discrete Hardy inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HardyCase {
    /// `p ≤ 1`, `p ≤ q`.
    H1,
    /// `q < p ≤ 1`.
    H2,
    /// `1 < p`, `q < p`.
    H3,
    /// `1 < p ≤ q`.
    H4,
}

pub fn hardy_case<T: Scalar>(p: T, q: T) -> HardyCase {
    match (p <= T::one(), p <= q) {
        (true, true) => HardyCase::H1,
        (true, false) => HardyCase::H2,
        (false, false) => HardyCase::H3,
        (false, true) => HardyCase::H4,
    }
}

/// Criterion for `(Σ_k (Σ_{i≤k} x_i b_i)^q a_k)^{1/q} ≤ C (Σ x_k^p)^{1/p}`.
pub fn discrete_hardy_constant<T: Scalar>(p: T, q: T, a: &[T], b: &[T]) -> Result<ExtReal<T>> {
    check_exponents(p, q)?;
    check_pair(a, b)?;
    let one = T::one();
    let n = a.len();
    let mut tails = vec![T::zero(); n];
    let mut acc = T::zero();
    for k in (0..n).rev() {
        acc = acc + a[k];
        tails[k] = acc;
    }
    let value = match hardy_case(p, q) {
        HardyCase::H1 => (0..n).map(|k| tails[k].powf(one / q) * b[k]).fold(T::zero(), T::max),
        HardyCase::H2 => {
            let e = q * p / (p - q);
            let mut run = T::zero();
            let s: T = (0..n)
                .map(|k| {
                    run = run.max(b[k]);
                    a[k] * tails[k].powf(q / (p - q)) * run.powf(e)
                })
                .sum();
            s.powf((p - q) / (p * q))
        }
        HardyCase::H3 => {
            let conj = p / (p - one);
            let mut part = T::zero();
            let s: T = (0..n)
                .map(|k| {
                    part = part + b[k].powf(conj);
                    a[k] * tails[k].powf(q / (p - q)) * part.powf(q * (p - one) / (p - q))
                })
                .sum();
            s.powf((p - q) / (p * q))
        }
        HardyCase::H4 => {
            let conj = p / (p - one);
            let mut part = T::zero();
            (0..n)
                .map(|k| {
                    part = part + b[k].powf(conj);
                    tails[k].powf(one / q) * part.powf((p - one) / p)
                })
                .fold(T::zero(), T::max)
        }
    };
    Ok(ExtReal::new(value))
}
