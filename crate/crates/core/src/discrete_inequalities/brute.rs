use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::golden_max;
use crate::scalar::Scalar;

use super::{check_exponents, check_pair};

/// Longest sequence accepted by the exhaustive search.
pub const MAX_BRUTE_FORCE_LEN: usize = 6;

/// Which inequality the brute-force search maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceInequality {
    /// `(Σ_k (Σ_{i≤k} x_i b_i)^q a_k)^{1/q} / (Σ x_k^p)^{1/p}`.
    Hardy,
    /// `(Σ x_k^q a_k^q)^{1/q} / (Σ x_k^p b_k^p)^{1/p}`, i.e. `v = a`, `w = b`.
    Landau,
}

/// Per-coordinate levels of the exhaustive scan and the polish budget.
#[derive(Clone, Debug)]
pub struct GridSpec<T> {
    pub levels: Vec<T>,
    pub polish_sweeps: usize,
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        let mut levels = vec![T::zero()];
        levels.extend((-4..=4).map(|j| T::lit(4f64.powi(j))));
        GridSpec { levels, polish_sweeps: 50 }
    }
}

/// Best ratio found and the sequence attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct BruteForce<T> {
    pub ratio: T,
    pub witness: Vec<T>,
}

fn ratio<T: Scalar>(kind: SequenceInequality, p: T, q: T, a: &[T], b: &[T], x: &[T]) -> T {
    let (lhs, rhs) = match kind {
        SequenceInequality::Hardy => {
            let mut acc = T::zero();
            let mut lhs = T::zero();
            for k in 0..x.len() {
                acc = acc + x[k] * b[k];
                lhs = lhs + acc.powf(q) * a[k];
            }
            (lhs, x.iter().map(|&v| v.powf(p)).sum::<T>())
        }
        SequenceInequality::Landau => (
            x.iter().zip(a).map(|(&x, &a)| (x * a).powf(q)).sum::<T>(),
            x.iter().zip(b).map(|(&x, &b)| (x * b).powf(p)).sum::<T>(),
        ),
    };
    if rhs == T::zero() {
        return T::zero();
    }
    let r = lhs.powf(T::one() / q) / rhs.powf(T::one() / p);
    if r.is_nan() {
        T::zero()
    } else {
        r
    }
}

/// Lower bound on the best constant of the Hardy or Landau inequality by
/// an exhaustive scan over `levels^n` followed by coordinate ascent.
///
/// The all-zero sequence is skipped; the ratio is invariant under `x ↦ λx`.
pub fn brute_force_sequence_constant<T: Scalar>(
    kind: SequenceInequality,
    p: T,
    q: T,
    a: &[T],
    b: &[T],
    grid: &GridSpec<T>,
) -> Result<BruteForce<T>> {
    check_exponents(p, q)?;
    check_pair(a, b)?;
    let n = a.len();
    if n > MAX_BRUTE_FORCE_LEN {
        return Err(Error::TooLarge { len: n, max: MAX_BRUTE_FORCE_LEN });
    }
    let f = |x: &[T]| ratio(kind, p, q, a, b, x);
    let levels = &grid.levels;
    let mut best_x = vec![T::one(); n];
    let mut best = f(&best_x);
    let mut idx = vec![0usize; n];
    let mut x = vec![T::zero(); n];
    'scan: loop {
        for (xi, &li) in x.iter_mut().zip(&idx) {
            *xi = levels[li];
        }
        let r = f(&x);
        if r > best {
            best = r;
            best_x.copy_from_slice(&x);
        }
        for d in 0..n {
            idx[d] += 1;
            if idx[d] < levels.len() {
                continue 'scan;
            }
            idx[d] = 0;
        }
        break;
    }

    let ln4 = T::lit(4f64.ln());
    for _ in 0..grid.polish_sweeps {
        let start = best;
        for i in 0..n {
            let orig = best_x[i];
            if orig == T::zero() {
                continue;
            }
            let g = |s: T| {
                let mut y = best_x.clone();
                y[i] = s.exp();
                f(&y)
            };
            let (s, r) = golden_max(&g, orig.ln() - ln4, orig.ln() + ln4, 40);
            if r > best {
                best = r;
                best_x[i] = s.exp();
            }
        }
        if !(best > start * (T::one() + T::lit(1e-12))) {
            break;
        }
    }
    Ok(BruteForce { ratio: best, witness: best_x })
}
