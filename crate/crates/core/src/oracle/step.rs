use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nonnegative step function with finitely many cells.
///
/// Cell `i` is `[breakpoints[i], breakpoints[i+1])` with value `values[i]`;
/// the function vanishes outside `[breakpoints[0], breakpoints[n])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if !(breakpoints[0] >= T::zero()) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidStepFunction("breakpoints must be finite and nonnegative".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidStepFunction("breakpoints must increase strictly".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::InvalidStepFunction("values must be finite and nonnegative".into()));
        }
        Ok(StepFunction { breakpoints, values })
    }

    /// `χ_{[a,b)}`.
    pub fn indicator(a: T, b: T) -> Result<Self> {
        Self::new(vec![a, b], vec![T::one()])
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(left, right, value)` for every cell.
    pub fn cells(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn eval(&self, t: T) -> T {
        let b = &self.breakpoints;
        if t < b[0] || t >= b[b.len() - 1] {
            return T::zero();
        }
        self.values[b.partition_point(|&x| x <= t) - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero())
    }

    pub fn scale(&self, c: T) -> Self {
        StepFunction { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|&v| v * c).collect() }
    }

    /// `∫_0^∞ f`.
    pub fn total(&self) -> T {
        self.cells().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// `∫_t^∞ f`.
    pub fn tail(&self, t: T) -> T {
        self.cells().filter(|&(_, b, _)| b > t).map(|(a, b, v)| v * (b - a.max(t))).sum()
    }

    /// True when the values never increase from one cell to the next.
    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    /// Cell averages of `f` on a new partition. Mass inside `grid` is
    /// preserved; mass outside it is dropped.
    pub fn project(&self, grid: &[T]) -> Result<Self> {
        let values = grid
            .windows(2)
            .map(|g| {
                let mass: T = self
                    .cells()
                    .map(|(a, b, v)| {
                        let lo = a.max(g[0]);
                        let hi = b.min(g[1]);
                        if hi > lo {
                            v * (hi - lo)
                        } else {
                            T::zero()
                        }
                    })
                    .sum();
                mass / (g[1] - g[0])
            })
            .collect();
        Self::new(grid.to_vec(), values)
    }
}
