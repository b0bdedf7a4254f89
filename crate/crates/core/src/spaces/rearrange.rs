use crate::oracle::StepFunction;
use crate::scalar::Scalar;

/// Non-increasing rearrangement `f*` of a step function together with its
/// level table: distinct positive values, largest first, and the measure
/// of the set where `f` takes each of them.
#[derive(Clone, Debug, PartialEq)]
pub struct RearrangedFunction<T> {
    star: StepFunction<T>,
    levels: Vec<(T, T)>,
}

/// Sorts the cells of `f` by decreasing value and lays them end to end
/// from the origin. Zero cells are dropped.
pub fn rearrange<T: Scalar>(f: &StepFunction<T>) -> RearrangedFunction<T> {
    let mut cells: Vec<(T, T)> = f.cells().filter(|c| c.2 > T::zero()).map(|(a, b, v)| (v, b - a)).collect();
    cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let mut levels: Vec<(T, T)> = Vec::with_capacity(cells.len());
    for (v, len) in cells {
        match levels.last_mut() {
            Some(last) if last.0 == v => last.1 = last.1 + len,
            _ => levels.push((v, len)),
        }
    }
    let star = if levels.is_empty() {
        StepFunction::new(vec![T::zero(), T::one()], vec![T::zero()])
    } else {
        let mut breaks = vec![T::zero()];
        let mut x = T::zero();
        for &(_, len) in &levels {
            x = x + len;
            breaks.push(x);
        }
        StepFunction::new(breaks, levels.iter().map(|l| l.0).collect())
    };
    RearrangedFunction { star: star.expect("sorted cells form a valid step function"), levels }
}

/// `|{f > λ}|` for a step function, summed cell by cell.
pub fn level_measure<T: Scalar>(f: &StepFunction<T>, lambda: T) -> T {
    f.cells().filter(|c| c.2 > lambda).map(|(a, b, _)| b - a).sum()
}

impl<T: Scalar> RearrangedFunction<T> {
    pub fn star(&self) -> &StepFunction<T> {
        &self.star
    }

    pub fn levels(&self) -> &[(T, T)] {
        &self.levels
    }

    /// Class 𝔸 membership, `f*(t) → 0`. A finite step function vanishes
    /// past its last breakpoint, so this only fails for a nonzero value
    /// on an unbounded final cell, which the type cannot represent.
    pub fn in_class_a(&self) -> bool {
        let b = self.star.breakpoints();
        b[b.len() - 1].is_finite() || self.star.values().last().is_some_and(|&v| v == T::zero())
    }

    /// `f**(t) = t⁻¹ ∫_0^t f*`.
    pub fn maximal(&self, t: T) -> T {
        if !(t > T::zero()) {
            return self.star.values()[0];
        }
        let mass: T = self.star.cells().map(|(a, b, v)| if t > a { v * (b.min(t) - a) } else { T::zero() }).sum();
        mass / t
    }

    /// `f**(t) − f*(t) = K_i / t` on cell `i` (and past the support);
    /// returns the coefficients `K_i` cell by cell followed by the tail one.
    pub(crate) fn oscillation_coefficients(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.star.len() + 1);
        let mut mass = T::zero();
        for (a, b, v) in self.star.cells() {
            out.push((mass - v * a).max(T::zero()));
            mass = mass + v * (b - a);
        }
        out.push(mass);
        out
    }
}
