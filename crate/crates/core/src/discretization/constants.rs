use std::cell::OnceCell;
use std::fmt;

use serde::Serialize;

use crate::characterization::{CaseRegion, Exponents};
use crate::error::{Error, Result};
use crate::ext::{prod_pow, ExtReal};
use crate::quadrature::LogGrid;
use crate::scalar::Scalar;
use crate::weights::{local_hardy_integral, local_hardy_sup, VrFunctional, Weight};

use super::DiscretizingSequence;

/// Names of the discrete characterizing constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiscreteIndex {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
}

impl DiscreteIndex {
    pub const ALL: [DiscreteIndex; 8] = [
        DiscreteIndex::A1,
        DiscreteIndex::A2,
        DiscreteIndex::A3,
        DiscreteIndex::A4,
        DiscreteIndex::B1,
        DiscreteIndex::B2,
        DiscreteIndex::B3,
        DiscreteIndex::B4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiscreteIndex::A1 => "A1",
            DiscreteIndex::A2 => "A2",
            DiscreteIndex::A3 => "A3",
            DiscreteIndex::A4 => "A4",
            DiscreteIndex::B1 => "B1",
            DiscreteIndex::B2 => "B2",
            DiscreteIndex::B3 => "B3",
            DiscreteIndex::B4 => "B4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// The `(A, B)` pair governing a region.
    pub fn pair(case: CaseRegion) -> (DiscreteIndex, DiscreteIndex) {
        use DiscreteIndex::*;
        match case {
            CaseRegion::I => (A1, B1),
            CaseRegion::II => (A1, B2),
            CaseRegion::III => (A2, B1),
            CaseRegion::IV => (A2, B2),
            CaseRegion::V => (A3, B3),
            CaseRegion::VI => (A4, B3),
            CaseRegion::VII => (A4, B4),
        }
    }
}

impl fmt::Display for DiscreteIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A discrete constant. `truncated` is set when dropping the outermost index
/// of a cut end of the window moves the value by more than 1%.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscreteValue<T: Scalar> {
    pub value: ExtReal<T>,
    pub truncated: bool,
}

/// Per-cell quantities on a discretizing sequence, shared by all constants.
///
/// Index `j` stands for `k = k_min + 1 + j`, running over `k ≤ M - 1`.
pub struct DiscreteEvaluator<'a, T: Scalar> {
    e: Exponents<T>,
    u: &'a Weight<T>,
    vr: VrFunctional<T>,
    seq: &'a DiscretizingSequence<T>,
    grid: LogGrid<T>,
    ks: Vec<i32>,
    vcell: Vec<T>,
    ucell: Vec<T>,
    utail: Vec<T>,
    loc_sup: OnceCell<Vec<T>>,
    loc_int: OnceCell<Vec<T>>,
}

impl<'a, T: Scalar> DiscreteEvaluator<'a, T> {
    pub fn new(e: Exponents<T>, u: &'a Weight<T>, v: &Weight<T>, seq: &'a DiscretizingSequence<T>) -> Self {
        let vr = VrFunctional::new(v, e.r);
        let top = match seq.m() {
            Some(m) if !seq.truncated() => m - 1,
            _ => seq.k_top() - 1,
        };
        let ks: Vec<i32> = (seq.k_min() + 1..=top).collect();
        let vcell = ks.iter().map(|&k| vr.eval(seq.x(k - 1), seq.x(k))).collect();
        let ucell = ks.iter().map(|&k| u.integral(seq.x(k), seq.x(k + 1))).collect();
        let utail = ks.iter().map(|&k| u.tail(seq.x(k))).collect();
        DiscreteEvaluator {
            e,
            u,
            vr,
            seq,
            grid: LogGrid::default(),
            ks,
            vcell,
            ucell,
            utail,
            loc_sup: OnceCell::new(),
            loc_int: OnceCell::new(),
        }
    }

    /// `sup_{t∈(x_k,x_{k+1})} (∫_t^{x_{k+1}} u)^{1/q} V_r(x_k,t)`.
    fn loc_sup(&self) -> &[T] {
        self.loc_sup.get_or_init(|| {
            self.ks
                .iter()
                .map(|&k| local_hardy_sup(self.u, &self.vr, self.e.q, self.seq.x(k), self.seq.x(k + 1), &self.grid).value)
                .collect()
        })
    }

    /// `(∫_{x_k}^{x_{k+1}} (∫_t^{x_{k+1}} u)^{q/(1-q)} u(t) V_r(x_k,t)^{q/(1-q)} dt)^{(1-q)/q}`.
    fn loc_int(&self) -> &[T] {
        self.loc_int.get_or_init(|| {
            self.ks
                .iter()
                .map(|&k| local_hardy_integral(self.u, &self.vr, self.e.q, self.seq.x(k), self.seq.x(k + 1)).value)
                .collect()
        })
    }

    fn check(&self, index: DiscreteIndex) -> Result<()> {
        use DiscreteIndex::*;
        let Exponents { r, p, q } = self.e;
        let fail = |reason: &str| Err(Error::FormulaUndefined { index: index.name().into(), reason: reason.into() });
        if matches!(index, B2 | B3) && q >= T::one() {
            return fail("requires q < 1");
        }
        if matches!(index, A3 | A4 | B3 | B4) && q >= p {
            return fail("requires q < p");
        }
        if matches!(index, A2 | A4) && r >= p {
            return fail("requires r < p");
        }
        Ok(())
    }

    /// Evaluates one constant over the index positions `lo..hi`.
    fn over(&self, index: DiscreteIndex, lo: usize, hi: usize) -> T {
        use DiscreteIndex::*;
        let Exponents { r, p, q } = self.e;
        let one = T::one();
        let two = T::lit(2.0);
        let e2 = |k: i32, c: T| -T::lit(k as f64) * c;
        let sup = |f: &dyn Fn(usize) -> T| (lo..hi).map(f).fold(T::zero(), |a, b| if b > a || b.is_nan() { b } else { a });
        let sum = |f: &dyn Fn(usize) -> T| (lo..hi).map(f).fold(T::zero(), |a, b| a + b);
        // Σ_{i≤k} 2^{-i r/(p-r)} V_r(x_{i-1},x_i)^{pr/(p-r)} for k in lo..hi.
        let partial = || {
            let mut acc = T::zero();
            (lo..hi)
                .map(|j| {
                    acc = acc + prod_pow(&[(two, e2(self.ks[j], r / (p - r))), (self.vcell[j], p * r / (p - r))]);
                    acc
                })
                .collect::<Vec<T>>()
        };
        match index {
            A1 => sup(&|j| prod_pow(&[(two, e2(self.ks[j], one / p)), (self.vcell[j], one), (self.utail[j], one / q)])),
            A2 => {
                let s = partial();
                sup(&|j| prod_pow(&[(self.utail[j], one / q), (s[j - lo], (p - r) / (p * r))]))
            }
            A3 => {
                let mut run = T::zero();
                let g: Vec<T> = (lo..hi)
                    .map(|j| {
                        run = run.max(prod_pow(&[(two, e2(self.ks[j], q / (p - q))), (self.vcell[j], p * q / (p - q))]));
                        run
                    })
                    .collect();
                let s = sum(&|j| prod_pow(&[(self.ucell[j], one), (self.utail[j], q / (p - q)), (g[j - lo], one)]));
                prod_pow(&[(s, (p - q) / (p * q))])
            }
            A4 => {
                let part = partial();
                let k = q * (p - r) / (r * (p - q));
                let s = sum(&|j| prod_pow(&[(self.ucell[j], one), (self.utail[j], q / (p - q)), (part[j - lo], k)]));
                prod_pow(&[(s, (p - q) / (p * q))])
            }
            B1 => {
                let b = self.loc_sup();
                sup(&|j| prod_pow(&[(two, e2(self.ks[j], one / p)), (b[j], one)]))
            }
            B2 => {
                let b = self.loc_int();
                sup(&|j| prod_pow(&[(two, e2(self.ks[j], one / p)), (b[j], one)]))
            }
            B3 | B4 => {
                let b = if index == B3 { self.loc_int() } else { self.loc_sup() };
                let s = sum(&|j| prod_pow(&[(two, e2(self.ks[j], q / (p - q))), (b[j], p * q / (p - q))]));
                prod_pow(&[(s, (p - q) / (p * q))])
            }
        }
    }

    pub fn constant(&self, index: DiscreteIndex) -> Result<DiscreteValue<T>> {
        self.check(index)?;
        let n = self.ks.len();
        if n == 0 {
            return Ok(DiscreteValue { value: ExtReal::zero(), truncated: true });
        }
        let full = self.over(index, 0, n);
        let moved = |alt: T| {
            if full.is_infinite() || full == T::zero() {
                false
            } else {
                ((full - alt) / full).abs() > T::lit(0.01)
            }
        };
        let mut truncated = n > 1 && moved(self.over(index, 1, n));
        if self.seq.truncated() && n > 1 {
            truncated |= moved(self.over(index, 0, n - 1));
        }
        Ok(DiscreteValue { value: ExtReal::new(full), truncated })
    }

    /// `sup_k 2^{-k/p} (∫_{x_k}^∞ u)^{1/q} V_r(0, x_k)`, equivalent to `A1`.
    pub fn a1_from_origin(&self) -> T {
        let Exponents { p, q, .. } = self.e;
        let one = T::one();
        self.ks
            .iter()
            .zip(&self.utail)
            .map(|(&k, &ut)| {
                let v0 = self.vr.from_zero(self.seq.x(k));
                prod_pow(&[(T::lit(2.0), -T::lit(k as f64) / p), (ut, one / q), (v0, one)])
            })
            .fold(T::zero(), T::max)
    }
}

/// Evaluates `A1..A4`, `B1..B4` on a discretizing sequence of `W`.
pub fn discrete_constant<T: Scalar>(
    index: DiscreteIndex,
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    seq: &DiscretizingSequence<T>,
) -> Result<DiscreteValue<T>> {
    DiscreteEvaluator::new(*e, u, v, seq).constant(index)
}

/// The `A` and `B` constants of the exponents' region and their sum.
#[derive(Clone, Debug, Serialize)]
pub struct DiscreteReport<T: Scalar> {
    pub case: CaseRegion,
    pub a_name: &'static str,
    pub a: DiscreteValue<T>,
    pub b_name: &'static str,
    pub b: DiscreteValue<T>,
    pub estimate: ExtReal<T>,
    pub truncated: bool,
}

pub fn discrete_characterize<T: Scalar>(
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    seq: &DiscretizingSequence<T>,
) -> Result<DiscreteReport<T>> {
    let case = e.case();
    let (ia, ib) = DiscreteIndex::pair(case);
    let ev = DiscreteEvaluator::new(*e, u, v, seq);
    let a = ev.constant(ia)?;
    let b = ev.constant(ib)?;
    Ok(DiscreteReport {
        case,
        a_name: ia.name(),
        a,
        b_name: ib.name(),
        b,
        estimate: a.value + b.value,
        truncated: a.truncated || b.truncated,
    })
}
