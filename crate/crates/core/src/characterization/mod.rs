//! Exponent regions and the weight functionals whose finiteness decides the
//! Hardy–Copson inequality
//!
//! ```text
//! (∫_0^∞ (∫_0^t f^r v)^{q/r} u(t) dt)^{1/q} ≤ C (∫_0^∞ (∫_t^∞ f)^p w(t) dt)^{1/p}.
//! ```

mod constants;
mod tables;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::quadrature::LogGrid;
use crate::scalar::Scalar;
use crate::weights::{Weight, WeightKind};

pub use constants::Evaluator;

/// The exponent triple `(r, p, q)` with `0 < r ≤ 1` and `0 < p, q < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exponents<T> {
    pub r: T,
    pub p: T,
    pub q: T,
}

impl<T: Scalar> Exponents<T> {
    /// Validates the triple. `r > 1` is rejected as [`Error::Triviality`]:
    /// then only `f = 0` satisfies the inequality.
    pub fn new(r: T, p: T, q: T) -> Result<Self> {
        for (name, x) in [("r", r), ("p", p), ("q", q)] {
            if !x.is_finite() || !(x > T::zero()) {
                return Err(Error::InvalidExponents(format!("{name} = {x} must be a finite positive number")));
            }
        }
        if r > T::one() {
            return Err(Error::Triviality { r: r.as_f64() });
        }
        Ok(Exponents { r, p, q })
    }

    pub fn case(&self) -> CaseRegion {
        classify_case(self)
    }
}

/// The seven exponent regions, each with its own set of constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseRegion {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl CaseRegion {
    pub const ALL: [CaseRegion; 7] =
        [CaseRegion::I, CaseRegion::II, CaseRegion::III, CaseRegion::IV, CaseRegion::V, CaseRegion::VI, CaseRegion::VII];

    /// Defining predicate of the region.
    pub fn holds<T: Scalar>(self, e: &Exponents<T>) -> bool {
        let (r, p, q) = (e.r, e.p, e.q);
        let one = T::one();
        match self {
            CaseRegion::I => p <= r && r <= one && one <= q,
            CaseRegion::II => p <= q && q < one && p <= r && r <= one,
            CaseRegion::III => r < p && p <= q && r <= one && one <= q,
            CaseRegion::IV => r < p && p <= q && q < one,
            CaseRegion::V => q < p && p <= r && r <= one,
            CaseRegion::VI => q < p && q < one && r < p && r <= one,
            CaseRegion::VII => r <= one && one <= q && q < p,
        }
    }

    /// Constants whose sum is equivalent to the best constant in this region.
    pub fn constants(self) -> &'static [ConstantIndex] {
        use ConstantIndex::*;
        match self {
            CaseRegion::I => &[C1],
            CaseRegion::II => &[C1, C2],
            CaseRegion::III => &[C1, C3],
            CaseRegion::IV => &[C1, C2, C3],
            CaseRegion::V => &[C4, C5],
            CaseRegion::VI => &[C5, C6],
            CaseRegion::VII => &[C6, C7],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseRegion::I => "I",
            CaseRegion::II => "II",
            CaseRegion::III => "III",
            CaseRegion::IV => "IV",
            CaseRegion::V => "V",
            CaseRegion::VI => "VI",
            CaseRegion::VII => "VII",
        }
    }
}

impl fmt::Display for CaseRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The first region (in the order I..VII) whose predicate holds.
pub fn classify_case<T: Scalar>(e: &Exponents<T>) -> CaseRegion {
    CaseRegion::ALL
        .into_iter()
        .find(|c| c.holds(e))
        .expect("the seven regions cover every admissible exponent triple")
}

/// Names of the characterizing functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstantIndex {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    CalC5,
    CalC6,
}

impl ConstantIndex {
    pub const ALL: [ConstantIndex; 9] = [
        ConstantIndex::C1,
        ConstantIndex::C2,
        ConstantIndex::C3,
        ConstantIndex::C4,
        ConstantIndex::C5,
        ConstantIndex::C6,
        ConstantIndex::C7,
        ConstantIndex::CalC5,
        ConstantIndex::CalC6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstantIndex::C1 => "C1",
            ConstantIndex::C2 => "C2",
            ConstantIndex::C3 => "C3",
            ConstantIndex::C4 => "C4",
            ConstantIndex::C5 => "C5",
            ConstantIndex::C6 => "C6",
            ConstantIndex::C7 => "C7",
            ConstantIndex::CalC5 => "calC5",
            ConstantIndex::CalC6 => "calC6",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Degrees of homogeneity in `(u, v, w)`.
    pub fn degrees<T: Scalar>(self, e: &Exponents<T>) -> (T, T, T) {
        (T::one() / e.q, T::one() / e.r, -T::one() / e.p)
    }
}

impl fmt::Display for ConstantIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A computed constant with its numerical error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantValue<T: Scalar> {
    pub value: ExtReal<T>,
    pub error_bound: T,
}

/// Constants of one region together with their sum.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport<T: Scalar> {
    pub case: CaseRegion,
    pub constants: BTreeMap<String, ConstantValue<T>>,
    pub estimate: ExtReal<T>,
    pub error_bound: T,
    pub finite: bool,
    /// Set when a tabulated weight is used beyond its grid.
    pub extrapolated: bool,
}

impl<T: Scalar> ConstantReport<T> {
    fn assemble(case: CaseRegion, entries: Vec<(String, ConstantValue<T>)>, extrapolated: bool) -> Self {
        let mut estimate = ExtReal::zero();
        let mut error_bound = T::zero();
        for (_, c) in &entries {
            estimate = estimate + c.value;
            error_bound = error_bound + c.error_bound;
        }
        let finite = entries.iter().all(|(_, c)| c.value.is_finite());
        if !finite {
            estimate = ExtReal::infinity();
        }
        ConstantReport { case, constants: entries.into_iter().collect(), estimate, error_bound, finite, extrapolated }
    }

    pub fn get(&self, name: &str) -> Option<ExtReal<T>> {
        self.constants.get(name).map(|c| c.value)
    }
}

fn any_table<T: Scalar>(ws: &[&Weight<T>]) -> bool {
    ws.iter().any(|w| matches!(w.kind(), WeightKind::Table { .. }))
}

/// Evaluates one constant. Fails with [`Error::FormulaUndefined`] when the
/// exponents put a zero in one of the formula's denominators.
pub fn constant<T: Scalar>(
    index: ConstantIndex,
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
) -> Result<ConstantValue<T>> {
    Evaluator::new(*e, u, v, w).constant(index)
}

/// Constants of the exponents' region and their sum.
pub fn characterize<T: Scalar>(e: &Exponents<T>, u: &Weight<T>, v: &Weight<T>, w: &Weight<T>) -> Result<ConstantReport<T>> {
    characterize_with(e, u, v, w, LogGrid::default())
}

/// [`characterize`] with an explicit supremum grid.
pub fn characterize_with<T: Scalar>(
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
    grid: LogGrid<T>,
) -> Result<ConstantReport<T>> {
    let case = classify_case(e);
    let ev = Evaluator::new(*e, u, v, w).with_grid(grid);
    let entries = case
        .constants()
        .iter()
        .map(|&c| Ok((c.name().to_string(), ev.constant(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantReport::assemble(case, entries, any_table(&[u, v, w])))
}

/// The alternative pair `calC5`, `calC6` for `r ≤ q < p < 1`.
pub fn characterize_alt_vi<T: Scalar>(e: &Exponents<T>, u: &Weight<T>, v: &Weight<T>, w: &Weight<T>) -> Result<ConstantReport<T>> {
    if !(e.r <= e.q && e.q < e.p && e.p < T::one()) {
        return Err(Error::WrongCase(format!(
            "the alternative constants need r <= q < p < 1, got r = {}, p = {}, q = {}",
            e.r, e.p, e.q
        )));
    }
    let ev = Evaluator::new(*e, u, v, w);
    let entries = [ConstantIndex::CalC5, ConstantIndex::CalC6]
        .iter()
        .map(|&c| Ok((c.name().to_string(), ev.constant(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantReport::assemble(CaseRegion::VI, entries, any_table(&[u, v, w])))
}

/// Which pair of embedding constants governs `(p, q)`, `q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingCase {
    /// `p ≤ q`: `E1 + E2`.
    First,
    /// `q < p ≤ 1`: `E3 + E4`.
    Second,
    /// `1 < p`: `E4 + E5`.
    Third,
}

/// Weights `(u', v)` of the substitution `u'(t) = t^{-q} u(t)`, `v(t) = t`.
pub fn embedding_weights<T: Scalar>(q: T, u: &Weight<T>) -> Result<(Weight<T>, Weight<T>)> {
    let shifted = u.mul(&Weight::power(T::one(), -q)?);
    Ok((shifted, Weight::power(T::one(), T::one())?))
}

/// Report for the embedding of the Lorentz space `Λ^p(w)` into `S^q(u)`
/// restricted to functions whose rearrangement vanishes at infinity,
/// obtained from the `r = 1` constants under [`embedding_weights`].
///
/// The report's `case` is the region of the substituted triple `(1, p, q)`.
pub fn embedding_constants<T: Scalar>(p: T, q: T, u: &Weight<T>, w: &Weight<T>) -> Result<ConstantReport<T>> {
    if !(q < T::one()) {
        return Err(Error::UnsupportedExponents(format!("the embedding constants need q < 1, got q = {q}")));
    }
    let e = Exponents::new(T::one(), p, q)?;
    let (u2, v2) = embedding_weights(q, u)?;
    let ev = Evaluator::new(e, &u2, &v2, w);
    use ConstantIndex::*;
    let pairs: [(&str, ConstantIndex); 2] = match embedding_case(p, q) {
        EmbeddingCase::First => [("E1", C1), ("E2", C2)],
        EmbeddingCase::Second => [("E3", C4), ("E4", C5)],
        EmbeddingCase::Third => [("E4", C5), ("E5", C6)],
    };
    let entries = pairs
        .iter()
        .map(|&(name, c)| Ok((name.to_string(), ev.constant(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantReport::assemble(classify_case(&e), entries, any_table(&[u, w])))
}

/// Region of the embedding constants for `(p, q)`.
pub fn embedding_case<T: Scalar>(p: T, q: T) -> EmbeddingCase {
    if p <= q {
        EmbeddingCase::First
    } else if p <= T::one() {
        EmbeddingCase::Second
    } else {
        EmbeddingCase::Third
    }
}
