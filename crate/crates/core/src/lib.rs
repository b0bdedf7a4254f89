//! Weighted inequalities for the composition of the Hardy and Copson
//! operators: closed-form characterizations of the best constant,
//! their discretization, a numerical lower-bound oracle and the
//! function-space embeddings they govern.

pub mod characterization;
pub mod cli;
pub mod discrete_inequalities;
pub mod discretization;
pub mod error;
pub mod ext;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod spaces;
pub mod weights;

pub use characterization::{CaseRegion, ConstantIndex, ConstantReport, Exponents};
pub use error::{Error, Result};
pub use ext::ExtReal;
pub use oracle::StepFunction;
pub use scalar::Scalar;
pub use weights::{Interval, Weight};

pub type Weight64 = Weight<f64>;
pub type Weight32 = Weight<f32>;
pub type Exponents64 = Exponents<f64>;
pub type Exponents32 = Exponents<f32>;
pub type StepFunction64 = StepFunction<f64>;
pub type StepFunction32 = StepFunction<f32>;
pub type ConstantReport64 = ConstantReport<f64>;
