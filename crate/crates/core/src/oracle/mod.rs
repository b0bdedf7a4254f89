//! Lower bounds on the best constant from explicit step functions.

mod ratio;
mod search;
mod seeds;
mod step;

pub use ratio::{main_ratio, main_sides, main_sides_weighted};
pub use search::{estimate_best_constant, OracleEstimate, OracleOptions};
pub use seeds::{fubini_exact_constant, paper_test_functions};
pub use step::StepFunction;
