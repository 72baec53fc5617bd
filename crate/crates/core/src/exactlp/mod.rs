//! Exact rational linear programming.

pub mod lp;
pub mod rat;

pub use lp::{solve, verify_outcome, LinearProgram, LpError, LpOutcome, Row};
pub use rat::{parse_rat, rat, ratio, Rat};
