//! Problem files, numeric continuation and the command line front end.

pub mod cli;
pub mod demo;
pub mod newton;
pub mod output;
pub mod poincare;
pub mod problem;
pub mod verify;

pub use demo::{eval_central, hnf_newton_demo, HnfNewtonDemo};
pub use newton::{newton_root, relative_residual, NewtonEntry, NewtonTrace};
pub use poincare::{
    birkhoff_truncation_table, format_poly, newton_continuation, poincare_birkhoff_series, PoincareTruncation,
};
pub use problem::{ProblemSpec, TermSpec};
