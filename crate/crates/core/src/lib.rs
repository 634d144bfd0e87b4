pub mod app;
pub mod birkhoff;
pub mod error;
pub mod hnf;
pub mod moser;
pub mod poisson;
pub mod sampling;
pub mod scalars;
pub mod series;

pub use error::{Error, Result};
