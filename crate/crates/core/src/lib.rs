pub mod analytic;
pub mod check;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
