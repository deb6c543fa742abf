pub mod brion;
pub mod cli;
pub mod error;
pub mod jackson;
pub mod laurent;
pub mod lattice;
pub mod measures;
mod linalg;
pub mod qalg;

pub use error::{QBrionError, Result};
