pub mod coherent;
pub mod completeness;
pub mod config;
pub mod error;
pub mod expr;
pub mod figures;
pub mod fock;
pub mod quadrature;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
