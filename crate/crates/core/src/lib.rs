pub mod enumerate;
pub mod error;
pub mod intlin;
pub mod lattice;
pub mod linalg;
pub mod mc;
pub mod rat;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
