pub mod decompose;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod prover;
mod statevec;
pub mod verifier;

pub use error::{Error, Result};
