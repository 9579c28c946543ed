pub mod alternating;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod multiplicity;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
