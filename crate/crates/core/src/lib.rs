pub mod acm;
pub mod adapted;
pub mod classifier;
pub mod constructors;
pub mod error;
pub mod exterior;
pub mod invariant_forms;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod scalar;

pub use error::{Error, ErrorFamily, Result};
