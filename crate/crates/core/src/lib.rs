pub mod bernstein;
pub mod design;
pub mod error;
pub mod estimator;
pub mod format;
pub mod oracle;

pub use error::{Error, Result};
