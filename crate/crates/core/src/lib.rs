pub mod classify;
pub mod cli;
pub mod error;
pub mod mat2;
pub mod oracle;
pub mod quadratic;
pub mod rings;
pub mod series;

pub use error::{Error, Result};
pub use mat2::Mat2;
pub use rings::{Elem, Ring, RingSpec};
