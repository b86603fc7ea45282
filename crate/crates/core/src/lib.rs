pub mod classes;
pub mod error;
pub mod fractional;
pub mod inequality;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
