pub mod error;
pub mod cartesian;
pub mod coulomb;
pub mod dunkl;
pub mod levels;
pub mod oracle;
pub mod spherical;
pub mod specfun;

pub use error::{Error, Result};
