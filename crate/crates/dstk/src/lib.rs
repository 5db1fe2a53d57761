pub mod analysis;
pub mod cli;
pub mod error;
pub mod factor;
pub mod linalg;
pub mod ops;
pub mod pencil;
pub mod solve;
pub mod system;

pub use error::{Error, Result};
pub use system::*;
