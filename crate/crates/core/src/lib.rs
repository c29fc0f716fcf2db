//! Effect-graded monads over finite sets.
//!
//! Given a base monad `T` and a signature of operations interpreted in `T`,
//! the workbench computes `T_ε`: the image of the free monad on `ε` under
//! the interpretation morphism, with the induced monad structure and checks
//! of the laws that structure should satisfy.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod finset;
pub mod fixtures;
pub mod monad;
pub mod presets;
pub mod report;
pub mod signature;

mod cases;

pub use error::{Error, Result};
