//! Exact orbit-method computations for finite p-groups given as Lie rings.

pub mod abelian;
pub mod catalog;
pub mod error;
pub mod io;
pub mod liering;
pub mod modular;
pub mod polar;
pub mod rep;
pub mod scalars;
pub mod session;
pub mod suites;
pub mod witt;

pub use error::{Error, Result};
