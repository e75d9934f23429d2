//! Context-sensitive unraveling of deterministic conditional term rewrite
//! systems (DCTRSs), bounded rewriting engines for both sides of the
//! transformation, and checkers that exercise its correctness properties
//! on concrete systems.

pub mod checker;
pub mod csrewrite;
pub mod ctrs;
pub mod error;
pub mod experiment;
pub mod io;
pub mod term;
pub mod unravel;

pub use error::{Error, Result};
