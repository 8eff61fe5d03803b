//! Instance formats, a seeded generator, CSV traces and the command-line
//! driver around `fwph-core`.

pub mod cli;
pub mod error;
pub mod generator;
pub mod native;
pub mod runtime;
pub mod smps;
pub mod trace;

pub use error::{ParseError, ParseErrorKind};
