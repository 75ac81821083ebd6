//! JSON formats and the command-line front end for `logfaces-core`.

pub mod cli;
pub mod json;

pub use cli::{run, Outcome};
