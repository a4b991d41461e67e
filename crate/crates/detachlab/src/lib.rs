//! Command-line front end, example file format and census runner for the
//! detachlab engine.

pub mod census;
pub mod cli;
pub mod eval;
pub mod grammar;
