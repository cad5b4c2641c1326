//! Library side of the `pafold` command: the check, census and render
//! subcommands as plain functions.

pub mod census;
pub mod check;
pub mod render;
