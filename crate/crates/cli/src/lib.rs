//! Command-line front end for `polar-core`: tensor I/O, the core operations
//! as subcommands, worked-example demos and the naive-vs-FFT benchmark.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 usage, parse or
//! I/O error, 3 non-conformable operands, 4 singular spectrum, 5 demo
//! mismatch.

pub mod app;
pub mod bench;
pub mod demo;

pub use app::{run, Cli, CliError};
