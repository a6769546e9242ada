//! File I/O (SDPA sparse format), JSON run records, problem generators, and
//! the benchmark harness behind the `conekit` command-line tool.

#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod gen;
pub mod relax_io;
pub mod rng;
pub mod runrecord;
pub mod sdpa;
pub mod solvers;

pub use runrecord::{config_hash, status_exit_code, RunRecord, RUNRECORD_SCHEMA};
pub use sdpa::{parse_sdpa, write_sdpa, ParseError};
