//! File formats, thread-pool execution and the command-line tool around
//! `tempograph-core`.

pub mod bench;
pub mod cli;
pub mod config;
pub mod exec;
pub mod io;
pub mod output;
