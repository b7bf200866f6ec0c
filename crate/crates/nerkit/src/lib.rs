//! Filesystem, network and command-line layer of nerkit.
//!
//! The algorithms live in [`nerkit_core`]; this crate reads dataset
//! directories, reads and writes checksummed model files, renders reports,
//! runs experiment matrices in parallel, and serves predictions over HTTP.

pub mod annotate;
pub mod cli;
pub mod dataset_io;
mod error;
pub mod harness;
pub mod model_file;
pub mod report;
pub mod server;

pub use error::Error;
pub use nerkit_core;

pub type Result<T, E = Error> = std::result::Result<T, E>;
