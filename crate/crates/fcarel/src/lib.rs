//! File formats, the evaluation harness and the batch scoring used by the
//! `fcarel` command line.

pub use fcarel_core as core;

pub mod experiment;
pub mod export;
pub mod format;
