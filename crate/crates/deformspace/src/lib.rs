//! File formats, reports and the command-line front end for
//! `deformspace-core`.

pub mod cli;
pub mod dot;
pub mod edgelist;
pub mod random;
pub mod report;

pub use deformspace_core as core;
