//! Library half of the experiment harness, kept separate from the binary so
//! integration tests drive the commands directly.

pub mod config;
pub mod experiments;
