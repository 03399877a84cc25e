//! Job files, task orchestration, result cache and report emission for the
//! `braidwork` binary.

pub mod cache;
pub mod catalog;
pub mod expr;
pub mod job;
pub mod run;

pub use job::{parse_spec, JobSpec, Task};
pub use run::{render_text, run, Report, RunOptions};
