//! IO, file formats, and pipeline orchestration around `locuskit-core`.
//!
//! The core crate computes; this crate talks to the world: system files,
//! JSON reports, SVG and CSV output, and the `locuskit` command itself.

pub mod cli;
pub mod pipeline;
pub mod report;
pub mod svg;
pub mod sysparse;
