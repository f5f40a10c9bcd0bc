//! File formats and report schema behind the `singpencil` binary.

pub mod inputs;
pub mod mtx;
pub mod report;
