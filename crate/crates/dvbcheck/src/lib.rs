//! Library half of the `dvbcheck` binary: run configuration, report types, and
//! the seeded property-check suites. Integration tests drive the suites
//! in-process through [`run_suite`]/[`run_all`] and shell the binary for the
//! end-to-end contract (exit codes, JSON shape, determinism).

pub mod config;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use report::{FailureRecord, SuiteReport};
pub use suites::{run_all, run_suite, SuiteId};
