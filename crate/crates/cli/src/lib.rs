//! File format and command layer for the conifold binary. The library
//! half exists so integration tests can drive commands in-process.

pub mod commands;
pub mod schema;

pub use commands::{
    build_report, cmd_report, cmd_transform, cmd_validate, CommandOutput, Direction,
    ReportDoc, ReportFlags, UsageError,
};
pub use schema::{canonicalize, emit, load, parse_str, PresentationFile, DEFAULT_ORDER};
