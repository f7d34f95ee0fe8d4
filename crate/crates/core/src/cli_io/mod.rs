//! Spec loading, report and DOT emission, and the command runner.

mod dot;
pub mod fixtures;
mod run;
mod spec;

pub use dot::emit_dot;
pub use run::{
    run, write_outputs, Command, Outcome, RunConfig, Status, BOUND_ENV, DEFAULT_BOUND, REPORT_SCHEMA, REPORT_VERSION,
};
pub use spec::{fixture, load_spec, parse_spec, Spec};
