//! Command-line front end: `trace`, `sweep` and `probe`, with CSV, JSON and
//! SVG output.

// `!(x > y)` is used deliberately so NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod literal;
pub mod output;

pub use commands::{main_with_args, run, run_probe, run_sweep, run_trace, Cli};
pub use literal::{parse_complex_literal, FormatError};
pub use output::{write_csv, write_json, write_json_array, write_svg, OutputFormat, TraceRecord};
