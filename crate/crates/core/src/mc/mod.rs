//! Minimal Choreographies: syntax, concrete notation and static helpers.

mod ast;
mod ops;
mod parse;
mod print;

pub use ast::{Choreography, Path, PathStep};
pub use ops::{
    annotate_calls, bind_def, calls_free, exit_points, freshen, has_conditional, proc_names, proc_names_ordered,
    seq_compose, seq_compose_all, validate, Closure, ComposeError, Lint, ValidationError,
};
pub use parse::{parse_choreography, ParseError};
pub(crate) use parse::{parse_expr, parse_label, parse_proc_name};
pub use print::print_choreography;
