//! Partial recursive functions and their compilation to choreographies.

mod ast;
mod encode;
mod implement;
mod oracle;
mod parse;

pub use ast::{pi, pi_parallel, ArityError, RecFun};
pub use encode::{encode, encode_parallel, parallel_branches, EncodeError};
pub use implement::{compiled, implement_function, implement_function_with, input_names, output_name, ImplementError, Mode};
pub use oracle::{oracle_eval, EvalError};
pub use parse::{parse_recfun, RecFunParseError};
