//! Interpreter, endpoint projection and function compiler for Minimal
//! Choreographies and Stateful Processes.

pub mod correspondence;
pub mod gen;
pub mod lexer;
pub mod mc;
pub mod projection;
pub mod recfun;
pub mod sem;
pub mod sp;
pub mod syntax;
pub mod trace;

pub use correspondence::{check_correspondence, CorrespondenceReport, Verdict};
pub use lexer::SyntaxError;
pub use mc::{parse_choreography, print_choreography, Choreography, ParseError};
pub use projection::{amend, epp, merge, project_behaviour, prunes_to, ProjectabilityError};
pub use recfun::{encode, encode_parallel, implement_function, oracle_eval, parse_recfun, pi, Mode, RecFun};
pub use sp::{parse_network, Behaviour, Network};
pub use syntax::{Expr, Label, ProcName, ProcSet, ProcState, ProcVar, Value};
pub use trace::{Action, Outcome, Scheduler, Trace};
