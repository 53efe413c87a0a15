//! Reduction semantics of choreographies.

mod parallel;
mod redex;
mod run;
mod termination;

pub use parallel::{check_parallel_run, Interleaving, ParallelReport, PreconditionViolation, MAX_INTERLEAVINGS};
pub use redex::{enabled_redexes, fire, head_redex, is_terminated, step, InvalidRedex, Redex, RedexKind, Site};
pub use run::{execute, run, run_one, ChorTrace, Execution};
pub use termination::{decide_termination_condfree, HasConditional, TerminationVerdict};
