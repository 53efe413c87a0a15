//! Stateful Processes: networks of named processes with one memory cell each.

mod ast;
mod parse;
mod print;
mod sem;

pub use ast::{bind_bdef, BClosure, Behaviour, Network, Process};
pub use parse::{parse_behaviour, parse_network, NetworkParseError};
pub use print::{print_behaviour, print_network};
pub use sem::{head, net_enabled, net_execute, net_fire, net_run, net_run_one, net_step, NetExecution, NetRedex, NetTrace};
