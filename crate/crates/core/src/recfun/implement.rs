use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::ast::{ArityError, RecFun};
use super::encode::{encode, encode_parallel, EncodeError};
use crate::mc::Choreography;
use crate::projection::{amend, epp, ProjectabilityError};
use crate::sem::execute;
use crate::sp::net_execute;
use crate::syntax::{ProcName, ProcState, Value};
use crate::trace::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Run the amended encoding as a choreography.
    Choreography,
    /// Project the amended encoding and run the network.
    Network,
    /// Run the amended parallel encoding as a choreography.
    Parallel,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "choreography" => Ok(Mode::Choreography),
            "network" => Ok(Mode::Network),
            "parallel" => Ok(Mode::Parallel),
            other => Err(format!("unknown mode `{other}` (expected choreography, network or parallel)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Choreography => "choreography",
            Mode::Network => "network",
            Mode::Parallel => "parallel",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImplementError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("execution got stuck")]
    Stuck,
    #[error("input process {0} was modified")]
    InputChanged(ProcName),
    #[error(transparent)]
    Arity(#[from] ArityError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Projectability(#[from] ProjectabilityError),
}

/// Input processes `p1, ..., pn` used by `implement_function`.
pub fn input_names(arity: usize) -> Vec<ProcName> {
    (1..=arity).map(|i| ProcName::new(&format!("p{i}")).expect("valid name")).collect()
}

/// Output process used by `implement_function`.
pub fn output_name() -> ProcName {
    ProcName::new("q").expect("valid name")
}

/// The amended choreography `implement_function` runs in `mode`.
pub fn compiled(f: &RecFun, mode: Mode) -> Result<Choreography, EncodeError> {
    let inputs = input_names(f.arity());
    let c = match mode {
        Mode::Parallel => encode_parallel(f, &inputs, &output_name(), 0)?,
        Mode::Choreography | Mode::Network => encode(f, &inputs, &output_name(), 0)?,
    };
    Ok(amend(&c))
}

/// Compiles `f`, runs it with `args` in the input cells and returns the value
/// left in the output cell.
pub fn implement_function(f: &RecFun, args: &[Value], fuel: usize, mode: Mode) -> Result<Value, ImplementError> {
    implement_function_with(f, args, fuel, mode, true)
}

/// `implement_function` with amendment optional, so that tests can observe the
/// projection failing on unamended encodings.
#[doc(hidden)]
pub fn implement_function_with(
    f: &RecFun,
    args: &[Value],
    fuel: usize,
    mode: Mode,
    amended: bool,
) -> Result<Value, ImplementError> {
    if args.len() != f.arity() {
        return Err(ArityError::Arguments { expected: f.arity(), found: args.len() }.into());
    }
    let inputs = input_names(f.arity());
    let q = output_name();
    let c = match mode {
        Mode::Parallel => encode_parallel(f, &inputs, &q, 0)?,
        Mode::Choreography | Mode::Network => encode(f, &inputs, &q, 0)?,
    };
    let c = if amended { amend(&c) } else { c };
    let state: ProcState = inputs.iter().cloned().zip(args.iter().cloned()).collect();
    let (outcome, final_state) = match mode {
        Mode::Choreography | Mode::Parallel => {
            let run = execute(&c, &state, fuel);
            (run.outcome, run.state)
        }
        Mode::Network => {
            let run = net_execute(&epp(&c, &state)?, fuel);
            let mut cells = state.clone();
            for (p, process) in &run.network.processes {
                cells.set(p.clone(), process.value.clone());
            }
            (run.outcome, cells)
        }
    };
    match outcome {
        Outcome::Terminated => {
            if let Some(p) = inputs.iter().find(|p| final_state.get(p) != state.get(p)) {
                return Err(ImplementError::InputChanged(p.clone()));
            }
            Ok(final_state.get(&q))
        }
        Outcome::FuelExhausted => Err(ImplementError::FuelExhausted),
        Outcome::Stuck => Err(ImplementError::Stuck),
    }
}
