//! Termination is decidable for choreographies without conditionals: their
//! control flow does not depend on the state, so following the leftmost
//! reduction path either reaches `0` or revisits a choreography.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::redex::{fire, head_redex, is_terminated};
use crate::mc::{freshen, has_conditional, Choreography};
use crate::syntax::ProcState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TerminationVerdict {
    Terminates,
    Diverges,
}

impl fmt::Display for TerminationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminationVerdict::Terminates => "Terminates",
            TerminationVerdict::Diverges => "Diverges",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the choreography contains a conditional; termination is only decided for conditional-free choreographies")]
pub struct HasConditional;

pub fn decide_termination_condfree(c: &Choreography) -> Result<TerminationVerdict, HasConditional> {
    if has_conditional(c) {
        return Err(HasConditional);
    }
    // Values never influence the path, so any state will do.
    let mut state = ProcState::new();
    let mut cur = Arc::new(freshen(c));
    let mut seen: HashSet<Arc<Choreography>> = HashSet::new();
    loop {
        if is_terminated(&cur) {
            return Ok(TerminationVerdict::Terminates);
        }
        if !seen.insert(cur.clone()) {
            return Ok(TerminationVerdict::Diverges);
        }
        let Some(redex) = head_redex(&cur) else {
            return Ok(TerminationVerdict::Diverges);
        };
        let (next, _) = fire(&cur, &mut state, &redex).expect("head redex fires");
        cur = next;
    }
}
