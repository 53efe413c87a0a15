#![allow(dead_code)]

use chorec_core::{parse_choreography, Choreography, ProcName, ProcState};

pub const INC: &str = "p.c -> t; t.(s c) -> p; 0";

pub const ADD_MACRO: &str = "def X = if r = q then (r -> p[L]; r -> q[L]; r -> t1[L]; r -> t2[L]; 0) \
    else (r -> p[R]; r -> q[R]; r -> t1[R]; r -> t2[R]; p.c -> t1; t1.(s c) -> p; r.c -> t2; t2.(s c) -> r; X) \
    in t1.eps -> r; X";

pub const UNSELECTED: &str = "if p = q then (p.c -> r; 0) else (r.c -> p; 0)";
pub const SELECTED: &str = "if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; r.c -> p; 0)";

pub const RECV_OR_NOTHING: &str = "if p = q then (p.c -> r; 0) else (0)";
pub const RECV_OR_NOTHING_AMENDED: &str = "if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; 0)";
pub const SAME_INPUT: &str = "if p = q then (p.(s c) -> r; 0) else (p.c -> r; 0)";

pub fn chor(text: &str) -> Choreography {
    parse_choreography(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn state(text: &str) -> ProcState {
    ProcState::parse_bindings(text).unwrap()
}

pub fn name(s: &str) -> ProcName {
    ProcName::new(s).unwrap()
}
