//! Lexical atoms shared by choreographies, networks and function terms:
//! process names, procedure names, labels, expressions, values and states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Words that can never be used as a process name.
pub const KEYWORDS: &[&str] = &[
    "def", "in", "if", "then", "else", "eps", "send", "recv", "sel", "branch",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("`{0}` is not a valid process name (expected [a-z][a-zA-Z0-9_]* or r#<n>)")]
    Process(String),
    #[error("`{0}` is not a valid procedure name (expected [A-Z][a-zA-Z0-9_]*)")]
    Procedure(String),
}

fn is_tail_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Name of a process. Either a user name (`p`, `t1`, `px`) or an auxiliary
/// name from the reserved namespace `r#<n>` used by function encodings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcName(Arc<str>);

impl ProcName {
    pub fn new(name: &str) -> Result<Self, NameError> {
        if Self::is_valid(name) {
            Ok(ProcName(Arc::from(name)))
        } else {
            Err(NameError::Process(name.to_string()))
        }
    }

    /// The auxiliary process `r#index`.
    pub fn aux(index: usize) -> Self {
        ProcName(Arc::from(format!("r#{index}")))
    }

    pub fn is_valid(name: &str) -> bool {
        if let Some(digits) = name.strip_prefix("r#") {
            return !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit());
        }
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return false,
        }
        chars.all(is_tail_char) && !KEYWORDS.contains(&name)
    }

    /// True for names in the reserved `r#<n>` namespace.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with("r#")
    }

    /// Index of an auxiliary name, `None` for user names.
    pub fn aux_index(&self) -> Option<usize> {
        self.0.strip_prefix("r#").and_then(|d| d.parse().ok())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for ProcName {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProcName::new(s)
    }
}

impl fmt::Display for ProcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ProcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ProcName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// Name of a recursive procedure. Always starts with an uppercase letter, so
/// it can never collide with a process name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcVar(Arc<str>);

impl ProcVar {
    pub fn new(name: &str) -> Result<Self, NameError> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(is_tail_char);
        if ok {
            Ok(ProcVar(Arc::from(name)))
        } else {
            Err(NameError::Procedure(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for ProcVar {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProcVar::new(s)
    }
}

impl fmt::Display for ProcVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ProcVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type ProcSet = BTreeSet<ProcName>;

/// Selection label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    L,
    R,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::L => "L",
            Label::R => "R",
        })
    }
}

/// The three expressions a process can send: `eps`, its cell `c`, or `s c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expr {
    Epsilon,
    Cell,
    SuccCell,
}

impl Expr {
    /// `e[v/c]`.
    pub fn eval(self, cell: &Value) -> Value {
        match self {
            Expr::Epsilon => Value::zero(),
            Expr::Cell => cell.clone(),
            Expr::SuccCell => cell.succ(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expr::Epsilon => "eps",
            Expr::Cell => "c",
            Expr::SuccCell => "(s c)",
        })
    }
}

/// A natural number, standing for the string `s·…·s·ε`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(BigUint);

impl Value {
    pub fn zero() -> Self {
        Value(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn succ(&self) -> Self {
        Value(&self.0 + BigUint::one())
    }

    /// Predecessor, saturating at zero.
    pub fn pred(&self) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            Value(&self.0 - BigUint::one())
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value(BigUint::from(n))
    }
}

impl From<BigUint> for Value {
    fn from(n: BigUint) -> Self {
        Value(n)
    }
}

impl FromStr for Value {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<BigUint>().map(Value)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// Total map from process names to values; absent names hold zero.
///
/// Zero entries are never stored, so two states are equal exactly when they
/// agree on every process.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ProcState {
    entries: BTreeMap<ProcName, Value>,
}

impl ProcState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: &ProcName) -> Value {
        self.entries.get(p).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, p: ProcName, v: Value) {
        if v.is_zero() {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, v);
        }
    }

    pub fn with(mut self, p: ProcName, v: impl Into<Value>) -> Self {
        self.set(p, v.into());
        self
    }

    /// Nonzero entries, in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&ProcName, &Value)> {
        self.entries.iter()
    }

    /// The state restricted to `names`, listing zeros explicitly.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a ProcName>) -> BTreeMap<ProcName, Value> {
        names.into_iter().map(|p| (p.clone(), self.get(p))).collect()
    }

    /// Parses `p=3,q=0` style bindings.
    pub fn parse_bindings(text: &str) -> Result<Self, String> {
        let mut state = ProcState::new();
        for binding in text.split(',').map(str::trim).filter(|b| !b.is_empty()) {
            let (name, value) = binding
                .split_once('=')
                .ok_or_else(|| format!("expected name=value, got `{binding}`"))?;
            let name = ProcName::new(name.trim()).map_err(|e| e.to_string())?;
            let value: Value = value
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not a natural number", value.trim()))?;
            state.set(name, value);
        }
        Ok(state)
    }
}

impl FromIterator<(ProcName, Value)> for ProcState {
    fn from_iter<I: IntoIterator<Item = (ProcName, Value)>>(iter: I) -> Self {
        let mut state = ProcState::new();
        for (p, v) in iter {
            state.set(p, v);
        }
        state
    }
}

impl fmt::Display for ProcState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}={v}")?;
        }
        f.write_str("}")
    }
}

/// Persistent lexical environment mapping procedure names to bodies.
/// Lookups return the innermost binding.
#[derive(Debug)]
pub struct Env<T> {
    head: Option<Arc<EnvNode<T>>>,
}

#[derive(Debug)]
struct EnvNode<T> {
    name: ProcVar,
    body: T,
    next: Option<Arc<EnvNode<T>>>,
}

impl<T> Clone for Env<T> {
    fn clone(&self) -> Self {
        Env { head: self.head.clone() }
    }
}

impl<T> Default for Env<T> {
    fn default() -> Self {
        Env { head: None }
    }
}

impl<T> Env<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&self, name: ProcVar, body: T) -> Self {
        Env {
            head: Some(Arc::new(EnvNode {
                name,
                body,
                next: self.head.clone(),
            })),
        }
    }

    pub fn lookup(&self, name: &ProcVar) -> Option<&T> {
        let mut cur = self.head.as_deref();
        while let Some(node) = cur {
            if &node.name == name {
                return Some(&node.body);
            }
            cur = node.next.as_deref();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn process_names() {
        assert!(ProcName::new("p").is_ok());
        assert!(ProcName::new("t1").is_ok());
        assert!(ProcName::new("r#12").is_ok());
        assert!(ProcName::new("r#").is_err());
        assert!(ProcName::new("P").is_err());
        assert!(ProcName::new("if").is_err());
        assert!(ProcName::new("").is_err());
        assert_eq!(ProcName::aux(3).aux_index(), Some(3));
        assert!(ProcName::aux(0).is_reserved());
        assert!(!ProcName::new("r").unwrap().is_reserved());
    }

    #[test]
    fn procedure_names() {
        assert!(ProcVar::new("X").is_ok());
        assert!(ProcVar::new("T12").is_ok());
        assert!(ProcVar::new("x").is_err());
    }

    #[test]
    fn expressions_evaluate() {
        let v = Value::from(4);
        assert_eq!(Expr::Epsilon.eval(&v), Value::zero());
        assert_eq!(Expr::Cell.eval(&v), v);
        assert_eq!(Expr::SuccCell.eval(&v), Value::from(5));
    }

    #[test]
    fn state_is_total_with_zero_default() {
        let p = ProcName::new("p").unwrap();
        let q = ProcName::new("q").unwrap();
        let s = ProcState::new().with(p.clone(), 3u64);
        assert_eq!(s.get(&p), Value::from(3));
        assert_eq!(s.get(&q), Value::zero());
        assert_eq!(s.clone().with(q, 0u64), s);
    }

    #[test]
    fn state_bindings_parse() {
        let s = ProcState::parse_bindings("p=3, q=0,r=12").unwrap();
        assert_eq!(s.to_string(), "{p=3, r=12}");
        assert!(ProcState::parse_bindings("p").is_err());
        assert!(ProcState::parse_bindings("p=x").is_err());
    }

    #[test]
    fn values_are_arbitrary_precision() {
        let big: Value = "340282366920938463463374607431768211456".parse().unwrap();
        assert_eq!(big.succ().to_string(), "340282366920938463463374607431768211457");
        assert_eq!(big.to_u64(), None);
    }
}
