use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArityError {
    #[error("P[{n},{m}] needs 1 <= {m} <= {n}")]
    Projection { n: usize, m: usize },
    #[error("composition needs at least one inner function")]
    EmptyComposition,
    #[error("outer function takes {expected} arguments but {found} inner functions are given")]
    Composition { expected: usize, found: usize },
    #[error("inner functions of a composition take {first} and {other} arguments")]
    MixedArity { first: usize, other: usize },
    #[error("recursion step must take {expected} arguments, found {found}")]
    Recursion { expected: usize, found: usize },
    #[error("minimization needs a function of at least one argument")]
    Minimization,
    #[error("function takes {expected} arguments but {found} were given")]
    Arguments { expected: usize, found: usize },
}

/// A partial recursive function, built from zero, successor, projections and
/// equality by composition, primitive recursion and minimization.
///
/// `Eq` is the equality test used by the subtraction example: `0` on equal
/// arguments and `x + 1` otherwise. It has a direct encoding and is
/// expressible with the other constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RecFun {
    Zero,
    Succ,
    Eq,
    Proj { n: usize, m: usize },
    Comp { f: Arc<RecFun>, gs: Vec<Arc<RecFun>> },
    PrimRec { f: Arc<RecFun>, g: Arc<RecFun> },
    Min { f: Arc<RecFun> },
}

impl RecFun {
    pub fn proj(n: usize, m: usize) -> Result<Self, ArityError> {
        if 1 <= m && m <= n {
            Ok(RecFun::Proj { n, m })
        } else {
            Err(ArityError::Projection { n, m })
        }
    }

    pub fn comp(f: RecFun, gs: Vec<RecFun>) -> Result<Self, ArityError> {
        let first = gs.first().ok_or(ArityError::EmptyComposition)?.arity();
        if let Some(g) = gs.iter().find(|g| g.arity() != first) {
            return Err(ArityError::MixedArity { first, other: g.arity() });
        }
        if f.arity() != gs.len() {
            return Err(ArityError::Composition { expected: f.arity(), found: gs.len() });
        }
        Ok(RecFun::Comp { f: Arc::new(f), gs: gs.into_iter().map(Arc::new).collect() })
    }

    pub fn prim_rec(f: RecFun, g: RecFun) -> Result<Self, ArityError> {
        if g.arity() != f.arity() + 2 {
            return Err(ArityError::Recursion { expected: f.arity() + 2, found: g.arity() });
        }
        Ok(RecFun::PrimRec { f: Arc::new(f), g: Arc::new(g) })
    }

    pub fn min(f: RecFun) -> Result<Self, ArityError> {
        if f.arity() == 0 {
            return Err(ArityError::Minimization);
        }
        Ok(RecFun::Min { f: Arc::new(f) })
    }

    pub fn arity(&self) -> usize {
        match self {
            RecFun::Zero | RecFun::Succ => 1,
            RecFun::Eq => 2,
            RecFun::Proj { n, .. } => *n,
            RecFun::Comp { gs, .. } => gs[0].arity(),
            RecFun::PrimRec { f, .. } => f.arity() + 1,
            RecFun::Min { f } => f.arity() - 1,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            RecFun::Zero | RecFun::Succ | RecFun::Eq | RecFun::Proj { .. } => 1,
            RecFun::Comp { f, gs } => 1 + f.size() + gs.iter().map(|g| g.size()).sum::<usize>(),
            RecFun::PrimRec { f, g } => 1 + f.size() + g.size(),
            RecFun::Min { f } => 1 + f.size(),
        }
    }

    /// True if the term contains a minimization.
    pub fn has_min(&self) -> bool {
        match self {
            RecFun::Zero | RecFun::Succ | RecFun::Eq | RecFun::Proj { .. } => false,
            RecFun::Comp { f, gs } => f.has_min() || gs.iter().any(|g| g.has_min()),
            RecFun::PrimRec { f, g } => f.has_min() || g.has_min(),
            RecFun::Min { .. } => true,
        }
    }

    /// `add = R(P[1,1]; C(S; P[3,2]))`
    pub fn add() -> Self {
        let step = RecFun::comp(RecFun::Succ, vec![RecFun::Proj { n: 3, m: 2 }]).expect("arity 3");
        RecFun::prim_rec(RecFun::Proj { n: 1, m: 1 }, step).expect("arity 2")
    }

    /// `sub = M(C(EQ; C(add; P[3,2], P[3,3]), P[3,1]))`, undefined when the
    /// second argument exceeds the first.
    pub fn sub() -> Self {
        let sum = RecFun::comp(RecFun::add(), vec![RecFun::Proj { n: 3, m: 2 }, RecFun::Proj { n: 3, m: 3 }])
            .expect("arity 3");
        let test = RecFun::comp(RecFun::Eq, vec![sum, RecFun::Proj { n: 3, m: 1 }]).expect("arity 3");
        RecFun::min(test).expect("arity 2")
    }

    /// Equality without the `EQ` primitive: `|x - y|` as the sum of both
    /// truncated differences.
    pub fn eq_composite() -> Self {
        let p = |n, m| RecFun::Proj { n, m };
        let pred = RecFun::comp(RecFun::prim_rec(RecFun::Zero, p(3, 1)).expect("arity 2"), vec![p(1, 1), p(1, 1)])
            .expect("arity 1");
        // monus(y, x) = x - y
        let monus = RecFun::prim_rec(p(1, 1), RecFun::comp(pred, vec![p(3, 2)]).expect("arity 3")).expect("arity 2");
        let left = RecFun::comp(monus.clone(), vec![p(2, 2), p(2, 1)]).expect("arity 2");
        let right = RecFun::comp(monus, vec![p(2, 1), p(2, 2)]).expect("arity 2");
        RecFun::comp(RecFun::add(), vec![left, right]).expect("arity 2")
    }
}

impl fmt::Display for RecFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecFun::Zero => f.write_str("Z"),
            RecFun::Succ => f.write_str("S"),
            RecFun::Eq => f.write_str("EQ"),
            RecFun::Proj { n, m } => write!(f, "P[{n},{m}]"),
            RecFun::Comp { f: outer, gs } => {
                write!(f, "C({outer}; ")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            RecFun::PrimRec { f: base, g } => write!(f, "R({base}; {g})"),
            RecFun::Min { f: inner } => write!(f, "M({inner})"),
        }
    }
}

/// Auxiliary processes used by the sequential encoding of `f`.
pub fn pi(f: &RecFun) -> usize {
    match f {
        RecFun::Zero | RecFun::Succ | RecFun::Proj { .. } => 0,
        RecFun::Eq => 1,
        RecFun::Comp { f, gs } => pi(f) + gs.iter().map(|g| pi(g)).sum::<usize>() + gs.len(),
        RecFun::PrimRec { f, g } => pi(f) + pi(g) + 3,
        RecFun::Min { f } => pi(f) + 3,
    }
}

/// Auxiliary processes used by the parallel encoding of `f`: a composition
/// also needs one replica of every input per inner function.
pub fn pi_parallel(f: &RecFun) -> usize {
    match f {
        RecFun::Zero | RecFun::Succ | RecFun::Proj { .. } => 0,
        RecFun::Eq => 1,
        RecFun::Comp { f: outer, gs } => {
            pi_parallel(outer) + gs.iter().map(|g| pi_parallel(g)).sum::<usize>() + gs.len() * (1 + f.arity())
        }
        RecFun::PrimRec { f, g } => pi_parallel(f) + pi_parallel(g) + 3,
        RecFun::Min { f } => pi_parallel(f) + 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arities() {
        assert_eq!(RecFun::add().arity(), 2);
        assert_eq!(RecFun::sub().arity(), 2);
        assert_eq!(RecFun::eq_composite().arity(), 2);
        assert_eq!(RecFun::min(RecFun::Proj { n: 1, m: 1 }).unwrap().arity(), 0);
        assert!(RecFun::proj(2, 3).is_err());
        assert!(RecFun::comp(RecFun::Succ, vec![RecFun::Proj { n: 1, m: 1 }, RecFun::Proj { n: 2, m: 1 }]).is_err());
    }

    #[test]
    fn auxiliary_counts() {
        assert_eq!(pi(&RecFun::Zero), 0);
        assert_eq!(pi(&RecFun::add()), 4);
        assert_eq!(pi(&RecFun::min(RecFun::Proj { n: 1, m: 1 }).unwrap()), 3);
        assert_eq!(pi(&RecFun::sub()), 12);
    }

    #[test]
    fn display() {
        assert_eq!(RecFun::add().to_string(), "R(P[1,1]; C(S; P[3,2]))");
        assert_eq!(RecFun::sub().to_string(), "M(C(EQ; C(R(P[1,1]; C(S; P[3,2])); P[3,2], P[3,3]), P[3,1]))");
    }
}
