use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use super::ast::{ArityError, RecFun};
use crate::syntax::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error(transparent)]
    Arity(#[from] ArityError),
}

/// Evaluates `f` directly on `args`. Every evaluation of a subterm costs one
/// unit of fuel, so a diverging minimization ends in `FuelExhausted`.
pub fn oracle_eval(f: &RecFun, args: &[Value], fuel: usize) -> Result<Value, EvalError> {
    if args.len() != f.arity() {
        return Err(ArityError::Arguments { expected: f.arity(), found: args.len() }.into());
    }
    let args: Vec<BigUint> = args.iter().map(|v| v.as_biguint().clone()).collect();
    let mut oracle = Oracle { fuel };
    oracle.eval(f, &args).map(Value::from).ok_or(EvalError::FuelExhausted)
}

struct Oracle {
    fuel: usize,
}

impl Oracle {
    fn eval(&mut self, f: &RecFun, args: &[BigUint]) -> Option<BigUint> {
        if self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        Some(match f {
            RecFun::Zero => BigUint::zero(),
            RecFun::Succ => &args[0] + 1u32,
            RecFun::Eq => {
                if args[0] == args[1] {
                    BigUint::zero()
                } else {
                    &args[0] + 1u32
                }
            }
            RecFun::Proj { m, .. } => args[m - 1].clone(),
            RecFun::Comp { f, gs } => {
                let inner = gs.iter().map(|g| self.eval(g, args)).collect::<Option<Vec<_>>>()?;
                self.eval(f, &inner)?
            }
            RecFun::PrimRec { f, g } => {
                let rest = &args[1..];
                let mut acc = self.eval(f, rest)?;
                let mut i = BigUint::zero();
                while i < args[0] {
                    let mut step_args = vec![i.clone(), acc];
                    step_args.extend_from_slice(rest);
                    acc = self.eval(g, &step_args)?;
                    i += 1u32;
                }
                acc
            }
            RecFun::Min { f } => {
                let mut y = BigUint::zero();
                loop {
                    let mut probe = args.to_vec();
                    probe.push(y.clone());
                    if self.eval(f, &probe)?.is_zero() {
                        break y;
                    }
                    y += BigUint::one();
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::from(x)).collect()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(oracle_eval(&RecFun::add(), &v(&[2, 3]), 1000), Ok(Value::from(5)));
        assert_eq!(oracle_eval(&RecFun::sub(), &v(&[5, 3]), 10_000), Ok(Value::from(2)));
        assert_eq!(oracle_eval(&RecFun::sub(), &v(&[3, 5]), 10_000), Err(EvalError::FuelExhausted));
    }

    #[test]
    fn equality_composite() {
        for x in 0..4 {
            for y in 0..4 {
                let r = oracle_eval(&RecFun::eq_composite(), &v(&[x, y]), 10_000).unwrap();
                assert_eq!(r, Value::from(x.abs_diff(y)));
            }
        }
    }

    #[test]
    fn wrong_argument_count() {
        assert!(matches!(oracle_eval(&RecFun::Succ, &v(&[1, 2]), 10), Err(EvalError::Arity(_))));
    }
}
