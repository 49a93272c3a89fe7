//! Closed-form expressions used in config files (deformations, metric
//! components, embeddings).
//!
//! Parsing is delegated to `meval`; the resulting RPN is compiled against a
//! fixed list of variable names into a small stack program that is `Send +
//! Sync`, so one compiled expression can be evaluated from many workers.

use std::collections::BTreeMap;

use meval::tokenizer::{Operation, Token};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Op {
    Const(f64),
    Var(usize),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Pow,
    Call1(fn(f64) -> f64),
    Call2(fn(f64, f64) -> f64),
}

/// A compiled expression over named variables.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    source: String,
    ops: Vec<Op>,
    arity: usize,
}

fn unary(name: &str) -> Option<fn(f64) -> f64> {
    Some(match name {
        "sin" => f64::sin,
        "cos" => f64::cos,
        "tan" => f64::tan,
        "asin" => f64::asin,
        "acos" => f64::acos,
        "atan" => f64::atan,
        "sinh" => f64::sinh,
        "cosh" => f64::cosh,
        "tanh" => f64::tanh,
        "exp" => f64::exp,
        "ln" => f64::ln,
        "log10" => f64::log10,
        "sqrt" => f64::sqrt,
        "abs" => f64::abs,
        "floor" => f64::floor,
        "ceil" => f64::ceil,
        "signum" => f64::signum,
        _ => return None,
    })
}

fn binary(name: &str) -> Option<fn(f64, f64) -> f64> {
    Some(match name {
        "atan2" => f64::atan2,
        "min" => f64::min,
        "max" => f64::max,
        "hypot" => f64::hypot,
        _ => return None,
    })
}

impl CompiledExpr {
    /// Compiles `source`. Identifiers resolve first to `variables` (by
    /// position in the evaluation slice), then to `constants`, then to the
    /// built-in `pi` and `e`.
    pub fn compile(source: &str, variables: &[&str], constants: &BTreeMap<String, f64>) -> Result<Self> {
        let parsed: meval::Expr = source.parse().map_err(|e| Error::Expression(format!("{source:?}: {e}")))?;
        let mut ops = Vec::with_capacity(parsed.len());
        let mut depth: isize = 0;
        for token in parsed.iter() {
            let (op, delta) = match token {
                Token::Number(v) => (Op::Const(*v), 1),
                Token::Var(name) => {
                    let op = if let Some(i) = variables.iter().position(|v| v == name) {
                        Op::Var(i)
                    } else if let Some(v) = constants.get(name) {
                        Op::Const(*v)
                    } else if name == "pi" {
                        Op::Const(std::f64::consts::PI)
                    } else if name == "e" {
                        Op::Const(std::f64::consts::E)
                    } else {
                        return Err(Error::Expression(format!("{source:?}: unknown identifier `{name}`")));
                    };
                    (op, 1)
                }
                Token::Unary(Operation::Minus) => (Op::Neg, 0),
                Token::Unary(Operation::Plus) => continue,
                Token::Binary(op) => {
                    let op = match op {
                        Operation::Plus => Op::Add,
                        Operation::Minus => Op::Sub,
                        Operation::Times => Op::Mul,
                        Operation::Div => Op::Div,
                        Operation::Rem => Op::Rem,
                        Operation::Pow => Op::Pow,
                    };
                    (op, -1)
                }
                Token::Func(name, Some(1)) => match unary(name) {
                    Some(f) => (Op::Call1(f), 0),
                    None => return Err(Error::Expression(format!("{source:?}: unknown function `{name}`/1"))),
                },
                Token::Func(name, Some(2)) => match binary(name) {
                    Some(f) => (Op::Call2(f), -1),
                    None => return Err(Error::Expression(format!("{source:?}: unknown function `{name}`/2"))),
                },
                other => return Err(Error::Expression(format!("{source:?}: unexpected token {other:?}"))),
            };
            depth += delta;
            if depth < 1 {
                return Err(Error::Expression(format!("{source:?}: malformed expression")));
            }
            ops.push(op);
        }
        if depth != 1 {
            return Err(Error::Expression(format!("{source:?}: malformed expression")));
        }
        Ok(Self { source: source.to_string(), ops, arity: variables.len() })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates with `vars` bound positionally to the compile-time names.
    pub fn eval(&self, vars: &[f64]) -> f64 {
        debug_assert_eq!(vars.len(), self.arity);
        let mut stack: Vec<f64> = Vec::with_capacity(8);
        for op in &self.ops {
            match op {
                Op::Const(v) => stack.push(*v),
                Op::Var(i) => stack.push(vars[*i]),
                Op::Neg => {
                    let top = stack.last_mut().expect("validated at compile time");
                    *top = -*top;
                }
                Op::Call1(f) => {
                    let top = stack.last_mut().expect("validated at compile time");
                    *top = f(*top);
                }
                _ => {
                    let b = stack.pop().expect("validated at compile time");
                    let a = stack.last_mut().expect("validated at compile time");
                    *a = match op {
                        Op::Add => *a + b,
                        Op::Sub => *a - b,
                        Op::Mul => *a * b,
                        Op::Div => *a / b,
                        Op::Rem => *a % b,
                        Op::Pow => a.powf(b),
                        Op::Call2(f) => f(*a, b),
                        _ => unreachable!(),
                    };
                }
            }
        }
        stack[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(src: &str, vars: &[&str]) -> CompiledExpr {
        CompiledExpr::compile(src, vars, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(c("1 + 2 * 3", &[]).eval(&[]), 7.0);
        assert_eq!(c("-2^2", &[]).eval(&[]), -4.0);
        assert_eq!(c("(1 + 2) * x", &["x"]).eval(&[2.0]), 6.0);
        assert_eq!(c("x0 - x1", &["x0", "x1"]).eval(&[5.0, 3.0]), 2.0);
    }

    #[test]
    fn functions_and_constants() {
        let mut k = BTreeMap::new();
        k.insert("R".to_string(), 2.0);
        let e = CompiledExpr::compile("R^2 * sin(x0)^2", &["x0"], &k).unwrap();
        let v = e.eval(&[std::f64::consts::FRAC_PI_2]);
        assert!((v - 4.0).abs() < 1e-15);
        assert!((c("atan2(1, 1)", &[]).eval(&[]) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((c("cos(pi)", &[]).eval(&[]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifiers_are_rejected() {
        assert!(CompiledExpr::compile("lambda * 2", &["sigma"], &BTreeMap::new()).is_err());
        assert!(CompiledExpr::compile("frob(1)", &[], &BTreeMap::new()).is_err());
        assert!(CompiledExpr::compile("1 +", &[], &BTreeMap::new()).is_err());
    }

    #[test]
    fn compiled_expressions_are_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<CompiledExpr>();
    }
}
