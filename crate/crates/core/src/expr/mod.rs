//! A small expression language for problem data.
//!
//! Expressions are real-valued formulas in a fixed set of named variables
//! (`x` for p, f and exact solutions; `x`, `t` for kernels), built from
//! numbers, `+ - * / ^`, parentheses and the builtins
//! `sin cos tan exp log sqrt abs pow gamma besselj0 besselj1`.
//!
//! ```
//! use fide_core::expr::parse;
//!
//! let e = parse("sin(x)/sqrt(x)", &["x"]).unwrap();
//! let v = e.eval(&[("x", 0.25)]).unwrap();
//! assert!((v - 0.25f64.sin() / 0.5).abs() < 1e-15);
//! ```

mod lexer;
mod parser;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::specialfn;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("lexical error at offset {position}: {message}")]
    Lexical { position: usize, message: String },

    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown function `{name}` at offset {position}")]
    UnknownFunction { name: String, position: usize },

    #[error("unknown variable `{name}` at offset {position} (allowed: {})", allowed.join(", "))]
    UnknownVariable {
        name: String,
        allowed: Vec<String>,
        position: usize,
    },

    #[error("`{name}` takes {expected} argument(s), got {found} (offset {position})")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        position: usize,
    },

    #[error("variable `{0}` has no binding")]
    Unbound(String),

    #[error("domain error in `{expr}`: {message}")]
    Domain { expr: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Pow,
    Gamma,
    BesselJ0,
    BesselJ1,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::Sin,
        Builtin::Cos,
        Builtin::Tan,
        Builtin::Exp,
        Builtin::Log,
        Builtin::Sqrt,
        Builtin::Abs,
        Builtin::Pow,
        Builtin::Gamma,
        Builtin::BesselJ0,
        Builtin::BesselJ1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Tan => "tan",
            Builtin::Exp => "exp",
            Builtin::Log => "log",
            Builtin::Sqrt => "sqrt",
            Builtin::Abs => "abs",
            Builtin::Pow => "pow",
            Builtin::Gamma => "gamma",
            Builtin::BesselJ0 => "besselj0",
            Builtin::BesselJ1 => "besselj1",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Pow => 2,
            _ => 1,
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable(String),
    Negate(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
}

/// Variable lookup used by [`Expr::eval`].
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Expr {
    pub fn eval<B: Bindings + ?Sized>(&self, bindings: &B) -> Result<f64, ExprError> {
        match self {
            Expr::Constant(c) => Ok(*c),
            Expr::Variable(name) => bindings.lookup(name).ok_or_else(|| ExprError::Unbound(name.clone())),
            Expr::Negate(inner) => Ok(-inner.eval(bindings)?),
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(bindings)?;
                let b = rhs.eval(bindings)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div if b == 0.0 => Err(self.domain("division by zero")),
                    BinOp::Div => Ok(a / b),
                    BinOp::Pow => self.checked_pow(a, b),
                }
            }
            Expr::Call(func, args) => {
                let a = args[0].eval(bindings)?;
                match func {
                    Builtin::Sin => Ok(a.sin()),
                    Builtin::Cos => Ok(a.cos()),
                    Builtin::Tan => Ok(a.tan()),
                    Builtin::Exp => Ok(a.exp()),
                    Builtin::Log if a <= 0.0 => Err(self.domain(format!("log of non-positive value {a}"))),
                    Builtin::Log => Ok(a.ln()),
                    Builtin::Sqrt if a < 0.0 => Err(self.domain(format!("sqrt of negative value {a}"))),
                    Builtin::Sqrt => Ok(a.sqrt()),
                    Builtin::Abs => Ok(a.abs()),
                    Builtin::Pow => self.checked_pow(a, args[1].eval(bindings)?),
                    Builtin::Gamma => specialfn::gamma(a).map_err(|e| self.domain(e.to_string())),
                    Builtin::BesselJ0 => Ok(specialfn::bessel_j0(a)),
                    Builtin::BesselJ1 => Ok(specialfn::bessel_j1(a)),
                }
            }
        }
    }

    fn checked_pow(&self, base: f64, exponent: f64) -> Result<f64, ExprError> {
        if base == 0.0 && exponent < 0.0 {
            return Err(self.domain("zero raised to a negative power"));
        }
        let r = base.powf(exponent);
        if r.is_nan() && !base.is_nan() && !exponent.is_nan() {
            return Err(self.domain(format!("{base} raised to non-integer power {exponent}")));
        }
        Ok(r)
    }

    fn domain(&self, message: impl Into<String>) -> ExprError {
        ExprError::Domain {
            expr: self.to_string(),
            message: message.into(),
        }
    }

    /// Set of variable names that occur in the expression.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Constant(_) => {}
            Expr::Variable(name) => {
                out.insert(name.clone());
            }
            Expr::Negate(inner) => inner.collect_vars(out),
            Expr::Binary(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

/// Fully parenthesized form; re-parsing it yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug gives the shortest string that round-trips exactly.
            Expr::Constant(c) => write!(f, "{c:?}"),
            Expr::Variable(name) => f.write_str(name),
            Expr::Negate(inner) => write!(f, "(-{inner})"),
            Expr::Binary(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_str(src: &str, x: f64) -> Result<f64, ExprError> {
        parse(src, &["x", "t"])?.eval(&[("x", x), ("t", 0.5)])
    }

    #[test]
    fn eval_examples() {
        let v = eval_str("sin(x)/sqrt(x)", 0.25).unwrap();
        assert!((v - 0.494_807_918_509_045_9).abs() < 1e-15);
        assert_eq!(v, 0.25f64.sin() / 0.5);
        assert_eq!(eval_str("pi", 0.0).unwrap(), std::f64::consts::PI);
        assert!(matches!(eval_str("sqrt(x)", -1.0), Err(ExprError::Domain { .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(eval_str("2+3*4", 0.0).unwrap(), 14.0);
        assert_eq!(eval_str("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(eval_str("-2^2", 0.0).unwrap(), -4.0);
        assert_eq!(eval_str("8/4/2", 0.0).unwrap(), 1.0);
        assert_eq!(eval_str("10-4-3", 0.0).unwrap(), 3.0);
    }

    #[test]
    fn domain_errors_name_subexpression() {
        match eval_str("1 + log(x - 1)", 0.5) {
            Err(ExprError::Domain { expr, .. }) => assert_eq!(expr, "log((x - 1.0))"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(eval_str("1/(x-x)", 0.3), Err(ExprError::Domain { .. })));
        assert!(matches!(eval_str("(-x)^0.5", 0.3), Err(ExprError::Domain { .. })));
        assert!(matches!(eval_str("gamma(x-1)", 1.0), Err(ExprError::Domain { .. })));
        assert!(matches!(eval_str("log(0)", 1.0), Err(ExprError::Domain { .. })));
    }

    #[test]
    fn special_builtins_delegate() {
        assert!((eval_str("gamma(0.5)^2", 0.0).unwrap() - std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(eval_str("besselj0(x)", 0.5).unwrap(), specialfn::bessel_j0(0.5));
        assert_eq!(eval_str("besselj1(x)", 0.5).unwrap(), specialfn::bessel_j1(0.5));
        assert_eq!(eval_str("pow(x, 3)", 2.0).unwrap(), 8.0);
    }

    #[test]
    fn unbound_variable() {
        let e = parse("x*t", &["x", "t"]).unwrap();
        assert_eq!(e.eval(&[("x", 1.0)]), Err(ExprError::Unbound("t".into())));
        let mut map = HashMap::new();
        map.insert("x".to_string(), 2.0);
        map.insert("t".to_string(), 3.0);
        assert_eq!(e.eval(&map).unwrap(), 6.0);
    }

    #[test]
    fn free_vars_examples() {
        let fv = |s: &str| parse(s, &["x", "t"]).unwrap().free_vars();
        assert_eq!(fv("x*t+1"), ["t", "x"].iter().map(|s| s.to_string()).collect());
        assert!(fv("gamma(0.5)").is_empty());
        assert_eq!(fv("sin(x)*cos(x)"), ["x".to_string()].into_iter().collect());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..10.0).prop_map(Expr::Constant),
            Just(Expr::Variable("x".into())),
            Just(Expr::Variable("t".into())),
        ];
        leaf.prop_recursive(5, 48, 3, |inner| {
            let ops = prop_oneof![
                Just(BinOp::Add),
                Just(BinOp::Sub),
                Just(BinOp::Mul),
                Just(BinOp::Div),
                Just(BinOp::Pow),
            ];
            let funcs = prop::sample::select(Builtin::ALL.to_vec());
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Negate(Box::new(e))),
                (ops, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::Binary(op, Box::new(a), Box::new(b))),
                (funcs, prop::collection::vec(inner, 2)).prop_map(|(f, mut args)| {
                    args.truncate(f.arity());
                    Expr::Call(f, args)
                }),
            ]
        })
    }

    fn same(a: &Result<f64, ExprError>, b: &Result<f64, ExprError>) -> bool {
        match (a, b) {
            (Ok(x), Ok(y)) => x.to_bits() == y.to_bits(),
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(e in arb_expr(), pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 100)) {
            let printed = e.to_string();
            let reparsed = parse(&printed, &["x", "t"]).unwrap();
            // parse(print(e)) is a fixed point after one pass
            prop_assert_eq!(reparsed.to_string(), printed.clone());
            for (x, t) in pts {
                let b = [("x", x), ("t", t)];
                prop_assert!(same(&e.eval(&b), &reparsed.eval(&b)), "{}", printed);
            }
        }

        #[test]
        fn eval_is_deterministic(e in arb_expr(), x in 0.0f64..1.0, t in 0.0f64..1.0) {
            let b = [("x", x), ("t", t)];
            prop_assert!(same(&e.eval(&b), &e.eval(&b)));
        }
    }
}
