use std::f64::consts::{E, PI};

use super::lexer::{tokenize, Token, TokenKind};
use super::{BinOp, Builtin, Expr, ExprError};

/// Parse `source` into an expression tree whose free variables are all in
/// `allowed_vars`.
///
/// Precedence from tightest to loosest: `^` (right-associative), unary
/// minus, `*` `/`, `+` `-`. So `-x^2` is `-(x^2)` and `2^3^2` is `2^9`.
/// The identifiers `pi` and `e` are folded to constants.
pub fn parse(source: &str, allowed_vars: &[&str]) -> Result<Expr, ExprError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: source.chars().count(),
        allowed: allowed_vars,
    };
    let expr = parser.expression()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.unexpected(tok, "end of input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
    allowed: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek().is_some_and(|t| t.is_op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, tok: &Token, wanted: &str) -> ExprError {
        ExprError::Syntax {
            position: tok.position,
            message: format!("expected {wanted}, found `{}`", tok.lexeme),
        }
    }

    fn eof(&self, wanted: &str) -> ExprError {
        ExprError::Syntax {
            position: self.end,
            message: format!("expected {wanted}, found end of input"),
        }
    }

    fn expect(&mut self, kind: TokenKind, text: &str) -> Result<&'a Token, ExprError> {
        match self.next() {
            Some(tok) if tok.is(kind, text) => Ok(tok),
            Some(tok) => Err(self.unexpected(tok, &format!("`{text}`"))),
            None => Err(self.eof(&format!("`{text}`"))),
        }
    }

    fn expression(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_op('+') {
                BinOp::Add
            } else if self.eat_op('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_op('*') {
                BinOp::Mul
            } else if self.eat_op('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_op('-') {
            Ok(Expr::Negate(Box::new(self.unary()?)))
        } else if self.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat_op('^') {
            let exponent = self.unary()?;
            Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let tok = self.next().ok_or_else(|| self.eof("an operand"))?;
        match tok.kind {
            TokenKind::Number => tok.number().map(Expr::Constant).ok_or_else(|| ExprError::Syntax {
                position: tok.position,
                message: format!("invalid number `{}`", tok.lexeme),
            }),
            TokenKind::Paren if tok.lexeme == "(" => {
                let inner = self.expression()?;
                self.expect(TokenKind::Paren, ")")?;
                Ok(inner)
            }
            TokenKind::Identifier => {
                if self.peek().is_some_and(|t| t.is(TokenKind::Paren, "(")) {
                    self.call(tok)
                } else {
                    self.identifier(tok)
                }
            }
            _ => Err(self.unexpected(tok, "an operand")),
        }
    }

    fn identifier(&self, tok: &Token) -> Result<Expr, ExprError> {
        match tok.lexeme.as_str() {
            "pi" => Ok(Expr::Constant(PI)),
            "e" => Ok(Expr::Constant(E)),
            name if self.allowed.contains(&name) => Ok(Expr::Variable(name.to_string())),
            name if Builtin::from_name(name).is_some() => Err(ExprError::Syntax {
                position: tok.position,
                message: format!("function `{name}` must be called with parentheses"),
            }),
            name => Err(ExprError::UnknownVariable {
                name: name.to_string(),
                allowed: self.allowed.iter().map(|s| s.to_string()).collect(),
                position: tok.position,
            }),
        }
    }

    fn call(&mut self, name_tok: &Token) -> Result<Expr, ExprError> {
        let func = Builtin::from_name(&name_tok.lexeme).ok_or_else(|| ExprError::UnknownFunction {
            name: name_tok.lexeme.clone(),
            position: name_tok.position,
        })?;
        self.expect(TokenKind::Paren, "(")?;
        let mut args = Vec::new();
        if self.peek().is_some_and(|t| t.is(TokenKind::Paren, ")")) {
            self.pos += 1;
        } else {
            loop {
                args.push(self.expression()?);
                match self.next() {
                    Some(t) if t.kind == TokenKind::Comma => continue,
                    Some(t) if t.is(TokenKind::Paren, ")") => break,
                    Some(t) => return Err(self.unexpected(t, "`,` or `)`")),
                    None => return Err(self.eof("`)`")),
                }
            }
        }
        if args.len() != func.arity() {
            return Err(ExprError::Arity {
                name: func.name().to_string(),
                expected: func.arity(),
                found: args.len(),
                position: name_tok.position,
            });
        }
        Ok(Expr::Call(func, args))
    }
}
