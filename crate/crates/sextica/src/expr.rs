//! Shared expression grammar for coefficients, curves and matrices.
//!
//! One tokenizer and one recursive-descent parser serve every textual input:
//! scalar coefficients (`(1+RT(5))/2`), curve polynomials
//! (`X^6 + Y^6 + X*Z^5`), catalogue templates with named parameters
//! (`c033*Y^3*Z^3`), and the matrix entry notations. The parser produces a
//! small AST; evaluation into scalars lives here, evaluation into
//! polynomials lives in `poly`.

use crate::cyclo::{CycloError, FieldElem, Rat};
use num::BigInt;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("parameter `{0}` has no bound value")]
    UnknownParameter(String),
    #[error("variable {0} is not allowed in a scalar context")]
    VariableInScalar(Var),
    #[error(transparent)]
    Arith(#[from] CycloError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "X"),
            Var::Y => write!(f, "Y"),
            Var::Z => write!(f, "Z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Root(u64, i64),
    Sqrt(Box<Expr>),
    Var(Var),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Names of all parameters appearing in the expression.
    pub fn parameters(&self, out: &mut Vec<String>) {
        match self {
            Expr::Param(name) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Sqrt(a) | Expr::Neg(a) | Expr::Pow(a, _) => a.parameters(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.parameters(out);
                b.parameters(out);
            }
            _ => {}
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let val: BigInt = src[start..i].parse().unwrap();
                out.push(Spanned { tok: Tok::Num(val), pos: start });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(src[start..i].to_string()), pos: start });
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' | b'[' | b']' | b',' | b':' => {
                out.push(Spanned { tok: Tok::Sym(b as char), pos: i });
                i += 1;
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos: i,
                    msg: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(out)
}

pub struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    len: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ExprError> {
        Ok(Parser { toks: tokenize(src)?, i: 0, len: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|s| s.pos).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|s| s.tok.clone());
        self.i += 1;
        t
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn peek_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    /// Consume the given identifier if it is next.
    pub fn eat_ident(&mut self, name: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == name {
                self.i += 1;
                return true;
            }
        }
        false
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<(), ExprError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("trailing input".to_string()))
        }
    }

    fn err(&self, msg: String) -> ExprError {
        ExprError::Syntax { pos: self.pos(), msg }
    }

    pub fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym('+') {
                acc = Expr::Add(acc.into(), self.term()?.into());
            } else if self.eat_sym('-') {
                acc = Expr::Sub(acc.into(), self.term()?.into());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_sym('*') {
                acc = Expr::Mul(acc.into(), self.factor()?.into());
            } else if self.eat_sym('/') {
                acc = Expr::Div(acc.into(), self.factor()?.into());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(self.factor()?.into()));
        }
        if self.eat_sym('+') {
            return self.factor();
        }
        let mut atom = self.atom()?;
        while self.eat_sym('^') {
            let e = self.integer()?;
            atom = Expr::Pow(atom.into(), e);
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat_sym('-');
        match self.bump() {
            Some(Tok::Num(v)) => {
                let v: i64 = v
                    .try_into()
                    .map_err(|_| self.err("exponent out of range".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.i -= 1;
                Err(self.err("expected integer".into()))
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(Rat::from(v))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "X" => Ok(Expr::Var(Var::X)),
                "Y" => Ok(Expr::Var(Var::Y)),
                "Z" => Ok(Expr::Var(Var::Z)),
                "E" => {
                    self.expect_sym('(')?;
                    let n = self.integer()?;
                    if n < 1 {
                        return Err(self.err("root order must be positive".into()));
                    }
                    self.expect_sym(')')?;
                    Ok(Expr::Root(n as u64, 1))
                }
                "RT" => {
                    self.expect_sym('(')?;
                    let inner = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(Expr::Sqrt(inner.into()))
                }
                _ => Ok(Expr::Param(name)),
            },
            Some(Tok::Sym('(')) => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            other => {
                if other.is_some() {
                    self.i -= 1;
                }
                Err(self.err("expected a value".into()))
            }
        }
    }
}

/// Parse a complete expression, demanding full input consumption.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub type ParamMap = HashMap<String, FieldElem>;

/// Evaluate an expression with no free variables into a field element.
pub fn eval_scalar(e: &Expr, params: &ParamMap) -> Result<FieldElem, ExprError> {
    match e {
        Expr::Num(q) => Ok(FieldElem::from(q.clone())),
        Expr::Root(n, k) => Ok(FieldElem::root_of_unity(*n, *k)),
        Expr::Sqrt(a) => Ok(FieldElem::sqrt(&eval_scalar(a, params)?)?),
        Expr::Var(v) => Err(ExprError::VariableInScalar(*v)),
        Expr::Param(name) => params
            .get(name)
            .cloned()
            .ok_or_else(|| ExprError::UnknownParameter(name.clone())),
        Expr::Neg(a) => Ok(-eval_scalar(a, params)?),
        Expr::Add(a, b) => Ok(eval_scalar(a, params)?.try_add(&eval_scalar(b, params)?)?),
        Expr::Sub(a, b) => Ok(eval_scalar(a, params)?.try_sub(&eval_scalar(b, params)?)?),
        Expr::Mul(a, b) => Ok(eval_scalar(a, params)?.try_mul(&eval_scalar(b, params)?)?),
        Expr::Div(a, b) => Ok(eval_scalar(a, params)?.try_div(&eval_scalar(b, params)?)?),
        Expr::Pow(a, k) => Ok(eval_scalar(a, params)?.pow(*k)?),
    }
}

/// Parse and evaluate a scalar in one step.
pub fn parse_scalar(src: &str, params: &ParamMap) -> Result<FieldElem, ExprError> {
    eval_scalar(&parse_expr(src)?, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, CycloNum};

    fn scalar(src: &str) -> FieldElem {
        parse_scalar(src, &ParamMap::new()).unwrap()
    }

    #[test]
    fn scalar_grammar() {
        assert_eq!(scalar("-3/2"), FieldElem::from(rat(-3, 2)));
        assert_eq!(scalar("E(4)^2"), FieldElem::from(-1));
        assert_eq!(scalar("(1 - 2*E(5)^2)/3"), {
            let z2 = CycloNum::root_of_unity(5, 2);
            let v = &(&CycloNum::one() - &(&CycloNum::from_int(2) * &z2))
                * &CycloNum::from_rational(rat(1, 3));
            FieldElem::from(v)
        });
        // golden ratio via RT
        let b = scalar("(1+RT(5))/2");
        let b2 = b.try_mul(&b).unwrap();
        assert_eq!(b2, scalar("(3+RT(5))/2"));
        // negative powers invert exactly
        assert_eq!(scalar("E(7)^-1"), FieldElem::root_of_unity(7, 6));
        assert_eq!(scalar("(2)^-2"), FieldElem::from(rat(1, 4)));
    }

    #[test]
    fn error_positions() {
        match parse_expr("1 + ?") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_expr("E(5") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_expr("2*") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_scalar("X + 1", &ParamMap::new()),
            Err(ExprError::VariableInScalar(Var::X))
        ));
        assert!(matches!(
            parse_scalar("beta + 1", &ParamMap::new()),
            Err(ExprError::UnknownParameter(name)) if name == "beta"
        ));
    }

    #[test]
    fn parameters_collect_and_bind() {
        let e = parse_expr("c411*alpha - 2*c411 + RT(gamma)").unwrap();
        let mut names = Vec::new();
        e.parameters(&mut names);
        assert_eq!(names, vec!["c411", "alpha", "gamma"]);
        let mut params = ParamMap::new();
        params.insert("c411".into(), FieldElem::from(3));
        params.insert("alpha".into(), FieldElem::from(2));
        params.insert("gamma".into(), FieldElem::from(4));
        assert_eq!(eval_scalar(&e, &params).unwrap(), FieldElem::from(2));
    }

    #[test]
    fn cyclo_display_round_trips() {
        let vals = [
            CycloNum::from_rational(rat(-7, 3)),
            CycloNum::root_of_unity(9, 2),
            &(&CycloNum::root_of_unity(12, 5) * &CycloNum::from_int(3)) - &CycloNum::one(),
            CycloNum::sqrt_rational(&rat(5, 4)).unwrap(),
            CycloNum::zero(),
        ];
        for v in vals {
            let printed = v.to_string();
            let reparsed = parse_scalar(&printed, &ParamMap::new()).unwrap();
            assert_eq!(reparsed, FieldElem::from(v), "round-trip of `{printed}`");
        }
    }

    #[test]
    fn field_elem_display_round_trips() {
        // radical display round-trips through the parser
        let delta = &CycloNum::root_of_unity(5, 1) + &CycloNum::from_int(2);
        let t = FieldElem::sqrt(&delta.into()).unwrap();
        let x = FieldElem::from(rat(3, 2)).try_add(&t).unwrap();
        let printed = x.to_string();
        assert_eq!(parse_scalar(&printed, &ParamMap::new()).unwrap(), x);
    }
}
